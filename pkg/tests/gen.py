"""Random-instance generators and independent oracles shared by the tests."""

import itertools
import math
from fractions import Fraction

from sfckit import entropy_bits, make_problem

ZERO = Fraction(0)


def prob_vector(rng, n, denom=16, full=False):
    """Random distribution with every entry a multiple of 1/denom."""
    counts = [1] * n if full else [0] * n
    assert sum(counts) <= denom
    for _ in range(denom - sum(counts)):
        counts[rng.randrange(n)] += 1
    return tuple(Fraction(c, denom) for c in counts)


def random_problem(rng, nx_max=5, ny_max=4, nz_max=4, full_support=False,
                   two_output=False, nx_min=2):
    nx = rng.randint(nx_min, nx_max)
    ny = rng.randint(1, ny_max)
    while full_support and nx * ny > 16:
        ny = rng.randint(1, ny_max)
    xs = tuple(f"x{i}" for i in range(1, nx + 1))
    ys = tuple(f"y{i}" for i in range(1, ny + 1))
    flat = prob_vector(rng, nx * ny, full=full_support)
    qxy = [flat[i * ny:(i + 1) * ny] for i in range(nx)]
    if two_output:
        n1 = rng.randint(2, nz_max)
        n2 = rng.randint(2, nz_max)
        axes = (("Z1", tuple(f"a{i}" for i in range(1, n1 + 1))),
                ("Z2", tuple(f"b{i}" for i in range(1, n2 + 1))))
        width = n1 * n2
    else:
        nz = rng.randint(2, nz_max)
        axes = (("Z", tuple(f"z{i}" for i in range(1, nz + 1))),)
        width = nz
    rows = [prob_vector(rng, width) if flat[x * ny + y] > 0 else None
            for x in range(nx) for y in range(ny)]
    return make_problem(xs, ys, qxy, axes, rows)


def _support_components(qxy, nx, ny):
    """Union inputs that co-occur with a common y under the joint."""
    parent = list(range(nx))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for y in range(ny):
        live = [x for x in range(nx) if qxy[x][y] > 0]
        for a, b in zip(live, live[1:]):
            parent[find(a)] = find(b)
    return [find(x) for x in range(nx)]


def random_both_feasible(rng, nx_max=5, ny_max=4, nz_max=5):
    """Instances where every support component has one channel row per y."""
    nx = rng.randint(2, nx_max)
    ny = rng.randint(1, ny_max)
    nz = rng.randint(2, nz_max)
    xs = tuple(f"x{i}" for i in range(1, nx + 1))
    ys = tuple(f"y{i}" for i in range(1, ny + 1))
    flat = prob_vector(rng, nx * ny)
    qxy = [flat[i * ny:(i + 1) * ny] for i in range(nx)]
    comp = _support_components(qxy, nx, ny)
    shared = {}
    rows = []
    for x in range(nx):
        for y in range(ny):
            if qxy[x][y] == 0:
                rows.append(None)
                continue
            key = (comp[x], y)
            if key not in shared:
                shared[key] = prob_vector(rng, nz)
            rows.append(shared[key])
    return make_problem(xs, ys, qxy, (("Z", tuple(f"z{i}" for i in range(1, nz + 1))),), rows)


def random_bob_feasible(rng, nx_max=5, ny_max=3, nz_max=5):
    """Full-support instances built as q(z|x,y) = sum_w p(w|x) g_w^y(z)."""
    nx = rng.randint(2, nx_max)
    ny = rng.randint(1, ny_max)
    while nx * ny > 16:
        ny = rng.randint(1, ny_max)
    nz = rng.randint(2, nz_max)
    nw = rng.randint(1, min(nz, 3))
    xs = tuple(f"x{i}" for i in range(1, nx + 1))
    ys = tuple(f"y{i}" for i in range(1, ny + 1))
    flat = prob_vector(rng, nx * ny, full=True)
    qxy = [flat[i * ny:(i + 1) * ny] for i in range(nx)]
    pwx = [prob_vector(rng, nw, denom=2) for _ in range(nx)]
    gammas = []
    for _ in range(ny):
        groups = [[] for _ in range(nw)]
        for z in range(nw):
            groups[z].append(z)
        for z in range(nw, nz):
            groups[rng.randrange(nw)].append(z)
        per_w = []
        for w in range(nw):
            vec = [ZERO] * nz
            vals = prob_vector(rng, len(groups[w]), denom=8, full=True)
            for z, v in zip(groups[w], vals):
                vec[z] = v
            per_w.append(vec)
        gammas.append(per_w)
    rows = []
    for x in range(nx):
        for y in range(ny):
            rows.append(tuple(sum(pwx[x][w] * gammas[y][w][z] for w in range(nw))
                              for z in range(nz)))
    return make_problem(xs, ys, qxy, (("Z", tuple(f"z{i}" for i in range(1, nz + 1))),), rows)


def random_product_problem(rng, nx_max=4, ny_max=4, nz_max=3):
    """Independent inputs: q(x,y) = q(x) q(y), both full support."""
    nx = rng.randint(2, nx_max)
    ny = rng.randint(2, ny_max)
    nz = rng.randint(2, nz_max)
    qx = prob_vector(rng, nx, full=True)
    qy = prob_vector(rng, ny, full=True)
    qxy = [[qx[x] * qy[y] for y in range(ny)] for x in range(nx)]
    rows = [prob_vector(rng, nz) for _ in range(nx * ny)]
    return make_problem(tuple(f"x{i}" for i in range(1, nx + 1)),
                        tuple(f"y{i}" for i in range(1, ny + 1)),
                        qxy, (("Z", tuple(f"z{i}" for i in range(1, nz + 1))),), rows)


def set_partitions(items):
    """All partitions of a sequence into nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def oracle_min_entropy_coloring(g):
    """Brute-force minimum-entropy proper coloring; returns (value, blocks)."""
    edge_set = set(g.edges)
    best = None
    for part in set_partitions(range(g.n)):
        if any((a, b) in edge_set for blk in part
               for a, b in itertools.combinations(sorted(blk), 2)):
            continue
        masses = [sum((g.weights[v] for v in blk), ZERO) for blk in part]
        val = entropy_bits(masses)
        key = (val, len(part), tuple(sorted(tuple(sorted(b)) for b in part)))
        if best is None or key < best:
            best = key
    return best[0], best[2]


def oracle_maximal_independent_sets(g):
    """Brute force over all vertex subsets."""
    adj = g.adjacency_masks()
    out = []
    for mask in range(1, 1 << g.n):
        members = [v for v in range(g.n) if mask >> v & 1]
        if any(adj[v] & mask for v in members):
            continue
        if any(not adj[u] & mask for u in range(g.n) if not mask >> u & 1):
            continue
        out.append(tuple(members))
    return sorted(out)


def oracle_cge(p, tol=1e-9):
    """Case analysis for |X| <= 3 characteristic graphs.

    Every maximal-independent-set cover with at most three vertices leaves at
    most one vertex with a binary choice of W, so the objective is either
    forced or a one-dimensional convex minimization.
    """
    from sfckit import characteristic_graph, conditional_mutual_information, extend, make_cond

    g = characteristic_graph(p)
    n = g.n
    edges = set(g.edges)
    if not edges:
        return 0.0

    def value(rows, nw):
        w_axis = ("W", tuple(f"w{i}" for i in range(nw)))
        cond = make_cond((("X", p.x_labels),), (w_axis,),
                         [tuple(Fraction(v) for v in r) for r in rows])
        t = extend(p.target_joint(), cond)
        return conditional_mutual_information(t, ("W",), ("X",), ("Y",))

    if n == 2:
        return value([(1, 0), (0, 1)], 2)
    assert n == 3
    if len(edges) == 3:
        return value([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    if len(edges) == 2:
        (a, b), (c, d) = sorted(edges)
        mid = ({a, b} & {c, d}).pop()
        rows = [[0, 0] for _ in range(3)]
        for v in range(3):
            rows[v][1 if v == mid else 0] = 1
        return value(rows, 2)
    (a, b) = next(iter(edges))
    free = ({0, 1, 2} - {a, b}).pop()

    def f(t):
        ft = Fraction(t).limit_denominator(10**9)
        rows = [[0, 0] for _ in range(3)]
        rows[a][0] = 1
        rows[b][1] = 1
        rows[free][0] = ft
        rows[free][1] = 1 - ft
        return value(rows, 2)

    lo, hi = 0.0, 1.0
    gr = (math.sqrt(5) - 1) / 2
    c = hi - gr * (hi - lo)
    d = lo + gr * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - gr * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + gr * (hi - lo)
            fd = f(d)
    return min(f(0.0), f(1.0), fc, fd)


def product_problem_square(p):
    """Direct two-fold product instance, for checking power graphs."""
    xs = tuple(f"{a},{b}" for a in p.x_labels for b in p.x_labels)
    ys = tuple(f"{a},{b}" for a in p.y_labels for b in p.y_labels)
    name, zl = p.channel.to_axes[0]
    zs = tuple(f"{a},{b}" for a in zl for b in zl)
    ny = len(p.y_labels)
    qxy = []
    rows = []
    for x1 in range(len(p.x_labels)):
        for x2 in range(len(p.x_labels)):
            qrow = []
            for y1 in range(ny):
                for y2 in range(ny):
                    mass = p.qxy.prob((x1, y1)) * p.qxy.prob((x2, y2))
                    qrow.append(mass)
                    if mass == 0:
                        rows.append(None)
                    else:
                        r1 = p.channel_row(x1, y1)
                        r2 = p.channel_row(x2, y2)
                        rows.append(tuple(v1 * v2 for v1 in r1 for v2 in r2))
            qxy.append(tuple(qrow))
    return make_problem(xs, ys, qxy, ((name, zs),), rows)
