"""Characteristic graphs, powers, chromatic entropy, conditional graph entropy.

The characteristic graph joins two inputs exactly when some receiver-side
observation can tell them apart: a shared supported column with differing
channel rows. Chromatic entropy is minimized by exhaustive set-partition
search (hot loop lives in the kernel backends); conditional graph entropy by
alternating minimization over channels into maximal independent sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._kernels import min_entropy_partitions
from .errors import InputError, SizeError
from .problem import Problem
from .rng import TWO64, draw64
from .tables import entropy_bits

COLORING_GUARD = 12
CGE_GUARD = 12
POWER_GUARD_BITS = 20.0


@dataclass(frozen=True)
class Graph:
    """Undirected vertex-weighted graph; edges as sorted index pairs."""

    vertices: tuple           # symbol labels
    weights: tuple            # Fractions summing to 1
    edges: tuple              # (i, j) with i < j, sorted ascending

    @property
    def n(self):
        return len(self.vertices)

    def adjacency_masks(self):
        adj = [0] * self.n
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    def edge_labels(self):
        return tuple((self.vertices[i], self.vertices[j]) for i, j in self.edges)


def make_graph(vertices, weights, edges) -> Graph:
    vertices = tuple(vertices)
    weights = tuple(Fraction(w) for w in weights)
    if len(weights) != len(vertices):
        raise InputError("one weight per vertex required")
    if any(w < 0 for w in weights) or sum(weights, Fraction(0)) != 1:
        raise InputError("vertex distribution must be a probability vector")
    seen = set()
    for i, j in edges:
        if i == j:
            raise InputError(f"self-loop at vertex {i}")
        if not (0 <= i < len(vertices) and 0 <= j < len(vertices)):
            raise InputError(f"edge ({i},{j}) references a missing vertex")
        seen.add((min(i, j), max(i, j)))
    return Graph(vertices, weights, tuple(sorted(seen)))


def characteristic_graph(p: Problem) -> Graph:
    """Edge {x,x'} iff some y supports both and their channel rows differ."""
    if p.two_output:
        raise InputError("characteristic graph is defined for one-output problems")
    nx, ny = len(p.x_labels), len(p.y_labels)
    weights = [sum((p.qxy.prob((x, y)) for y in range(ny)), Fraction(0))
               for x in range(nx)]
    edges = []
    for i in range(nx):
        for j in range(i + 1, nx):
            if _distinguishable(p, i, j, ny):
                edges.append((i, j))
    return make_graph(p.x_labels, weights, edges)


def _distinguishable(p, i, j, ny):
    for y in range(ny):
        if p.support(i, y) and p.support(j, y):
            if p.channel_row(i, y) != p.channel_row(j, y):
                return True
    return False


def power_graph(p: Problem, n: int) -> Graph:
    """Graph on n-tuples of inputs under the product problem.

    Tuples are adjacent iff every coordinate pair shares a supported column
    and at least one coordinate pair is a base edge; this is exactly the
    existence of a product-supported (y^n, z^n) where the exact product
    channel values differ, because channel rows are distributions.
    """
    if p.two_output:
        raise InputError("power graph is defined for one-output problems")
    if n < 1:
        raise InputError("power must be a positive integer")
    nx, ny = len(p.x_labels), len(p.y_labels)
    if n * math.log2(nx) > POWER_GUARD_BITS + 1e-12:
        raise SizeError(f"power graph needs {nx}**{n} vertices; "
                        f"guard is n*log2|X| <= {POWER_GUARD_BITS:g}")
    compat = [[False] * nx for _ in range(nx)]
    base_edge = [[False] * nx for _ in range(nx)]
    for i in range(nx):
        for j in range(i, nx):
            shared = any(p.support(i, y) and p.support(j, y) for y in range(ny))
            compat[i][j] = compat[j][i] = shared
            if i != j and shared:
                e = _distinguishable(p, i, j, ny)
                base_edge[i][j] = base_edge[j][i] = e
    marg = [sum((p.qxy.prob((x, y)) for y in range(ny)), Fraction(0))
            for x in range(nx)]
    tuples = list(_index_tuples(nx, n))
    vertices = [",".join(p.x_labels[i] for i in tup) for tup in tuples]
    weights = [math.prod((marg[i] for i in tup), start=Fraction(1)) for tup in tuples]
    edges = []
    for a in range(len(tuples)):
        ta = tuples[a]
        for b in range(a + 1, len(tuples)):
            tb = tuples[b]
            if all(compat[i][j] for i, j in zip(ta, tb)) and \
                    any(base_edge[i][j] for i, j in zip(ta, tb)):
                edges.append((a, b))
    return make_graph(vertices, weights, edges)


def _index_tuples(nx, n):
    tup = [0] * n
    while True:
        yield tuple(tup)
        k = n - 1
        while k >= 0 and tup[k] == nx - 1:
            tup[k] = 0
            k -= 1
        if k < 0:
            return
        tup[k] += 1


@dataclass(frozen=True)
class Coloring:
    """Proper coloring with its induced color distribution."""

    color_of: tuple           # color id per vertex, ids in first-use order
    masses: tuple             # Fraction per color id
    entropy: float

    @property
    def num_colors(self):
        return len(self.masses)

    def blocks(self):
        out = [[] for _ in range(self.num_colors)]
        for v, c in enumerate(self.color_of):
            out[c].append(v)
        return tuple(tuple(b) for b in out)


def chromatic_entropy(g: Graph) -> tuple:
    """Minimum entropy of a proper coloring, with an optimal witness.

    The kernel enumerates set partitions into independent sets and returns
    every candidate within 1e-9 of the float minimum; candidates are then
    re-scored from exact Fraction block masses and ties are broken by fewest
    colors, then lexicographic restricted-growth string.
    """
    if g.n > COLORING_GUARD:
        raise SizeError(f"{g.n} vertices exceeds the exhaustive-coloring "
                        f"guard of {COLORING_GUARD}; no heuristic mode is provided")
    if g.n == 0:
        raise InputError("empty graph")
    adj = g.adjacency_masks()
    cand = min_entropy_partitions(adj, [float(w) for w in g.weights])
    best = None
    for _, rgs in cand:
        k = (max(rgs) + 1) if rgs else 0
        masses = [Fraction(0)] * k
        for v, c in enumerate(rgs):
            masses[c] += g.weights[v]
        value = entropy_bits(masses)
        key = (value, k, rgs)
        if best is None or key < best[0]:
            best = (key, masses)
    (value, _, rgs), masses = best
    coloring = Coloring(tuple(rgs), tuple(masses), value)
    return value, coloring


def maximal_independent_sets(g: Graph) -> tuple:
    """All maximal independent sets as sorted vertex-index tuples."""
    n = g.n
    adj = g.adjacency_masks()
    co = [(~adj[i]) & ~(1 << i) & ((1 << n) - 1) for i in range(n)]
    found = []

    def bk(r, p_, x_):
        if p_ == 0 and x_ == 0:
            found.append(r)
            return
        pool = p_ | x_
        pivot = max(_bits(pool), key=lambda u: _popcount(p_ & co[u]))
        cands = p_ & ~co[pivot]
        for v in _bits(cands):
            bk(r | (1 << v), p_ & co[v], x_ & co[v])
            p_ &= ~(1 << v)
            x_ |= 1 << v

    bk(0, (1 << n) - 1, 0)
    sets = sorted(tuple(_bits(m)) for m in found)
    return tuple(sets)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask):
    return bin(mask).count("1")


@dataclass(frozen=True)
class CgeWitness:
    w_sets: tuple             # label tuples, one per W symbol
    rows: tuple               # per x: tuple of float p(w|x)


def conditional_graph_entropy(p: Problem) -> tuple:
    """min I(W;X|Y) over channels p(w|x) into maximal independent sets w ∋ x.

    Alternating closed-form updates (the objective is convex in the channel,
    so coordinate descent reaches the global minimum); 32 deterministic
    perturbed restarts guard against flat starts, tolerance 1e-10, cap 10000
    iterations.
    """
    g = characteristic_graph(p)
    if g.n > CGE_GUARD:
        raise SizeError(f"{g.n} inputs exceeds the maximal-independent-set "
                        f"guard of {CGE_GUARD}")
    sets = maximal_independent_sets(g)
    nw = len(sets)
    nx, ny = g.n, len(p.y_labels)
    member = [[(x in w) for w in sets] for x in range(nx)]
    pxy = [[float(p.qxy.prob((x, y))) for y in range(ny)] for x in range(nx)]
    px = [sum(row) for row in pxy]
    py = [sum(pxy[x][y] for x in range(nx)) for y in range(ny)]
    p_y_given_x = [[(pxy[x][y] / px[x] if px[x] > 0 else 0.0) for y in range(ny)]
                   for x in range(nx)]
    p_x_given_y = [[(pxy[x][y] / py[y] if py[y] > 0 else 0.0) for x in range(nx)]
                   for y in range(ny)]

    def induced(rows):
        return [[sum(p_x_given_y[y][x] * rows[x][w] for x in range(nx))
                 for w in range(nw)] for y in range(ny)]

    def objective(rows, q_wy):
        total = 0.0
        for x in range(nx):
            for y in range(ny):
                if pxy[x][y] <= 0:
                    continue
                s = 0.0
                for w in range(nw):
                    r = rows[x][w]
                    if r > 0:
                        s += r * math.log2(r / q_wy[y][w])
                total += pxy[x][y] * s
        return total

    best_val, best_rows = None, None
    for restart in range(32):
        rows = []
        for x in range(nx):
            raw = []
            for w in range(nw):
                if not member[x][w]:
                    raw.append(0.0)
                    continue
                bump = 0.0
                if restart:
                    bump = 0.5 * draw64(restart, x * nw + w) / TWO64
                raw.append(1.0 + bump)
            norm = sum(raw)
            rows.append([v / norm for v in raw])
        prev = math.inf
        for _ in range(10000):
            q_wy = induced(rows)
            val = objective(rows, q_wy)
            if abs(prev - val) <= 1e-10:
                break
            prev = val
            new_rows = []
            for x in range(nx):
                raw = []
                for w in range(nw):
                    if not member[x][w] or rows[x][w] <= 0:
                        raw.append(0.0)
                        continue
                    expo = sum(p_y_given_x[x][y] * math.log2(q_wy[y][w])
                               for y in range(ny) if p_y_given_x[x][y] > 0)
                    raw.append(2.0 ** expo)
                norm = sum(raw)
                if norm <= 0:
                    raw = [1.0 if member[x][w] else 0.0 for w in range(nw)]
                    norm = sum(raw)
                new_rows.append([v / norm for v in raw])
            rows = new_rows
        val = objective(rows, induced(rows))
        if best_val is None or val < best_val:
            best_val, best_rows = val, rows
    if best_val < 0:
        best_val = 0.0
    labels = tuple(tuple(g.vertices[v] for v in w) for w in sets)
    witness = CgeWitness(labels, tuple(tuple(r) for r in best_rows))
    return best_val, witness
