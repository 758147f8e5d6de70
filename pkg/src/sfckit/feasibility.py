"""Feasibility machinery for perfectly secure computation.

Covers the input-similarity equivalence and its reduced problem, the
column-monochromatic test for privacy against both users, the rank-one
(alpha/gamma) decomposition of output columns, the full-support
characterization for privacy against Bob, and the common part W.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import InputError, PreconditionError
from .problem import Problem, make_problem
from .tables import CondTable, JointTable, ZERO, entropy, make_cond, make_joint, marginalize


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of X indices covering X; representative = lowest index."""

    blocks: tuple
    labels: tuple

    @property
    def representatives(self):
        return tuple(b[0] for b in self.blocks)

    def block_of(self, x):
        for i, b in enumerate(self.blocks):
            if x in b:
                return i
        raise InputError(f"symbol index {x} not covered by partition")

    def describe(self):
        return " | ".join("{" + ",".join(self.labels[x] for x in b) + "}" for b in self.blocks)


@dataclass(frozen=True)
class AlphaClass:
    zs: tuple                 # output indices, ascending
    alpha: tuple              # probability column over all of X (zero off support)
    gamma: tuple              # per z in zs; column z equals alpha * gamma[z]


@dataclass(frozen=True)
class AlphaSlice:
    y: int
    classes: tuple
    empty: bool = False

    @property
    def k(self):
        return len(self.classes)


@dataclass(frozen=True)
class AlphaDecomposition:
    slices: tuple             # one AlphaSlice per y

    def slice_for(self, y):
        return self.slices[y]


@dataclass(frozen=True)
class CommonPart:
    """The common randomness W extractable by Bob from (Y, Z)."""

    k: int
    joint: JointTable         # exact p(X, Y, W, Z)
    p_w_given_x: CondTable
    matched: tuple            # matched[y][i] is class i's AlphaClass at y

    @property
    def h_w(self) -> float:
        return entropy(marginalize(self.joint, ("W",)))


@dataclass(frozen=True)
class FeasibilityReport:
    verdict: str              # feasible | infeasible | unsupported
    witness: object = None
    notes: tuple = ()

    @property
    def feasible(self):
        return self.verdict == "feasible"


def _require_one_output(p: Problem, op):
    if p.two_output:
        raise InputError(f"{op} requires a one-output problem")


def similarity_pairs(p: Problem):
    """Unordered pairs {x,x'} sharing some commonly possible (y,z)."""
    _require_one_output(p, "similarity_pairs")
    nx, ny = p.qxy.sizes
    pairs = set()
    for a, b in combinations(range(nx), 2):
        for y in range(ny):
            if not (p.support(a, y) and p.support(b, y)):
                continue
            ra, rb = p.channel_row(a, y), p.channel_row(b, y)
            if any(va > 0 and vb > 0 for va, vb in zip(ra, rb)):
                pairs.add((a, b))
                break
    return pairs


def equivalence_partition(p: Problem) -> Partition:
    """Transitive closure of the similarity relation; blocks by lowest member."""
    _require_one_output(p, "equivalence_partition")
    nx = p.qxy.sizes[0]
    parent = list(range(nx))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in similarity_pairs(p):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for x in range(nx):
        groups.setdefault(find(x), []).append(x)
    blocks = tuple(tuple(groups[r]) for r in sorted(groups))
    return Partition(blocks, p.x_labels)


def decide_both_privacy(p: Problem) -> FeasibilityReport:
    """Feasible iff every equivalence block is column monochromatic.

    Within each block, all inputs supported at a given y must have exactly
    equal channel rows there; the first violation is returned as a witness
    cell (x, x', y, z) in label form.
    """
    _require_one_output(p, "decide_both_privacy")
    part = equivalence_partition(p)
    ny = p.qxy.sizes[1]
    for block in part.blocks:
        for y in range(ny):
            live = [x for x in block if p.support(x, y)]
            if len(live) < 2:
                continue
            base = p.channel_row(live[0], y)
            for x in live[1:]:
                row = p.channel_row(x, y)
                if row != base:
                    z = next(i for i, (u, v) in enumerate(zip(base, row)) if u != v)
                    cell = (p.x_labels[live[0]], p.x_labels[x], p.y_labels[y], p.z_labels[z])
                    return FeasibilityReport(
                        "infeasible", witness=cell,
                        notes=(f"block {{{','.join(p.x_labels[i] for i in block)}}} is not "
                               f"column monochromatic: rows of {cell[0]} and {cell[1]} at "
                               f"{cell[2]} differ at output {cell[3]}",))
    return FeasibilityReport("feasible", witness=part,
                             notes=(f"equivalence partition {part.describe()}",))


def reduce_problem(p: Problem) -> Problem:
    """Collapse each equivalence block to its representative.

    Only defined when decide_both_privacy accepts; the reduced channel row of
    a block at y is the shared row of any supported member.
    """
    report = decide_both_privacy(p)
    if not report.feasible:
        raise PreconditionError(
            f"reduce_problem needs a both-privacy feasible problem; witness {report.witness}")
    part: Partition = report.witness
    ny = p.qxy.sizes[1]
    labels = tuple(p.x_labels[r] for r in part.representatives)
    q_rows, ch_rows = [], []
    for block in part.blocks:
        q_rows.append(tuple(sum((p.qxy.prob((x, y)) for x in block), ZERO) for y in range(ny)))
        for y in range(ny):
            live = [x for x in block if p.support(x, y)]
            ch_rows.append(p.channel_row(live[0], y) if live else None)
    return make_problem(labels, p.y_labels, q_rows, (("Z", p.z_labels),), ch_rows)


def alpha_decomposition(p: Problem, y) -> AlphaSlice:
    """Rank-one split of the output columns at y.

    Columns q(z|., y), restricted to inputs supported at y, are grouped into
    proportionality classes; each class is alpha (normalized column, embedded
    over all of X) times gamma (column sums). A y with no supported input
    yields an empty slice.
    """
    _require_one_output(p, "alpha_decomposition")
    if isinstance(y, str):
        y = p.y_labels.index(y) if y in p.y_labels else -1
        if y < 0:
            raise InputError("unknown Y label")
    nx = p.qxy.sizes[0]
    nz = len(p.z_labels)
    live = [x for x in range(nx) if p.support(x, y)]
    if not live:
        return AlphaSlice(y, (), empty=True)
    classes = {}
    for z in range(nz):
        col = tuple(p.channel_row(x, y)[z] for x in live)
        s = sum(col, ZERO)
        if s == 0:
            continue
        key = tuple(v / s for v in col)
        classes.setdefault(key, []).append((z, s))
    out = []
    for key, members in classes.items():
        alpha = [ZERO] * nx
        for x, v in zip(live, key):
            alpha[x] = v
        out.append(AlphaClass(
            zs=tuple(z for z, _ in members),
            alpha=tuple(alpha),
            gamma=tuple(s for _, s in members)))
    out.sort(key=lambda c: c.zs[0])
    return AlphaSlice(y, tuple(out))


def _fmt_alpha(p, alpha):
    return "(" + ", ".join(f"{p.x_labels[x]}:{v}" for x, v in enumerate(alpha) if v) + ")"


def decide_bob_privacy(p: Problem) -> FeasibilityReport:
    """Full-support characterization of one-round privacy against Bob.

    Feasible iff the multiset of alpha vectors is the same at every y and
    each matched class puts the same total mass on its outputs for every x,
    independently of y. Without full support the verdict is "unsupported".
    """
    _require_one_output(p, "decide_bob_privacy")
    nx, ny = p.qxy.sizes
    for x in range(nx):
        for y in range(ny):
            if not p.support(x, y):
                return FeasibilityReport(
                    "unsupported", notes=(
                        f"q_XY({p.x_labels[x]},{p.y_labels[y]}) = 0; the characterization "
                        "assumes full support",))
    slices = tuple(alpha_decomposition(p, y) for y in range(ny))
    decomp = AlphaDecomposition(slices)
    base = slices[0]
    for s in slices[1:]:
        if s.k != base.k:
            return FeasibilityReport(
                "infeasible", witness=decomp,
                notes=(f"class count mismatch: k({p.y_labels[0]})={base.k} differs from "
                       f"k({p.y_labels[s.y]})={s.k}",))
    base_by_alpha = {c.alpha: c for c in base.classes}
    for s in slices[1:]:
        for c in s.classes:
            if c.alpha not in base_by_alpha:
                return FeasibilityReport(
                    "infeasible", witness=decomp,
                    notes=(f"alpha vector {_fmt_alpha(p, c.alpha)} at {p.y_labels[s.y]} "
                           f"matches no class at {p.y_labels[0]}",))
    for s in slices[1:]:
        for c in s.classes:
            ref = base_by_alpha[c.alpha]
            for x in range(nx):
                m_here = sum((p.channel_row(x, s.y)[z] for z in c.zs), ZERO)
                m_ref = sum((p.channel_row(x, 0)[z] for z in ref.zs), ZERO)
                if m_here != m_ref:
                    return FeasibilityReport(
                        "infeasible", witness=decomp,
                        notes=(f"class mass of alpha {_fmt_alpha(p, c.alpha)} depends on y: "
                               f"{m_ref} at ({p.x_labels[x]},{p.y_labels[0]}) vs {m_here} "
                               f"at ({p.x_labels[x]},{p.y_labels[s.y]})",))
    return FeasibilityReport("feasible", witness=decomp,
                             notes=(f"{base.k} matched alpha classes",))


def build_common_part(p: Problem) -> CommonPart:
    """Exact joint p(x,y,w,z) = 1{z in class w at y} q(x,y,z), plus p(W|X)."""
    report = decide_bob_privacy(p)
    if not report.feasible:
        raise PreconditionError(
            f"build_common_part needs Bob-privacy feasibility; verdict {report.verdict}")
    decomp: AlphaDecomposition = report.witness
    nx, ny = p.qxy.sizes
    nz = len(p.z_labels)
    base = decomp.slices[0]
    k = base.k
    order = {c.alpha: i for i, c in enumerate(base.classes)}
    matched = tuple(
        tuple(sorted(s.classes, key=lambda c: order[c.alpha]))
        for s in decomp.slices)
    w_labels = tuple(f"w{i}" for i in range(1, k + 1))
    probs = []
    for x in range(nx):
        for y in range(ny):
            mass = p.qxy.prob((x, y))
            row = p.channel_row(x, y)
            for i in range(k):
                zs = set(matched[y][i].zs)
                probs.extend(mass * row[z] if z in zs else ZERO for z in range(nz))
    joint = make_joint(
        (("X", p.x_labels), ("Y", p.y_labels), ("W", w_labels), ("Z", p.z_labels)),
        probs)
    rows = []
    for x in range(nx):
        rows.append(tuple(
            sum((p.channel_row(x, 0)[z] for z in matched[0][i].zs), ZERO)
            for i in range(k)))
    p_w_given_x = make_cond((("X", p.x_labels),), (("W", w_labels),), rows)
    return CommonPart(k, joint, p_w_given_x, matched)
