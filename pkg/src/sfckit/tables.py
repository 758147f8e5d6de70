"""Exact-rational probability tables and information measures.

Probabilities live in Fraction space end to end; only logarithms leave it.
Conditional-independence tests are exact identities on cross-multiplied
rationals, never float comparisons, so feasibility verdicts downstream do not
depend on tolerance. Information quantities (entropy, conditional mutual
information) are evaluated in binary floats, log base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import InputError

ZERO = Fraction(0)
ONE = Fraction(1)

# (axis name, tuple of symbol labels)
Axis = tuple[str, tuple[str, ...]]


def _strides(sizes):
    acc = 1
    out = [0] * len(sizes)
    for i in range(len(sizes) - 1, -1, -1):
        out[i] = acc
        acc *= sizes[i]
    return tuple(out)


@dataclass(frozen=True)
class JointTable:
    """Dense joint distribution over named finite alphabets.

    Cells are ordered with the first axis slowest (row-major over axes).
    """

    axes: tuple[Axis, ...]
    probs: tuple[Fraction, ...]

    @property
    def names(self):
        return tuple(name for name, _ in self.axes)

    @property
    def sizes(self):
        return tuple(len(labels) for _, labels in self.axes)

    def axis(self, name):
        for i, (n, _) in enumerate(self.axes):
            if n == name:
                return i
        raise InputError(f"unknown axis {name!r}; table has {self.names}")

    def labels(self, name):
        return self.axes[self.axis(name)][1]

    def flat_index(self, cell):
        st = _strides(self.sizes)
        return sum(c * s for c, s in zip(cell, st))

    def prob(self, cell):
        return self.probs[self.flat_index(cell)]

    def cells(self):
        return product(*(range(s) for s in self.sizes))


def make_joint(axes, probs) -> JointTable:
    axes = tuple((name, tuple(labels)) for name, labels in axes)
    names = [name for name, _ in axes]
    if len(set(names)) != len(names):
        raise InputError(f"duplicate axis names in {names}")
    probs = tuple(Fraction(p) for p in probs)
    n = 1
    for name, labels in axes:
        if not labels:
            raise InputError("empty alphabet")
        if len(set(labels)) != len(labels):
            raise InputError(f"duplicate labels on axis {name!r}")
        n *= len(labels)
    if len(probs) != n:
        raise InputError(f"expected {n} cells, got {len(probs)}")
    if any(p < 0 for p in probs):
        raise InputError("negative probability entry")
    total = sum(probs, ZERO)
    if total != 1:
        raise InputError(f"table sums to {total}, not 1")
    return JointTable(axes, probs)


def marginalize(t: JointTable, keep) -> JointTable:
    """Sum out every axis not in `keep`; axis order of the result follows t."""
    keep = set(keep)
    idx = {t.axis(name) for name in keep}
    kept_axes = tuple(ax for i, ax in enumerate(t.axes) if i in idx)
    if len(kept_axes) == len(t.axes):
        return t
    if not kept_axes:
        raise InputError("cannot marginalize away every axis")
    kept_pos = [i for i in range(len(t.axes)) if i in idx]
    sizes = [len(t.axes[i][1]) for i in kept_pos]
    st = _strides(sizes)
    acc = [ZERO] * math.prod(sizes)
    for cell, p in zip(t.cells(), t.probs):
        if p:
            j = sum(cell[i] * s for i, s in zip(kept_pos, st))
            acc[j] += p
    return JointTable(kept_axes, tuple(acc))


def marginal_dict(t: JointTable, names):
    """Marginal as {projected cell -> Fraction}, keys ordered as `names`."""
    pos = [t.axis(n) for n in names]
    out = {}
    for cell, p in zip(t.cells(), t.probs):
        if p:
            key = tuple(cell[i] for i in pos)
            out[key] = out.get(key, ZERO) + p
    return out


def _flog2(fr: Fraction) -> float:
    return math.log2(fr.numerator) - math.log2(fr.denominator)


def entropy_bits(probs) -> float:
    """Entropy in bits of a bare probability sequence; 0 log 0 = 0."""
    terms = [-float(p) * _flog2(p) for p in probs if p > 0]
    h = math.fsum(terms)
    return 0.0 if h < 0 else h


def entropy(t: JointTable) -> float:
    """Joint entropy in bits; 0 log 0 = 0."""
    return entropy_bits(t.probs)


def _check_groups(t, groups):
    seen = set()
    for g in groups:
        for name in g:
            t.axis(name)
            if name in seen:
                raise InputError(f"axis {name!r} appears in two groups")
            seen.add(name)


def conditional_mutual_information(t: JointTable, a, b, c=()) -> float:
    """I(A;B|C) in bits from exact marginals; empty C gives plain I(A;B)."""
    a, b, c = tuple(a), tuple(b), tuple(c)
    _check_groups(t, (a, b, c))
    p_abc = marginal_dict(t, a + b + c)
    na, nb = len(a), len(b)
    p_ac, p_bc, p_c = {}, {}, {}
    for key, p in p_abc.items():
        ka, kb, kc = key[:na], key[na:na + nb], key[na + nb:]
        p_ac[ka + kc] = p_ac.get(ka + kc, ZERO) + p
        p_bc[kb + kc] = p_bc.get(kb + kc, ZERO) + p
        p_c[kc] = p_c.get(kc, ZERO) + p
    terms = []
    for key, p in p_abc.items():
        ka, kb, kc = key[:na], key[na:na + nb], key[na + nb:]
        ratio = (p * p_c[kc]) / (p_ac[ka + kc] * p_bc[kb + kc])
        if ratio != 1:
            terms.append(float(p) * _flog2(ratio))
    v = math.fsum(terms)
    if v < 0:
        if v < -1e-9:
            raise AssertionError(f"negative CMI {v}")
        v = 0.0
    return v


def is_markov(t: JointTable, a, b, c) -> bool:
    """Exact test of the chain A - B - C: p(a,c|b) = p(a|b) p(c|b).

    Checked as the cross-multiplied identity p(a,b,c) p(b) = p(a,b) p(b,c)
    over every cell of the (A,B,C) label space, including zero cells.
    """
    a, b, c = tuple(a), tuple(b), tuple(c)
    _check_groups(t, (a, b, c))
    p_abc = marginal_dict(t, a + b + c)
    na, nb = len(a), len(b)
    p_ab, p_bc, p_b = {}, {}, {}
    for key, p in p_abc.items():
        ka, kb, kc = key[:na], key[na:na + nb], key[na + nb:]
        p_ab[ka + kb] = p_ab.get(ka + kb, ZERO) + p
        p_bc[kb + kc] = p_bc.get(kb + kc, ZERO) + p
        p_b[kb] = p_b.get(kb, ZERO) + p
    ranges = [range(len(t.labels(n))) for n in a + b + c]
    for key in product(*ranges):
        ka, kb, kc = key[:na], key[na:na + nb], key[na + nb:]
        lhs = p_abc.get(key, ZERO) * p_b.get(kb, ZERO)
        rhs = p_ab.get(ka + kb, ZERO) * p_bc.get(kb + kc, ZERO)
        if lhs != rhs:
            return False
    return True


def total_variation(p: JointTable, q: JointTable) -> Fraction:
    """L1 distance sum |p - q| as an exact Fraction."""
    if p.axes != q.axes:
        raise InputError("total_variation requires identical axes and labels")
    return sum((abs(a - b) for a, b in zip(p.probs, q.probs)), ZERO)


@dataclass(frozen=True)
class CondTable:
    """Conditional table: one row of to-cell probabilities per from-cell.

    Rows are ordered with the first from-axis slowest. Unreachable rows
    (conditioning cells of zero probability under the companion joint) carry
    reachable=False and are filled with the uniform row by convention.
    """

    from_axes: tuple[Axis, ...]
    to_axes: tuple[Axis, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    reachable: tuple[bool, ...]

    @property
    def from_sizes(self):
        return tuple(len(labels) for _, labels in self.from_axes)

    @property
    def to_sizes(self):
        return tuple(len(labels) for _, labels in self.to_axes)

    def row_index(self, from_cell):
        st = _strides(self.from_sizes)
        return sum(c * s for c, s in zip(from_cell, st))

    def row(self, from_cell):
        return self.rows[self.row_index(from_cell)]


def uniform_row(n) -> tuple:
    return tuple([Fraction(1, n)] * n)


def make_cond(from_axes, to_axes, rows, reachable=None) -> CondTable:
    from_axes = tuple((n, tuple(ls)) for n, ls in from_axes)
    to_axes = tuple((n, tuple(ls)) for n, ls in to_axes)
    for name, ls in from_axes + to_axes:
        if not ls:
            raise InputError(f"axis {name!r} has an empty alphabet")
        if len(set(ls)) != len(ls):
            raise InputError(f"duplicate labels on axis {name!r}")
    n_rows = math.prod(len(ls) for _, ls in from_axes)
    width = math.prod(len(ls) for _, ls in to_axes)
    if reachable is None:
        reachable = [True] * n_rows
    reachable = tuple(bool(r) for r in reachable)
    if len(rows) != n_rows or len(reachable) != n_rows:
        raise InputError(f"expected {n_rows} conditional rows, got {len(rows)}")
    fixed = []
    for i, row in enumerate(rows):
        if row is None:
            if reachable[i]:
                raise InputError(f"reachable row {i} has no entries")
            fixed.append(uniform_row(width))
            continue
        row = tuple(Fraction(v) for v in row)
        if len(row) != width:
            raise InputError(f"row {i}: expected {width} entries, got {len(row)}")
        if any(v < 0 for v in row):
            raise InputError(f"row {i}: negative entry")
        if sum(row, ZERO) != 1:
            raise InputError(f"row {i}: sums to {sum(row, ZERO)}, not 1")
        fixed.append(row)
    return CondTable(from_axes, to_axes, tuple(fixed), reachable)


def extend(t: JointTable, c: CondTable) -> JointTable:
    """Product composition: p(cells, to) = t(cells) * c(to | from-slice).

    Every from-axis of c must already be an axis of t with matching labels.
    """
    pos = []
    for name, labels in c.from_axes:
        i = t.axis(name)
        if t.axes[i][1] != labels:
            raise InputError(f"axis {name!r} labels differ between joint and conditional")
        pos.append(i)
    for name, _ in c.to_axes:
        if name in t.names:
            raise InputError(f"axis {name!r} already present in joint")
    width = math.prod(c.to_sizes)
    out = []
    st = _strides(c.from_sizes)
    for cell, p in zip(t.cells(), t.probs):
        if p:
            row = c.rows[sum(cell[i] * s for i, s in zip(pos, st))]
            out.extend(p * v for v in row)
        else:
            out.extend([ZERO] * width)
    return JointTable(t.axes + c.to_axes, tuple(out))


def conditional_of(t: JointTable, given, to) -> CondTable:
    """Exact conditional p(to | given) of a joint; free rows become uniform."""
    given, to = tuple(given), tuple(to)
    _check_groups(t, (given, to))
    p_g = marginal_dict(t, given)
    p_gt = marginal_dict(t, given + to)
    from_axes = tuple(t.axes[t.axis(n)] for n in given)
    to_axes = tuple(t.axes[t.axis(n)] for n in to)
    g_sizes = [len(ls) for _, ls in from_axes]
    t_sizes = [len(ls) for _, ls in to_axes]
    rows, reach = [], []
    for g_cell in product(*(range(s) for s in g_sizes)):
        mass = p_g.get(g_cell, ZERO)
        if mass == 0:
            rows.append(None)
            reach.append(False)
        else:
            rows.append(tuple(
                p_gt.get(g_cell + t_cell, ZERO) / mass
                for t_cell in product(*(range(s) for s in t_sizes))))
            reach.append(True)
    return make_cond(from_axes, to_axes, rows, reach)
