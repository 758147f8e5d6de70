"""Rate quantities: cut-set bounds, sum-rates, per-mode rate corners from a
verified auxiliary chain, Wyner common information, and the binary-erasure
worked example's four rate curves.

Rates are bits (log base 2) evaluated as floats from exact joints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .chain import AuxChain, verify_aux_chain
from .errors import InputError, PreconditionError
from .problem import Problem
from .rng import TWO64, draw64
from .tables import JointTable, conditional_mutual_information, entropy


def _names(p: Problem):
    if p.two_output:
        return "Z1", "Z2"
    return None, "Z"


def cutset_bounds(p: Problem) -> tuple:
    """(I(X;Z2|Y), I(Y;Z1|X), I(Z1;Z2|X,Y)) on the exact target joint.

    For one-output problems the missing output behaves as a constant, so
    the second and third components are 0.
    """
    t = p.target_joint()
    z1, z2 = _names(p)
    first = conditional_mutual_information(t, ("X",), (z2,), ("Y",))
    if z1 is None:
        return first, 0.0, 0.0
    second = conditional_mutual_information(t, ("Y",), (z1,), ("X",))
    third = conditional_mutual_information(t, (z1,), (z2,), ("X", "Y"))
    return first, second, third


@dataclass(frozen=True)
class SumRateReport:
    value: float              # bits
    r0: float
    feasible: object          # True/False for one-output problems, None if undecided
    components: tuple         # (I(X;Z2|Y), I(Y;Z1|X), I(Z1;Z2|X,Y))


def sum_rate_both_privacy(p: Problem, r0: float = 0.0) -> SumRateReport:
    """I(X;Z2|Y) + I(Y;Z1|X) + [I(Z1;Z2|X,Y) - r0]_+ with a feasibility flag."""
    if r0 < 0:
        raise InputError("common randomness rate must be nonnegative")
    a, b, c = cutset_bounds(p)
    value = a + b + max(c - float(r0), 0.0)
    if p.two_output:
        feasible = None
    else:
        from .feasibility import decide_both_privacy
        feasible = decide_both_privacy(p).feasible
    return SumRateReport(value, float(r0), feasible, (a, b, c))


@dataclass(frozen=True)
class RateReport:
    mode: str
    r12: float
    r21: float
    r0_plus_r12: float
    sum_rate: float
    quantities: dict          # chain-joint information quantities, bits
    simplification_gaps: dict # mode both: deviation of each collapse identity


def rate_region_corner(p: Problem, chain: AuxChain, mode: str) -> RateReport:
    """Evaluate the mode's four lower bounds at a verified chain.

    Mode both additionally checks the collapse identities that replace the
    auxiliary variables by the outputs; a verified chain satisfies them to
    float accuracy and any larger gap is a hard failure.
    """
    report = verify_aux_chain(p, chain, mode)
    if report.correctness_tv != 0:
        raise PreconditionError(
            f"chain does not reproduce the target law (TV {report.correctness_tv})")
    for name in report.required:
        if not report.checks[name]:
            raise PreconditionError(f"chain fails the {name} condition for mode {mode}")
    t = report.joint
    z2 = "Z2" if p.two_output else "Z"
    q = dict(report.quantities)
    q["I(X;Z2|Y)"] = conditional_mutual_information(t, ("X",), (z2,), ("Y",))
    q["I(Y;Z1|X)"] = conditional_mutual_information(t, ("Y",), ("Z1",), ("X",))
    q["I(Z1;Z2|X,Y)"] = conditional_mutual_information(t, ("Z1",), (z2,), ("X", "Y"))
    gaps = {}
    if mode == "both":
        r12 = q["I(X;Z2|Y)"]
        r21 = q["I(Y;Z1|X)"]
        r0_plus_r12 = r12 + q["I(U1;Z1,Z2|X,Y)"]
        sum_rate = r12 + r21 + q["I(Z1;Z2|X,Y)"]
        gaps = {
            "I(X;U|Y) = I(X;Z2|Y)": q["I(X;U|Y)"] - q["I(X;Z2|Y)"],
            "I(Y;U|X) = I(Y;Z1|X)": q["I(Y;U|X)"] - q["I(Y;Z1|X)"],
            "I(U;Z1,Z2|X,Y) = I(Z1;Z2|X,Y)":
                q["I(U;Z1,Z2|X,Y)"] - q["I(Z1;Z2|X,Y)"],
        }
        for name, gap in gaps.items():
            if abs(gap) > 1e-9:
                raise AssertionError(f"collapse identity {name} off by {gap}")
    elif mode == "alice":
        r12 = q["I(X;U|Y)"]
        r21 = q["I(Y;Z1|X)"]
        r0_plus_r12 = r12 + q["I(U1;Z1|X,Y)"]
        sum_rate = r12 + r21 + q["I(U;Z1|X,Y)"]
    else:
        r12 = q["I(X;Z2|Y)"]
        r21 = q["I(Y;U|X)"]
        r0_plus_r12 = r12 + q["I(U1;Z2|X,Y)"]
        sum_rate = r12 + r21 + q["I(U;Z2|X,Y)"]
    return RateReport(mode, r12, r21, r0_plus_r12, sum_rate, q, gaps)


@dataclass(frozen=True)
class WynerReport:
    upper_bound: float        # best found min I(Z1,Z2;W); an estimate
    mutual_information: float
    sampleable: bool          # upper_bound within 1e-3 of I(Z1;Z2)
    wmax: int
    p_w: tuple
    rows_z1: tuple            # per w
    rows_z2: tuple


def wyner_common_information(q: JointTable, wmax: int) -> WynerReport:
    """Multi-start local minimization of I(Z1,Z2;W) over W-decompositions.

    The objective H(Z1,Z2) - sum_w p(w)(H(Z1|w) + H(Z2|w)) is nonconvex;
    64 deterministic restarts (two structured, the rest seeded) feed a
    constrained local optimizer, and the best near-feasible point is
    reported as an upper-bound estimate.
    """
    if wmax < 1:
        raise InputError("wmax must be at least 1")
    if len(q.axes) != 2:
        raise InputError("Wyner evaluation needs a joint over exactly two axes")
    n1, n2 = q.sizes
    k = wmax
    qm = np.array([[float(q.prob((i, j))) for j in range(n2)] for i in range(n1)])
    h_joint = entropy(q)
    m1 = qm.sum(axis=1)
    m2 = qm.sum(axis=0)
    i_z = _mi(qm, m1, m2)

    def split(v):
        pw = v[:k]
        r1 = v[k:k + k * n1].reshape(k, n1)
        r2 = v[k + k * n1:].reshape(k, n2)
        return pw, r1, r2

    def objective(v):
        pw, r1, r2 = split(v)
        return h_joint - float(np.dot(pw, _hrows(r1) + _hrows(r2)))

    def mixture(v):
        pw, r1, r2 = split(v)
        return np.einsum("w,wi,wj->ij", pw, r1, r2)

    cons = [
        {"type": "eq", "fun": lambda v: np.sum(v[:k]) - 1.0},
        {"type": "eq",
         "fun": lambda v: split(v)[1].sum(axis=1) - 1.0},
        {"type": "eq",
         "fun": lambda v: split(v)[2].sum(axis=1) - 1.0},
        {"type": "eq", "fun": lambda v: (mixture(v) - qm).ravel()},
    ]
    bounds = [(0.0, 1.0)] * (k + k * n1 + k * n2)

    def pack(pw, r1, r2):
        return np.concatenate([np.asarray(pw, float).ravel(),
                               np.asarray(r1, float).ravel(),
                               np.asarray(r2, float).ravel()])

    starts = []
    if k >= n1:
        pw = np.zeros(k)
        pw[:n1] = m1
        r1 = np.full((k, n1), 1.0 / n1)
        r2 = np.full((k, n2), 1.0 / n2)
        for w in range(n1):
            r1[w] = 0.0
            r1[w, w] = 1.0
            if m1[w] > 0:
                r2[w] = qm[w] / m1[w]
        starts.append(pack(pw, r1, r2))
    pw = np.zeros(k)
    pw[0] = 1.0
    r1 = np.tile(m1, (k, 1))
    r2 = np.tile(m2, (k, 1))
    starts.append(pack(pw, r1, r2))
    while len(starts) < 64:
        run = len(starts)
        u = [draw64(run, t) / TWO64 for t in range(k + k * n1 + k * n2)]
        pw = _norm(u[:k])
        r1 = np.array([_norm(u[k + w * n1:k + (w + 1) * n1]) for w in range(k)])
        off = k + k * n1
        r2 = np.array([_norm(u[off + w * n2:off + (w + 1) * n2]) for w in range(k)])
        starts.append(pack(pw, r1, r2))

    best = None
    for v0 in starts:
        for v in (v0, _polish(objective, cons, bounds, v0)):
            v = np.clip(v, 0.0, 1.0)
            viol = max(
                abs(np.sum(v[:k]) - 1.0),
                float(np.max(np.abs(split(v)[1].sum(axis=1) - 1.0))),
                float(np.max(np.abs(split(v)[2].sum(axis=1) - 1.0))),
                float(np.max(np.abs(mixture(v) - qm))),
            )
            if viol > 1e-7:
                continue
            val = objective(v)
            if best is None or val < best[0]:
                best = (val, v)
    if best is None:
        raise PreconditionError(
            "no W-decomposition found within tolerance; try a larger wmax")
    val, v = best
    val = max(val, 0.0)
    pw, r1, r2 = split(v)
    return WynerReport(val, i_z, abs(val - i_z) <= 1e-3, k,
                       tuple(pw.tolist()),
                       tuple(map(tuple, r1.tolist())),
                       tuple(map(tuple, r2.tolist())))


def _polish(objective, cons, bounds, v0):
    res = minimize(objective, v0, method="SLSQP", bounds=bounds,
                   constraints=cons,
                   options={"maxiter": 400, "ftol": 1e-12})
    return res.x


def _hrows(rows):
    safe = np.where(rows > 1e-300, rows, 1.0)
    return -(np.where(rows > 1e-300, rows * np.log2(safe), 0.0)).sum(axis=1)


def _mi(qm, m1, m2):
    total = 0.0
    for i in range(qm.shape[0]):
        for j in range(qm.shape[1]):
            p = qm[i, j]
            if p > 0 and m1[i] > 0 and m2[j] > 0:
                total += p * math.log2(p / (m1[i] * m2[j]))
    return max(total, 0.0)


def _norm(vals):
    vals = [v + 1e-9 for v in vals]
    s = sum(vals)
    return np.array([v / s for v in vals])


@dataclass(frozen=True)
class ErasureRates:
    p: float
    r_both: float             # NaN when only asymptotic infeasibility holds
    r_alice: float
    r_bob: float
    r_none: float

    def as_row(self):
        return (self.p, self.r_both, self.r_alice, self.r_bob, self.r_none)


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def erasure_example_rates(p) -> ErasureRates:
    """The worked example's four per-instance rates at erasure probability p.

    Privacy against both users is possible only at the endpoints, so the
    both-users curve is NaN strictly inside (0,1). The no-privacy curve
    minimizes 0.5*(h(p) + (1-p1)(1-h(p2))) over the splittings
    (1-p1)(1-p2) = 1-p, by dense grid plus golden-section refinement.
    """
    pf = float(p)
    if not 0 <= pf <= 1:
        raise InputError("erasure probability must lie in [0,1]")
    h = binary_entropy(pf)
    r_both = 0.5 if pf == 0 else (0.0 if pf == 1 else math.nan)
    r_alice = 0.5 if pf < 1 else 0.0
    r_bob = (h + (1 - pf)) / 2
    r_none = _erasure_no_privacy(pf, h)
    return ErasureRates(pf, r_both, r_alice, r_bob, r_none)


def _erasure_no_privacy(pf, h):
    if pf == 1:
        return 0.0

    def f(p1):
        p2 = 1 - (1 - pf) / (1 - p1)
        return 0.5 * (h + (1 - p1) * (1 - binary_entropy(p2)))

    lo, hi = 0.0, pf
    steps = int(pf / 1e-4)
    grid = [lo + i * 1e-4 for i in range(steps + 1)] + [hi]
    best = min(range(len(grid)), key=lambda i: (f(grid[i]), i))
    a = grid[best - 1] if best > 0 else lo
    b = grid[best + 1] if best + 1 < len(grid) else hi
    refined = min(f(x) for x in _golden(f, a, b, 1e-8))
    return min(refined, f(grid[best]))


def _golden(f, a, b, tol):
    inv = (math.sqrt(5) - 1) / 2
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return (a, b, c, d)


CSV_HEADER = "p,R_AB,R_A,R_B,R_noprivacy"


def erasure_grid_csv(points) -> str:
    """CSV sweep of the four curves; infeasible both-users entries spelled out."""
    lines = [CSV_HEADER]
    for pt in points:
        r = erasure_example_rates(pt)
        cells = [_fmt(r.p)]
        cells.append("infeasible" if math.isnan(r.r_both) else _fmt(r.r_both))
        cells.extend(_fmt(v) for v in (r.r_alice, r.r_bob, r.r_none))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return "%.9g" % v
