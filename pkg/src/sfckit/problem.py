"""Problem data model, .sfc text format, and builtin problem generators.

A problem is a pair (input distribution over X x Y, randomized channel):
one-output problems give Bob's output axis Z, two-output problems give the
joint channel over (Z1, Z2) with Z1 for Alice and Z2 for Bob.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import InputError
from .fileio import LineReader, format_rational, read_row
from .tables import (
    CondTable,
    JointTable,
    ZERO,
    extend,
    make_cond,
    make_joint,
)


@dataclass(frozen=True)
class Problem:
    qxy: JointTable
    channel: CondTable

    @property
    def x_labels(self):
        return self.qxy.axes[0][1]

    @property
    def y_labels(self):
        return self.qxy.axes[1][1]

    @property
    def two_output(self):
        return len(self.channel.to_axes) == 2

    @property
    def z_labels(self):
        if self.two_output:
            raise InputError("two-output problem has no single Z axis")
        return self.channel.to_axes[0][1]

    @property
    def z1_labels(self):
        return self.channel.to_axes[0][1] if self.two_output else None

    @property
    def z2_labels(self):
        return self.channel.to_axes[-1][1]

    def support(self, xi, yi):
        return self.qxy.prob((xi, yi)) > 0

    def support_mask(self):
        nx, ny = self.qxy.sizes
        return tuple(tuple(self.support(x, y) for y in range(ny)) for x in range(nx))

    def channel_row(self, xi, yi):
        return self.channel.row((xi, yi))

    def target_joint(self) -> JointTable:
        """Exact joint q_XY * channel over (X, Y, Z) or (X, Y, Z1, Z2)."""
        return extend(self.qxy, self.channel)


def make_problem(x_labels, y_labels, qxy_rows, z_axes, channel_rows) -> Problem:
    """Validate and normalize; unreachable channel rows become uniform."""
    qxy = make_joint(
        (("X", x_labels), ("Y", y_labels)),
        [p for row in qxy_rows for p in row],
    )
    nx, ny = qxy.sizes
    reachable = [qxy.prob((x, y)) > 0 for x in range(nx) for y in range(ny)]
    rows = []
    for i, row in enumerate(channel_rows):
        rows.append(row if reachable[i] else None)
        if row is None and reachable[i]:
            x, y = divmod(i, ny)
            raise InputError(
                f"channel row for supported cell ({x_labels[x]},{y_labels[y]}) is missing")
    channel = make_cond(qxy.axes, z_axes, rows, reachable)
    return Problem(qxy, channel)


def _default_labels(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def parse_problem(text) -> Problem:
    r = LineReader(text)
    line, toks = r.next(context="header")
    if toks != ["sfc", "1"]:
        raise InputError("expected header 'sfc 1'", line=line)
    sizes = {}
    labels = {}
    while True:
        item = r.peek()
        if item is None:
            raise InputError("missing PXY block")
        line, toks = item
        key = toks[0]
        if key in ("X", "Y", "Z", "Z1", "Z2"):
            r.next()
            if len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 1:
                raise InputError(f"bad alphabet size line {' '.join(toks)!r}", line=line)
            if key in sizes:
                raise InputError(f"duplicate size for axis {key}", line=line)
            sizes[key] = int(toks[1])
        elif key == "labels":
            r.next()
            if len(toks) < 3:
                raise InputError("labels line needs an axis and at least one label", line=line)
            axis = toks[1]
            if axis not in sizes:
                raise InputError(f"labels for undeclared axis {axis!r}", line=line)
            if len(toks) - 2 != sizes[axis]:
                raise InputError(
                    f"axis {axis} has {sizes[axis]} symbols but {len(toks) - 2} labels",
                    line=line)
            if len(set(toks[2:])) != len(toks) - 2:
                raise InputError(f"duplicate labels on axis {axis}", line=line)
            labels[axis] = tuple(toks[2:])
        elif key in ("PXY", "PZXY", "PZZXY"):
            break
        else:
            raise InputError(f"unexpected keyword {key!r}", line=line)
    if "X" not in sizes or "Y" not in sizes:
        raise InputError("missing X or Y size")
    one_out = "Z" in sizes
    two_out = "Z1" in sizes or "Z2" in sizes
    if one_out == two_out:
        raise InputError("declare either Z or both Z1 and Z2")
    if two_out and ("Z1" not in sizes or "Z2" not in sizes):
        raise InputError("two-output problems need both Z1 and Z2 sizes")

    def lab(axis, prefix):
        return labels.get(axis, _default_labels(prefix, sizes[axis]))

    x_labels, y_labels = lab("X", "x"), lab("Y", "y")
    nx, ny = sizes["X"], sizes["Y"]
    line, toks = r.expect("PXY")
    qxy_rows = []
    for _ in range(nx):
        _, row = read_row(r, ny, "PXY row")
        qxy_rows.append(row)
    if one_out:
        z_axes = (("Z", lab("Z", "z")),)
        width = sizes["Z"]
        line, toks = r.expect("PZXY")
    else:
        z_axes = (("Z1", lab("Z1", "z1_")), ("Z2", lab("Z2", "z2_")))
        width = sizes["Z1"] * sizes["Z2"]
        line, toks = r.expect("PZZXY")
    channel_rows = []
    for _ in range(nx * ny):
        _, row = read_row(r, width, "channel row", allow_dash=True)
        channel_rows.append(row)
    if not r.at_end():
        line, toks = r.next()
        raise InputError(f"unexpected trailing content {' '.join(toks)!r}", line=line)
    try:
        return make_problem(x_labels, y_labels, qxy_rows, z_axes, channel_rows)
    except InputError:
        raise
    except ZeroDivisionError as exc:
        raise InputError(str(exc)) from None


def render_problem(p: Problem) -> str:
    out = ["sfc 1"]
    nx, ny = p.qxy.sizes
    out.append(f"X {nx}")
    out.append(f"Y {ny}")
    if p.two_output:
        out.append(f"Z1 {len(p.z1_labels)}")
        out.append(f"Z2 {len(p.z2_labels)}")
    else:
        out.append(f"Z {len(p.z_labels)}")
    out.append("labels X " + " ".join(p.x_labels))
    out.append("labels Y " + " ".join(p.y_labels))
    if p.two_output:
        out.append("labels Z1 " + " ".join(p.z1_labels))
        out.append("labels Z2 " + " ".join(p.z2_labels))
    else:
        out.append("labels Z " + " ".join(p.z_labels))
    out.append("PXY")
    for x in range(nx):
        out.append(" ".join(format_rational(p.qxy.prob((x, y))) for y in range(ny)))
    out.append("PZZXY" if p.two_output else "PZXY")
    for x in range(nx):
        for y in range(ny):
            i = p.channel.row_index((x, y))
            if p.channel.reachable[i]:
                out.append(" ".join(format_rational(v) for v in p.channel.rows[i]))
            else:
                out.append("-")
    return "\n".join(out) + "\n"


def _bits(i, m):
    return format(i, f"0{m}b")


def builtin_problem(name, *params) -> Problem:
    """Named instances: erasure(p), index-and(m), select(m), and-full-support."""
    if name == "erasure":
        if len(params) != 1:
            raise InputError("erasure takes one parameter p")
        p = Fraction(params[0])
        if not 0 <= p <= 1:
            raise InputError(f"erasure parameter p={p} outside [0,1]")
        q = Fraction(1, 4)
        return make_problem(
            ("x1", "x2", "x3"), ("y1", "y2"),
            [(q, q), (q, ZERO), (ZERO, q)],
            (("Z", ("0", "e", "1")),),
            [
                (0, 1, 0),            # (x1,y1) -> e
                (1 - p, p, 0),        # (x1,y2)
                (0, 1, 0),            # (x2,y1) -> e
                None,                 # (x2,y2) unreachable
                None,                 # (x3,y1) unreachable
                (0, p, 1 - p),        # (x3,y2)
            ])
    if name == "index-and":
        m = _int_param(name, params)
        xs = tuple(f"v{v}j{j}" for v in (0, 1) for j in range(1, m + 1))
        ys = tuple("y" + _bits(i, m) for i in range(2 ** m))
        zs = tuple(f"j{j}w{w}" for j in range(1, m + 1) for w in (0, 1))
        nz = len(zs)
        qxy = [[Fraction(1, 2 * m * 2 ** m)] * len(ys) for _ in xs]
        rows = []
        for v in (0, 1):
            for j in range(1, m + 1):
                for i in range(2 ** m):
                    w = v & int(_bits(i, m)[j - 1])
                    z = (j - 1) * 2 + w
                    row = [ZERO] * (nz * nz)
                    row[z * nz + z] = Fraction(1)
                    rows.append(tuple(row))
        return make_problem(xs, ys, qxy, (("Z1", zs), ("Z2", zs)), rows)
    if name == "select":
        m = _int_param(name, params)
        xs = tuple("x" + _bits(i, m) for i in range(2 ** m))
        zs = tuple(f"j{j}b{b}" for j in range(1, m + 1) for b in (0, 1))
        qxy = [[Fraction(1, 2 ** m)] for _ in xs]
        rows = []
        for i in range(2 ** m):
            bits = _bits(i, m)
            row = [Fraction(1, m) if int(bits[j - 1]) == b else ZERO
                   for j in range(1, m + 1) for b in (0, 1)]
            rows.append(tuple(row))
        return make_problem(xs, ("y1",), qxy, (("Z", zs),), rows)
    if name == "and-full-support":
        if params:
            raise InputError("and-full-support takes no parameters")
        q = Fraction(1, 4)
        one = Fraction(1)
        return make_problem(
            ("x0", "x1"), ("y0", "y1"),
            [(q, q), (q, q)],
            (("Z", ("z0", "z1")),),
            [(one, ZERO), (one, ZERO), (one, ZERO), (ZERO, one)])
    raise InputError(f"unknown builtin problem {name!r}")


def _int_param(name, params):
    if len(params) != 1:
        raise InputError(f"{name} takes one parameter m")
    m = params[0]
    if isinstance(m, Fraction):
        if m.denominator != 1:
            raise InputError(f"{name} parameter must be an integer")
        m = m.numerator
    m = int(m)
    if m < 2:
        raise InputError(f"{name} needs m >= 2")
    if 2 ** m > 4096:
        raise InputError(f"{name} with m={m} is too large")
    return m
