"""Interactive auxiliary-chain certificates and their exact verification.

An r-round chain alternates senders (the starter owns round 1): each round i
carries a conditional p(u_i | u_{<i}, own input), and two decoders map
(u_{[1:r]}, own input) to the outputs. Verification composes the exact joint
over (X, Y, U_{[1:r]}, Z1, Z2) and tests every alternation, decodability, and
privacy condition as an exact Markov identity, plus exact correctness of the
induced output law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, SizeError
from .fileio import LineReader, format_rational, read_row
from .problem import Problem
from .tables import (
    CondTable,
    JointTable,
    conditional_mutual_information,
    extend,
    is_markov,
    make_cond,
    marginalize,
    total_variation,
)

JOINT_CELL_GUARD = 10 ** 7


@dataclass(frozen=True)
class AuxChain:
    starter: str                 # "A" or "B"
    u_axes: tuple                # (("U1", labels), ...)
    encoders: tuple              # round i: CondTable from (own, U1..U_{i-1}) to (Ui,)
    dec1: object                 # CondTable from (X, U1..Ur) to (Z1,), or None
    dec2: CondTable              # CondTable from (Y, U1..Ur) to Bob's output axis

    @property
    def rounds(self):
        return len(self.encoders)

    def owner(self, i):
        """Sender of 1-based round i."""
        first = self.starter
        other = "B" if first == "A" else "A"
        return first if i % 2 == 1 else other


@dataclass(frozen=True)
class ChainReport:
    mode: str
    checks: dict                 # ordered name -> bool (exact Markov verdicts)
    correctness_tv: Fraction
    quantities: dict             # name -> bits
    joint: JointTable
    required: tuple              # check names gating this mode

    @property
    def passed(self):
        return self.correctness_tv == 0 and all(self.checks[name] for name in self.required)


def _u_names(chain):
    return tuple(name for name, _ in chain.u_axes)


def build_chain_joint(p: Problem, chain: AuxChain) -> JointTable:
    cells = math.prod(p.qxy.sizes)
    for _, labels in chain.u_axes:
        cells *= len(labels)
    cells *= math.prod(len(ls) for _, ls in p.channel.to_axes)
    if cells > JOINT_CELL_GUARD:
        raise SizeError(f"chain joint needs {cells} cells; guard is {JOINT_CELL_GUARD}")
    t = p.qxy
    for enc in chain.encoders:
        t = extend(t, enc)
    if chain.dec1 is not None:
        t = extend(t, chain.dec1)
    else:
        t = extend(t, make_cond((), (("Z1", ("-",)),), [(Fraction(1),)]))
    return extend(t, chain.dec2)


def verify_aux_chain(p: Problem, chain: AuxChain, mode: str) -> ChainReport:
    """Exact pass/fail of every certificate condition, gated per mode.

    Modes gate: alternation and decodability always; privacy against Alice
    for modes both/alice; privacy against Bob for modes both/bob. Exact
    correctness (zero total variation against the target joint) always gates.
    """
    if mode not in ("both", "alice", "bob"):
        raise InputError(f"unknown mode {mode!r}")
    t = build_chain_joint(p, chain)
    us = _u_names(chain)
    z2name = p.channel.to_axes[-1][0]          # "Z2" or "Z"
    zz = ("Z1", z2name)
    checks = {}
    for i in range(1, chain.rounds + 1):
        own, other = ("X", "Y") if chain.owner(i) == "A" else ("Y", "X")
        checks[f"alternation-{i}"] = is_markov(
            t, (us[i - 1],), us[:i - 1] + (own,), (other,))
    checks["decode-alice"] = is_markov(t, ("Z1",), us + ("X",), ("Y", z2name))
    checks["decode-bob"] = is_markov(t, (z2name,), us + ("Y",), ("X", "Z1"))
    checks["privacy-alice"] = is_markov(t, us, ("X", "Z1"), ("Y", z2name))
    checks["privacy-bob"] = is_markov(t, us, ("Y", z2name), ("X", "Z1"))
    target = p.target_joint()
    tv = total_variation(marginalize(t, ("X", "Y") + tuple(n for n, _ in p.channel.to_axes)),
                         target)
    quantities = {
        "I(X;U|Y)": conditional_mutual_information(t, ("X",), us, ("Y",)),
        "I(Y;U|X)": conditional_mutual_information(t, ("Y",), us, ("X",)),
        "I(U;Z1,Z2|X,Y)": conditional_mutual_information(t, us, zz, ("X", "Y")),
        "I(U1;Z1,Z2|X,Y)": conditional_mutual_information(t, us[:1], zz, ("X", "Y")),
        "I(U;Z1|X,Y)": conditional_mutual_information(t, us, ("Z1",), ("X", "Y")),
        "I(U1;Z1|X,Y)": conditional_mutual_information(t, us[:1], ("Z1",), ("X", "Y")),
        "I(U;Z2|X,Y)": conditional_mutual_information(t, us, (z2name,), ("X", "Y")),
        "I(U1;Z2|X,Y)": conditional_mutual_information(t, us[:1], (z2name,), ("X", "Y")),
    }
    required = [f"alternation-{i}" for i in range(1, chain.rounds + 1)]
    required += ["decode-alice", "decode-bob"]
    if mode in ("both", "alice"):
        required.append("privacy-alice")
    if mode in ("both", "bob"):
        required.append("privacy-bob")
    return ChainReport(mode, checks, tv, quantities, t, tuple(required))


def parse_chain(text, p: Problem) -> AuxChain:
    """Read a .sfa chain against its companion problem (alphabet sizes)."""
    r = LineReader(text)
    line, toks = r.next(context="header")
    if toks != ["sfa", "1"]:
        raise InputError("expected header 'sfa 1'", line=line)
    line, toks = r.expect("rounds")
    if len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 1:
        raise InputError("bad round count", line=line)
    rounds = int(toks[1])
    line, toks = r.expect("start")
    if len(toks) != 2 or toks[1] not in ("A", "B"):
        raise InputError("start must be A or B", line=line)
    starter = toks[1]
    probe = AuxChain(starter, (), (), None, None)
    x_axis = ("X", p.x_labels)
    y_axis = ("Y", p.y_labels)
    u_axes = []
    encoders = []
    for i in range(1, rounds + 1):
        line, toks = r.expect(f"U{i}")
        if len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 1:
            raise InputError(f"bad U{i} size", line=line)
        n = int(toks[1])
        axis = (f"U{i}", tuple(f"u{t}" for t in range(1, n + 1)))
        own = x_axis if probe.owner(i) == "A" else y_axis
        from_axes = (own,) + tuple(u_axes)
        n_rows = math.prod(len(ls) for _, ls in from_axes)
        r.expect(f"PU{i}")
        rows, reach = _read_block(r, n_rows, n, f"PU{i}")
        encoders.append(make_cond(from_axes, (axis,), rows, reach))
        u_axes.append(axis)
    u_axes = tuple(u_axes)
    dec1 = None
    item = r.peek()
    if item is not None and item[1][0] == "DEC1":
        if not p.two_output:
            raise InputError("DEC1 given for a one-output problem", line=item[0])
        r.expect("DEC1")
        from_axes = (x_axis,) + u_axes
        n_rows = math.prod(len(ls) for _, ls in from_axes)
        rows, reach = _read_block(r, n_rows, len(p.z1_labels), "DEC1")
        dec1 = make_cond(from_axes, (("Z1", p.z1_labels),), rows, reach)
    elif p.two_output:
        raise InputError("two-output problem needs a DEC1 block")
    r.expect("DEC2")
    z2_axis = ("Z2", p.z2_labels) if p.two_output else ("Z", p.z_labels)
    from_axes = (y_axis,) + u_axes
    n_rows = math.prod(len(ls) for _, ls in from_axes)
    rows, reach = _read_block(r, n_rows, len(z2_axis[1]), "DEC2")
    dec2 = make_cond(from_axes, (z2_axis,), rows, reach)
    if not r.at_end():
        line, toks = r.next()
        raise InputError(f"unexpected trailing content {' '.join(toks)!r}", line=line)
    return AuxChain(starter, u_axes, tuple(encoders), dec1, dec2)


def _read_block(r, n_rows, width, context):
    rows, reach = [], []
    for _ in range(n_rows):
        _, row = read_row(r, width, context, allow_dash=True)
        rows.append(row)
        reach.append(row is not None)
    return rows, reach


def render_chain(chain: AuxChain) -> str:
    out = ["sfa 1", f"rounds {chain.rounds}", f"start {chain.starter}"]
    for i, enc in enumerate(chain.encoders, start=1):
        out.append(f"U{i} {len(chain.u_axes[i - 1][1])}")
        out.append(f"PU{i}")
        _emit_block(out, enc)
    if chain.dec1 is not None:
        out.append("DEC1")
        _emit_block(out, chain.dec1)
    out.append("DEC2")
    _emit_block(out, chain.dec2)
    return "\n".join(out) + "\n"


def _emit_block(out, cond: CondTable):
    for row, reach in zip(cond.rows, cond.reachable):
        out.append(" ".join(format_rational(v) for v in row) if reach else "-")


def chain_from_protocol(encoder: CondTable, decoder: CondTable) -> AuxChain:
    """View a one-message protocol as a 1-round Alice-started chain.

    The encoder maps (X,) to the message axis, renamed U1.  The protocol
    decoder stores rows message-major; chain decoders put Bob's input first,
    so the rows are transposed to (Y, U1) order.
    """
    u_axis = ("U1", encoder.to_axes[0][1])
    enc = CondTable(encoder.from_axes, (u_axis,), encoder.rows, encoder.reachable)
    y_axis = decoder.from_axes[1]
    nu, ny = len(u_axis[1]), len(y_axis[1])
    rows = tuple(decoder.rows[u * ny + y] for y in range(ny) for u in range(nu))
    reach = tuple(decoder.reachable[u * ny + y] for y in range(ny) for u in range(nu))
    dec2 = CondTable((y_axis, u_axis), decoder.to_axes, rows, reach)
    return AuxChain("A", (u_axis,), (enc,), None, dec2)


def builtin_chain(name, m=2):
    """Reference chains: 3-round index-and(m) and 1-round select(m) identity.

    Returns (problem, chain).
    """
    from .problem import builtin_problem

    one = Fraction(1)
    if name == "index-and":
        p = builtin_problem("index-and", m)
        xs, ys, zs = p.x_labels, p.y_labels, p.z2_labels
        x_axis, y_axis = ("X", xs), ("Y", ys)
        u1 = ("U1", tuple(f"u{j}" for j in range(1, m + 1)))       # J
        u2 = ("U2", ("u1", "u2"))                                  # Y_J (0/1)
        u3 = ("U3", ("u1", "u2"))                                  # V and Y_J

        def xparts(label):  # "v{v}j{j}"
            return int(label[1]), int(label[3:])

        rows1 = []
        for x in xs:
            _, j = xparts(x)
            rows1.append(tuple(one if t == j - 1 else 0 for t in range(m)))
        enc1 = make_cond((x_axis,), (u1,), rows1)
        rows2 = []
        for y in ys:
            bits = y[1:]
            for j in range(1, m + 1):
                b = int(bits[j - 1])
                rows2.append((one - b, Fraction(b)))
        enc2 = make_cond((y_axis, u1), (u2,), rows2)
        rows3 = []
        for x in xs:
            v, _ = xparts(x)
            for _j in range(m):
                for b in (0, 1):
                    w = v & b
                    rows3.append((one - w, Fraction(w)))
        enc3 = make_cond((x_axis, u1, u2), (u3,), rows3)
        dec_rows = []
        for _ in xs:
            dec_rows.extend(_index_and_dec_rows(m, zs))
        dec1 = make_cond((x_axis, u1, u2, u3), (("Z1", zs),), dec_rows)
        dec_rows = []
        for _ in ys:
            dec_rows.extend(_index_and_dec_rows(m, zs))
        dec2 = make_cond((y_axis, u1, u2, u3), (("Z2", zs),), dec_rows)
        return p, AuxChain("A", (u1, u2, u3), (enc1, enc2, enc3), dec1, dec2)
    if name == "select":
        p = builtin_problem("select", m)
        zs = p.z_labels
        u1 = ("U1", tuple(f"u{t}" for t in range(1, len(zs) + 1)))
        enc = make_cond((("X", p.x_labels),), (u1,),
                        [p.channel_row(x, 0) for x in range(len(p.x_labels))])
        rows = [tuple(one if z == u else 0 for z in range(len(zs)))
                for u in range(len(zs))]
        dec2 = make_cond((("Y", p.y_labels), u1), (("Z", zs),), rows)
        return p, AuxChain("A", (u1,), (enc,), None, dec2)
    raise InputError(f"unknown builtin chain {name!r}")


def _index_and_dec_rows(m, zs):
    one = Fraction(1)
    rows = []
    for j in range(1, m + 1):
        for _u2 in (0, 1):
            for u3 in (0, 1):
                z = (j - 1) * 2 + u3
                rows.append(tuple(one if t == z else 0 for t in range(len(zs))))
    return rows
