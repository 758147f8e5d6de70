"""One-round protocol synthesis, exact verification, Huffman coding, and
seeded Monte Carlo simulation.

A protocol is a pair of stochastic maps: Alice's encoder p(u|x) and Bob's
decoder p(z|u,y). Synthesis covers the three privacy modes: color the
equivalence-reduced graph (privacy against both), color the characteristic
graph (privacy against Alice), or send the common-part class sampled at the
agreed reference column (privacy against Bob).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, replace
from fractions import Fraction

from ._kernels import simulate_counts
from .errors import InputError, PreconditionError
from .fileio import LineReader, format_rational, read_row
from .problem import Problem
from .rng import thresholds
from .tables import (
    CondTable,
    JointTable,
    entropy_bits,
    extend,
    is_markov,
    make_cond,
    marginalize,
    total_variation,
)


@dataclass(frozen=True)
class Protocol:
    encoder: CondTable        # from (X,) to (U,)
    decoder: CondTable        # from (U, Y) to (Z,)
    code: tuple | None = None # binary codeword string per message, or None

    @property
    def u_labels(self):
        return self.encoder.to_axes[0][1]

    @property
    def num_messages(self):
        return len(self.u_labels)


def make_protocol(encoder: CondTable, decoder: CondTable, code=None) -> Protocol:
    if len(encoder.from_axes) != 1 or len(encoder.to_axes) != 1:
        raise InputError("encoder must map a single input axis to the message axis")
    if len(decoder.from_axes) != 2 or len(decoder.to_axes) != 1:
        raise InputError("decoder must map (message, column input) to the output axis")
    u_axis = encoder.to_axes[0]
    if decoder.from_axes[0] != u_axis:
        raise InputError("decoder message axis differs from the encoder's")
    if code is not None:
        code = tuple(code)
        if len(code) != len(u_axis[1]):
            raise InputError("one codeword per message required")
        _check_prefix_free(code)
    return Protocol(encoder, decoder, code)


def _check_prefix_free(code):
    for w in code:
        if any(ch not in "01" for ch in w):
            raise InputError(f"codeword {w!r} is not binary")
    ordered = sorted(code)
    for a, b in zip(ordered, ordered[1:]):
        if b.startswith(a):
            raise InputError(f"codeword {a!r} is a prefix of {b!r}")


def _u_axis(k):
    return ("U", tuple(f"u{i}" for i in range(1, k + 1)))


def synthesize(p: Problem, mode: str) -> Protocol:
    """Build a perfectly secure one-round protocol for the mode.

    both: optimal-entropy proper coloring of the equivalence-reduced graph,
    sent as a deterministic function of the input's class; alice: the same
    coloring construction on the characteristic graph itself; bob: the
    common-part construction with messages sampled by class mass at the
    first column symbol and decoded through any representative, exact by
    the rank-one structure.
    """
    from .feasibility import (
        build_common_part,
        decide_both_privacy,
        decide_bob_privacy,
        equivalence_partition,
        reduce_problem,
    )
    from .graphs import characteristic_graph, chromatic_entropy

    if p.two_output:
        raise InputError("protocol synthesis covers one-output problems")
    if mode == "both":
        report = decide_both_privacy(p)
        if not report.feasible:
            raise PreconditionError(
                f"not securely computable with privacy against both users: {report.notes}")
        partition = equivalence_partition(p)
        reduced = reduce_problem(p)
        _, coloring = chromatic_entropy(characteristic_graph(reduced))
        color_of_x = [coloring.color_of[partition.block_of(x)]
                      for x in range(len(p.x_labels))]
        return _coloring_protocol(p, color_of_x, coloring.num_colors)
    if mode == "alice":
        _, coloring = chromatic_entropy(characteristic_graph(p))
        return _coloring_protocol(p, list(coloring.color_of), coloring.num_colors)
    if mode == "bob":
        report = decide_bob_privacy(p)
        if report.verdict != "feasible":
            raise PreconditionError(
                f"privacy against Bob synthesis unavailable ({report.verdict}): "
                f"{report.notes}")
        common = build_common_part(p)
        u_axis = _u_axis(common.k)
        encoder = CondTable((("X", p.x_labels),), (u_axis,),
                            common.p_w_given_x.rows, common.p_w_given_x.reachable)
        ny, nz = len(p.y_labels), len(p.z_labels)
        rows, reach = [], []
        for i in range(common.k):
            for y in range(ny):
                cls = common.matched[y][i]
                rep = next(x for x in range(len(p.x_labels)) if cls.alpha[x] > 0)
                mass = sum((p.channel_row(rep, y)[z] for z in cls.zs), Fraction(0))
                row = [Fraction(0)] * nz
                for z in cls.zs:
                    row[z] = p.channel_row(rep, y)[z] / mass
                rows.append(tuple(row))
                reach.append(True)
        decoder = make_cond((u_axis, ("Y", p.y_labels)), (("Z", p.z_labels),),
                            rows, reach)
        return make_protocol(encoder, decoder)
    raise InputError(f"unknown mode {mode!r}")


def _coloring_protocol(p: Problem, color_of_x, k) -> Protocol:
    u_axis = _u_axis(k)
    one = Fraction(1)
    enc_rows = [tuple(one if c == color_of_x[x] else 0 for c in range(k))
                for x in range(len(p.x_labels))]
    encoder = make_cond((("X", p.x_labels),), (u_axis,), enc_rows)
    ny = len(p.y_labels)
    rows, reach = [], []
    for c in range(k):
        for y in range(ny):
            rep = next((x for x in range(len(p.x_labels))
                        if color_of_x[x] == c and p.support(x, y)), None)
            if rep is None:
                rows.append(None)
                reach.append(False)
            else:
                rows.append(p.channel_row(rep, y))
                reach.append(True)
    decoder = make_cond((u_axis, ("Y", p.y_labels)), (("Z", p.z_labels),),
                        rows, reach)
    return make_protocol(encoder, decoder)


def induced_joint(pr: Protocol, p: Problem) -> JointTable:
    """Exact composition q_XY * p(U|X) * p(Z|U,Y) over (X, Y, U, Z)."""
    if pr.encoder.from_axes[0][1] != p.x_labels:
        raise InputError("protocol input alphabet differs from the problem's")
    if pr.decoder.from_axes[1][1] != p.y_labels:
        raise InputError("protocol column alphabet differs from the problem's")
    return extend(extend(p.qxy, pr.encoder), pr.decoder)


def message_marginal(pr: Protocol, p: Problem) -> tuple:
    """Exact p(U) under the problem's input marginal."""
    nx, k = len(p.x_labels), pr.num_messages
    ny = len(p.y_labels)
    qx = [sum((p.qxy.prob((x, y)) for y in range(ny)), Fraction(0))
          for x in range(nx)]
    out = [Fraction(0)] * k
    for x in range(nx):
        row = pr.encoder.rows[x]
        for u in range(k):
            out[u] += qx[x] * row[u]
    return tuple(out)


@dataclass(frozen=True)
class VerifyReport:
    mode: str
    correctness_tv: Fraction  # exact; 0 required to pass
    privacy_alice: bool       # exact test of U - X - (Y,Z)
    privacy_bob: bool         # exact test of U - (Y,Z) - X
    h_message: float          # H(U) bits
    expected_length: Fraction | None

    @property
    def passed(self):
        if self.correctness_tv != 0:
            return False
        if self.mode in ("both", "alice") and not self.privacy_alice:
            return False
        if self.mode in ("both", "bob") and not self.privacy_bob:
            return False
        return True


def verify_protocol(pr: Protocol, p: Problem, mode: str) -> VerifyReport:
    """Exact correctness and privacy report; only the mode's chains gate."""
    if mode not in ("both", "alice", "bob"):
        raise InputError(f"unknown mode {mode!r}")
    t = induced_joint(pr, p)
    tv = total_variation(marginalize(t, ("X", "Y", "Z")), p.target_joint())
    alice = is_markov(t, ("U",), ("X",), ("Y", "Z"))
    bob = is_markov(t, ("U",), ("Y", "Z"), ("X",))
    p_u = message_marginal(pr, p)
    e_l = expected_length(pr, p) if pr.code is not None else None
    return VerifyReport(mode, tv, alice, bob, entropy_bits(p_u), e_l)


def huffman_code(pr: Protocol, p: Problem) -> Protocol:
    """Attach an optimal prefix-free binary code for the exact p(U).

    Merging always takes the two lowest-probability nodes, breaking ties by
    the earliest original message index; the first node popped in a merge
    takes bit 0. A single-message alphabet gets the empty codeword.
    """
    p_u = message_marginal(pr, p)
    k = len(p_u)
    if k == 1:
        return replace(pr, code=("",))
    heap = [(p_u[i], i, i) for i in range(k)]
    heapq.heapify(heap)
    children = {}
    next_id = k
    while len(heap) > 1:
        pa, ea, ia = heapq.heappop(heap)
        pb, eb, ib = heapq.heappop(heap)
        children[next_id] = (ia, ib)
        heapq.heappush(heap, (pa + pb, min(ea, eb), next_id))
        next_id += 1
    code = [""] * k
    stack = [(heap[0][2], "")]
    while stack:
        node, prefix = stack.pop()
        if node < k:
            code[node] = prefix
        else:
            zero, one = children[node]
            stack.append((zero, prefix + "0"))
            stack.append((one, prefix + "1"))
    return make_protocol(pr.encoder, pr.decoder, tuple(code))


def expected_length(pr: Protocol, p: Problem) -> Fraction:
    """Exact E[L] of the attached code under p(U)."""
    if pr.code is None:
        raise PreconditionError("no code attached; run huffman_code first")
    p_u = message_marginal(pr, p)
    return sum((q * len(w) for q, w in zip(p_u, pr.code)), Fraction(0))


@dataclass(frozen=True)
class SimReport:
    n: int
    seed: int
    counts: tuple             # flat over (x,y,u,z), x slowest
    tv: Fraction              # empirical joint vs exact induced joint
    mean_length: Fraction | None


def simulate(pr: Protocol, p: Problem, n: int, seed: int) -> SimReport:
    """n seeded i.i.d. protocol executions, counted exactly.

    The counter-based generator makes the transcript a pure function of
    (seed, sample index), so reports are bit-identical across runs and
    backends.
    """
    if n < 1:
        raise InputError("sample count must be at least 1")
    nx, ny = len(p.x_labels), len(p.y_labels)
    nu, nz = pr.num_messages, len(p.z_labels)
    kxy = thresholds(p.qxy.probs)
    ku = [thresholds(row) for row in pr.encoder.rows]
    kz = [thresholds(row) for row in pr.decoder.rows]
    counts = simulate_counts(int(seed), int(n), nx, ny, nu, nz, kxy, ku, kz)
    target = induced_joint(pr, p)
    emp = [Fraction(c, n) for c in counts]
    tv = sum((abs(a - b) for a, b in zip(emp, target.probs)), Fraction(0))
    mean_len = None
    if pr.code is not None:
        lengths = [len(w) for w in pr.code]
        total = 0
        for x in range(nx):
            for y in range(ny):
                for u in range(nu):
                    base = ((x * ny + y) * nu + u) * nz
                    total += lengths[u] * sum(counts[base:base + nz])
        mean_len = Fraction(total, n)
    return SimReport(n, int(seed), tuple(counts), tv, mean_len)


def simulate_csv(rep: SimReport, pr: Protocol, p: Problem) -> str:
    """`cell,count,empirical,target` rows over the full (x,y,u,z) lattice."""
    target = induced_joint(pr, p)
    nx, ny = len(p.x_labels), len(p.y_labels)
    nu, nz = pr.num_messages, len(p.z_labels)
    lines = ["cell,count,empirical,target"]
    i = 0
    for x in range(nx):
        for y in range(ny):
            for u in range(nu):
                for z in range(nz):
                    cell = "/".join((p.x_labels[x], p.y_labels[y],
                                     pr.u_labels[u], p.z_labels[z]))
                    lines.append("%s,%d,%.9g,%.9g" % (
                        cell, rep.counts[i], rep.counts[i] / rep.n,
                        float(target.probs[i])))
                    i += 1
    return "\n".join(lines) + "\n"


def parse_protocol(text, p: Problem) -> Protocol:
    """Read a .sfp protocol against its companion problem."""
    if p.two_output:
        raise InputError("protocol files describe one-output problems")
    r = LineReader(text)
    line, toks = r.next(context="header")
    if toks != ["sfp", "1"]:
        raise InputError("expected header 'sfp 1'", line=line)
    line, toks = r.expect("U")
    if len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 1:
        raise InputError("bad message count", line=line)
    k = int(toks[1])
    u_axis = _u_axis(k)
    nx, ny, nz = len(p.x_labels), len(p.y_labels), len(p.z_labels)
    qx = [sum((p.qxy.prob((x, y)) for y in range(ny)), Fraction(0))
          for x in range(nx)]
    r.expect("PUX")
    enc_rows, enc_reach = [], []
    for x in range(nx):
        line, row = read_row(r, k, "PUX", allow_dash=True)
        if row is None and qx[x] > 0:
            raise InputError(
                f"encoder row for supported input {p.x_labels[x]} is missing",
                line=line)
        enc_rows.append(row)
        enc_reach.append(row is not None)
    encoder = make_cond((("X", p.x_labels),), (u_axis,), enc_rows, enc_reach)
    p_uy = [[Fraction(0)] * ny for _ in range(k)]
    for x in range(nx):
        row = encoder.rows[x]
        for y in range(ny):
            q = p.qxy.prob((x, y))
            if q:
                for u in range(k):
                    p_uy[u][y] += q * row[u]
    r.expect("PZUY")
    dec_rows, dec_reach = [], []
    for u in range(k):
        for y in range(ny):
            line, row = read_row(r, nz, "PZUY", allow_dash=True)
            if row is None and p_uy[u][y] > 0:
                raise InputError(
                    f"decoder row for reachable cell ({u_axis[1][u]},{p.y_labels[y]}) "
                    f"is missing", line=line)
            dec_rows.append(row)
            dec_reach.append(row is not None)
    decoder = make_cond((u_axis, ("Y", p.y_labels)), (("Z", p.z_labels),),
                        dec_rows, dec_reach)
    code = None
    item = r.peek()
    if item is not None and item[1][0] == "CODE":
        r.expect("CODE")
        code = []
        for i in range(k):
            line, toks = r.next(context="CODE")
            want = u_axis[1][i]
            if toks[0] != want or len(toks) > 2:
                raise InputError(f"expected codeword line for {want}", line=line)
            word = "" if len(toks) == 1 or toks[1] == "-" else toks[1]
            code.append(word)
    if not r.at_end():
        line, toks = r.next()
        raise InputError(f"unexpected trailing content {' '.join(toks)!r}", line=line)
    return make_protocol(encoder, decoder, code)


def render_protocol(pr: Protocol) -> str:
    out = ["sfp 1", f"U {pr.num_messages}", "PUX"]
    _emit(out, pr.encoder)
    out.append("PZUY")
    _emit(out, pr.decoder)
    if pr.code is not None:
        out.append("CODE")
        for label, word in zip(pr.u_labels, pr.code):
            out.append(f"{label} {word or '-'}")
    return "\n".join(out) + "\n"


def _emit(out, cond: CondTable):
    for row, reach in zip(cond.rows, cond.reachable):
        out.append(" ".join(format_rational(v) for v in row) if reach else "-")


def builtin_protocol(name, param=None):
    """Reference protocols; returns (problem, protocol).

    erasure-bob(p): the worked example's three-message encoder achieving
    perfect correctness and perfect privacy against Bob at every p.
    """
    from .problem import builtin_problem

    if name != "erasure-bob":
        raise InputError(f"unknown builtin protocol {name!r}")
    p = builtin_problem("erasure", param if param is not None else Fraction(1, 2))
    pe = p.channel_row(0, 1)[1]   # erasure mass at the interior column
    one = Fraction(1)
    u_axis = _u_axis(3)
    enc = make_cond((("X", p.x_labels),), (u_axis,), [
        (one - pe, pe, Fraction(0)),
        (one - pe, pe, Fraction(0)),
        (Fraction(0), pe, one - pe),
    ])
    e_row = (Fraction(0), one, Fraction(0))
    # (u, y) rows, u-major: u3 never reaches y1
    rows = [
        e_row, (one, Fraction(0), Fraction(0)),
        e_row, e_row,
        None, (Fraction(0), Fraction(0), one),
    ]
    reach = [True, True, True, True, False, True]
    dec = make_cond((u_axis, ("Y", p.y_labels)), (("Z", p.z_labels),), rows, reach)
    return p, make_protocol(enc, dec)
