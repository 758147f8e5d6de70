"""Batch command-line front end.

One verb per capability, deterministic text output (floats at 9 significant
digits, rationals as a/b), and uniform exit codes: 0 success/feasible/pass,
1 infeasible or verification failure, 2 usage or input errors.
"""

from __future__ import annotations

import functools
import math
import sys
from fractions import Fraction

import click

from . import chain as chain_mod
from . import feasibility, graphs, problem as problem_mod, protocol as protocol_mod, rates
from .errors import InputError, PreconditionError, SfcError


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return "%.9g" % v


def _command(fn):
    @functools.wraps(fn)
    def inner(*args, **kwargs):
        try:
            code = fn(*args, **kwargs) or 0
        except PreconditionError as e:
            click.echo(f"error: {e}", err=True)
            code = 1
        except SfcError as e:
            click.echo(f"error: {e}", err=True)
            code = 2
        except OSError as e:
            click.echo(f"error: {e}", err=True)
            code = 2
        sys.exit(code)

    return inner


def _load_problem(path):
    with open(path, encoding="utf-8") as f:
        return problem_mod.parse_problem(f.read())


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--threads", type=click.IntRange(min=1), default=1,
              help="Reserved; evaluators run single-threaded at this scale.")
def main(threads):
    """Analyze secure two-party computation problems."""


_problem_opt = click.option("--problem", "problem_path", required=True,
                            type=click.Path(), help="Problem file (.sfc).")
_mode_opt = click.option("--mode", type=click.Choice(["both", "alice", "bob"]),
                         default="both", show_default=True)


@main.command()
@_problem_opt
@_mode_opt
@_command
def check(problem_path, mode):
    """Decide perfectly secure computability for a privacy mode."""
    p = _load_problem(problem_path)
    if mode == "alice":
        click.echo("feasible")
        click.echo("privacy against Alice alone is achievable for every problem")
        return 0
    if mode == "both":
        report = feasibility.decide_both_privacy(p)
        if report.feasible:
            click.echo("feasible")
            click.echo(f"partition: {report.witness.describe()}")
            return 0
        x, xp, y, z = report.witness
        click.echo("infeasible")
        click.echo(f"witness: x={x} x'={xp} y={y} z={z}")
        for note in report.notes:
            click.echo(f"note: {note}")
        return 1
    report = feasibility.decide_bob_privacy(p)
    if report.verdict == "unsupported":
        raise InputError("; ".join(report.notes) or
                         "the one-round test needs full-support inputs")
    click.echo(report.verdict)
    for note in report.notes:
        click.echo(f"note: {note}")
    return 0 if report.feasible else 1


@main.command()
@_problem_opt
@click.option("-o", "out", type=click.Path(), default=None)
@_command
def reduce(problem_path, out):
    """Collapse equivalent inputs of a feasible problem."""
    p = _load_problem(problem_path)
    reduced = feasibility.reduce_problem(p)
    _emit(problem_mod.render_problem(reduced), out)
    return 0


@main.command()
@_problem_opt
@click.option("--power", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--chromatic-entropy", "want_chromatic", is_flag=True)
@_command
def graph(problem_path, power, want_chromatic):
    """Print the characteristic graph (or its n-fold power) as an edge list."""
    p = _load_problem(problem_path)
    g = graphs.characteristic_graph(p) if power == 1 else graphs.power_graph(p, power)
    click.echo(f"graph: {g.n} vertices, {len(g.edges)} edges")
    for a, b in g.edge_labels():
        click.echo(f"{a} {b}")
    if want_chromatic:
        value, coloring = graphs.chromatic_entropy(g)
        click.echo(f"chromatic entropy: {_fmt(value)}")
        for v, c in enumerate(coloring.color_of):
            click.echo(f"{g.vertices[v]} {c}")
    return 0


@main.command()
@_problem_opt
@_command
def cge(problem_path):
    """Conditional graph entropy of the characteristic graph."""
    p = _load_problem(problem_path)
    value, witness = graphs.conditional_graph_entropy(p)
    for i, members in enumerate(witness.w_sets, start=1):
        click.echo(f"w{i} = {{{','.join(members)}}}")
    click.echo(f"conditional graph entropy: {_fmt(value)}")
    for x, row in zip(p.x_labels, witness.rows):
        click.echo(f"{x}: " + " ".join(_fmt(v) for v in row))
    return 0


@main.command("rates")
@_problem_opt
@click.option("--r0", type=float, default=0.0, show_default=True)
@_command
def rates_cmd(problem_path, r0):
    """Cut-set bounds and the both-privacy optimal sum-rate."""
    p = _load_problem(problem_path)
    report = rates.sum_rate_both_privacy(p, r0)
    a, b, c = report.components
    click.echo(f"I(X;Z2|Y): {_fmt(a)}")
    click.echo(f"I(Y;Z1|X): {_fmt(b)}")
    click.echo(f"I(Z1;Z2|X,Y): {_fmt(c)}")
    click.echo(f"sum rate (r0={_fmt(report.r0)}): {_fmt(report.value)}")
    if report.feasible is None:
        click.echo("caveat: feasibility undecided for two-output problems")
    elif not report.feasible:
        click.echo("caveat: not securely computable with privacy against both "
                   "users; the sum-rate is a formula evaluation only")
    return 0


@main.command("chain-verify")
@_problem_opt
@click.option("--chain", "chain_path", required=True, type=click.Path())
@_mode_opt
@_command
def chain_verify(problem_path, chain_path, mode):
    """Verify an auxiliary-chain certificate and evaluate its rate corner."""
    p = _load_problem(problem_path)
    with open(chain_path, encoding="utf-8") as f:
        c = chain_mod.parse_chain(f.read(), p)
    report = chain_mod.verify_aux_chain(p, c, mode)
    for name, ok in report.checks.items():
        gate = "" if name in report.required else " (not required for this mode)"
        click.echo(f"{name}: {'pass' if ok else 'fail'}{gate}")
    click.echo(f"correctness TV: {_fmt(report.correctness_tv)}")
    for name, v in report.quantities.items():
        click.echo(f"{name}: {_fmt(v)}")
    if report.passed:
        corner = rates.rate_region_corner(p, c, mode)
        click.echo(f"R12 lower bound: {_fmt(corner.r12)}")
        click.echo(f"R21 lower bound: {_fmt(corner.r21)}")
        click.echo(f"R0+R12 lower bound: {_fmt(corner.r0_plus_r12)}")
        click.echo(f"sum-rate lower bound: {_fmt(corner.sum_rate)}")
        click.echo(f"result: pass (mode {mode})")
        return 0
    click.echo(f"result: fail (mode {mode})")
    return 1


@main.command()
@_problem_opt
@_mode_opt
@click.option("-o", "out", type=click.Path(), default=None)
@_command
def synth(problem_path, mode, out):
    """Synthesize a perfectly secure one-round protocol."""
    p = _load_problem(problem_path)
    pr = protocol_mod.synthesize(p, mode)
    click.echo(f"synthesized {pr.num_messages}-message protocol (mode {mode})")
    _emit(protocol_mod.render_protocol(pr), out)
    return 0


@main.command()
@_problem_opt
@click.option("--protocol", "protocol_path", required=True, type=click.Path())
@_mode_opt
@_command
def verify(problem_path, protocol_path, mode):
    """Exactly verify a protocol's correctness and privacy."""
    p = _load_problem(problem_path)
    with open(protocol_path, encoding="utf-8") as f:
        pr = protocol_mod.parse_protocol(f.read(), p)
    report = protocol_mod.verify_protocol(pr, p, mode)
    click.echo(f"correctness TV: {report.correctness_tv}")
    click.echo(f"privacy against Alice: {'pass' if report.privacy_alice else 'fail'}")
    click.echo(f"privacy against Bob: {'pass' if report.privacy_bob else 'fail'}")
    click.echo(f"H(U): {_fmt(report.h_message)}")
    if report.expected_length is not None:
        click.echo(f"E[L]: {report.expected_length} ({_fmt(float(report.expected_length))})")
    click.echo(f"result: {'pass' if report.passed else 'fail'} (mode {mode})")
    return 0 if report.passed else 1


@main.command()
@_problem_opt
@click.option("--protocol", "protocol_path", required=True, type=click.Path())
@click.option("-o", "out", type=click.Path(), default=None)
@_command
def code(problem_path, protocol_path, out):
    """Attach an optimal prefix-free code to a protocol."""
    p = _load_problem(problem_path)
    with open(protocol_path, encoding="utf-8") as f:
        pr = protocol_mod.parse_protocol(f.read(), p)
    coded = protocol_mod.huffman_code(pr, p)
    e_l = protocol_mod.expected_length(coded, p)
    report = protocol_mod.verify_protocol(coded, p, "both")
    click.echo(f"H(U): {_fmt(report.h_message)}")
    click.echo(f"E[L]: {e_l} ({_fmt(float(e_l))})")
    _emit(protocol_mod.render_protocol(coded), out)
    return 0


@main.command()
@_problem_opt
@click.option("--protocol", "protocol_path", required=True, type=click.Path())
@click.option("-n", "n", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--csv", "csv_path", type=click.Path(), default=None)
@_command
def simulate(problem_path, protocol_path, n, seed, csv_path):
    """Run seeded executions and compare counts to the exact law."""
    p = _load_problem(problem_path)
    with open(protocol_path, encoding="utf-8") as f:
        pr = protocol_mod.parse_protocol(f.read(), p)
    rep = protocol_mod.simulate(pr, p, n, seed)
    click.echo(f"samples: {rep.n}")
    click.echo(f"seed: {rep.seed}")
    click.echo(f"empirical TV: {_fmt(float(rep.tv))}")
    if rep.mean_length is not None:
        click.echo(f"mean message length: {rep.mean_length} "
                   f"({_fmt(float(rep.mean_length))})")
    if csv_path:
        with open(csv_path, "w", encoding="utf-8") as f:
            f.write(protocol_mod.simulate_csv(rep, pr, p))
        click.echo(f"wrote {csv_path}")
    return 0


@main.command()
@_problem_opt
@click.option("--wmax", type=click.IntRange(min=1), default=None,
              help="Largest W alphabet to search; defaults to |Z1|*|Z2|.")
@_command
def wyner(problem_path, wmax):
    """Wyner common information of the output pair (secure sampleability)."""
    p = _load_problem(problem_path)
    if not p.two_output:
        raise InputError("wyner needs a two-output problem (a joint over Z1, Z2)")
    from .tables import marginalize
    q = marginalize(p.target_joint(), ("Z1", "Z2"))
    if wmax is None:
        wmax = len(p.z1_labels) * len(p.z2_labels)
    report = rates.wyner_common_information(q, wmax)
    click.echo(f"I(Z1;Z2): {_fmt(report.mutual_information)}")
    click.echo(f"C(Z1;Z2) upper-bound estimate (wmax={report.wmax}): "
               f"{_fmt(report.upper_bound)}")
    click.echo(f"securely sampleable: {'yes' if report.sampleable else 'no'}")
    return 0 if report.sampleable else 1


@main.command()
@click.argument("name")
@click.option("--p", "p_str", default=None, help="Single evaluation point.")
@click.option("--grid", default=None, help="start:stop:step sweep.")
@click.option("--csv", "csv_path", type=click.Path(), default=None)
@_command
def example(name, p_str, grid, csv_path):
    """Rate curves of the named worked example (currently: erasure)."""
    if name != "erasure":
        raise InputError(f"unknown example {name!r}")
    if (p_str is None) == (grid is None):
        raise InputError("give exactly one of --p or --grid")
    if p_str is not None:
        r = rates.erasure_example_rates(_parse_point(p_str))
        click.echo(f"p: {_fmt(r.p)}")
        click.echo("R_AB: " + ("infeasible" if math.isnan(r.r_both) else _fmt(r.r_both)))
        click.echo(f"R_A: {_fmt(r.r_alice)}")
        click.echo(f"R_B: {_fmt(r.r_bob)}")
        click.echo(f"R_No: {_fmt(r.r_none)}")
        return 0
    text = rates.erasure_grid_csv(_parse_grid(grid))
    if csv_path:
        with open(csv_path, "w", encoding="utf-8") as f:
            f.write(text)
        click.echo(f"wrote {csv_path}")
    else:
        click.echo(text, nl=False)
    return 0


def _parse_point(tok):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad probability {tok!r}")


def _parse_grid(spec):
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError("grid must be start:stop:step")
    start, stop, step = (_parse_point(t) for t in parts)
    if step <= 0 or stop < start:
        raise InputError("grid needs step > 0 and stop >= start")
    points = []
    i = 0
    while start + i * step <= stop:
        points.append(start + i * step)
        i += 1
    return points


@main.command()
@click.argument("name")
@click.argument("params", nargs=-1)
@click.option("-o", "out", type=click.Path(), default=None)
@_command
def builtin(name, params, out):
    """Write a named builtin problem, chain, or protocol file."""
    if name in ("erasure", "index-and", "select", "and-full-support"):
        args = [_builtin_param(name, t) for t in params]
        p = problem_mod.builtin_problem(name, *args)
        _emit(problem_mod.render_problem(p), out)
        return 0
    if name == "erasure-bob":
        if len(params) != 1:
            raise InputError("erasure-bob takes the erasure probability")
        _, pr = protocol_mod.builtin_protocol("erasure-bob", _parse_point(params[0]))
        _emit(protocol_mod.render_protocol(pr), out)
        return 0
    if name in ("index-and-chain", "select-chain"):
        if len(params) != 1:
            raise InputError(f"{name} takes the block count m")
        _, c = chain_mod.builtin_chain(name[:-6], _builtin_int(params[0]))
        _emit(chain_mod.render_chain(c), out)
        return 0
    raise InputError(f"unknown builtin {name!r}")


def _builtin_param(name, tok):
    if name == "erasure":
        return _parse_point(tok)
    return _builtin_int(tok)


def _builtin_int(tok):
    if not tok.isdigit():
        raise InputError(f"expected an integer parameter, got {tok!r}")
    return int(tok)


def run(argv) -> int:
    """Programmatic entry point mirroring the console script."""
    try:
        main(args=list(argv), prog_name="sfc")
    except SystemExit as e:
        return int(e.code or 0)
    return 0


if __name__ == "__main__":
    main()
