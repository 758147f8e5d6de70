import random
from fractions import Fraction

import pytest

import gen
from sfckit import (
    PreconditionError,
    build_common_part,
    builtin_problem,
    decide_both_privacy,
    decide_bob_privacy,
    marginalize,
    reduce_problem,
    total_variation,
)

F = Fraction
H = F(1, 2)


def test_erasure_sweep():
    for k in range(11):
        p = F(k, 10)
        report = decide_both_privacy(builtin_problem("erasure", p))
        assert report.feasible == (p in (0, 1)), p


def _blocks_are_column_monochromatic(p, partition):
    ny = len(p.y_labels)
    for block in partition.blocks:
        for y in range(ny):
            rows = [p.channel_row(x, y) for x in block if p.support(x, y)]
            assert all(r == rows[0] for r in rows)


def _witness_is_violation(p, witness):
    x, xp, y, z = witness
    xi = p.x_labels.index(x)
    xpi = p.x_labels.index(xp)
    yi = p.y_labels.index(y)
    zi = p.channel.to_axes[0][1].index(z) if not p.two_output else None
    assert p.support(xi, yi) and p.support(xpi, yi)
    r1, r2 = p.channel_row(xi, yi), p.channel_row(xpi, yi)
    if zi is None:
        assert r1 != r2
    else:
        assert r1[zi] != r2[zi]


def test_both_privacy_verdicts_are_certified():
    rng = random.Random(11)
    seen_feasible = seen_infeasible = 0
    for i in range(60):
        p = gen.random_both_feasible(rng) if i % 2 else gen.random_problem(rng)
        report = decide_both_privacy(p)
        if report.feasible:
            seen_feasible += 1
            _blocks_are_column_monochromatic(p, report.witness)
        else:
            seen_infeasible += 1
            _witness_is_violation(p, report.witness)
    assert seen_feasible and seen_infeasible


def test_generated_feasible_instances_are_feasible():
    rng = random.Random(13)
    for _ in range(40):
        p = gen.random_both_feasible(rng)
        assert decide_both_privacy(p).feasible


def test_partition_describe():
    report = decide_both_privacy(builtin_problem("erasure", F(0)))
    assert report.witness.describe() == "{x1,x2} | {x3}"
    assert report.witness.block_of(0) == report.witness.block_of(1)
    assert report.witness.block_of(0) != report.witness.block_of(2)


def test_reduce_merges_equivalent_inputs():
    p = builtin_problem("erasure", F(0))
    r = reduce_problem(p)
    assert r.x_labels == ("x1", "x3")
    assert r.qxy.prob((0, 0)) == H
    # the reduced instance is trivially feasible with singleton blocks
    rep = decide_both_privacy(r)
    assert rep.feasible and all(len(b) == 1 for b in rep.witness.blocks)
    again = reduce_problem(r)
    assert again.qxy.probs == r.qxy.probs and again.channel.rows == r.channel.rows


def test_reduce_preserves_output_law():
    rng = random.Random(17)
    for _ in range(20):
        p = gen.random_both_feasible(rng)
        r = reduce_problem(p)
        a = marginalize(p.target_joint(), ("Y", "Z"))
        b = marginalize(r.target_joint(), ("Y", "Z"))
        assert total_variation(a, b) == 0


def test_reduce_requires_feasibility():
    with pytest.raises(PreconditionError):
        reduce_problem(builtin_problem("erasure", H))


def test_bob_privacy_known_cases():
    rep = decide_bob_privacy(builtin_problem("and-full-support"))
    assert rep.verdict == "infeasible"
    assert any("mismatch" in n for n in rep.notes)
    for m in (2, 4):
        assert decide_bob_privacy(builtin_problem("select", m)).verdict == "feasible"
    rep = decide_bob_privacy(builtin_problem("erasure", H))
    assert rep.verdict == "unsupported"
    assert not rep.feasible


def test_bob_privacy_generated_instances():
    rng = random.Random(19)
    for _ in range(30):
        p = gen.random_bob_feasible(rng)
        rep = decide_bob_privacy(p)
        assert rep.verdict == "feasible"
        cp = build_common_part(p)
        # the common-part refinement reproduces the problem law exactly
        assert marginalize(cp.joint, ("X", "Y", "Z")).probs == p.target_joint().probs
        # the message distribution must not depend on Bob's input
        nw, ny = cp.k, len(p.y_labels)
        assert all(sum(r, F(0)) == 1 for r in cp.p_w_given_x.rows)
        for y in range(ny):
            assert len(cp.matched[y]) == nw


def test_common_part_entropy_select():
    for m in (2, 4, 8):
        cp = build_common_part(builtin_problem("select", m))
        assert cp.k == 2 * m


def test_common_part_needs_feasible_verdict():
    with pytest.raises(PreconditionError):
        build_common_part(builtin_problem("and-full-support"))
