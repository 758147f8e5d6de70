import random
from fractions import Fraction

import pytest

import gen
from sfckit import (
    AuxChain,
    CondTable,
    InputError,
    SizeError,
    builtin_chain,
    builtin_problem,
    chain_from_protocol,
    make_cond,
    parse_chain,
    render_chain,
    synthesize,
    verify_aux_chain,
)

F = Fraction
ONE = F(1)


def test_builtin_chains_verify_for_bob():
    for name, rounds in (("index-and", 3), ("select", 1)):
        p, c = builtin_chain(name, 2)
        assert c.rounds == rounds
        report = verify_aux_chain(p, c, "bob")
        assert report.passed
        assert report.correctness_tv == 0
        assert all(report.checks[k] for k in report.required)


def test_index_and_chain_leaks_to_alice():
    p, c = builtin_chain("index-and", 2)
    report = verify_aux_chain(p, c, "both")
    assert not report.passed
    assert report.checks["privacy-bob"]
    assert not report.checks["privacy-alice"]
    assert report.correctness_tv == 0


def test_chain_owners_alternate():
    _, c = builtin_chain("index-and", 2)
    assert [c.owner(i) for i in range(1, 4)] == ["A", "B", "A"]
    bob_start = AuxChain("B", c.u_axes, c.encoders, c.dec1, c.dec2)
    assert [bob_start.owner(i) for i in range(1, 4)] == ["B", "A", "B"]


def test_chain_round_trips():
    for name in ("index-and", "select"):
        p, c = builtin_chain(name, 2)
        text = render_chain(c)
        back = parse_chain(text, p)
        assert render_chain(back) == text
        assert verify_aux_chain(p, back, "bob").passed


def test_parse_chain_errors():
    p, c = builtin_chain("select", 2)
    text = render_chain(c)
    with pytest.raises(InputError):
        parse_chain(text.replace("sfa 1", "sfa 9"), p)
    with pytest.raises(InputError):
        parse_chain(text + "junk\n", p)
    with pytest.raises(InputError):  # one-output chains must not carry DEC1
        parse_chain(text.replace("DEC2", "DEC1"), p)
    p2, c2 = builtin_chain("index-and", 2)
    text2 = render_chain(c2)
    with pytest.raises(InputError):  # two-output chains require DEC1
        parse_chain("\n".join(ln for ln in text2.splitlines()
                              if ln not in ("DEC1",)) + "\n", p2)


def test_chain_from_synthesized_protocol():
    p = builtin_problem("erasure", F(0))
    pr = synthesize(p, "both")
    c = chain_from_protocol(pr.encoder, pr.decoder)
    report = verify_aux_chain(p, c, "both")
    assert report.passed
    assert report.correctness_tv == 0

    p2 = builtin_problem("erasure", F(1, 3))
    pr2 = synthesize(p2, "alice")
    rep2 = verify_aux_chain(p2, chain_from_protocol(pr2.encoder, pr2.decoder), "alice")
    assert rep2.passed


def test_broken_decoder_fails_on_correctness():
    p, c = builtin_chain("select", 2)
    dec = c.dec2
    rows = tuple(tuple(reversed(r)) for r in dec.rows)
    broken = AuxChain(c.starter, c.u_axes, c.encoders, None,
                      CondTable(dec.from_axes, dec.to_axes, rows, dec.reachable))
    report = verify_aux_chain(p, broken, "bob")
    assert not report.passed
    assert report.correctness_tv > 0
    # the mode's Markov checks still hold; only correctness is violated
    assert all(report.checks[k] for k in report.required)


def test_joint_cell_guard():
    p = builtin_problem("select", 2)
    k = 90  # 4 * 90^3 * 4 cells is past the guard
    u1 = ("U1", tuple(f"u{i}" for i in range(1, k + 1)))
    u2 = ("U2", tuple(f"v{i}" for i in range(1, k + 1)))
    u3 = ("U3", tuple(f"w{i}" for i in range(1, k + 1)))
    x_axis, y_axis = ("X", p.x_labels), ("Y", p.y_labels)
    urow = tuple([F(1, k)] * k)
    enc1 = CondTable((x_axis,), (u1,), (urow,) * 4, (True,) * 4)
    enc2 = CondTable((y_axis, u1), (u2,), (urow,) * k, (True,) * k)
    enc3 = CondTable((x_axis, u1, u2), (u3,), (urow,) * (4 * k * k), (True,) * (4 * k * k))
    zrow = tuple([F(1, 4)] * 4)
    dec2 = CondTable((y_axis, u1, u2, u3), (("Z", p.z_labels),),
                     (zrow,) * k**3, (True,) * k**3)
    big = AuxChain("A", (u1, u2, u3), (enc1, enc2, enc3), None, dec2)
    with pytest.raises(SizeError):
        verify_aux_chain(p, big, "bob")


def test_rate_quantities_match_simple_identities():
    rng = random.Random(43)
    for _ in range(10):
        p = gen.random_product_problem(rng, nx_max=3, ny_max=3, nz_max=3)
        nz = len(p.z_labels)
        # one round: Alice announces a message, Bob emits Z from (Y, U1)
        nu = 2
        u1 = ("U1", ("u1", "u2"))
        enc = make_cond((("X", p.x_labels),), (u1,),
                        [gen.prob_vector(rng, nu) for _ in p.x_labels])
        dec_rows = [gen.prob_vector(rng, nz)
                    for _ in range(len(p.y_labels) * nu)]
        dec = make_cond(((("Y"), p.y_labels), u1), (("Z", p.z_labels),), dec_rows)
        c = AuxChain("A", (u1,), (enc,), None, dec)
        report = verify_aux_chain(p, c, "alice")
        assert report.checks["alternation-1"]
        assert report.checks["decode-alice"] and report.checks["decode-bob"]
        q = report.quantities
        assert q["I(U;Z1|X,Y)"] == 0.0
        assert q["I(U1;Z1|X,Y)"] == 0.0
