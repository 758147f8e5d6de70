import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfckit import (
    CondTable,
    InputError,
    conditional_mutual_information,
    entropy,
    entropy_bits,
    extend,
    is_markov,
    make_cond,
    make_joint,
    marginalize,
    total_variation,
)

F = Fraction
H = F(1, 2)
Q = F(1, 4)


def _pair(probs):
    return make_joint((("A", ("a0", "a1")), ("B", ("b0", "b1"))), probs)


def test_make_joint_rejects_bad_mass():
    with pytest.raises(InputError):
        _pair([H, H, H, H])
    with pytest.raises(InputError):
        _pair([F(3, 2), -H, 0, 0])
    with pytest.raises(InputError):
        make_joint((("A", ("a", "a")),), [H, H])


def test_marginalize_keeps_axis_order():
    E = F(1, 8)
    t = make_joint((("A", ("a0", "a1")), ("B", ("b0", "b1")), ("C", ("c0", "c1"))),
                   [Q, Q, E, E, E, E, 0, 0])
    m = marginalize(t, ("C", "A"))
    assert m.names == ("A", "C")
    assert m.prob((0, 0)) == Q + E
    assert m.prob((1, 1)) == E
    with pytest.raises(InputError):
        marginalize(t, ())
    with pytest.raises(InputError):
        marginalize(t, ("A", "D"))


def test_entropy_uniform():
    t = make_joint((("A", tuple("abcd")),), [Q] * 4)
    assert entropy(t) == 2.0
    assert entropy_bits([F(1)]) == 0.0
    assert math.isclose(entropy_bits([H, Q, Q]), 1.5, abs_tol=1e-12)


def test_cmi_matches_entropy_identity():
    t = _pair([F(3, 8), F(1, 8), F(1, 8), F(3, 8)])
    i_ab = conditional_mutual_information(t, ("A",), ("B",))
    ha = entropy(marginalize(t, ("A",)))
    hb = entropy(marginalize(t, ("B",)))
    hab = entropy(t)
    assert math.isclose(i_ab, ha + hb - hab, abs_tol=1e-12)
    assert i_ab > 0


def test_cmi_zero_for_product():
    t = _pair([F(9, 16), F(3, 16), F(3, 16), F(1, 16)])
    assert conditional_mutual_information(t, ("A",), ("B",)) == 0.0
    assert is_markov(t, ("A",), (), ("B",))


def test_is_markov_exact():
    # A -> B -> C with B = A and C = not B: A-B-C holds, A-C-B fails
    probs = [0, 0, 0, 0, H, 0, 0, 0, 0, 0, 0, H, 0, 0, 0, 0]
    t = make_joint((("A", ("0", "1")), ("B", ("0", "1")),
                    ("C", ("0", "1")), ("D", ("0", "1"))), probs)
    assert is_markov(t, ("A",), ("B",), ("C",))
    t2 = _pair([F(3, 8), F(1, 8), F(1, 8), F(3, 8)])
    assert not is_markov(t2, ("A",), (), ("B",))


def test_total_variation_is_l1():
    a = _pair([H, 0, 0, H])
    b = _pair([Q, Q, Q, Q])
    assert total_variation(a, a) == 0
    assert total_variation(a, b) == 1
    c = make_joint((("A", ("a0", "a1")), ("C", ("b0", "b1"))), [H, 0, 0, H])
    with pytest.raises(InputError):
        total_variation(a, c)


def test_make_cond_validation():
    with pytest.raises(InputError):
        make_cond((("A", ("a0", "a1")),), (("B", ("b0", "b1")),), [(H, H), (H, Q)])
    with pytest.raises(InputError):
        make_cond((("A", ("a0", "a1")),), (("B", ("b0", "b1")),), [(H, H), None])
    c = make_cond((("A", ("a0", "a1")),), (("B", ("b0", "b1")),),
                  [(H, H), None], reachable=(True, False))
    assert c.row((1,)) == (H, H)  # unreachable rows filled uniformly
    assert c.reachable == (True, False)


def test_extend_and_conditional():
    t = _pair([H, 0, Q, Q])
    c = make_cond((("B", ("b0", "b1")),), (("C", ("c0", "c1")),),
                  [(F(1), F(0)), (F(0), F(1))])
    e = extend(t, c)
    assert e.names == ("A", "B", "C")
    assert e.prob((0, 0, 0)) == H
    assert e.prob((0, 0, 1)) == 0
    assert e.prob((1, 1, 1)) == Q
    assert marginalize(e, ("A", "B")).probs == t.probs
    with pytest.raises(InputError):
        extend(t, make_cond((("Z", ("u",)),), (("W", ("w",)),), [(F(1),)]))


def test_extend_rejects_duplicate_axis():
    t = _pair([H, 0, Q, Q])
    c = make_cond((("B", ("b0", "b1")),), (("A", ("a0", "a1")),),
                  [(F(1), F(0)), (F(0), F(1))])
    with pytest.raises(InputError):
        extend(t, c)


@st.composite
def _chain_joint(draw):
    na = draw(st.integers(2, 3))
    nb = draw(st.integers(2, 3))
    nc = draw(st.integers(2, 3))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)

    def vec(n):
        ks = [rng.randint(0, 6) for _ in range(n)]
        if sum(ks) == 0:
            ks[rng.randrange(n)] = 1
        s = sum(ks)
        return [F(k, s) for k in ks]

    pa = vec(na)
    pba = [vec(nb) for _ in range(na)]
    pcb = [vec(nc) for _ in range(nb)]
    probs = [pa[a] * pba[a][b] * pcb[b][c]
             for a in range(na) for b in range(nb) for c in range(nc)]
    return make_joint((("A", tuple(f"a{i}" for i in range(na))),
                       ("B", tuple(f"b{i}" for i in range(nb))),
                       ("C", tuple(f"c{i}" for i in range(nc)))), probs)


@settings(max_examples=60, deadline=None)
@given(_chain_joint())
def test_constructed_chain_is_markov(t):
    assert is_markov(t, ("A",), ("B",), ("C",))
    assert conditional_mutual_information(t, ("A",), ("C",), ("B",)) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_entropy_bounds(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    ks = [rng.randint(0, 9) for _ in range(n)]
    if sum(ks) == 0:
        ks[0] = 1
    s = sum(ks)
    h = entropy_bits([F(k, s) for k in ks])
    assert -1e-12 <= h <= math.log2(n) + 1e-12
