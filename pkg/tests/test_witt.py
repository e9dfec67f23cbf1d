import itertools
import random

import pytest
from hypothesis import given, strategies as st

from wittdr.errors import CapExceeded, LevelMismatch, LevelTooSmall, MixedRings, OracleMismatch
from wittdr.parsing import parse_ring
from wittdr.rings import Integers
from wittdr.witt import (
    MAX_LEVEL,
    WittVector,
    all_vectors,
    build_structural_cache,
    frobenius,
    ghost,
    ghost_route,
    oracle_mode,
    set_oracle,
    teichmuller,
    times_p,
    verschiebung,
    witt_arith,
)

Z = Integers()
L = MAX_LEVEL


def W(ring, p, coords):
    R = parse_ring(ring) if isinstance(ring, str) else ring
    return WittVector.from_elements(p, [R(c) for c in coords], R)


def xy(x_exps=(), y_exps=()):
    e = [0] * (2 * L)
    for i, k in x_exps:
        e[i] = k
    for i, k in y_exps:
        e[L + i] = k
    return tuple(e)


def test_structural_polynomials_small():
    c = build_structural_cache(2, 2)
    assert c.S[0] == {xy([(0, 1)]): 1, xy(y_exps=[(0, 1)]): 1}
    assert c.P[0] == {xy([(0, 1)], [(0, 1)]): 1}
    assert c.S[1] == {xy([(1, 1)]): 1, xy(y_exps=[(1, 1)]): 1, xy([(0, 1)], [(0, 1)]): -1}
    assert c.P[1] == {xy([(0, 2)], [(1, 1)]): 1, xy([(1, 1)], [(0, 2)]): 1,
                      xy([(1, 1)], [(1, 1)]): 2}


def _eval(poly, xs, ys):
    vals = list(xs) + [0] * (L - len(xs)) + list(ys) + [0] * (L - len(ys))
    total = 0
    for e, c in poly.items():
        term = c
        for v, k in zip(vals, e):
            term *= v ** k
        total += term
    return total


def _ghost_int(p, coords, i):
    return sum(p ** j * coords[j] ** (p ** (i - j)) for j in range(i + 1))


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 2), (7, 2)])
def test_structural_polynomials_satisfy_ghost_identities(p, n):
    rng = random.Random(p * 100 + n)
    c = build_structural_cache(p, n)
    for _ in range(20):
        xs = [rng.randint(-9, 9) for _ in range(n)]
        ys = [rng.randint(-9, 9) for _ in range(n)]
        S = [_eval(c.S[i], xs, ys) for i in range(n)]
        P = [_eval(c.P[i], xs, ys) for i in range(n)]
        for i in range(n):
            gx, gy = _ghost_int(p, xs, i), _ghost_int(p, ys, i)
            assert _ghost_int(p, S, i) == gx + gy
            assert _ghost_int(p, P, i) == gx * gy


def test_structural_homogeneity():
    c = build_structural_cache(3, 4)
    for i in range(4):
        for e in c.P[i]:
            assert sum(e[j] * 3 ** j for j in range(L)) == 3 ** i
            assert sum(e[L + j] * 3 ** j for j in range(L)) == 3 ** i


def test_caps():
    with pytest.raises(CapExceeded):
        build_structural_cache(11, 2)
    with pytest.raises(CapExceeded):
        build_structural_cache(2, 7)
    with pytest.raises(LevelTooSmall):
        build_structural_cache(2, 0)


def test_witt_arith_examples():
    one = W(Z, 2, [1, 0])
    assert (one + one).coords == (2, -1)
    assert (W(Z, 2, [2, 0]) * W(Z, 2, [3, 0])).coords == (6, 0)
    F2 = parse_ring("F2")
    o = W(F2, 2, [1, 0])
    assert (o + o).coords == (0, 1)
    assert o + o == verschiebung(o)


def test_ghost_examples():
    assert [g.raw for g in ghost(W(Z, 2, [3, 5]))] == [3, 19]
    a = 7
    assert [g.raw for g in ghost(teichmuller(Z(a), 3, 3))] == [a, a ** 3, a ** 9]


def test_frobenius_examples():
    a = 4
    assert frobenius(W(Z, 3, [a, 0])).coords == (a ** 3,)
    R = parse_ring("F2")
    for x in all_vectors(R, 2, 3):
        same = frobenius(x, same_level=True)
        assert same.coords == tuple(c ** 2 % 2 for c in x.coords)
        assert frobenius(x) == same.truncate(2)


def test_mixed_and_level_errors():
    with pytest.raises(MixedRings):
        W("Z/8", 2, [1, 0]) + W("Z/4", 2, [1, 0])
    with pytest.raises(LevelMismatch):
        W("Z/8", 2, [1, 0]) + W("Z/8", 2, [1, 0, 0])
    with pytest.raises(MixedRings):
        W("Z/9", 3, [1, 0]) + W("Z/9", 2, [1, 0])
    with pytest.raises(LevelTooSmall):
        frobenius(W("Z", 2, [1]))


ints = st.integers(-30, 30)


@given(st.lists(ints, min_size=3, max_size=3), st.lists(ints, min_size=3, max_size=3),
       st.sampled_from([2, 3]))
def test_ghost_is_ring_map_over_Z(xs, ys, p):
    x, y = W(Z, p, xs), W(Z, p, ys)
    gx, gy = ghost(x), ghost(y)
    assert [g.raw for g in ghost(x * y)] == [a.raw * b.raw for a, b in zip(gx, gy)]
    assert [g.raw for g in ghost(x + y)] == [a.raw + b.raw for a, b in zip(gx, gy)]
    assert [g.raw for g in ghost(-x)] == [-a.raw for a in gx]


@pytest.mark.parametrize("ring,p,n", [("Z/81", 3, 4), ("F4", 2, 3), ("F2[e]/(e^2)", 2, 3), ("Z", 2, 3),
                                      ("Z/25", 5, 2), ("F3[t]/(t^3-1)", 3, 3)])
def test_ops_agree_with_ghost_oracle(ring, p, n, rng):
    R = parse_ring(ring)
    for _ in range(50):
        x, y = WittVector.random(R, p, n, rng), WittVector.random(R, p, n, rng)
        for op in ("add", "mul"):
            assert witt_arith(x, y, op) == ghost_route(x, y, op)
        assert -x == ghost_route(x, None, "neg")


def test_negation_p2_is_not_teichmuller_minus_one():
    R = Z
    x = W(R, 2, [1, 0, 0])
    minus_one = -x
    assert minus_one != teichmuller(R(-1), 2, 3)
    assert minus_one + x == WittVector.zero(R, 2, 3)


@pytest.mark.parametrize("ring,p", [("F4", 2), ("Z/27", 3), ("F3[e]/(e^2)", 3)])
def test_operator_identities_random(ring, p, rng):
    R = parse_ring(ring)
    n = 3
    for _ in range(100):
        x, y = WittVector.random(R, p, n, rng), WittVector.random(R, p, n, rng)
        assert frobenius(verschiebung(x)) == times_p(x).truncate(n - 1)
        assert frobenius(x * y) == frobenius(x) * frobenius(y)
        lhs = verschiebung(x) * y
        fy = frobenius(y)
        rhs = WittVector(R, p, (R.zero_raw,) + (x.truncate(n - 1) * fy).coords)
        assert lhs == rhs
        a = R.element(R.random_raw(rng))
        assert frobenius(teichmuller(a, p, n)) == teichmuller(a ** p, p, n - 1)


def test_teichmuller_multiplicative_exhaustive():
    F4 = parse_ring("F4")
    for a, b in itertools.product(F4.elements(), repeat=2):
        assert teichmuller(a, 2, 3) * teichmuller(b, 2, 3) == teichmuller(a * b, 2, 3)
    assert teichmuller(F4.zero(), 2, 3).is_zero()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_p_equals_V1_in_char_p(p):
    R = parse_ring(f"F{p}")
    one = WittVector.one(R, p, 2)
    assert times_p(one) == verschiebung(one)
    assert verschiebung(one).coords == (0, 1)


def test_ghost_oracle_toggle():
    assert oracle_mode() == "none"
    set_oracle("ghost")
    try:
        x = W("Z/8", 2, [3, 5, 7])
        assert x * x == ghost_route(x, x, "mul")
    finally:
        set_oracle("none")
    with pytest.raises(ValueError):
        set_oracle("bogus")


def test_oracle_mismatch_is_raised(monkeypatch):
    import wittdr.witt as witt

    set_oracle("ghost")
    try:
        def bad(x, y, op):
            return WittVector.zero(x.ring, x.p, x.n)

        monkeypatch.setattr(witt, "ghost_route", bad)
        with pytest.raises(OracleMismatch):
            W("Z/8", 2, [1, 1]) + W("Z/8", 2, [1, 0])
    finally:
        set_oracle("none")


def test_json_rendering():
    from wittdr.witt import parse_vector, vector_to_json

    R = parse_ring("F4[a,b]")
    x = parse_vector([1, "a+b^2"], R, 2)
    assert vector_to_json(x) == [1, "a+b^2"]
