import itertools

import pytest

from wittdr.endo import (
    EndoElement,
    apply_endo,
    compose,
    endo_from_json,
    enumerate_endos,
    fibers,
    identity_endo,
    inverse_endo,
    is_wn_linear,
)
from wittdr.errors import CharMismatch, LevelMismatch, MixedRings, RingTooLarge
from wittdr.groupoid import GroupoidPoint, compose as gcompose, morphism_ring_ops, target
from wittdr.parsing import parse_ring
from wittdr.suite import random_special_unit
from wittdr.units import special_units
from wittdr.witt import WittVector, frobenius_power

F4 = parse_ring("F4")


def rand_endo(R, p, n, rng, max_i=3):
    return EndoElement(random_special_unit(R, p, n, rng), rng.randrange(max_i + 1))


def rand_pt(R, p, n, rng):
    return GroupoidPoint(WittVector.random(R, p, n, rng), WittVector.random(R, p, n, rng))


def test_identity_and_twisted_product_W2_F4():
    ident = identity_endo(F4, 2, 2)
    for a, b in itertools.product(F4.elements(), repeat=2):
        e1 = EndoElement(WittVector(F4, 2, (F4.one_raw, a.raw)), 1)
        e2 = EndoElement(WittVector(F4, 2, (F4.one_raw, b.raw)), 0)
        assert compose(ident, e2) == e2
        c = compose(e1, e2)
        assert c.i == 1
        assert c.u == WittVector(F4, 2, (F4.one_raw, (a + b ** 2).raw))


def test_polynomial_example():
    R = parse_ring("F4[a,b]")
    e1 = endo_from_json({"u": [1, "a"], "i": 1}, R, 2)
    e2 = endo_from_json({"u": [1, "b"], "i": 0}, R, 2)
    assert compose(e1, e2).to_json() == {"u": [1, "a+b^2"], "i": 1}


@pytest.mark.parametrize("ring,p,n", [("F4", 2, 3), ("F2[e]/(e^2)", 2, 3), ("F3[e]/(e^3)", 3, 2)])
def test_monoid_laws(ring, p, n, rng):
    R = parse_ring(ring)
    ident = identity_endo(R, p, n)
    for _ in range(100):
        e1, e2, e3 = (rand_endo(R, p, n, rng) for _ in range(3))
        assert compose(compose(e1, e2), e3) == compose(e1, compose(e2, e3))
        assert compose(e1, ident) == e1 == compose(ident, e1)
        c = compose(e1, e2)
        assert c == EndoElement(e1.u * frobenius_power(e2.u, e1.i), e1.i + e2.i)
        e0 = EndoElement(e1.u, 0)
        assert compose(e0, inverse_endo(e0)) == ident == compose(inverse_endo(e0), e0)


def test_inverse_needs_exponent_zero():
    with pytest.raises(ValueError):
        inverse_endo(EndoElement(WittVector.one(F4, 2, 2), 1))


def test_is_wn_linear_examples():
    for a in F4.elements():
        u = WittVector(F4, 2, (F4.one_raw, a.raw))
        assert is_wn_linear(u, 2)
        assert is_wn_linear(u, 1) == a.is_zero()
    for n in (1, 2, 3):
        assert is_wn_linear(WittVector.one(F4, 2, 3), n)


def test_apply_identity_and_target(rng):
    ident = identity_endo(F4, 2, 3)
    for _ in range(100):
        pt = rand_pt(F4, 2, 3, rng)
        assert apply_endo(ident, pt) == pt
        e = EndoElement(random_special_unit(F4, 2, 3, rng), 0)
        img = apply_endo(e, pt)
        assert img.r == pt.r
        assert target(img) == target(pt)


def test_apply_is_groupoid_ring_map(rng):
    for _ in range(100):
        e = rand_endo(F4, 2, 3, rng)
        a, b = rand_pt(F4, 2, 3, rng), rand_pt(F4, 2, 3, rng)
        for op in ("add", "mul"):
            assert apply_endo(e, morphism_ring_ops(a, b, op)) == \
                morphism_ring_ops(apply_endo(e, a), apply_endo(e, b), op)
        nxt = GroupoidPoint(b.m, target(a))
        assert apply_endo(e, gcompose(a, nxt)) == gcompose(apply_endo(e, a), apply_endo(e, nxt))
        e2 = rand_endo(F4, 2, 3, rng)
        assert apply_endo(compose(e, e2), a) == apply_endo(e, apply_endo(e2, a))


def test_enumerate_example_F2():
    F2 = parse_ring("F2")
    endos = enumerate_endos(F2, 2, 2, 2, 2)
    assert len(endos) == 6
    assert sorted((e.u.coords, e.i) for e in endos) == sorted(
        ((1, b), i) for b in (0, 1) for i in range(3))
    level1 = enumerate_endos(F2, 2, 2, 1, 2)
    assert [(e.u.coords, e.i) for e in level1] == [((1, 0), i) for i in range(3)]


@pytest.mark.parametrize("ring,p,n", [("F4", 2, 3), ("F2[e]/(e^2)", 2, 3), ("F3", 3, 3)])
def test_fibers_are_torsors(ring, p, n):
    R = parse_ring(ring)
    fib = fibers(enumerate_endos(R, p, n, 2, 3))
    units = set(special_units(R, p, n))
    assert sorted(fib) == [0, 1, 2, 3]
    assert len({len(v) for v in fib.values()}) == 1
    for us in fib.values():
        assert set(us) == units
        for g in us:
            assert {g * u for u in us} == units


@pytest.mark.parametrize("ring", ["F2", "F4", "F2[e]/(e^2)"])
def test_stabilization(ring):
    R = parse_ring(ring)
    runs = [[(e.u.coords, e.i) for e in enumerate_endos(R, 2, 4, level, 1)] for level in (2, 3, 4)]
    assert runs[0] == runs[1] == runs[2]
    lvl1 = enumerate_endos(R, 2, 4, 1, 1)
    assert len(lvl1) == 2


def test_errors():
    e = identity_endo(F4, 2, 2)
    with pytest.raises(MixedRings):
        compose(e, identity_endo(parse_ring("F2"), 2, 2))
    with pytest.raises(LevelMismatch):
        compose(e, identity_endo(F4, 2, 2, level=3))
    with pytest.raises(CharMismatch):
        compose(identity_endo(parse_ring("Z/4"), 2, 2), identity_endo(parse_ring("Z/4"), 2, 2))
    with pytest.raises(RingTooLarge):
        enumerate_endos(parse_ring("F64"), 2, 3, 2, 1)
    with pytest.raises(ValueError):
        EndoElement(WittVector(F4, 2, (F4.one_raw, F4("t").raw)), 0, level=1)
