import pytest

from wittdr.cech import GradedCechComplex, build_complex, cohomology, weight_of_class
from wittdr.errors import CharMismatch, NotEigenclass, TruncationTooLarge
from wittdr.parsing import parse_ring
from wittdr.witt import WittVector


def y0(cx):
    return cx.level1_raw((1,) + (0,) * (2 * cx.n_w - 1))


def x_mono(cx, exps):
    return cx.ring.monomial_raw(cx.embed(0, exps), 1)


def zeta_for(p):
    C = parse_ring(f"F{p}[t]/(t^{p}-1)")
    return C("t")


@pytest.fixture(scope="module")
def cx2():
    return build_complex(2, 3, 4)


@pytest.fixture(scope="module")
def cx3():
    return build_complex(3, 3, 9)


def test_d0_examples():
    cx = build_complex(2, 2, 4)
    assert cx.d0_raw((1, 0)) == ()
    # (r + V F m)_1 = r_1 + m_0^2
    expected = cx.level1_raw((2, 0, 0, 0))
    assert cx.d0_raw((0, 1)) == expected
    assert cx.fmt(cx.d0_raw((0, 1))) == "Y0^2"


def test_y0_cocycle(cx2):
    assert not cx2.apply_d1(y0(cx2))


@pytest.mark.parametrize("p,n_w", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2)])
def test_d_squared(p, n_w):
    cx = build_complex(p, n_w, min(p * p, 9))
    for d in range(cx.D + 1):
        assert cx.check_d_squared(d)


@pytest.mark.parametrize("name", ["cx2", "cx3"])
def test_cohomology_shape(name, request):
    cx = request.getfixturevalue(name)
    for d in range(cx.D + 1):
        h = cohomology(cx, d)
        assert [cx.fmt(r) for r in h["H0"]] == [cx.fmt(x_mono(cx, (d, 0, 0)))]
        if d == 0:
            assert h["H1"] == []
        else:
            assert len(h["H1"]) == 1


def test_h1_degree1(cx3):
    h = cx3.cohomology(1)
    assert h["H1"] == [y0(cx3)]
    assert not cx3.is_coboundary(y0(cx3), 1)


@pytest.mark.parametrize("name", ["cx2", "cx3"])
def test_weights(name, request):
    cx = request.getfixturevalue(name)
    zeta = zeta_for(cx.p)
    assert weight_of_class(cx, cx.ring.one_raw, 0, 0, zeta) == 0
    assert weight_of_class(cx, x_mono(cx, (1, 0, 0)), 0, 1, zeta) == 0
    assert weight_of_class(cx, y0(cx), 1, 1, zeta) == 1
    for d in range(1, cx.D + 1):
        h = cx.cohomology(d)
        assert [cx.weight_of_class(r, 0, d, zeta) for r in h["H0"]] == [0]
        assert [cx.weight_of_class(r, 1, d, zeta) for r in h["H1"]] == [1]


def test_weight_additive_on_products(cx3):
    zeta = zeta_for(3)
    x0 = x_mono(cx3, (1, 0, 0))
    prod = cx3.cup(cx3.ring.mul(x0, x0), y0(cx3))
    assert not cx3.apply_d1(prod)
    assert cx3.weight_of_class(prod, 1, 3, zeta) == 1


def test_not_eigenclass(cx3):
    # X0 + Y0 mixes weights 0 and 1
    mixed = cx3.ring.add(cx3.level1_raw((0, 0, 0, 1, 0, 0)), y0(cx3))
    with pytest.raises(NotEigenclass):
        cx3.weight_of_class(mixed, 1, 1, zeta_for(3))


@pytest.mark.parametrize("p", [2, 3])
def test_ga_sharp_acts_trivially(p):
    cx = build_complex(p, 3, p * p)
    E = parse_ring(f"F{p}[e]/(e^{p})")
    u = WittVector.from_elements(p, [E(1), E("e"), E("e")])
    assert cx.acts_trivially(y0(cx), 1, 1, u)
    assert cx.acts_trivially(x_mono(cx, (1, 0, 0)), 0, 1, u)


def test_unit_with_nonunipotent_head_moves_y0():
    # negative control: u_0 = 1 + e is not in the G_a-sharp part
    E = parse_ring("F3[e]/(e^3)")
    cx = build_complex(3, 3, 9)
    u = WittVector.from_elements(3, [E("1+e"), E(0), E(0)])
    assert not cx.acts_trivially(y0(cx), 1, 1, u)


def test_truncation_caps():
    with pytest.raises(TruncationTooLarge):
        GradedCechComplex(2, 4, 4)
    with pytest.raises(TruncationTooLarge):
        GradedCechComplex(2, 3, 5)
    with pytest.raises(CharMismatch):
        GradedCechComplex(2, 2, 4, parse_ring("F3"))


def test_exactness_flag():
    assert build_complex(2, 3, 4).exact
    assert not build_complex(3, 2, 9).exact
