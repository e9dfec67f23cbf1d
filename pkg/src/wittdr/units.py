"""Subgroups of W_n: W[p], W[F], (1+W[p])^x, mu_p, and the char-p splitting
W^x[F] = W[F] x mu_p.

W[F] always refers to the kernel of the level-dropping Frobenius W_n -> W_{n-1}.
"""

from .errors import (
    CharMismatch,
    LevelTooSmall,
    NotAUnit,
    NotInKernel,
    NotPNilpotent,
    NotSpecialUnit,
    OracleMismatch,
)
from .rings import RingElement
from .witt import (
    MAX_LEVEL,
    WittVector,
    _evaluate,
    all_vectors,
    build_structural_cache,
    frobenius,
    oracle_mode,
    teichmuller,
    times_p,
)

FROBENIUS_KERNEL_CONVENTION = "level-dropping"
ENUMERATION_CAP = 4096


def _p_vector(x):
    return times_p(WittVector.one(x.ring, x.p, x.n))


def in_Wp(x):
    return times_p(x).is_zero()


def in_WF(x):
    if x.n < 2:
        raise LevelTooSmall("W[F] needs level >= 2 with the level-dropping Frobenius")
    return frobenius(x).is_zero()


def in_one_plus_Wp(x):
    return times_p(x) == _p_vector(x)


def in_mu_p(x):
    R = x.ring
    if any(not R.is_zero(c) for c in x.coords[1:]):
        return False
    return R.pow(x.coords[0], x.p) == R.one_raw


def in_units_WF(x):
    """x in W^x[F]: F(x) = 1 with the level-dropping Frobenius."""
    if x.n < 2:
        raise LevelTooSmall("W^x[F] needs level >= 2")
    return frobenius(x) == WittVector.one(x.ring, x.p, x.n - 1)


_MEMBERSHIP = {
    "W[p]": in_Wp,
    "W[F]": in_WF,
    "OnePlusWp": in_one_plus_Wp,
    "mu_p": in_mu_p,
    "Wx[F]": in_units_WF,
}


def membership(x, which):
    try:
        test = _MEMBERSHIP[which]
    except KeyError:
        raise ValueError(f"unknown subgroup {which!r}") from None
    return test(x)


class SpecialUnit:
    """A Witt vector u certified to satisfy p*u = p."""

    __slots__ = ("u",)

    def __init__(self, u):
        if isinstance(u, SpecialUnit):
            u = u.u
        if not in_one_plus_Wp(u):
            raise NotSpecialUnit(f"p*{u} != p")
        self.u = u

    def __eq__(self, other):
        return isinstance(other, SpecialUnit) and self.u == other.u

    def __hash__(self):
        return hash(self.u)

    def __str__(self):
        return str(self.u)

    __repr__ = __str__


def check_p_nilpotent(ring, p):
    if ring.characteristic() == p:
        return
    if ring.p_nilpotency(p) is None:
        raise NotPNilpotent(f"{p} is not nilpotent in {ring}")


def invert_special_unit(u):
    """Inverse of u with p*u = p, solved coordinate by coordinate.

    The coefficient of Y_i in the product polynomial P_i is w_i(X), so z_i is
    obtained from P_i(u, z) = delta_{i0} with pivot w_i(u).
    """
    if isinstance(u, SpecialUnit):
        u = u.u
    else:
        u = SpecialUnit(u).u
    R, p, n = u.ring, u.p, u.n
    check_p_nilpotent(R, p)
    z = _triangular_inverse(u)
    if oracle_mode() == "enumerate" and R.size() is not None \
            and R.size() ** n <= ENUMERATION_CAP:
        one = WittVector.one(R, p, n)
        found = [v for v in all_vectors(R, p, n) if u * v == one]
        if found != [z]:
            raise OracleMismatch(f"inverse of {u}: solver {z}, enumeration {found}")
    return z


def _triangular_inverse(u):
    R, p, n = u.ring, u.p, u.n
    cache = build_structural_cache(p, n)
    L = MAX_LEVEL
    values = dict(enumerate(u.coords))
    zs = []
    for i in range(n):
        for j in range(i, n):
            values[L + j] = R.zero_raw
        for j, c in enumerate(zs):
            values[L + j] = c
        rest = _evaluate(R, cache.compiled(R, "P", i), values)
        pivot = R.zero_raw
        for j in range(i + 1):
            pivot = R.add(pivot, R.scale(p ** j, R.pow(u.coords[j], p ** (i - j))))
        try:
            inv = R.inverse_raw(pivot)
        except NotAUnit:
            raise NotAUnit(f"pivot {R.fmt(pivot)} at coordinate {i} is not a unit") from None
        target = R.one_raw if i == 0 else R.zero_raw
        zs.append(R.mul(R.sub(target, rest), inv))
    z = WittVector(R, p, zs)
    if u * z != WittVector.one(R, p, n):
        raise NotAUnit(f"{u} is not invertible")
    return z


# -- characteristic p splitting ------------------------------------------------


def mu_p(ring, p):
    """Ring elements a with a^p = 1."""
    one = ring.one_raw
    return [RingElement(ring, a) for a in ring.elements_raw() if ring.pow(a, p) == one]


def f_prime(u):
    """u -> 1 + (u - 1)_0, i.e. the 0-th coordinate of u."""
    return u[0]


def _require_char_p(x):
    if x.ring.characteristic() != x.p:
        raise CharMismatch(f"needs a base of characteristic {x.p}, got {x.ring}")


def decompose_gm_sharp(u):
    """u in W^x[F] -> (zeta, w) with zeta = u_0 in mu_p and w = u [zeta]^-1 - 1."""
    if isinstance(u, SpecialUnit):
        u = u.u
    _require_char_p(u)
    if not in_units_WF(u):
        raise NotInKernel(f"F({u}) != 1")
    zeta = u[0]
    t = teichmuller(zeta.inverse(), u.p, u.n)
    w = u * t - WittVector.one(u.ring, u.p, u.n)
    return zeta, w


def reconstruct_gm_sharp(zeta, w):
    return teichmuller(zeta, w.p, w.n) * (WittVector.one(w.ring, w.p, w.n) + w)


def kernel_f(ring, p, n, cap=ENUMERATION_CAP):
    """Elements w of W_n[F] with w_0 = 0, the kernel of f on W[F]."""
    return [x for x in all_vectors(ring, p, n, cap)
            if ring.is_zero(x.coords[0]) and in_WF(x)]


def star(x, y):
    """Monoid law x + y + xy transported from 1 + x, 1 + y."""
    return x + y + x * y


def units_WF(ring, p, n, cap=ENUMERATION_CAP):
    return [x for x in all_vectors(ring, p, n, cap) if in_units_WF(x)]


def frobenius_kernel(ring, p, n, cap=ENUMERATION_CAP):
    return [x for x in all_vectors(ring, p, n, cap) if in_WF(x)]


def special_units(ring, p, n, cap=ENUMERATION_CAP):
    return [x for x in all_vectors(ring, p, n, cap) if in_one_plus_Wp(x)]
