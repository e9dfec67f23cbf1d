"""Endomorphisms (u, i) of the ring groupoid over a char-p base.

(u, i) acts by (m, r) -> (u F^i(m), F^i(r)) with the same-level Frobenius, and
composes as (u, i) o (v, j) = (u F^i(v), i + j).
"""

from dataclasses import dataclass

from .errors import CharMismatch, LevelMismatch, MixedRings, RingTooLarge
from .groupoid import GroupoidPoint
from .units import SpecialUnit, invert_special_unit, special_units
from .witt import (
    WittVector,
    frobenius_power,
    p_power_vector,
    parse_vector,
    vector_to_json,
)

ENUMERATION_CAP = 4096


@dataclass(frozen=True)
class EndoElement:
    u: WittVector
    i: int
    level: int = 2

    def __post_init__(self):
        if self.i < 0:
            raise ValueError("Frobenius exponent must be non-negative")
        SpecialUnit(self.u)
        if not is_wn_linear(self.u, self.level):
            raise ValueError(f"{self.u} is not W_{self.level}-linear")

    def to_json(self):
        return {"u": vector_to_json(self.u), "i": self.i}

    def __str__(self):
        return f"({self.u}, {self.i})"


def identity_endo(ring, p, n, level=2):
    return EndoElement(WittVector.one(ring, p, n), 0, level)


def _require_char_p(x):
    if x.ring.characteristic() != x.p:
        raise CharMismatch(f"same-level Frobenius needs characteristic {x.p}")


def compose(e1, e2):
    """(u, i) o (v, j) = (u F^i(v), i + j)."""
    e1.u._check(e2.u)
    if e1.level != e2.level:
        raise LevelMismatch(f"structure levels {e1.level} and {e2.level}")
    _require_char_p(e1.u)
    return EndoElement(e1.u * frobenius_power(e2.u, e1.i), e1.i + e2.i, e1.level)


def is_wn_linear(u, n):
    """u p^(n-1) = p^(n-1) in the truncated Witt ring."""
    if isinstance(u, SpecialUnit):
        u = u.u
    pw = p_power_vector(n - 1, u.ring, u.p, u.n)
    return u * pw == pw


def apply_endo(e, pt):
    if pt.r.ring != e.u.ring or pt.p != e.u.p:
        raise MixedRings("endomorphism and point live over different rings")
    if pt.r.n != e.u.n:
        raise LevelMismatch(f"levels {e.u.n} and {pt.r.n}")
    _require_char_p(pt.r)
    return GroupoidPoint(e.u * frobenius_power(pt.m, e.i), frobenius_power(pt.r, e.i))


def inverse_endo(e):
    """Inverse of an invertible (u, 0)."""
    if e.i:
        raise ValueError("only Frobenius exponent 0 is invertible")
    return EndoElement(invert_special_unit(e.u), 0, e.level)


def enumerate_endos(ring, p, n_witt, level, max_i, cap=ENUMERATION_CAP):
    """Every (u, i) with p u = p, u W_level-linear and i <= max_i."""
    size = ring.size()
    if size is None or size ** n_witt > cap:
        raise RingTooLarge(f"W_{n_witt}({ring}) is above the enumeration cap {cap}")
    units = [u for u in special_units(ring, p, n_witt, cap) if is_wn_linear(u, level)]
    return [EndoElement(u, i, level) for i in range(max_i + 1) for u in units]


def fibers(endos):
    """Frobenius exponent -> list of units."""
    out = {}
    for e in endos:
        out.setdefault(e.i, []).append(e.u)
    return out


def endo_from_json(data, ring, p, n=None, level=2):
    u = parse_vector(data["u"], ring, p, n)
    return EndoElement(u, int(data.get("i", 0)), level)
