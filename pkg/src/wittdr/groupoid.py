"""The ring groupoid of the quasi-ideal d = x p : W -> W.

A point (m, r) is the morphism r -> r + p*m.  Morphisms form a ring under
(m1, r1)(m2, r2) = (r2 m1 + r1 m2 + p m1 m2, r1 r2).
"""

from dataclasses import dataclass

from .errors import CharMismatch, NotComposable, RingTooLarge
from .witt import WittVector, all_vectors, times_p, witt_arith

ENUMERATION_CAP = 4096


@dataclass(frozen=True)
class GroupoidPoint:
    m: WittVector
    r: WittVector

    def __post_init__(self):
        self.m._check(self.r)

    @property
    def p(self):
        return self.r.p

    @property
    def ring(self):
        return self.r.ring

    def __add__(self, other):
        return morphism_ring_ops(self, other, "add")

    def __mul__(self, other):
        return morphism_ring_ops(self, other, "mul")

    def __str__(self):
        return f"({self.m}, {self.r})"


def source(pt):
    return pt.r


def target(pt):
    return pt.r + times_p(pt.m)


def identity_at(r):
    return GroupoidPoint(WittVector.zero(r.ring, r.p, r.n), r)


def compose(first, second):
    """(m, r) followed by (m', r + p m) is (m + m', r)."""
    if target(first) != source(second):
        raise NotComposable(f"target {target(first)} != source {source(second)}")
    return GroupoidPoint(first.m + second.m, first.r)


def inverse(pt):
    return GroupoidPoint(-pt.m, target(pt))


def structure_maps(pt, which, other=None):
    """Dispatch ``source`` | ``target`` | ``identity`` | ``compose``.

    For ``identity`` the argument is a WittVector r rather than a point.
    """
    if which == "source":
        return source(pt)
    if which == "target":
        return target(pt)
    if which in ("identity", "identity_at"):
        return identity_at(pt)
    if which == "compose":
        return compose(pt, other)
    raise ValueError(f"unknown structure map {which!r}")


def morphism_ring_ops(a, b, op):
    if op == "neg":
        return GroupoidPoint(-a.m, -a.r)
    a.r._check(b.r)
    if op == "add":
        return GroupoidPoint(a.m + b.m, a.r + b.r)
    if op == "mul":
        m = witt_arith(b.r * a.m + a.r * b.m, times_p(a.m) * b.m, "add")
        return GroupoidPoint(m, a.r * b.r)
    raise ValueError(f"unknown morphism op {op!r}")


class Pi0:
    """pi_0 of the groupoid at level n.

    Over a char-p ring it is represented by the base ring via x -> x_0.
    Otherwise only the coset description by enumeration is available.
    """

    def __init__(self, ring, p, n):
        self.ring, self.p, self.n = ring, p, n
        self.representable = ring.characteristic() == p

    def projection(self, x):
        if not self.representable:
            raise CharMismatch(
                f"pi_0 is representable only in characteristic {self.p}, not over {self.ring}")
        return x[0]

    def image_of_p(self, cap=ENUMERATION_CAP):
        return {times_p(m) for m in all_vectors(self.ring, self.p, self.n, cap)}

    def classes(self, cap=ENUMERATION_CAP):
        """Cosets of p*W_n(R) in W_n(R), as sorted lists of coordinate tuples."""
        image = self.image_of_p(cap)
        seen = set()
        out = []
        for x in all_vectors(self.ring, self.p, self.n, cap):
            if x in seen:
                continue
            coset = {x + y for y in image}
            seen |= coset
            out.append(sorted(v.coords for v in coset))
        return out


def pi0(ring, p, n):
    return Pi0(ring, p, n)


def in_pi1(x):
    return times_p(x).is_zero()


def pi1(ring, p, n, cap=ENUMERATION_CAP):
    """Every x in W_n(R) with p*x = 0 (loops at the object 0)."""
    size = ring.size()
    if size is None or size ** n > cap:
        raise RingTooLarge(f"W_{n}({ring}) is above the enumeration cap {cap}")
    return [x for x in all_vectors(ring, p, n, cap) if in_pi1(x)]
