"""Concrete commutative coefficient rings with exact arithmetic.

Every ring works on *raw* values (ints or nested tuples in a canonical normal
form) so that hot loops in the Witt and Cech code can avoid wrapper objects.
:class:`RingElement` is the user-facing wrapper.

Supported rings:

* ``Integers()``                       -- Z
* ``IntegersMod(m)``                   -- Z/m
* ``PrimeField(p)``                    -- F_p
* ``Quotient(base, modulus, var)``     -- base[var]/(monic modulus)
* ``FiniteField(p, modulus, var)``     -- a Quotient with irreducible modulus, q <= 64
* ``PolyQuotient(base, vars, ...)``    -- polynomials with exponents in (1/p^K)N,
  modulo monomial relations ``x^a = 0`` for ``a >= bound``
"""

import itertools
import json
from fractions import Fraction

from .arith import is_prime, prime_power
from .errors import (
    MixedRings,
    NotAUnit,
    NotDivisible,
    RingTooLarge,
    UnsupportedRing,
)

MAX_FIELD_SIZE = 64
_NILPOTENCE_CAP = 64


class BaseRing:
    """Abstract ring. Subclasses implement the raw-value protocol."""

    zero_raw = 0
    one_raw = 1

    # -- raw protocol -------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def from_int(self, n):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a):
        return a == self.zero_raw

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inverse_raw(a), -e)
        result = self.one_raw
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def scale(self, n, a):
        """Integer multiple n*a."""
        return self.mul(self.from_int(n), a)

    def inverse_raw(self, a):
        raise NotAUnit(f"{self.fmt(a)} has no inverse in {self}")

    def is_nilpotent(self, a):
        for _ in range(_NILPOTENCE_CAP):
            if self.is_zero(a):
                return True
            a = self.mul(a, a)
        return self.is_zero(a)

    def characteristic(self):
        raise NotImplementedError

    def is_finite(self):
        return False

    def size(self):
        return None

    def elements_raw(self):
        raise RingTooLarge(f"{self} is infinite")

    def fmt(self, a):
        raise NotImplementedError

    def random_raw(self, rng):
        raise RingTooLarge(f"no sampler for {self}")

    def descriptor(self):
        raise NotImplementedError

    def generator_raw(self, name):
        raise KeyError(name)

    def generator_power_raw(self, name, exponent):
        """Raw value of ``name ** exponent`` for a (possibly fractional) exponent."""
        if isinstance(exponent, Fraction) and exponent.denominator != 1:
            raise UnsupportedRing(f"fractional power of {name!r} in {self}")
        return self.pow(self.generator_raw(name), int(exponent))

    # torsion-free lift used by the ghost-component oracle
    def lift(self):
        raise UnsupportedRing(f"{self} has no torsion-free lift")

    def lift_raw(self, a):
        return a

    def reduce_from_lift(self, b):
        return b

    def is_torsion_free(self):
        return False

    def divide_integer_exact(self, a, d):
        raise UnsupportedRing(f"exact integer division in {self}")

    # -- conveniences -------------------------------------------------------
    def element(self, raw):
        return RingElement(self, raw)

    def zero(self):
        return RingElement(self, self.zero_raw)

    def one(self):
        return RingElement(self, self.one_raw)

    def gen(self, name):
        return RingElement(self, self.generator_raw(name))

    def __call__(self, value):
        if isinstance(value, RingElement):
            if value.ring != self:
                raise MixedRings(f"{value.ring} vs {self}")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return RingElement(self, self.from_int(value))
        if isinstance(value, str):
            from .parsing import parse_element

            return RingElement(self, parse_element(value, self))
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def elements(self):
        return (RingElement(self, r) for r in self.elements_raw())

    def p_nilpotency(self, p, cap=_NILPOTENCE_CAP):
        """Smallest m <= cap with p^m = 0, or None."""
        x = self.one_raw
        pr = self.from_int(p)
        for m in range(cap + 1):
            if self.is_zero(x):
                return m
            x = self.mul(x, pr)
        return None

    def _key(self):
        return json.dumps(self.descriptor(), sort_keys=True)

    def __eq__(self, other):
        return isinstance(other, BaseRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"<{self}>"


class RingElement:
    """Immutable element of a :class:`BaseRing`."""

    __slots__ = ("ring", "raw")

    def __init__(self, ring, raw):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise MixedRings(f"{self.ring} vs {other.ring}")
            return other.raw
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.ring.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.ring.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.ring.sub(o, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RingElement(self.ring, self.ring.mul(self.raw, o))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.raw))

    def __pow__(self, e):
        return RingElement(self.ring, self.ring.pow(self.raw, e))

    def inverse(self):
        return RingElement(self.ring, self.ring.inverse_raw(self.raw))

    def is_zero(self):
        return self.ring.is_zero(self.raw)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.raw == other.raw
        if isinstance(other, int):
            return self.raw == self.ring.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.raw)

    def __str__(self):
        return self.ring.fmt(self.raw)

    def __repr__(self):
        return f"{self.ring.fmt(self.raw)} in {self.ring}"


def invert_unit(a):
    """Inverse of a unit; raises NotAUnit otherwise."""
    return a.inverse()


def ring_ops(a, b, op):
    """Dispatch a binary or unary ring operation by name."""
    if op == "neg":
        return -a
    if not isinstance(b, RingElement) or a.ring != b.ring:
        raise MixedRings("operands live in different rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown ring op {op!r}")


# ---------------------------------------------------------------------------


class Integers(BaseRing):
    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def from_int(self, n):
        return n

    def pow(self, a, e):
        if e < 0:
            return super().pow(a, e)
        return a ** e

    def inverse_raw(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit in Z")

    def is_nilpotent(self, a):
        return a == 0

    def characteristic(self):
        return 0

    def fmt(self, a):
        return str(a)

    def random_raw(self, rng, bound=50):
        return rng.randint(-bound, bound)

    def descriptor(self):
        return {"type": "Integers"}

    def lift(self):
        return self

    def is_torsion_free(self):
        return True

    def divide_integer_exact(self, a, d):
        q, r = divmod(a, d)
        if r:
            raise NotDivisible(f"{d} does not divide {a}")
        return q

    def __str__(self):
        return "Z"


class IntegersMod(BaseRing):
    def __init__(self, m):
        if not isinstance(m, int) or m < 1:
            raise UnsupportedRing(f"modulus must be a positive integer, got {m!r}")
        self.m = m
        self.one_raw = 1 % m

    def add(self, a, b):
        s = a + b
        return s - self.m if s >= self.m else s

    def neg(self, a):
        return (self.m - a) if a else 0

    def sub(self, a, b):
        s = a - b
        return s + self.m if s < 0 else s

    def mul(self, a, b):
        return (a * b) % self.m

    def from_int(self, n):
        return n % self.m

    def pow(self, a, e):
        if e < 0:
            return super().pow(a, e)
        return pow(a, e, self.m)

    def inverse_raw(self, a):
        try:
            return pow(a, -1, self.m)
        except ValueError:
            raise NotAUnit(f"{a} is not a unit mod {self.m}") from None

    def characteristic(self):
        return self.m

    def is_finite(self):
        return True

    def size(self):
        return self.m

    def elements_raw(self):
        return iter(range(self.m))

    def fmt(self, a):
        return str(a)

    def random_raw(self, rng):
        return rng.randrange(self.m)

    def descriptor(self):
        return {"type": "IntegersMod", "m": self.m}

    def lift(self):
        return Integers()

    def reduce_from_lift(self, b):
        return b % self.m

    def is_field(self):
        return is_prime(self.m)

    def __str__(self):
        return f"Z/{self.m}"


class PrimeField(IntegersMod):
    def __init__(self, p):
        if not is_prime(p):
            raise UnsupportedRing(f"{p} is not prime")
        super().__init__(p)
        self.p = p

    def descriptor(self):
        return {"type": "PrimeField", "p": self.p}

    def __str__(self):
        return f"F{self.p}"


def _base_is_field(base):
    return isinstance(base, IntegersMod) and base.is_field()


class Quotient(BaseRing):
    """base[var] / (modulus) for a monic modulus given low-to-high."""

    def __init__(self, base, modulus, var="t"):
        modulus = tuple(base(c).raw if not isinstance(c, int) else base.from_int(c)
                        for c in modulus)
        if len(modulus) < 2 or modulus[-1] != base.one_raw:
            raise UnsupportedRing("modulus must be monic of degree >= 1")
        self.base = base
        self.var = var
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.zero_raw = (base.zero_raw,) * self.degree
        self.one_raw = (base.one_raw,) + (base.zero_raw,) * (self.degree - 1)
        # reduction table: t^(d+k) expressed in the basis 1..t^(d-1)
        d = self.degree
        tail = tuple(base.neg(c) for c in modulus[:-1])  # t^d = tail
        self._high = [tail]
        for _ in range(d - 2):
            prev = self._high[-1]
            shifted = (base.zero_raw,) + prev[:-1]
            top = prev[-1]
            self._high.append(tuple(base.add(shifted[i], base.mul(top, tail[i]))
                                    for i in range(d)))

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        B = self.base
        d = self.degree
        zero = B.zero_raw
        prod_ = [zero] * (2 * d - 1)
        for i, x in enumerate(a):
            if x == zero:
                continue
            for j, y in enumerate(b):
                if y == zero:
                    continue
                prod_[i + j] = B.add(prod_[i + j], B.mul(x, y))
        out = prod_[:d]
        for k in range(d, 2 * d - 1):
            c = prod_[k]
            if c == zero:
                continue
            row = self._high[k - d]
            for i in range(d):
                out[i] = B.add(out[i], B.mul(c, row[i]))
        return tuple(out)

    def from_int(self, n):
        B = self.base
        return (B.from_int(n),) + (B.zero_raw,) * (self.degree - 1)

    def from_base(self, c):
        return (c,) + (self.base.zero_raw,) * (self.degree - 1)

    def generator_raw(self, name):
        if name == self.var:
            if self.degree == 1:
                return (self.base.neg(self.modulus[0]),)
            B = self.base
            return (B.zero_raw, B.one_raw) + (B.zero_raw,) * (self.degree - 2)
        return self.from_base(self.base.generator_raw(name))

    def inverse_raw(self, a):
        if _base_is_field(self.base):
            return self._inverse_by_gcd(a)
        if self.is_finite() and self.size() <= 4096:
            return _inverse_by_powers(self, a)
        raise NotAUnit(f"cannot decide invertibility of {self.fmt(a)} in {self}")

    def _inverse_by_gcd(self, a):
        B = self.base
        # extended Euclid on coefficient lists (low to high)
        def trim(f):
            f = list(f)
            while f and f[-1] == B.zero_raw:
                f.pop()
            return f

        def sub_mul(f, g, c, shift):
            f = list(f) + [B.zero_raw] * max(0, len(g) + shift - len(f))
            for i, gi in enumerate(g):
                f[i + shift] = B.sub(f[i + shift], B.mul(c, gi))
            return trim(f)

        r0, r1 = trim(self.modulus), trim(a)
        s0, s1 = [], [B.one_raw]
        if not r1:
            raise NotAUnit(f"0 is not a unit in {self}")
        while len(r1) > 1:
            inv_lead = B.inverse_raw(r1[-1])
            q = {}
            r = r0
            while len(r) >= len(r1):
                c = B.mul(r[-1], inv_lead)
                shift = len(r) - len(r1)
                q[shift] = c
                r = sub_mul(r, r1, c, shift)
            s = list(s0)
            for shift, c in q.items():
                s = sub_mul(s, s1, c, shift)
            r0, r1 = r1, r
            s0, s1 = s1, s
            if not r1:
                raise NotAUnit(f"{self.fmt(a)} is not a unit in {self}")
        c = B.inverse_raw(r1[0])
        s1 = [B.mul(c, x) for x in s1]
        # reduce s1 modulo the modulus
        res = self.zero_raw
        t = self.one_raw
        g = self.generator_raw(self.var)
        for coeff in s1:
            res = self.add(res, self.mul(self.from_base(coeff), t))
            t = self.mul(t, g)
        if self.mul(res, a) != self.one_raw:
            raise NotAUnit(f"{self.fmt(a)} is not a unit in {self}")
        return res

    def characteristic(self):
        return self.base.characteristic()

    def is_finite(self):
        return self.base.is_finite()

    def size(self):
        s = self.base.size()
        return None if s is None else s ** self.degree

    def elements_raw(self):
        if not self.is_finite():
            raise RingTooLarge(f"{self} is infinite")
        return itertools.product(list(self.base.elements_raw()), repeat=self.degree)

    def fmt(self, a):
        B = self.base
        terms = []
        for k in range(self.degree - 1, -1, -1):
            c = a[k]
            if B.is_zero(c):
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            cs = B.fmt(c)
            if not mono:
                terms.append(cs)
            elif c == B.one_raw:
                terms.append(mono)
            else:
                if _needs_parens(cs):
                    cs = f"({cs})"
                terms.append(f"{cs}*{mono}")
        return _join_terms(terms)

    def random_raw(self, rng):
        return tuple(self.base.random_raw(rng) for _ in range(self.degree))

    def descriptor(self):
        return {
            "type": "Quotient",
            "base": self.base.descriptor(),
            "modulus": [self.base.fmt(c) for c in self.modulus],
            "var": self.var,
        }

    def lift(self):
        B = self.base
        lb = B.lift()
        mod = tuple(B.lift_raw(c) for c in self.modulus)
        return Quotient(lb, [lb.element(c) for c in mod], self.var)

    def lift_raw(self, a):
        return tuple(self.base.lift_raw(c) for c in a)

    def reduce_from_lift(self, b):
        return tuple(self.base.reduce_from_lift(c) for c in b)

    def is_torsion_free(self):
        return self.base.is_torsion_free()

    def divide_integer_exact(self, a, d):
        return tuple(self.base.divide_integer_exact(c, d) for c in a)

    def __str__(self):
        return f"{self.base}[{self.var}]/({_fmt_poly(self.base, self.modulus, self.var)})"


def _fmt_poly(B, coeffs, var):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if B.is_zero(c):
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        cs = B.fmt(c)
        if not mono:
            terms.append(cs)
        elif c == B.one_raw:
            terms.append(mono)
        else:
            terms.append(f"{cs}*{mono}")
    return _join_terms(terms)


def _is_irreducible_mod_p(p, coeffs):
    """Brute-force irreducibility of a monic polynomial over F_p (small degree)."""
    d = len(coeffs) - 1
    F = PrimeField(p)
    Q = Quotient(F, coeffs)
    # irreducible iff no monic factor of degree 1..d//2; check by root/factor search
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            if _poly_divides(p, g, list(coeffs)):
                return False
    del Q
    return True


def _poly_divides(p, g, f):
    f = [c % p for c in f]
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = (f[-1] * inv) % p
        shift = len(f) - len(g)
        for i, gi in enumerate(g):
            f[i + shift] = (f[i + shift] - c * gi) % p
        f.pop()
        while f and f[-1] == 0:
            f.pop()
    return not f


def default_modulus(q):
    """Lexicographically first monic irreducible polynomial of degree k over F_p."""
    pk = prime_power(q)
    if pk is None:
        raise UnsupportedRing(f"{q} is not a prime power")
    p, k = pk
    for tail in itertools.product(range(p), repeat=k):
        coeffs = list(tail) + [1]
        if coeffs[0] != 0 and _is_irreducible_mod_p(p, coeffs):
            return coeffs
    raise UnsupportedRing(f"no irreducible polynomial of degree {k} over F{p}")


class FiniteField(Quotient):
    """F_q = F_p[var]/(modulus) with an explicitly supplied irreducible modulus."""

    def __init__(self, p, modulus, var="t"):
        if not is_prime(p):
            raise UnsupportedRing(f"{p} is not prime")
        modulus = [int(c) % p for c in modulus]
        q = p ** (len(modulus) - 1)
        if q > MAX_FIELD_SIZE:
            raise UnsupportedRing(f"finite fields are limited to q <= {MAX_FIELD_SIZE}")
        if modulus[-1] != 1 or not _is_irreducible_mod_p(p, modulus):
            raise UnsupportedRing(f"modulus {modulus} is not monic irreducible mod {p}")
        super().__init__(PrimeField(p), modulus, var)
        self.p = p
        self.q = q

    def inverse_raw(self, a):
        if a == self.zero_raw:
            raise NotAUnit(f"0 is not a unit in {self}")
        return self.pow(a, self.q - 2)

    def descriptor(self):
        return {"type": "FiniteField", "p": self.p, "modulus": list(self.modulus),
                "var": self.var}

    def __str__(self):
        return f"F{self.q}"


def _inverse_by_powers(ring, a):
    x = a
    seen = 0
    size = ring.size()
    while seen <= size:
        if x == ring.one_raw:
            return ring.pow(a, seen) if seen else ring.one_raw
        x = ring.mul(x, a)
        seen += 1
    raise NotAUnit(f"{ring.fmt(a)} is not a unit in {ring}")


def _needs_parens(s):
    return any(ch in s[1:] for ch in "+-") or ("*" in s and False)


def _join_terms(terms):
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


def _fmt_exponent(num, den):
    f = Fraction(num, den)
    if f.denominator == 1:
        return "" if f == 1 else f"^{f.numerator}"
    return f"^({f.numerator}/{f.denominator})"


class PolyQuotient(BaseRing):
    """Polynomials over ``base`` in ``variables`` with exponents in (1/p^K)N.

    ``bounds`` maps a variable to a rational bound b meaning x^a = 0 for a >= b.
    Monomial relations are the only relations supported.
    Raw values are tuples of (exponent-numerator tuple, coefficient raw),
    sorted by exponent tuple, with zero coefficients removed.
    """

    def __init__(self, base, variables, p=None, K=0, bounds=None):
        variables = tuple(variables)
        if not variables or len(set(variables)) != len(variables):
            raise UnsupportedRing("variables must be distinct and nonempty")
        if K and p is None:
            raise UnsupportedRing("fractional exponents need a prime p")
        self.base = base
        self.variables = variables
        self.p = p
        self.K = K
        self.den = p ** K if K else 1
        bounds = dict(bounds or {})
        for v in bounds:
            if v not in variables:
                raise UnsupportedRing(f"bound on unknown variable {v!r}")
        self.bounds = {v: Fraction(b) for v, b in bounds.items()}
        self._bnum = tuple(
            (None if v not in self.bounds else
             -(-self.bounds[v].numerator * self.den // self.bounds[v].denominator))
            for v in variables
        )
        self.nvars = len(variables)
        self.zero_raw = ()
        zero_exp = (0,) * self.nvars
        self.one_raw = ((zero_exp, base.one_raw),) if not base.is_zero(base.one_raw) else ()
        self._zero_exp = zero_exp

    def _alive(self, e):
        for x, b in zip(e, self._bnum):
            if b is not None and x >= b:
                return False
        return True

    def _make(self, d):
        B = self.base
        return tuple(sorted((e, c) for e, c in d.items() if not B.is_zero(c)))

    def add(self, a, b):
        B = self.base
        d = dict(a)
        for e, c in b:
            if e in d:
                d[e] = B.add(d[e], c)
            else:
                d[e] = c
        return self._make(d)

    def neg(self, a):
        B = self.base
        return tuple((e, B.neg(c)) for e, c in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        B = self.base
        d = {}
        bnum = self._bnum
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(x + y for x, y in zip(e1, e2))
                dead = False
                for x, bd in zip(e, bnum):
                    if bd is not None and x >= bd:
                        dead = True
                        break
                if dead:
                    continue
                c = B.mul(c1, c2)
                if e in d:
                    d[e] = B.add(d[e], c)
                else:
                    d[e] = c
        return self._make(d)

    def from_int(self, n):
        c = self.base.from_int(n)
        return () if self.base.is_zero(c) else ((self._zero_exp, c),)

    def from_base(self, c):
        return () if self.base.is_zero(c) else ((self._zero_exp, c),)

    def monomial_raw(self, exps, coeff=None):
        """Raw monomial with exponent numerators ``exps`` (over p^K)."""
        coeff = self.base.one_raw if coeff is None else coeff
        exps = tuple(exps)
        if not self._alive(exps) or self.base.is_zero(coeff):
            return ()
        return ((exps, coeff),)

    def generator_raw(self, name):
        if name in self.variables:
            i = self.variables.index(name)
            e = [0] * self.nvars
            e[i] = self.den
            return self.monomial_raw(e)
        return self.from_base(self.base.generator_raw(name))

    def generator_power_raw(self, name, exponent):
        exponent = Fraction(exponent)
        if name in self.variables:
            num = exponent * self.den
            if num.denominator != 1 or num < 0:
                raise UnsupportedRing(
                    f"exponent {exponent} of {name!r} not in (1/{self.den})N")
            i = self.variables.index(name)
            e = [0] * self.nvars
            e[i] = int(num)
            return self.monomial_raw(e)
        return super().generator_power_raw(name, exponent)

    def _unbounded_monomial(self, e):
        return all(x == 0 or b is None for x, b in zip(e, self._bnum))

    def inverse_raw(self, a):
        B = self.base
        const = B.zero_raw
        rest = []
        for e, c in a:
            if e == self._zero_exp:
                const = c
            else:
                if self._unbounded_monomial(e) and not B.is_nilpotent(c):
                    raise NotAUnit(f"{self.fmt(a)} is not a unit in {self}")
                rest.append((e, c))
        c_inv = B.inverse_raw(const)  # raises NotAUnit
        # a = c(1 + n) with n nilpotent; 1/(1+n) = sum (-n)^k
        n = self.mul(self.from_base(c_inv), tuple(rest))
        minus_n = self.neg(n)
        total = self.one_raw
        term = self.one_raw
        for _ in range(4096):
            term = self.mul(term, minus_n)
            if not term:
                break
            total = self.add(total, term)
        else:
            raise NotAUnit(f"series for inverse of {self.fmt(a)} did not terminate")
        return self.mul(total, self.from_base(c_inv))

    def characteristic(self):
        return self.base.characteristic()

    def monomials(self):
        """Surviving monomials (only when every variable is bounded)."""
        if any(b is None for b in self._bnum):
            raise RingTooLarge(f"{self} has unbounded variables")
        return list(itertools.product(*(range(b) for b in self._bnum)))

    def is_finite(self):
        return self.base.is_finite() and all(b is not None for b in self._bnum)

    def size(self):
        if not self.is_finite():
            return None
        return self.base.size() ** len(self.monomials())

    def elements_raw(self):
        if not self.is_finite():
            raise RingTooLarge(f"{self} is infinite")
        monos = self.monomials()
        base_elems = list(self.base.elements_raw())
        B = self.base
        for coeffs in itertools.product(base_elems, repeat=len(monos)):
            yield tuple((m, c) for m, c in zip(monos, coeffs) if not B.is_zero(c))

    def fmt(self, a):
        B = self.base
        ordered = sorted(a, key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))
        terms = []
        for e, c in ordered:
            parts = [f"{v}{_fmt_exponent(x, self.den)}"
                     for v, x in zip(self.variables, e) if x]
            mono = "*".join(parts)
            cs = B.fmt(c)
            if not mono:
                terms.append(cs if not _needs_parens(cs) else f"({cs})")
            elif c == B.one_raw:
                terms.append(mono)
            elif c == B.neg(B.one_raw) and B.characteristic() != 2:
                terms.append("-" + mono)
            else:
                if _needs_parens(cs):
                    cs = f"({cs})"
                terms.append(f"{cs}*{mono}")
        return _join_terms(terms)

    def random_raw(self, rng, terms=3):
        """Random element; unbounded variables get exponents below 3."""
        caps = [b if b is not None else 3 * self.den for b in self._bnum]
        d = {}
        if all(b is not None for b in self._bnum) and len(self.monomials()) <= 16:
            monos = self.monomials()
            for e in monos:
                d[e] = self.base.random_raw(rng)
        else:
            for _ in range(terms):
                e = tuple(rng.randrange(c) for c in caps)
                d[e] = self.base.random_raw(rng)
        return self._make(d)

    def descriptor(self):
        d = {
            "type": "PolyQuotient",
            "base": self.base.descriptor(),
            "variables": list(self.variables),
        }
        if self.K:
            d["p"] = self.p
            d["K"] = self.K
        if self.bounds:
            d["bounds"] = {v: str(b) for v, b in sorted(self.bounds.items())}
        return d

    def lift(self):
        return PolyQuotient(self.base.lift(), self.variables, self.p, self.K, self.bounds)

    def lift_raw(self, a):
        return tuple((e, self.base.lift_raw(c)) for e, c in a)

    def reduce_from_lift(self, b):
        B = self.base
        return self._make({e: B.reduce_from_lift(c) for e, c in b})

    def is_torsion_free(self):
        return self.base.is_torsion_free()

    def divide_integer_exact(self, a, d):
        return tuple((e, self.base.divide_integer_exact(c, d)) for e, c in a)

    def coefficients(self, a):
        return dict(a)

    def __str__(self):
        vs = ",".join(
            v if not self.K else f"{v}^(1/{self.den})" for v in self.variables)
        rels = ",".join(f"{v}^{b}" for v, b in sorted(self.bounds.items()))
        return f"{self.base}[{vs}]" + (f"/({rels})" if rels else "")


# ---------------------------------------------------------------------------
# descriptors


def ring_from_descriptor(d):
    """Build a ring from its JSON descriptor (see :meth:`BaseRing.descriptor`)."""
    if not isinstance(d, dict) or "type" not in d:
        raise UnsupportedRing(f"bad ring descriptor {d!r}")
    t = d["type"]
    try:
        if t == "Integers":
            return Integers()
        if t == "IntegersMod":
            return IntegersMod(int(d["m"]))
        if t == "PrimeField":
            return PrimeField(int(d["p"]))
        if t == "FiniteField":
            modulus = d.get("modulus") or default_modulus(int(d["q"]))
            p = int(d["p"]) if "p" in d else prime_power(int(d["q"]))[0]
            return FiniteField(p, [int(c) for c in modulus], d.get("var", "t"))
        if t == "Quotient":
            base = ring_from_descriptor(d["base"])
            mod = [base(c) if isinstance(c, str) else base(int(c)) for c in d["modulus"]]
            return Quotient(base, mod, d.get("var", "t"))
        if t == "PolyQuotient":
            base = ring_from_descriptor(d["base"])
            bounds = {v: Fraction(b) for v, b in (d.get("bounds") or {}).items()}
            return PolyQuotient(base, d["variables"], d.get("p"), int(d.get("K", 0)),
                                bounds)
    except KeyError as exc:
        raise UnsupportedRing(f"ring descriptor {t} missing field {exc}") from None
    raise UnsupportedRing(f"unknown ring type {t!r}")
