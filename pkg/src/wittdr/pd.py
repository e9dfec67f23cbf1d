"""Divided-power algebras with fractional exponents.

A variable is either ``pd`` (divided powers adjoined) or ``poly``.  Exponents
are numerators d over q = p^K.  For a pd variable the key d stands for the
basis element

    b_d = x^(d/q) / w(d),   w(d) = prod_{j>=1} ((p^j)!)^(m_j),

where m_j are the base-p digits of floor(d/q).  So b_d is x^a * prod gamma_{p^j}(x)^(m_j)
with a < p, which is the usual normal form.  Poly variables have w = 1.

Coefficients are exact rationals (``char=0``, only p-integral values are
meaningful) or residues mod p (``char=p``).  The char-0 algebra is the Z_(p)
form; reducing it mod p gives the char-p one.
"""

import re
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .arith import base_p_digits
from .errors import MixedRings, NotDivisible, Truncated, UnsupportedRing


@lru_cache(maxsize=None)
def _w(p, q, d):
    n = d // q
    w = 1
    for j, m in enumerate(base_p_digits(n, p)):
        if j and m:
            w *= factorial(p ** j) ** m
    return w


@lru_cache(maxsize=None)
def _ratio(p, q, d1, d2):
    """b_{d1} b_{d2} = ratio * b_{d1+d2} for one pd variable."""
    return Fraction(_w(p, q, d1 + d2), _w(p, q, d1) * _w(p, q, d2))


def gamma_multinomial(p, n):
    """M with gamma_n = b_n / M, i.e. M = n! / w(n) (a p-adic unit)."""
    return factorial(n) // _w(p, 1, n)


class PDAlgebra:
    def __init__(self, p, variables, K=2, char=0, d_max=None, weights=None, bounds=None):
        if char not in (0, p):
            raise UnsupportedRing(f"characteristic must be 0 or {p}")
        self.p, self.K, self.char = p, K, char
        self.q = p ** K
        vs = []
        for v in variables:
            name, kind = (v, "pd") if isinstance(v, str) else v
            if kind not in ("pd", "poly"):
                raise UnsupportedRing(f"variable kind {kind!r}")
            vs.append((name, kind))
        self.variables = tuple(vs)
        self.names = tuple(n for n, _ in vs)
        if len(set(self.names)) != len(self.names):
            raise UnsupportedRing("duplicate variable names")
        self.kinds = tuple(k for _, k in vs)
        self.nvars = len(vs)
        self.d_max = None if d_max is None else Fraction(d_max)
        weights = weights or {}
        self.weights = tuple(int(weights.get(n, 1)) for n in self.names)
        self._dnum = None if d_max is None else self.d_max * self.q
        bounds = bounds or {}
        self.bounds = tuple(
            None if n not in bounds else Fraction(bounds[n]) * self.q for n in self.names)
        self._zero_key = (0,) * self.nvars

    # -- bookkeeping ---------------------------------------------------------
    def signature(self):
        return (self.p, self.K, self.char, self.variables, self.d_max, self.weights,
                self.bounds)

    def __eq__(self, other):
        return isinstance(other, PDAlgebra) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __str__(self):
        base = "Q" if self.char == 0 else f"F{self.p}"
        vs = ",".join(n if k == "pd" else f"{n}(poly)" for n, k in self.variables)
        return f"PD<{base}; {vs}; 1/{self.q}>"

    def index(self, name):
        return self.names.index(name)

    def degree(self, key):
        return Fraction(sum(w * d for w, d in zip(self.weights, key)), self.q)

    def alive(self, key):
        if self._dnum is not None:
            if sum(w * d for w, d in zip(self.weights, key)) >= self._dnum:
                return False
        for d, b in zip(key, self.bounds):
            if b is not None and d >= b:
                return False
        return True

    def W(self, key):
        w = 1
        for kind, d in zip(self.kinds, key):
            if kind == "pd":
                w *= _w(self.p, self.q, d)
        return w

    def coerce(self, c):
        if self.char == 0:
            return Fraction(c)
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise NotDivisible(f"{c} is not {self.p}-integral")
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def _is_zero(self, c):
        return c == 0

    def key_product(self, k1, k2):
        """(coefficient, key) with b_k1 b_k2 = coefficient * b_key."""
        key = tuple(a + b for a, b in zip(k1, k2))
        r = Fraction(1)
        p, q = self.p, self.q
        for kind, a, b in zip(self.kinds, k1, k2):
            if kind == "pd" and a and b:
                r *= _ratio(p, q, a, b)
        return self.coerce(r), key

    # -- constructors ---------------------------------------------------------
    def element(self, terms=None):
        return PDElement(self, terms or {})

    def zero(self):
        return PDElement(self, {})

    def one(self):
        return self.monomial(self._zero_key)

    def scalar(self, c):
        return PDElement(self, {self._zero_key: self.coerce(c)})

    def monomial(self, key, coef=1):
        key = tuple(key)
        if len(key) != self.nvars:
            raise ValueError("key length does not match the variables")
        return PDElement(self, {key: self.coerce(coef)})

    def _key_for(self, name, d):
        key = [0] * self.nvars
        key[self.index(name)] = d
        return tuple(key)

    def basis(self, name, exponent):
        """b_d for the exponent (integer or Fraction) of one variable."""
        d = Fraction(exponent) * self.q
        if d.denominator != 1 or d < 0:
            raise UnsupportedRing(f"exponent {exponent} not in (1/{self.q})N")
        return self.monomial(self._key_for(name, int(d)))

    def x_power(self, name, exponent):
        """The plain power name^exponent."""
        d = Fraction(exponent) * self.q
        if d.denominator != 1 or d < 0:
            raise UnsupportedRing(f"exponent {exponent} not in (1/{self.q})N")
        key = self._key_for(name, int(d))
        return self.monomial(key, self.W(key))

    def var(self, name):
        return self.x_power(name, 1)

    def gamma(self, name, n):
        """gamma_n of a pd variable."""
        if self.kinds[self.index(name)] != "pd":
            if n < self.p or self.char == 0:
                return self.x_power(name, n) * Fraction(1, factorial(n))
            raise UnsupportedRing(f"gamma_{n} of polynomial variable {name!r}")
        key = self._key_for(name, n * self.q)
        if not self.alive(key):
            raise Truncated(f"gamma_{n}({name}) is beyond the truncation")
        return self.monomial(key, Fraction(1, gamma_multinomial(self.p, n)))

    def gamma_expand(self, name, n):
        """(basis element, M) with gamma_n(name) = basis / M."""
        key = self._key_for(name, n * self.q)
        if not self.alive(key):
            raise Truncated(f"gamma_{n}({name}) is beyond the truncation")
        M = gamma_multinomial(self.p, n)
        if factorial(n) != M * _w(self.p, 1, n):
            raise NotDivisible("multinomial bookkeeping failed")
        return self.monomial(key), M

    # -- divided powers of elements ----------------------------------------------
    def gamma_term(self, key, coef, k):
        """gamma_k(coef * b_key)."""
        if k == 0:
            return self.one()
        if k == 1:
            return PDElement(self, {key: coef}) if self.alive(key) else self.zero()
        big = tuple(k * d for d in key)
        if not self.alive(big):
            return self.zero()
        if self.char != 0 and coef == 0:
            return self.zero()
        allowed = k < self.p or any(
            kind == "pd" and d >= self.q for kind, d in zip(self.kinds, key))
        if not allowed:
            raise UnsupportedRing("divided power of an element outside the PD ideal")
        r = Fraction(self.W(big), self.W(key) ** k * factorial(k))
        c = self.coerce(r)
        if self.char == 0:
            c *= coef ** k
        else:
            c = c * pow(coef, k, self.p) % self.p
        return PDElement(self, {big: c})

    def gamma_of(self, f, n):
        """gamma_n(f) via gamma_n(a + b) = sum gamma_i(a) gamma_{n-i}(b)."""
        terms = sorted(f.terms.items())
        memo = {}

        def rec(i, m):
            if m == 0:
                return self.one()
            if i == len(terms):
                return self.zero()
            hit = memo.get((i, m))
            if hit is not None:
                return hit
            key, c = terms[i]
            total = self.zero()
            if i == len(terms) - 1:
                total = self.gamma_term(key, c, m)
            else:
                for k in range(m + 1):
                    g = self.gamma_term(key, c, k)
                    if g.is_zero():
                        continue
                    rest = rec(i + 1, m - k)
                    if not rest.is_zero():
                        total = total + g * rest
            memo[(i, m)] = total
            return total

        return rec(0, n)

    def reduction(self):
        """The same algebra with coefficients mod p."""
        return PDAlgebra(self.p, self.variables, self.K, self.p, self.d_max,
                         dict(zip(self.names, self.weights)),
                         {n: b / self.q for n, b in zip(self.names, self.bounds)
                          if b is not None})

    def reduce(self, el):
        R = self.reduction()
        return PDElement(R, {k: R.coerce(c) for k, c in el.terms.items()})

    def keys_below(self, dmax=None):
        """All alive keys of weighted degree < dmax (defaults to d_max)."""
        dmax = self.d_max if dmax is None else Fraction(dmax)
        if dmax is None:
            raise Truncated("enumerating keys needs a degree bound")
        lim = dmax * self.q
        caps = []
        for w, b in zip(self.weights, self.bounds):
            if w == 0 and b is None:
                raise Truncated("unbounded weight-zero variable")
            cap = b if b is not None else lim
            caps.append(int(-(-cap // 1)))
        out = []

        def rec(i, key, deg):
            if i == self.nvars:
                t = tuple(key)
                if self.alive(t):
                    out.append(t)
                return
            for d in range(caps[i]):
                nd = deg + self.weights[i] * d
                if nd >= lim:
                    break
                key.append(d)
                rec(i + 1, key, nd)
                key.pop()

        rec(0, [], 0)
        return out


class PDElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        clean = {}
        for k, c in terms.items():
            if c and alg.alive(k):
                clean[k] = c
        self.terms = clean

    def _other(self, other):
        if isinstance(other, PDElement):
            if other.alg is not self.alg and other.alg != self.alg:
                raise MixedRings(f"{self.alg} vs {other.alg}")
            return other
        return self.alg.scalar(other)

    def __add__(self, other):
        other = self._other(other)
        t = dict(self.terms)
        mod = self.alg.char
        for k, c in other.terms.items():
            v = t.get(k, 0) + c
            if mod:
                v %= mod
            t[k] = v
        return PDElement(self.alg, t)

    __radd__ = __add__

    def __neg__(self):
        mod = self.alg.char
        return PDElement(self.alg, {k: (-c % mod if mod else -c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, PDElement):
            c = self.alg.coerce(other)
            mod = self.alg.char
            return PDElement(self.alg, {k: (v * c % mod if mod else v * c)
                                        for k, v in self.terms.items()})
        other = self._other(other)
        A = self.alg
        mod = A.char
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                if not A.alive(key):
                    continue
                r, key = A.key_product(k1, k2)
                if not r:
                    continue
                v = out.get(key, 0) + r * c1 * c2
                out[key] = v % mod if mod else v
        return PDElement(A, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = self.alg.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, PDElement):
            return self.alg == other.alg and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.alg.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def coefficient(self, key):
        return self.terms.get(tuple(key), 0)

    def gamma_coefficients(self):
        """Coefficients in the basis prod x^(r/q) gamma_n(x) (poly vars: plain powers)."""
        A = self.alg
        out = {}
        for key, c in self.terms.items():
            m = 1
            parts = []
            for kind, d in zip(A.kinds, key):
                if kind == "pd":
                    n, r = divmod(d, A.q)
                    m *= gamma_multinomial(A.p, n)
                    parts.append((r, n))
                else:
                    parts.append((d, 0))
            v = c * m
            out[tuple(parts)] = v % A.char if A.char else v
        return out

    def __str__(self):
        A = self.alg
        items = sorted(self.gamma_coefficients().items(),
                       key=lambda kv: (sum(r + n * A.q for r, n in kv[0]), kv[0]))
        terms = []
        for parts, c in items:
            factors = []
            for (name, kind), (r, n) in zip(A.variables, parts):
                if kind == "pd":
                    if r:
                        factors.append(_pow_str(name, Fraction(r, A.q)))
                    if n == 1:
                        factors.append(name)
                    elif n:
                        factors.append(f"gamma_{n}({name})")
                elif r:
                    factors.append(_pow_str(name, Fraction(r, A.q)))
            mono = "*".join(factors)
            if A.char and c > A.char // 2 and A.char != 2:
                c = c - A.char
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                cs = str(c)
                if "/" in cs:
                    cs = f"({cs})"
                terms.append(f"{cs}*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += t if t.startswith("-") else "+" + t
        return out

    __repr__ = __str__


def _pow_str(name, e):
    if e == 1:
        return name
    if e.denominator == 1:
        return f"{name}^{e.numerator}"
    return f"{name}^({e.numerator}/{e.denominator})"


def pd_mul(a, b):
    return a * b


def gamma_expand(alg, name, n):
    return alg.gamma_expand(name, n)


class Hom:
    """Algebra map determined by variable images.

    ``images[v]`` is the image of v.  For fractional exponents the image of
    v^(1/q) is needed: pass it in ``roots`` or let it be derived (monomial
    images in any characteristic, termwise q-th roots in characteristic p).
    Divided powers of pd variables are sent to divided powers of the images.
    """

    def __init__(self, source, target, images=None, roots=None):
        if source.p != target.p:
            raise MixedRings("different primes")
        self.source, self.target = source, target
        images = dict(images or {})
        for name in source.names:
            if name not in images:
                if name in target.names:
                    images[name] = target.var(name)
                else:
                    raise UnsupportedRing(f"no image for variable {name!r}")
        self.images = images
        self.roots = dict(roots or {})
        self._vcache = {}
        self._kcache = {}

    def _root(self, name):
        r = self.roots.get(name)
        if r is None:
            r = self.roots[name] = q_root(self.images[name], self.source.q)
        return r

    def _var_image(self, i, d):
        hit = self._vcache.get((i, d))
        if hit is not None:
            return hit
        S, T = self.source, self.target
        name, kind = S.variables[i]
        img = self.images[name]
        if kind == "poly":
            out = img ** (d // S.q) if d % S.q == 0 else self._root(name) ** d
        else:
            pq = S.p * S.q
            a_num = d % pq
            n_hi = d // pq  # base-p digits of this give m_1, m_2, ...
            out = img ** (a_num // S.q) if a_num % S.q == 0 else self._root(name) ** a_num
            j = 1
            while n_hi:
                n_hi, m = divmod(n_hi, S.p)
                if m:
                    out = out * T.gamma_of(img, S.p ** j) ** m
                j += 1
        self._vcache[(i, d)] = out
        return out

    def image_of_key(self, key):
        hit = self._kcache.get(key)
        if hit is not None:
            return hit
        out = self.target.one()
        for i, d in enumerate(key):
            if d:
                out = out * self._var_image(i, d)
                if out.is_zero():
                    break
        self._kcache[key] = out
        return out

    def __call__(self, el):
        if el.alg != self.source:
            raise MixedRings("element is not in the source algebra")
        T = self.target
        out = T.zero()
        for key, c in el.terms.items():
            img = self.image_of_key(key)
            if not img.is_zero():
                out = out + img * T.coerce(c)
        return out


def q_root(f, q):
    """An element r with r^q = f, computed termwise."""
    A = f.alg
    out = {}
    for key, c in f.terms.items():
        new = []
        for kind, d in zip(A.kinds, key):
            if d % q:
                raise UnsupportedRing(f"q-th root of {f} needs finer exponents")
            if kind == "pd" and d >= A.p * A.q:
                raise UnsupportedRing("q-th root of a divided power")
            new.append(d // q)
        if A.char == 0 and len(f.terms) > 1:
            raise UnsupportedRing("q-th root of a sum in characteristic 0")
        if A.char == 0 and c not in (1, -1):
            raise UnsupportedRing(f"q-th root of the coefficient {c}")
        if A.char == 0 and c == -1 and q % 2 == 0:
            raise UnsupportedRing("even root of -1")
        # keys with digit m_0 only have w = 1 so the root is a plain power
        out[tuple(new)] = c
    return PDElement(A, out)


def substitute(el, target, images, roots=None):
    """Image of el under the algebra map given by variable images."""
    return Hom(el.alg, target, images, roots)(el)


class _PDOps:
    """Adapter exposing a PD algebra to the expression parser."""

    def __init__(self, alg):
        self.alg = alg

    def _var_check(self, name):
        if name not in self.alg.names:
            raise KeyError(name)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, k):
        return a ** k

    def from_int(self, n):
        return self.alg.scalar(n)

    def div_int(self, a, d):
        return a * self.alg.scalar(Fraction(1, d))

    def generator_raw(self, name):
        self._var_check(name)
        return self.alg.var(name)

    def generator_power_raw(self, name, e):
        self._var_check(name)
        return self.alg.x_power(name, e)

    def call(self, fname, arg):
        m = re.fullmatch(r"gamma_(\d+)", fname)
        if not m:
            raise KeyError(fname)
        return self.alg.gamma_of(arg, int(m.group(1)))


def parse_pd(text, alg):
    """Element of ``alg`` from gamma notation, e.g. ``2*gamma_2(x) + x^(1/2)``."""
    from .parsing import _Parser

    return _Parser(text, _PDOps(alg)).parse()
