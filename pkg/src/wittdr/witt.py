"""Truncated p-typical Witt vectors W_n(R).

Structural polynomials are derived once per prime over Z from the ghost map
w_i = sum_{j<=i} p^j X_j^(p^(i-j)) and then specialised into any coefficient
ring.  A second, independent route (lift to a torsion-free ring, compute in
ghost coordinates, divide back exactly) serves as an oracle.
"""

import threading

from .arith import exact_div_p_power, is_prime
from .errors import (
    CapExceeded,
    CharMismatch,
    LevelMismatch,
    LevelTooSmall,
    MixedRings,
    OracleMismatch,
    UnsupportedRing,
)
from .rings import RingElement

MAX_LEVEL = 6
MAX_PRIME = 7

# -- integer polynomials: {exponent tuple: int} -------------------------------


def _padd(f, g, sign=1):
    h = dict(f)
    for e, c in g.items():
        v = h.get(e, 0) + sign * c
        if v:
            h[e] = v
        else:
            h.pop(e, None)
    return h


def _pmul(f, g):
    h = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            h[e] = h.get(e, 0) + c1 * c2
    return {e: c for e, c in h.items() if c}


def _ppow(f, k, nvars):
    result = {(0,) * nvars: 1}
    while k:
        if k & 1:
            result = _pmul(result, f)
        k >>= 1
        if k:
            f = _pmul(f, f)
    return result


def _pscale(f, c):
    return {e: c * v for e, v in f.items()} if c else {}


def _var(i, nvars):
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def _ghost_poly(p, i, offset, nvars):
    """w_i in the variables offset..offset+i."""
    out = {}
    for j in range(i + 1):
        out = _padd(out, _pscale(_ppow(_var(offset + j, nvars), p ** (i - j), nvars), p ** j))
    return out


class StructuralPolynomialCache:
    """Integral structural polynomials S, P, I, F for one prime, grown lazily.

    S_i, P_i use variables X_0..X_{L-1}, Y_0..Y_{L-1} (2L slots, L = MAX_LEVEL);
    I_i and F_i use X only.
    """

    def __init__(self, p):
        if not is_prime(p):
            raise UnsupportedRing(f"{p} is not prime")
        if p > MAX_PRIME:
            raise CapExceeded(f"prime {p} exceeds cap {MAX_PRIME}")
        self.p = p
        self.S, self.P, self.I, self.F = [], [], [], []
        self._lock = threading.Lock()
        self._compiled = {}

    @property
    def level(self):
        return len(self.S)

    def ensure(self, n):
        if n > MAX_LEVEL:
            raise CapExceeded(f"Witt level {n} exceeds cap {MAX_LEVEL}")
        with self._lock:
            while len(self.S) < n:
                self._extend()
            while len(self.F) < n - 1:
                self._extend_frobenius()
        return self

    def _solve(self, target, previous, i, nvars):
        p = self.p
        rest = dict(target)
        for j, Q in enumerate(previous):
            rest = _padd(rest, _pscale(_ppow(Q, p ** (i - j), nvars), p ** j), -1)
        return {e: exact_div_p_power(c, p, i) for e, c in rest.items()}

    def _extend(self):
        p, i, L = self.p, len(self.S), MAX_LEVEL
        nv = 2 * L
        wx = _ghost_poly(p, i, 0, nv)
        wy = _ghost_poly(p, i, L, nv)
        S = self._solve(_padd(wx, wy), self.S, i, nv)
        P = self._solve(_pmul(wx, wy), self.P, i, nv)
        I = self._solve(_pscale(_ghost_poly(p, i, 0, L), -1), self.I, i, L)
        self._check_homogeneous(S, i, joint=True)
        self._check_homogeneous(P, i, joint=False)
        self.S.append(S)
        self.P.append(P)
        self.I.append(I)

    def _extend_frobenius(self):
        p, i, L = self.p, len(self.F), MAX_LEVEL
        target = _ghost_poly(p, i + 1, 0, L)
        self.F.append(self._solve(target, self.F, i, L))

    def _check_homogeneous(self, poly, i, joint):
        p, L = self.p, MAX_LEVEL
        want = p ** i
        for e in poly:
            dx = sum(e[j] * p ** j for j in range(L))
            dy = sum(e[L + j] * p ** j for j in range(L))
            ok = (dx + dy == want) if joint else (dx == want and dy == want)
            if not ok:
                raise ArithmeticError(f"structural polynomial of level {i} not homogeneous")

    # -- specialisation into a ring -----------------------------------------
    def compiled(self, ring, kind, i):
        """Term list [(coeff_raw, ((slot, exp), ...)), ...] for ring evaluation."""
        key = (id(ring), kind, i)
        got = self._compiled.get(key)
        if got is not None and got[0] is ring:
            return got[1]
        poly = getattr(self, kind)[i]
        terms = []
        for e, c in poly.items():
            cr = ring.from_int(c)
            if ring.is_zero(cr):
                continue
            terms.append((cr, tuple((k, x) for k, x in enumerate(e) if x)))
        self._compiled[key] = (ring, terms)
        return terms


_CACHES = {}
_CACHES_LOCK = threading.Lock()


def build_structural_cache(p, n):
    """The shared cache for p, grown to level n."""
    with _CACHES_LOCK:
        cache = _CACHES.get(p)
        if cache is None:
            cache = _CACHES[p] = StructuralPolynomialCache(p)
    if n < 1:
        raise LevelTooSmall("Witt level must be at least 1")
    return cache.ensure(n)


def _evaluate(ring, terms, values):
    """Sum of c * prod values[slot]^exp, with per-call power memo."""
    powers = {}
    mul, add = ring.mul, ring.add
    total = ring.zero_raw
    for c, factors in terms:
        t = c
        for slot, x in factors:
            key = (slot, x)
            v = powers.get(key)
            if v is None:
                v = powers[key] = ring.pow(values[slot], x)
            t = mul(t, v)
        total = add(total, t)
    return total


# -- oracle toggle ------------------------------------------------------------

_ORACLE = {"mode": "none"}


def set_oracle(mode):
    """``none`` | ``ghost`` | ``enumerate``; ``ghost`` double-checks every op."""
    if mode not in ("none", "ghost", "enumerate"):
        raise ValueError(f"unknown oracle mode {mode!r}")
    _ORACLE["mode"] = mode


def oracle_mode():
    return _ORACLE["mode"]


# -- Witt vectors -------------------------------------------------------------


class WittVector:
    """Immutable element of W_n(R) with raw coordinates."""

    __slots__ = ("p", "n", "ring", "coords")

    def __init__(self, ring, p, coords):
        coords = tuple(coords)
        if not coords:
            raise LevelTooSmall("Witt level must be at least 1")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", len(coords))
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("WittVector is immutable")

    @classmethod
    def from_elements(cls, p, elements, ring=None):
        elements = list(elements)
        if ring is None:
            ring = next(e.ring for e in elements if isinstance(e, RingElement))
        raws = []
        for e in elements:
            if isinstance(e, RingElement):
                if e.ring != ring:
                    raise MixedRings("coordinates live in different rings")
                raws.append(e.raw)
            else:
                raws.append(ring(e).raw)
        return cls(ring, p, raws)

    @classmethod
    def zero(cls, ring, p, n):
        return cls(ring, p, (ring.zero_raw,) * n)

    @classmethod
    def one(cls, ring, p, n):
        return teichmuller(ring.one(), p, n)

    @classmethod
    def random(cls, ring, p, n, rng):
        return cls(ring, p, [ring.random_raw(rng) for _ in range(n)])

    def __getitem__(self, i):
        return RingElement(self.ring, self.coords[i])

    def elements(self):
        return [RingElement(self.ring, c) for c in self.coords]

    def _check(self, other):
        if not isinstance(other, WittVector):
            raise TypeError("expected a WittVector")
        if other.ring is not self.ring and other.ring != self.ring:
            raise MixedRings(f"{self.ring} vs {other.ring}")
        if other.p != self.p:
            raise MixedRings(f"primes {self.p} and {other.p}")
        if other.n != self.n:
            raise LevelMismatch(f"levels {self.n} and {other.n}")

    def __add__(self, other):
        return witt_arith(self, other, "add")

    def __sub__(self, other):
        return witt_arith(self, witt_arith(other, None, "neg"), "add")

    def __mul__(self, other):
        return witt_arith(self, other, "mul")

    def __neg__(self):
        return witt_arith(self, None, "neg")

    def __eq__(self, other):
        return (isinstance(other, WittVector) and self.p == other.p
                and self.coords == other.coords and self.ring == other.ring)

    def __hash__(self):
        return hash((self.p, self.coords))

    def is_zero(self):
        return all(self.ring.is_zero(c) for c in self.coords)

    def truncate(self, m):
        if m < 1 or m > self.n:
            raise LevelMismatch(f"cannot truncate level {self.n} to {m}")
        return WittVector(self.ring, self.p, self.coords[:m])

    def strings(self):
        return [self.ring.fmt(c) for c in self.coords]

    def __str__(self):
        return "(" + ", ".join(self.strings()) + ")"

    __repr__ = __str__


def _arith_poly(x, y, op):
    p, n, R = x.p, x.n, x.ring
    cache = build_structural_cache(p, n)
    L = MAX_LEVEL
    if op == "neg":
        values = dict(enumerate(x.coords))
        kind = "I"
    else:
        values = dict(enumerate(x.coords))
        values.update({L + j: c for j, c in enumerate(y.coords)})
        kind = "S" if op == "add" else "P"
    return WittVector(R, p, [_evaluate(R, cache.compiled(R, kind, i), values)
                             for i in range(n)])


def witt_arith(x, y, op):
    """Ring operation ``add`` | ``mul`` | ``neg`` (and ``sub``) on Witt vectors."""
    if op == "sub":
        return witt_arith(x, witt_arith(y, None, "neg"), "add")
    if op not in ("add", "mul", "neg"):
        raise ValueError(f"unknown Witt op {op!r}")
    if op != "neg":
        x._check(y)
    out = _arith_poly(x, y, op)
    if _ORACLE["mode"] == "ghost":
        check = ghost_route(x, y, op)
        if check.coords != out.coords:
            raise OracleMismatch(f"{op}: polynomial {out} vs ghost {check}")
    return out


def ghost(x):
    """Ghost components (w_0(x), ..., w_{n-1}(x)) in the base ring."""
    return [RingElement(x.ring, c) for c in _ghost_raw(x.ring, x.p, x.coords)]


def _ghost_raw(R, p, coords):
    out = []
    for i in range(len(coords)):
        acc = R.zero_raw
        for j in range(i + 1):
            acc = R.add(acc, R.scale(p ** j, R.pow(coords[j], p ** (i - j))))
        out.append(acc)
    return out


def _from_ghost_raw(L, p, ghosts):
    """Invert the ghost map over a p-torsion-free ring by exact division."""
    coords = []
    for i, w in enumerate(ghosts):
        rest = w
        for j, c in enumerate(coords):
            rest = L.sub(rest, L.scale(p ** j, L.pow(c, p ** (i - j))))
        coords.append(L.divide_integer_exact(rest, p ** i))
    return coords


def ghost_route(x, y, op):
    """Oracle: lift, compute in ghost coordinates, solve back, reduce."""
    R, p = x.ring, x.p
    L = R.lift()
    gx = _ghost_raw(L, p, [R.lift_raw(c) for c in x.coords])
    if op == "neg":
        g = [L.neg(a) for a in gx]
    else:
        gy = _ghost_raw(L, p, [R.lift_raw(c) for c in y.coords])
        f = L.add if op == "add" else L.mul
        g = [f(a, b) for a, b in zip(gx, gy)]
    coords = _from_ghost_raw(L, p, g)
    return WittVector(R, p, [R.reduce_from_lift(c) for c in coords])


def ghost_frobenius_route(x):
    R, p = x.ring, x.p
    L = R.lift()
    g = _ghost_raw(L, p, [R.lift_raw(c) for c in x.coords])
    coords = _from_ghost_raw(L, p, g[1:])
    return WittVector(R, p, [R.reduce_from_lift(c) for c in coords])


def frobenius(x, same_level=False):
    """Witt Frobenius.

    Default: the level-dropping map W_n -> W_{n-1} with w_i(Fx) = w_{i+1}(x).
    ``same_level=True``: coordinatewise p-th power, only over a char-p ring.
    """
    if same_level:
        return frobenius_char_p(x)
    if x.n < 2:
        raise LevelTooSmall("level-dropping Frobenius needs n >= 2")
    cache = build_structural_cache(x.p, x.n)
    R = x.ring
    values = dict(enumerate(x.coords))
    out = WittVector(R, x.p, [_evaluate(R, cache.compiled(R, "F", i), values)
                              for i in range(x.n - 1)])
    if _ORACLE["mode"] == "ghost":
        check = ghost_frobenius_route(x)
        if check.coords != out.coords:
            raise OracleMismatch(f"F: polynomial {out} vs ghost {check}")
    return out


def frobenius_char_p(x):
    R = x.ring
    if R.characteristic() != x.p:
        raise CharMismatch(f"same-level Frobenius needs characteristic {x.p}, got {R}")
    return WittVector(R, x.p, [R.pow(c, x.p) for c in x.coords])


def frobenius_power(x, i):
    """i-fold same-level char-p Frobenius."""
    for _ in range(i):
        x = frobenius_char_p(x)
    return x


def verschiebung(x):
    return WittVector(x.ring, x.p, (x.ring.zero_raw,) + x.coords[:-1])


def teichmuller(a, p, n):
    R = a.ring
    return WittVector(R, p, (a.raw,) + (R.zero_raw,) * (n - 1))


def times_p(x):
    """p * x as a p-fold Witt sum."""
    acc = x
    for _ in range(x.p - 1):
        acc = witt_arith(acc, x, "add")
    return acc


def integer_vector(k, ring, p, n):
    """k * 1 in W_n(ring), built from Witt sums of 1 (k >= 0)."""
    one = WittVector.one(ring, p, n)
    acc = WittVector.zero(ring, p, n)
    base = one
    while k:
        if k & 1:
            acc = acc + base
        k >>= 1
        if k:
            base = base + base
    return acc


def p_power_vector(e, ring, p, n):
    """p^e in W_n(ring) via repeated multiplication by p."""
    x = WittVector.one(ring, p, n)
    for _ in range(e):
        x = times_p(x)
    return x


def all_vectors(ring, p, n, cap=None):
    """Iterate every element of W_n(ring) for a finite ring."""
    import itertools

    from .errors import RingTooLarge

    size = ring.size()
    if size is None:
        raise RingTooLarge(f"{ring} is infinite")
    if cap is not None and size ** n > cap:
        raise RingTooLarge(f"|W_{n}({ring})| = {size ** n} exceeds cap {cap}")
    elems = list(ring.elements_raw())
    for coords in itertools.product(elems, repeat=n):
        yield WittVector(ring, p, coords)


def parse_vector(data, ring, p, n=None):
    """Witt vector from a list of ints/strings (JSON form)."""
    from .errors import ParseError

    if not isinstance(data, list) or not data:
        raise ParseError(f"expected a non-empty list of coordinates, got {data!r}")
    if n is not None and len(data) != n:
        raise LevelMismatch(f"expected {n} coordinates, got {len(data)}")
    return WittVector.from_elements(p, [ring(c) for c in data], ring)


def vector_to_json(x):
    return [element_to_json(RingElement(x.ring, c)) for c in x.coords]


def element_to_json(a):
    s = str(a)
    try:
        return int(s)
    except ValueError:
        return s
