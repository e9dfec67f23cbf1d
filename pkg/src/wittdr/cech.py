"""Graded Cech complex of the groupoid W x W => W (d = x p) in characteristic p.

Level 0 functions f(r) live in F_p[X_i], level 1 in F_p[Y_i, X_i] (m, r) and
level 2 in F_p[Y_i, Z_i, X_i] (m1, m2, r), with deg X_i = deg Y_i = deg Z_i = p^i.

    d0 f (m, r)       = f(r + p m) - f(r)
    d1 g (m1, m2, r)  = g(m2, r) - g(m1 + m2, r) + g(m1, r + p m2)

The differentials have integer coefficients, so the matrices are computed over
F_p; a larger coefficient ring only enters through the weight computations.
"""

from .endo import EndoElement, apply_endo
from .errors import CharMismatch, NoSolution, NotEigenclass, TruncationTooLarge
from .groupoid import GroupoidPoint
from .linalg import Eliminator, nullspace, solve
from .rings import IntegersMod, PolyQuotient, PrimeField, Quotient
from .witt import WittVector, teichmuller, times_p


def fp_coordinates(ring, raw):
    """Coordinates of a raw element of a finite F_p-algebra in its monomial basis."""
    if isinstance(ring, IntegersMod):
        return {(): raw} if raw else {}
    if isinstance(ring, Quotient):
        out = {}
        for k, c in enumerate(raw):
            for lab, v in fp_coordinates(ring.base, c).items():
                out[(k,) + lab] = v
        return out
    if isinstance(ring, PolyQuotient):
        out = {}
        for e, c in raw:
            for lab, v in fp_coordinates(ring.base, c).items():
                out[e + lab] = v
        return out
    raise CharMismatch(f"no F_p basis for {ring}")


def _monomials(weights, d):
    """Exponent vectors with sum e_i * weights[i] == d."""
    out = []

    def rec(i, left, acc):
        if i == len(weights):
            if left == 0:
                out.append(tuple(acc))
            return
        w = weights[i]
        for e in range(left // w + 1):
            acc.append(e)
            rec(i + 1, left - e * w, acc)
            acc.pop()

    rec(0, d, [])
    return out


class GradedCechComplex:
    def __init__(self, p, n_w, D, coefficient_ring=None):
        if n_w > 3 or n_w < 1:
            raise TruncationTooLarge(f"Witt level {n_w} outside 1..3")
        if D > p * p:
            raise TruncationTooLarge(f"degree bound {D} exceeds p^2 = {p * p}")
        C = coefficient_ring if coefficient_ring is not None else PrimeField(p)
        if C.characteristic() != p:
            raise CharMismatch(f"coefficient ring {C} does not have characteristic {p}")
        self.p, self.n_w, self.D = p, n_w, D
        # degrees >= p^n_w see the missing coordinate X_{n_w}
        self.exact = D < p ** n_w
        self.coefficient_ring = C
        self.F = PrimeField(p)
        self.Y = [f"Y{i}" for i in range(n_w)]
        self.Z = [f"Z{i}" for i in range(n_w)]
        self.X = [f"X{i}" for i in range(n_w)]
        self.weights = [p ** i for i in range(n_w)]
        self.ring = PolyQuotient(self.F, self.Y + self.Z + self.X)
        self._setup(self.ring)
        self._cache = {}

    # -- polynomial plumbing -----------------------------------------------------
    def _setup(self, P):
        p, n = self.p, self.n_w
        vec = lambda names: WittVector(P, p, [P.generator_raw(v) for v in names])
        self.vY, self.vZ, self.vX = vec(self.Y), vec(self.Z), vec(self.X)
        self.faces0 = {
            "target": (self.vX + times_p(self.vY)).coords,
        }
        self.faces1 = {
            "m2": (self.vZ.coords, self.vX.coords),
            "sum": ((self.vY + self.vZ).coords, self.vX.coords),
            "shift": (self.vY.coords, (self.vX + times_p(self.vZ)).coords),
        }
        self._zero_tail = (0,) * n

    def level_names(self, level):
        if level == 0:
            return self.X
        if level == 1:
            return self.Y + self.X
        return self.Y + self.Z + self.X

    def basis(self, level, d):
        key = ("basis", level, d)
        if key not in self._cache:
            k = {0: 1, 1: 2, 2: 3}[level]
            self._cache[key] = _monomials(self.weights * k, d)
        return self._cache[key]

    def embed(self, level, exps):
        """Exponent vector of a level-k monomial inside the big ring."""
        n = self.n_w
        z = (0,) * n
        if level == 0:
            return z + z + tuple(exps)
        if level == 1:
            return tuple(exps[:n]) + z + tuple(exps[n:])
        return tuple(exps)

    def d0_raw(self, exps):
        P = self.ring
        t = self.faces0["target"]
        img = P.one_raw
        for i, e in enumerate(exps):
            if e:
                img = P.mul(img, P.pow(t[i], e))
        base = P.monomial_raw(self.embed(0, exps))
        return P.sub(img, base)

    def d1_raw(self, exps):
        P = self.ring
        n = self.n_w
        ym, xr = exps[:n], exps[n:]
        out = P.zero_raw
        for name, sign in (("m2", 1), ("sum", -1), ("shift", 1)):
            m, r = self.faces1[name]
            term = P.one_raw
            for i, e in enumerate(ym):
                if e:
                    term = P.mul(term, P.pow(m[i], e))
            for i, e in enumerate(xr):
                if e:
                    term = P.mul(term, P.pow(r[i], e))
            out = P.add(out, term) if sign > 0 else P.sub(out, term)
        return out

    def apply_d1(self, raw):
        """d1 of an arbitrary level-1 polynomial (raw, in the big ring)."""
        P = self.ring
        n = self.n_w
        out = P.zero_raw
        for e, c in raw:
            if any(e[n:2 * n]):
                raise ValueError("not a level-1 polynomial")
            img = self._d1_cached(e[:n] + e[2 * n:])
            out = P.add(out, P.mul(P.from_base(c), img))
        return out

    def _d1_cached(self, exps):
        key = ("d1", exps)
        if key not in self._cache:
            self._cache[key] = self.d1_raw(exps)
        return self._cache[key]

    def _d0_cached(self, exps):
        key = ("d0", exps)
        if key not in self._cache:
            self._cache[key] = self.d0_raw(exps)
        return self._cache[key]

    @staticmethod
    def vector(raw):
        return {e: c for e, c in raw}

    def d0_columns(self, d):
        return [self.vector(self._d0_cached(e)) for e in self.basis(0, d)]

    def d1_columns(self, d):
        return [self.vector(self._d1_cached(e)) for e in self.basis(1, d)]

    # -- checks and cohomology -----------------------------------------------------
    def check_d_squared(self, d):
        for e in self.basis(0, d):
            if self.apply_d1(self._d0_cached(e)):
                return False
        return True

    def level1_raw(self, exps_level1, coeff=1):
        return self.ring.monomial_raw(self.embed(1, exps_level1), self.F.from_int(coeff))

    def combination(self, level, d, combo):
        P = self.ring
        out = P.zero_raw
        basis = self.basis(level, d)
        for i, c in combo.items():
            out = P.add(out, P.monomial_raw(self.embed(level, basis[i]), c))
        return out

    def cohomology(self, d):
        """{'H0': [raw], 'H1': [raw]} with H1 given by cocycle representatives."""
        key = ("H", d)
        if key in self._cache:
            return self._cache[key]
        p = self.p
        d0 = self.d0_columns(d)
        d1 = self.d1_columns(d)
        h0 = [self.combination(0, d, c) for c in nullspace(d0, p)]
        z1 = nullspace(d1, p)
        el = Eliminator(p)
        for i, col in enumerate(d0):
            el.add_column(("b", i), col)
        reps = []
        for j, combo in enumerate(z1):
            raw = self.combination(1, d, combo)
            if el.add_column(("z", j), self.vector(raw)) is None:
                reps.append(raw)
        out = {"H0": h0, "H1": reps, "B1rank": el.rank - len(reps),
               "Z1dim": len(z1)}
        self._cache[key] = out
        return out

    def betti(self, d):
        h = self.cohomology(d)
        return len(h["H0"]), len(h["H1"])

    def is_coboundary(self, raw, d):
        try:
            solve(self.d0_columns(d), self.vector(raw), self.p)
        except NoSolution:
            return False
        return True

    def fmt(self, raw):
        return self.ring.fmt(raw)

    # -- weights -------------------------------------------------------------------
    def pullback(self, raw, level, u, i=0):
        """Pull a level-0/1 polynomial back along the endomorphism (u, i).

        Returns a raw polynomial over PolyQuotient(u.ring, same variables).
        """
        C = u.ring
        PC = PolyQuotient(C, self.ring.variables)
        p = self.p
        vec = lambda names: WittVector(PC, p, [PC.generator_raw(v) for v in names])
        uu = WittVector(PC, p, [PC.from_base(c) for c in u.coords])
        endo = EndoElement(uu, i)
        pt = apply_endo(endo, GroupoidPoint(vec(self.Y), vec(self.X)))
        m, r = pt.m.coords, pt.r.coords
        n = self.n_w
        out = PC.zero_raw
        for e, c in raw:
            term = PC.from_base(C.from_int(c))
            for k, x in enumerate(e[:n]):
                if x:
                    if level == 0:
                        raise ValueError("level-0 polynomial involves Y")
                    term = PC.mul(term, PC.pow(m[k], x))
            if any(e[n:2 * n]):
                raise ValueError("pullback is defined on levels 0 and 1")
            for k, x in enumerate(e[2 * n:]):
                if x:
                    term = PC.mul(term, PC.pow(r[k], x))
            out = PC.add(out, term)
        return PC, out

    def _components(self, PC, raw):
        """Split a polynomial over C into F_p polynomials, one per C-basis label."""
        C = PC.base
        comps = {}
        for e, c in raw:
            for lab, v in fp_coordinates(C, c).items():
                comps.setdefault(lab, {})[e] = v % self.p
        return comps

    def _equivalent(self, PC, diff, level, d):
        comps = self._components(PC, diff)
        if level == 0:
            return not comps
        return all(self.is_coboundary(tuple(sorted(v.items())), d) for v in comps.values())

    def weight_of_class(self, raw, level, d, zeta):
        """w in Z/p with [zeta] acting on the class as zeta^w."""
        C = zeta.ring
        if C.characteristic() != self.p:
            raise CharMismatch("zeta must live in a characteristic-p ring")
        u = teichmuller(zeta, self.p, self.n_w)
        PC, img = self.pullback(raw, level, u)
        lifted = tuple((e, C.from_int(c)) for e, c in raw)
        hits = []
        for w in range(self.p):
            zw = PC.from_base(C.pow(zeta.raw, w))
            diff = PC.sub(img, PC.mul(zw, lifted))
            if self._equivalent(PC, diff, level, d):
                hits.append(w)
        if not hits:
            raise NotEigenclass(f"{self.fmt(raw)} is not a weight vector for {zeta}")
        if len(hits) > 1:
            raise ValueError(f"{zeta} does not separate weights (all of {hits} fit)")
        return hits[0]

    def acts_trivially(self, raw, level, d, u):
        """Whether (u, 0) fixes the class of raw modulo coboundaries."""
        C = u.ring
        PC, img = self.pullback(raw, level, u)
        lifted = tuple((e, C.from_int(c)) for e, c in raw)
        return self._equivalent(PC, PC.sub(img, lifted), level, d)

    def cup(self, f0, g1):
        """Product of a level-0 polynomial (pulled back along the source) with a level-1 one."""
        return self.ring.mul(f0, g1)


def build_complex(p, n_w, D, coefficient_ring=None):
    return GradedCechComplex(p, n_w, D, coefficient_ring)


def cohomology(cx, d):
    return cx.cohomology(d)


def weight_of_class(cx, raw, level, d, zeta):
    return cx.weight_of_class(raw, level, d, zeta)
