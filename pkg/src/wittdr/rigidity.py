"""Rigidity computations in divided-power algebras.

* :func:`pin_down_coefficient` -- the coefficient c with f(gamma_p(x)) = c gamma_{p^(N+1)}(x)
  forced by compatibility with x -> y + z, for f(x) = x^(p^N).
* :func:`splitting_section_solver` -- sections G -> M of the first conjugate
  piece, cut out by functoriality constraints imposed as F_p-linear equations.
* :func:`frobenius_difference_poly` and :func:`lemma59_kernel`.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .arith import exact_div_p_power, factorial_ratio, is_prime
from .errors import CapExceeded, Inconsistent, NonUnique, NoSolution, UnsupportedRing
from .linalg import solve
from .pd import Hom, PDAlgebra

# -- coefficient pin-down ------------------------------------------------------


def pin_down_coefficient(p, N):
    if not is_prime(p) or p > 5 or N > 2 or N < 0:
        raise CapExceeded("pin-down is limited to p <= 5 and N <= 2")
    top = p ** (N + 1)
    X = PDAlgebra(p, ["x"], K=0, d_max=top + 1)
    YZ = PDAlgebra(p, ["y", "z"], K=0, d_max=top + 1)
    y, z = YZ.var("y"), YZ.var("z")
    # f on the one-variable algebra and on the tensor square (away from gamma_p)
    f_y = Hom(YZ, YZ, {"y": y ** (p ** N), "z": z ** (p ** N)})
    # coefficient basis element gamma_{p^N}(y) gamma_{p^N (p-1)}(z)
    target = ((0, p ** N), (0, p ** N * (p - 1)))

    def coeff(el):
        return Fraction(el.gamma_coefficients().get(target, 0))

    mixed = YZ.zero()
    for j in range(1, p):
        mixed = mixed + f_y(YZ.gamma("y", j) * YZ.gamma("z", p - j))
    unknown_side = YZ.gamma("y", top) + YZ.gamma("z", top)
    rhs = YZ.gamma_of(y + z, top)
    a = coeff(unknown_side) - coeff(rhs)
    if a == 0:
        raise Inconsistent("the functoriality equation does not involve c")
    c = -coeff(mixed) / a
    if c.denominator != 1:
        raise Inconsistent(f"functoriality gives a non-integral c = {c}")
    c = int(c)
    closed = factorial_ratio([p ** N, p ** N * (p - 1)], [p - 1])
    oracle_el = Hom(X, X, {"x": X.var("x") ** (p ** N)})(X.gamma("x", p))
    oracle = oracle_el.gamma_coefficients().get(((0, top),), 0)
    oracle = int(Fraction(oracle))
    if closed % p != oracle % p:
        raise Inconsistent(f"closed form {closed} and oracle {oracle} differ mod {p}")
    return {
        "p": p,
        "N": N,
        "functoriality": c,
        "residue": c % p,
        "closed_form": closed,
        "closed_form_residue": closed % p,
        "oracle": oracle,
        "oracle_residue": oracle % p,
        "agree": c % p == closed % p == oracle % p,
    }


# -- affine solution spaces ----------------------------------------------------


class AffineSpace:
    """particular + span(basis) inside a char-p PD algebra."""

    def __init__(self, alg, particular, basis):
        self.alg = alg
        self.particular = particular
        self.basis = list(basis)

    @classmethod
    def full(cls, alg, keys):
        return cls(alg, alg.zero(), [alg.monomial(k) for k in keys])

    @property
    def dimension(self):
        return len(self.basis)

    def impose(self, linear_map, value):
        """Restrict to {f : linear_map(f) = value}."""
        p = self.alg.char
        cols = [linear_map(b).terms for b in self.basis]
        rhs = (value - linear_map(self.particular)).terms
        lam, null = solve(cols, rhs, p)
        part = self.particular
        for i, c in lam.items():
            part = part + self.basis[i] * c
        basis = []
        for combo in null:
            v = self.alg.zero()
            for i, c in combo.items():
                v = v + self.basis[i] * c
            basis.append(v)
        return AffineSpace(self.alg, part, basis)


@dataclass
class SectionReport:
    p: int
    step: int
    dimension: int
    solution: object
    expected: object
    constraints: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def unique(self):
        return self.dimension == 0

    @property
    def matches(self):
        return self.unique and self.solution == self.expected

    def require_unique(self):
        if not self.unique:
            raise NonUnique(f"step {self.step}, p={self.p}: {self.dimension}-dimensional family")
        return self.solution

    def to_json(self):
        out = {
            "p": self.p,
            "step": self.step,
            "solutionDimension": self.dimension,
            "unique": self.unique,
            "section": str(self.solution),
            "expected": str(self.expected),
            "matchesExpected": self.matches,
            "constraints": self.constraints,
        }
        out.update(self.extra)
        return out


def _impose(space, name, lmap, value, log):
    try:
        new = space.impose(lmap, value)
    except NoSolution as exc:
        raise NoSolution(f"constraint {name!r}: {exc}") from None
    log.append({"constraint": name, "dimensionBefore": space.dimension,
                "dimensionAfter": new.dimension})
    return new


def _projection(alg, var, threshold):
    """Keep terms whose ``var`` numerator is >= threshold (the G-part)."""
    i = alg.index(var)

    def proj(f):
        return alg.element({k: c for k, c in f.terms.items() if k[i] >= threshold})

    return proj


def _scaling(alg):
    """f -> f(t x) - t^p f(x) with every graded variable scaled by t."""
    names = list(alg.variables) + [("t", "poly")]
    weights = dict(zip(alg.names, alg.weights))
    weights["t"] = 0
    T = PDAlgebra(alg.p, names, alg.K, alg.char, alg.d_max, weights)
    t = T.var("t")
    images = {n: T.var(n) * t for n, w in zip(alg.names, alg.weights) if w}
    scaled = Hom(alg, T, images)
    incl = Hom(alg, T, {})
    tp = t ** alg.p

    def lmap(f):
        return scaled(f) - incl(f) * tp

    return lmap, T


def _mixed_sum(alg, xs, p):
    """sum over i_1+..+i_n = p with every i_k < p of prod x_k^(i_k)/i_k!."""
    out = alg.zero()

    def rec(k, left, acc):
        nonlocal out
        if k == len(xs) - 1:
            if left < p:
                term = acc * (xs[k] ** left) * Fraction(1, factorial(left))
                out = out + term
            return
        for i in range(min(left, p - 1) + 1):
            rec(k + 1, left - i, acc * (xs[k] ** i) * Fraction(1, factorial(i)))

    rec(0, p, alg.one())
    return out


def _check_args(p, K):
    if p not in (2, 3, 5):
        raise UnsupportedRing("the splitting solver supports p in {2, 3, 5}")
    if K < 1:
        raise UnsupportedRing("truncation K must be at least 1")


def step1(p, K=2):
    _check_args(p, K)
    D = PDAlgebra(p, ["x"], K, char=p, d_max=2 * p)
    space = AffineSpace.full(D, D.keys_below())
    log = []
    g = D.gamma("x", p)
    proj = _projection(D, "x", p * D.q)
    space = _impose(space, "lifts the generator of G", proj, g, log)
    lmap, T = _scaling(D)
    space = _impose(space, "scaling x -> t x", lmap, T.zero(), log)
    return SectionReport(p, 1, space.dimension, space.particular, g, log)


def _sum_gamma(T, names, p, section):
    """Image of the one-variable section under x -> each name, summed."""
    out = T.zero()
    for n in names:
        out = out + Hom(section.alg, T, {"x": T.var(n)})(section)
    return out


def step2(p, K=2, n=3, step1_solution=None):
    """R_n with coordinates x_1..x_{n-1} (poly) and s = x_1 + ... + x_n (pd)."""
    _check_args(p, K)
    if n < 2:
        raise UnsupportedRing("step 2 needs at least two variables")
    if step1_solution is None:
        step1_solution = step1(p, K).require_unique()
    polys = [f"x{i}" for i in range(1, n)]
    D = PDAlgebra(p, [(v, "poly") for v in polys] + ["s"], K, char=p, d_max=2 * p)
    q = D.q
    s = D.var("s")
    x_last = s - sum((D.var(v) for v in polys), D.zero())
    x_last_root = D.x_power("s", Fraction(1, q)) - sum(
        (D.x_power(v, Fraction(1, q)) for v in polys), D.zero())
    xs = [D.var(v) for v in polys] + [x_last]
    g = D.gamma("s", p)
    expected = g - _mixed_sum(D, xs, p)

    space = AffineSpace.full(D, D.keys_below())
    log = []
    space = _impose(space, "lifts the generator of G", _projection(D, "s", p * q), g, log)
    lmap, T = _scaling(D)
    space = _impose(space, "scaling x_i -> t x_i", lmap, T.zero(), log)

    ys = [f"y{i}" for i in range(1, n + 1)]
    E = PDAlgebra(p, ys, K, char=p, d_max=2 * p)
    ysum = sum((E.var(v) for v in ys), E.zero())
    phi = Hom(D, E, {**{v: E.var(y) for v, y in zip(polys, ys)}, "s": ysum})
    space = _impose(space, "map to the n-fold tensor product", phi,
                    _sum_gamma(E, ys, p, step1_solution), log)

    def perm_map(sigma):
        """sigma permutes x_1..x_n; returns f -> sigma(f) - f on D."""
        images, roots = {}, {}
        for i, v in enumerate(polys):
            j = sigma[i]
            if j == n - 1:
                images[v], roots[v] = x_last, x_last_root
            else:
                images[v] = D.var(polys[j])
        h = Hom(D, D, images, roots)
        return lambda f: h(f) - f

    for a in range(n):
        for b in range(a + 1, n):
            if a == n - 1:
                continue
            sigma = list(range(n))
            sigma[a], sigma[b] = sigma[b], sigma[a]
            space = _impose(space, f"swap x{a + 1} <-> x{b + 1}", perm_map(sigma),
                            D.zero(), log)
    report = SectionReport(p, 2, space.dimension, space.particular, expected, log)
    report.extra["variables"] = n
    if n == 3 and space.dimension == 0:
        report.extra["pushedToTwoVariables"] = _push_to_two(p, K, D, space.particular)
    return report


def _two_variable_algebra(p, K):
    return PDAlgebra(p, [("x1", "poly"), "s"], K, char=p, d_max=2 * p)


def _two_variable_expected(D2, p):
    x1 = D2.var("x1")
    return D2.gamma("s", p) - _mixed_sum(D2, [x1, D2.var("s") - x1], p)


def _push_to_two(p, K, D3, f):
    """Push a three-variable section along x3 -> 0."""
    D2 = _two_variable_algebra(p, K)
    q = D2.q
    x2 = D2.var("s") - D2.var("x1")
    x2_root = D2.x_power("s", Fraction(1, q)) - D2.x_power("x1", Fraction(1, q))
    h = Hom(D3, D2, {"x1": D2.var("x1"), "x2": x2, "s": D2.var("s")}, {"x2": x2_root})
    f2 = h(f)
    expected = _two_variable_expected(D2, p)
    return {"section": str(f2), "matchesExpected": f2 == expected}


def teichmuller_defect(p):
    """Coefficients e_i with x1 + x2 = (x1^(1/p) + x2^(1/p))^p + p sum e_i x1^(i/p) x2^((p-i)/p)."""
    return {i: exact_div_p_power(-comb(p, i), p, 1) for i in range(1, p)}


def step3(p, K=2, step2_solution=None):
    """R' = W_2[x, y]/(x + p y): x pd, y poly."""
    _check_args(p, K)
    D = PDAlgebra(p, ["x", ("y", "poly")], K, char=p, d_max=2 * p)
    q = D.q
    g = D.gamma("x", p)
    expected = g + D.x_power("y", p) * Fraction(1, factorial(p - 1))

    space = AffineSpace.full(D, D.keys_below())
    log = []
    space = _impose(space, "lifts the generator of G", _projection(D, "x", p * q), g, log)
    lmap, T = _scaling(D)
    space = _impose(space, "scaling x, y -> t x, t y", lmap, T.zero(), log)

    # target: two-variable algebra with one extra level of roots
    D2 = PDAlgebra(p, [("x1", "poly"), "s"], K + 1, char=p, d_max=2 * p)
    Q = D2.q
    x1r = D2.x_power("x1", Fraction(1, Q))
    x2r = D2.x_power("s", Fraction(1, Q)) - x1r
    root_y = D2.zero()
    for i, e in teichmuller_defect(p).items():
        root_y = root_y + (x1r ** i) * (x2r ** (p - i)) * e
    y_image = root_y ** q
    chi = Hom(D, D2, {"x": D2.var("s"), "y": y_image}, {"y": root_y})
    if step2_solution is None:
        s2 = step2(p, K)
        s2.require_unique()
        D3 = s2.solution.alg
        x2 = D2.var("s") - D2.var("x1")
        x2_root = D2.x_power("s", Fraction(1, q)) - D2.x_power("x1", Fraction(1, q))
        push = Hom(D3, D2, {"x1": D2.var("x1"), "x2": x2, "s": D2.var("s")},
                   {"x2": x2_root})
        value = push(s2.solution)
    else:
        value = Hom(step2_solution.alg, D2, {})(step2_solution)
    space = _impose(space, "map R' -> R_2 through the Teichmuller defect", chi, value, log)
    return SectionReport(p, 3, space.dimension, space.particular, expected, log)


def splitting_section_solver(p, step, K=2):
    if step == 1:
        return step1(p, K)
    if step == 2:
        return step2(p, K)
    if step == 3:
        return step3(p, K)
    raise ValueError(f"unknown step {step!r}")


# -- Frobenius difference and the lemma ------------------------------------------


def frobenius_difference_poly(p):
    """F~ with (a - b)^p + b^p = a^p + p F~(a^p, b^p), written in a^(1/p), b^(1/p).

    Returns a dict with the char-0 element, the coefficient table c_i of
    a^(i/p) b^((p-i)/p), and any terms outside that shape.
    """
    if not is_prime(p) or p > 7:
        raise CapExceeded("frobenius_difference_poly supports primes p <= 7")
    # (a - b)^p + b^p - a^p over Z, exponent pairs (i, j) with i + j = p
    coeffs = {}
    for i in range(p + 1):
        c = comb(p, i) * (-1) ** (p - i)
        coeffs[(i, p - i)] = coeffs.get((i, p - i), 0) + c
    coeffs[(0, p)] += 1
    coeffs[(p, 0)] -= 1
    divided = {k: exact_div_p_power(c, p, 1) for k, c in coeffs.items() if c}
    A = PDAlgebra(p, [("a", "poly"), ("b", "poly")], K=1, char=0)
    el = A.element({k: Fraction(c) for k, c in divided.items()})
    table = {i: divided.get((i, p - i), 0) for i in range(1, p)}
    extra = {k: c for k, c in divided.items() if not (0 < k[0] < p)}
    return {
        "p": p,
        "element": el,
        "coefficients": table,
        "residues": {i: c % p for i, c in table.items()},
        "allNonzeroModP": all(c % p for c in table.values()),
        "extraTerms": extra,
    }


def lemma59_kernel(p, K=2, assert_odd=True):
    """Dimension of {H of degree p, no a^p term : H(a, F(a, b)) = 0 mod a^p}."""
    if assert_odd and p not in (3, 5):
        raise UnsupportedRing("the lemma is asserted only for p in {3, 5}")
    if not is_prime(p) or p > 7:
        raise CapExceeded("lemma59_kernel supports primes p <= 7")
    S = PDAlgebra(p, [("a", "poly"), ("b", "poly")], K, char=p)
    q = S.q
    keys = [(i, p * q - i) for i in range(p * q)]  # i < pq excludes a^p
    T = PDAlgebra(p, [("a", "poly"), ("b", "poly")], K + 1, char=p, bounds={"a": p})
    Q = T.q
    data = frobenius_difference_poly(p)
    root = T.zero()
    for (i, j), c in data["element"].terms.items():
        # a^(i/p) b^(j/p) -> its q-th root a^(i/(pq)) b^(j/(pq))
        root = root + T.monomial((i * Q // (p * q), j * Q // (p * q)), int(c) % p)
    F = root ** q
    h = Hom(S, T, {"a": T.var("a"), "b": F}, {"b": root})
    cols = [h(S.monomial(k)).terms for k in keys]
    _, null = solve(cols, {}, p)
    return len(null)
