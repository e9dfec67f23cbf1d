"""Text grammar for ring elements and ring shorthands.

Elements::

    expr     := term (('+' | '-') term)*
    term     := unary ('*' unary)*
    unary    := '-' unary | power
    power    := atom ('^' exponent)?
    exponent := INT | '(' INT ')' | '(' INT '/' INT ')'
    atom     := INT | NAME | '(' expr ')'

Fractional exponents are only allowed directly on a variable name.

Rings: ``Z``, ``Z/8``, ``F4``, ``F4[a,b]``, ``F2[x]/(x^2)``,
``F2[x^(1/4)]/(x^2)``, ``F3[t]/(t^3-1)`` or a JSON descriptor.
"""

import json
import re
from fractions import Fraction

from .arith import prime_power
from .errors import ParseError, UnsupportedRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()/":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, ch):
        kind, val, pos = self.take()
        if kind != "op" or val != ch:
            raise ParseError(f"expected {ch!r}", self.text, pos)

    def fail(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.fail("trailing input")
        return v

    def expr(self):
        R = self.ring
        v = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            w = self.term()
            v = R.add(v, w) if op == "+" else R.sub(v, w)
        return v

    def term(self):
        R = self.ring
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op, pos = self.take()[1:]
            if op == "*":
                v = R.mul(v, self.unary())
                continue
            kind, d, dpos = self.take()
            if not hasattr(R, "div_int"):
                raise ParseError("division is not supported here", self.text, pos)
            if kind != "int" or d == 0:
                raise ParseError("expected a nonzero integer divisor", self.text, dpos)
            v = R.div_int(v, d)
        return v

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return self.ring.neg(self.unary())
        return self.power()

    def power(self):
        kind, val, pos = self.peek()
        if kind == "name":
            self.take()
            if (self.peek()[0] == "op" and self.peek()[1] == "("
                    and hasattr(self.ring, "call")):
                self.take()
                arg = self.expr()
                self.expect_op(")")
                try:
                    return self.postfix(self.ring.call(val, arg))
                except KeyError:
                    raise ParseError(f"unknown function {val!r}", self.text, pos) from None
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.take()
                e = self.exponent()
                try:
                    return self.ring.generator_power_raw(val, e)
                except KeyError:
                    raise ParseError(f"unknown symbol {val!r}", self.text, pos) from None
                except UnsupportedRing as exc:
                    raise ParseError(str(exc), self.text, pos) from None
            try:
                return self.ring.generator_raw(val)
            except KeyError:
                raise ParseError(f"unknown symbol {val!r}", self.text, pos) from None
        return self.postfix(self.atom())

    def postfix(self, base):
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            epos = self.peek()[2]
            e = self.exponent()
            if e.denominator != 1:
                raise ParseError("fractional exponent on a compound expression",
                                 self.text, epos)
            return self.ring.pow(base, int(e))
        return base

    def exponent(self):
        kind, val, pos = self.take()
        if kind == "int":
            return Fraction(val)
        if kind == "op" and val == "(":
            k1, num, p1 = self.take()
            if k1 != "int":
                raise ParseError("expected integer exponent", self.text, p1)
            den = 1
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                k2, den, p2 = self.take()
                if k2 != "int" or den == 0:
                    raise ParseError("expected positive denominator", self.text, p2)
            self.expect_op(")")
            return Fraction(num, den)
        raise ParseError("expected exponent", self.text, pos)

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return self.ring.from_int(val)
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        raise ParseError("expected a number, name, or '('", self.text, pos)


def parse_element(text, ring):
    """Parse ``text`` into a raw value of ``ring``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {text!r}")
    return _Parser(text, ring).parse()


_RING = re.compile(
    r"^\s*(?P<base>Z|Z/\d+|F\d+)\s*"
    r"(?:\[(?P<vars>[^\]]*)\])?\s*"
    r"(?:/\s*\((?P<rels>.*)\))?\s*$"
)
_VAR = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\^\s*\(\s*1\s*/\s*(\d+)\s*\))?\s*$")


def _base_ring(tok):
    from .rings import FiniteField, Integers, IntegersMod, PrimeField, default_modulus

    if tok == "Z":
        return Integers()
    if tok.startswith("Z/"):
        return IntegersMod(int(tok[2:]))
    q = int(tok[1:])
    pk = prime_power(q)
    if pk is None:
        raise UnsupportedRing(f"F{q}: {q} is not a prime power")
    p, k = pk
    if k == 1:
        return PrimeField(p)
    return FiniteField(p, default_modulus(q))


def parse_ring(text):
    """Build a ring from a shorthand string or a JSON descriptor."""
    from .rings import PolyQuotient, Quotient, ring_from_descriptor

    if isinstance(text, dict):
        return ring_from_descriptor(text)
    s = text.strip()
    if s.startswith("{"):
        try:
            return ring_from_descriptor(json.loads(s))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad ring descriptor: {exc.msg}", s, exc.pos) from None
    m = _RING.match(s)
    if not m:
        raise ParseError("unrecognized ring", s, 0)
    base = _base_ring(m.group("base"))
    if m.group("vars") is None:
        if m.group("rels"):
            raise ParseError("relations need variables", s, m.start("rels"))
        return base
    names, dens = [], []
    for part in m.group("vars").split(","):
        vm = _VAR.match(part)
        if not vm:
            raise ParseError(f"bad variable {part.strip()!r}", s, m.start("vars"))
        names.append(vm.group(1))
        dens.append(int(vm.group(2) or 1))
    p, K = None, 0
    if max(dens) > 1:
        pk = prime_power(max(dens))
        if pk is None or any(d != 1 and prime_power(d)[0] != pk[0] for d in dens):
            raise ParseError("exponent denominators must be powers of one prime",
                             s, m.start("vars"))
        p, K = pk
    rels = m.group("rels")
    if not rels:
        return PolyQuotient(base, names, p, K)
    free = PolyQuotient(base, names, p, K)
    bounds = {}
    nonmonomial = []
    for rel in _split_top(rels):
        raw = parse_element(rel, free)
        if len(raw) == 1 and raw[0][1] == base.one_raw:
            exps = raw[0][0]
            nz = [i for i, e in enumerate(exps) if e]
            if len(nz) == 1:
                bounds[names[nz[0]]] = Fraction(exps[nz[0]], free.den)
                continue
        nonmonomial.append(raw)
    if nonmonomial:
        if len(names) != 1 or len(nonmonomial) != 1 or bounds or K:
            raise UnsupportedRing(
                "only monomial relations or a single monic modulus are supported")
        raw = nonmonomial[0]
        deg = max(e[0] for e, _ in raw)
        coeffs = [base.zero_raw] * (deg + 1)
        for e, c in raw:
            coeffs[e[0]] = c
        return Quotient(base, [base.element(c) for c in coeffs], names[0])
    return PolyQuotient(base, names, p, K, bounds)


def _split_top(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [x for x in (q.strip() for q in parts) if x]
