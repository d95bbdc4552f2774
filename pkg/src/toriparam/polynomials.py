"""Sparse multivariate polynomials with exact rational coefficients.

Terms are kept in a map from exponent tuples to nonzero Fractions; the
canonical term order is graded lexicographic.  Ring arithmetic, evaluation
and the text grammar are implemented here; multivariate gcd and univariate
factorization are delegated to sympy behind this module's normalization
conventions (gcd has content 1 and positive leading coefficient, factors are
monic, gcd(0, ..., 0) = 0).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import sympy

from .errors import (NotUnivariate, ParseError, VariableCountMismatch,
                     ZeroPolynomial)

Exponents = tuple[int, ...]


def _grlex_key(e: Exponents) -> tuple:
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables over the rationals."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: dict[Exponents, Fraction] | None = None):
        if nvars < 1:
            raise VariableCountMismatch("polynomials need at least one variable")
        clean: dict[Exponents, Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise VariableCountMismatch(
                    f"exponent tuple {e} does not have {nvars} entries")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            c = Fraction(c)
            if c != 0:
                clean[tuple(int(x) for x in e)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "MultiPoly":
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exponents: Sequence[int], coeff=1) -> "MultiPoly":
        return cls(nvars, {tuple(exponents): Fraction(coeff)})

    # -- basic queries -----------------------------------------------------

    def terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]),
                      reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self._terms[max(self._terms, key=_grlex_key)]

    def used_variables(self) -> tuple[int, ...]:
        used = set()
        for e in self._terms:
            for i, x in enumerate(e):
                if x > 0:
                    used.add(i)
        return tuple(sorted(used))

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    # -- equality / hashing -------------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, MultiPoly) and self.nvars == other.nvars
                and self._terms == other._terms)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {render(self)!r})"

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise VariableCountMismatch(
                f"{self.nvars} variables vs {other.nvars}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, out)

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        return MultiPoly(self.nvars, {e: c * v for e, v in self._terms.items()})

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise VariableCountMismatch(
                f"point has {len(point)} coordinates, need {self.nvars}")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total


def normalized(p: MultiPoly) -> MultiPoly:
    """Scale to content 1 and positive graded-lex leading coefficient."""
    if p.is_zero():
        return p
    coeffs = list(p._terms.values())
    num_gcd = 0
    den_lcm = 1
    for c in coeffs:
        num_gcd = sympy.igcd(num_gcd, abs(c.numerator))
        den_lcm = sympy.ilcm(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    q = p.scale(1 / content)
    if q.leading_coefficient() < 0:
        q = -q
    return q


def try_divide(p: MultiPoly, d: MultiPoly) -> Optional[MultiPoly]:
    """Exact quotient p/d, or None when d does not divide p."""
    p._check(d)
    if d.is_zero():
        return None
    lt_d = max(d._terms, key=_grlex_key)
    lc_d = d._terms[lt_d]
    quotient: dict[Exponents, Fraction] = {}
    rem = p
    while not rem.is_zero():
        lt_r = max(rem._terms, key=_grlex_key)
        qe = tuple(a - b for a, b in zip(lt_r, lt_d))
        if any(x < 0 for x in qe):
            return None
        qc = rem._terms[lt_r] / lc_d
        quotient[qe] = qc
        rem = rem - MultiPoly.monomial(p.nvars, qe, qc) * d
    return MultiPoly(p.nvars, quotient)


# -- sympy bridge ------------------------------------------------------------

def _sympy_symbols(n: int):
    return sympy.symbols(f"v_0:{n}")


def _to_sympy(p: MultiPoly):
    syms = _sympy_symbols(p.nvars)
    d = {e: sympy.Rational(c.numerator, c.denominator)
         for e, c in p._terms.items()}
    if not d:
        return sympy.Poly(0, *syms, domain="QQ")
    return sympy.Poly.from_dict(d, *syms, domain="QQ")

def _from_sympy(sp, nvars: int) -> MultiPoly:
    terms = {}
    for e, c in sp.terms():
        c = sympy.Rational(c)
        terms[tuple(int(x) for x in e)] = Fraction(int(c.p), int(c.q))
    return MultiPoly(nvars, terms)


def gcd_multi(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """gcd normalized to content 1 and positive leading coefficient.

    Follows the convention gcd(0, 0) = 0; gcd(p, 0) is the normalized p.
    """
    p._check(q)
    if p.is_zero() and q.is_zero():
        return MultiPoly.zero(p.nvars)
    if p.is_zero():
        return normalized(q)
    if q.is_zero():
        return normalized(p)
    g = _to_sympy(p).gcd(_to_sympy(q))
    return normalized(_from_sympy(g, p.nvars))


def gcd_many(polys: Sequence[MultiPoly]) -> MultiPoly:
    """Fold of gcd_multi over a nonempty sequence."""
    if not polys:
        raise ValueError("gcd of an empty sequence")
    g = MultiPoly.zero(polys[0].nvars)
    for p in polys:
        g = gcd_multi(g, p)
        if g.is_constant() and not g.is_zero():
            break
    return g


class Factorization(NamedTuple):
    unit: Fraction
    factors: tuple[tuple[MultiPoly, int], ...]

    def expand(self, nvars: int) -> MultiPoly:
        out = MultiPoly.constant(nvars, self.unit)
        for f, k in self.factors:
            out = out * f ** k
        return out


def factor_univariate(p: MultiPoly) -> Factorization:
    """Complete factorization of a univariate polynomial over the rationals.

    Returns monic irreducible factors with multiplicities and a rational
    unit whose product reconstructs p exactly.  Constants factor as the
    unit alone.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    used = p.used_variables()
    if len(used) > 1:
        raise NotUnivariate(f"polynomial uses variables {used}")
    if not used:
        return Factorization(p.constant_value(), ())
    var = used[0]
    x = sympy.Symbol("x")
    d = {(e[var],): sympy.Rational(c.numerator, c.denominator)
         for e, c in p._terms.items()}
    sp = sympy.Poly.from_dict(d, x, domain="QQ")
    coeff, factor_list = sp.factor_list()
    coeff = sympy.Rational(coeff)
    unit = Fraction(int(coeff.p), int(coeff.q))
    factors = []
    for f, mult in factor_list:
        lc = sympy.Rational(f.LC())
        monic = f.monic()
        unit *= Fraction(int(lc.p), int(lc.q)) ** mult
        terms = {}
        for (e,), c in monic.terms():
            exp = [0] * p.nvars
            exp[var] = int(e)
            c = sympy.Rational(c)
            terms[tuple(exp)] = Fraction(int(c.p), int(c.q))
        factors.append((MultiPoly(p.nvars, terms), int(mult)))
    factors.sort(key=lambda fk: sorted(fk[0]._terms.items(),
                                       key=lambda t: _grlex_key(t[0])))
    return Factorization(unit, tuple(factors))


# -- text grammar --------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[xy]\d+|u|v)"
                       r"|(?P<op>[-+*^()/]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}",
                             len(text) - len(stripped))
        if m.lastgroup:
            tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _var_index(name: str, pos: int) -> tuple[str, int]:
    if name == "u":
        return "y", 0
    if name == "v":
        return "y", 1
    kind, idx = name[0], int(name[1:])
    if idx < 1:
        raise ParseError(f"variable index must start at 1: {name}", pos)
    return kind, idx - 1


class _Parser:
    def __init__(self, text: str, nvars: Optional[int], kind: Optional[str]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.kind = kind
        self.max_index = -1

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> dict[Exponents, Fraction]:
        terms = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return terms

    # Terms are collected as {exponent dict} -> coeff over a variable-index
    # key space; widths are fixed once parsing is done.
    def expr(self):
        terms = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                sign = 1 if val == "+" else -1
                for e, c in rhs.items():
                    terms[e] = terms.get(e, Fraction(0)) + sign * c
            else:
                return terms

    def term(self):
        terms = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                terms = _mul_terms(terms, self.unary())
            else:
                return terms

    def unary(self):
        sign = 1
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                if val == "-":
                    sign = -sign
            else:
                break
        terms = self.power()
        if sign == -1:
            terms = {e: -c for e, c in terms.items()}
        return terms

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer", pos)
            return _pow_terms(base, int(val))
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            num = int(val)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, pos3 = self.take()
                if k3 != "int":
                    raise ParseError("denominator must be an integer", pos3)
                den = int(v3)
                if den == 0:
                    raise ParseError("zero denominator", pos3)
                return {(): Fraction(num, den)}
            return {(): Fraction(num)}
        if kind == "var":
            vkind, idx = _var_index(val, pos)
            if self.kind is None:
                self.kind = vkind
            elif self.kind != vkind:
                raise ParseError(
                    f"variable {val!r} mixes kinds ({vkind!r} vs {self.kind!r})", pos)
            if self.nvars is not None and idx >= self.nvars:
                raise ParseError(
                    f"variable {val!r} exceeds the declared count {self.nvars}", pos)
            self.max_index = max(self.max_index, idx)
            return {((idx, 1),): Fraction(1)}
        if kind == "op" and val == "(":
            terms = self.expr()
            self.expect_op(")")
            return terms
        raise ParseError(f"unexpected token {val!r}", pos)


def _mul_terms(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            merged = {}
            for i, k in e1:
                merged[i] = merged.get(i, 0) + k
            for i, k in e2:
                merged[i] = merged.get(i, 0) + k
            key = tuple(sorted(merged.items()))
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return out


def _pow_terms(base, k):
    result = {(): Fraction(1)}
    while k:
        if k & 1:
            result = _mul_terms(result, base)
        base = _mul_terms(base, base)
        k >>= 1
    return result


def parse(text: str, nvars: Optional[int] = None,
          kind: Optional[str] = None) -> MultiPoly:
    """Parse polynomial text.

    Variables are ``x1..xN`` (facet variables) or ``y1..yD`` (parameters,
    with ``u``/``v`` accepted as aliases for ``y1``/``y2``); literals are
    integers or ``p/q`` rationals; operators are ``+ - * ^`` with
    parentheses.  When ``nvars`` is omitted the variable count is inferred
    from the largest index used (at least 1).
    """
    parser = _Parser(text, nvars, kind)
    sparse = parser.parse()
    width = nvars if nvars is not None else max(parser.max_index + 1, 1)
    terms: dict[Exponents, Fraction] = {}
    for e, c in sparse.items():
        full = [0] * width
        for i, k in e:
            full[i] = k
        key = tuple(full)
        terms[key] = terms.get(key, Fraction(0)) + c
    return MultiPoly(width, terms)


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def variable_names(nvars: int, kind: str) -> list[str]:
    if kind == "y" and nvars <= 2:
        return ["u", "v"][:nvars]
    return [f"{kind}{i + 1}" for i in range(nvars)]


def render(p: MultiPoly, kind: str = "x") -> str:
    """Deterministic text form: descending graded-lex, canonical spacing."""
    if p.is_zero():
        return "0"
    names = variable_names(p.nvars, kind)
    pieces = []
    for e, c in p.terms():
        vars_part = "*".join(
            f"{names[i]}^{k}" if k > 1 else names[i]
            for i, k in enumerate(e) if k > 0)
        mag = abs(c)
        if not vars_part:
            body = _coeff_str(mag)
        elif mag == 1:
            body = vars_part
        else:
            body = f"{_coeff_str(mag)}*{vars_part}"
        pieces.append(("-" if c < 0 else "+", body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def parse_tuple(text: str, nvars: Optional[int] = None,
                kind: str = "y") -> tuple[MultiPoly, ...]:
    """Parse a parenthesized comma-separated tuple of polynomials.

    All entries share one variable count: the declared ``nvars`` or the
    largest index used across the whole tuple.
    """
    stripped = text.strip()
    if stripped.startswith("(") and stripped.endswith(")"):
        stripped = stripped[1:-1]
    entries = _split_top_level(stripped)
    if nvars is None:
        width = 1
        for entry in entries:
            q = parse(entry, None, kind)
            width = max(width, q.nvars)
    else:
        width = nvars
    return tuple(parse(entry, width, kind) for entry in entries)


def _split_top_level(text: str) -> list[str]:
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced parenthesis", 0)
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    if not parts or any(not s.strip() for s in parts):
        raise ParseError("empty tuple entry", 0)
    return parts
