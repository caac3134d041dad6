"""Sparse homogeneous polynomials, their text grammar, and projective points.

Grammar (whitespace insensitive)::

    poly   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*'? factor)*
    factor := NUMBER ['/' NUMBER] | 'x' INDEX ['^' NUMBER]

so ``x0*x1 - x2^2``, ``3/2 x0^2x1`` and ``-x0 + 2x1`` are all accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ConfigSyntaxError, ValidationError
from .rational import Place, RationalLike, abs_at, as_fraction

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """A nonzero homogeneous form in ``num_vars`` variables ``x0..x{num_vars-1}``.

    ``terms`` is kept sorted lexicographically descending on exponent vectors,
    so ``terms[0]`` holds the leading coefficient.
    """

    num_vars: int
    terms: tuple[tuple[Exponent, Fraction], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValidationError("a polynomial needs at least one variable")
        merged: dict[Exponent, Fraction] = {}
        for exp, coef in self.terms:
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.num_vars or any(e < 0 for e in exp):
                raise ValidationError(f"bad exponent vector {exp} for {self.num_vars} variables")
            merged[exp] = merged.get(exp, Fraction(0)) + as_fraction(coef)
        merged = {e: c for e, c in merged.items() if c != 0}
        if not merged:
            raise ValidationError("the zero polynomial does not define a divisor")
        degrees = {sum(e) for e in merged}
        if len(degrees) != 1:
            raise ValidationError(f"polynomial is not homogeneous (term degrees {sorted(degrees)})")
        if degrees.pop() < 1:
            raise ValidationError("a constant polynomial does not define a divisor")
        object.__setattr__(self, "terms", tuple(sorted(merged.items(), reverse=True)))

    @classmethod
    def from_dict(cls, num_vars: int, terms: Mapping[Exponent, RationalLike]) -> "HomogeneousPolynomial":
        return cls(num_vars, tuple((tuple(e), as_fraction(c)) for e, c in terms.items()))

    @classmethod
    def linear(cls, coeffs: Sequence[RationalLike]) -> "HomogeneousPolynomial":
        n = len(coeffs)
        terms = []
        for i, c in enumerate(coeffs):
            exp = [0] * n
            exp[i] = 1
            terms.append((tuple(exp), as_fraction(c)))
        return cls(n, tuple(terms))

    @property
    def degree(self) -> int:
        return sum(self.terms[0][0])

    @property
    def num_terms(self) -> int:
        return len(self.terms)

    @property
    def is_linear(self) -> bool:
        return self.degree == 1

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(c for _, c in self.terms)

    def linear_vector(self) -> tuple[Fraction, ...]:
        if not self.is_linear:
            raise ValidationError(f"{self} is not a linear form")
        vec = [Fraction(0)] * self.num_vars
        for exp, c in self.terms:
            vec[exp.index(1)] = c
        return tuple(vec)

    def primitive(self) -> "HomogeneousPolynomial":
        """Scale to coprime integer coefficients with a positive leading coefficient."""
        coeffs = self.coefficients()
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in coeffs]
        g = math.gcd(*ints)
        if ints[0] < 0:
            g = -g
        return HomogeneousPolynomial(self.num_vars, tuple(
            (exp, Fraction(v // g)) for (exp, _), v in zip(self.terms, ints)))

    def is_primitive(self) -> bool:
        return self == self.primitive()

    def evaluate(self, coords: Sequence[RationalLike]) -> Fraction:
        if len(coords) != self.num_vars:
            raise ValidationError(f"point has {len(coords)} coordinates, form expects {self.num_vars}")
        vals = [as_fraction(c) for c in coords]
        total = Fraction(0)
        for exp, coef in self.terms:
            term = coef
            for v, e in zip(vals, exp):
                if e:
                    term *= v ** e
            total += term
        return total

    def coeff_norm(self, place: Place) -> Fraction:
        """``max |a|_v`` over the coefficients."""
        return max(abs_at(c, place) for c in self.coefficients())

    def __str__(self) -> str:
        pieces = []
        for i, (exp, coef) in enumerate(self.terms):
            mono = "*".join(
                f"x{j}" if e == 1 else f"x{j}^{e}" for j, e in enumerate(exp) if e)
            mag = abs(coef)
            body = mono if mag == 1 else f"{mag}*{mono}"
            if i == 0:
                pieces.append(f"-{body}" if coef < 0 else body)
            else:
                pieces.append(f"- {body}" if coef < 0 else f"+ {body}")
        return " ".join(pieces)


# ---------------------------------------------------------------------------
# Parser


def _tokenize(text: str):
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("num", int(text[i:j]), i)
            i = j
        elif ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ConfigSyntaxError("variable 'x' must be followed by an index", i, text)
            yield ("var", int(text[i + 1:j]), i)
            i = j
        elif ch in "+-*/^":
            yield (ch, ch, i)
            i += 1
        else:
            raise ConfigSyntaxError(f"unexpected character {ch!r}", i, text)
    yield ("end", None, n)


class _Parser:
    def __init__(self, text: str, num_vars: int):
        self.text = text
        self.num_vars = num_vars
        self.tokens = list(_tokenize(text))
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def fail(self, message, pos):
        raise ConfigSyntaxError(message, pos, self.text)

    def parse(self) -> dict[Exponent, Fraction]:
        terms: dict[Exponent, Fraction] = {}
        sign = 1
        kind, _, pos = self.peek()
        if kind in "+-":
            sign = -1 if kind == "-" else 1
            self.take()
        while True:
            exp, coef = self.term()
            terms[exp] = terms.get(exp, Fraction(0)) + sign * coef
            kind, _, pos = self.peek()
            if kind == "end":
                return terms
            if kind not in "+-":
                self.fail(f"expected '+' or '-' between terms", pos)
            sign = -1 if kind == "-" else 1
            self.take()

    def term(self) -> tuple[Exponent, Fraction]:
        coef = Fraction(1)
        exp = [0] * self.num_vars
        seen = False
        while True:
            kind, val, pos = self.peek()
            if kind == "*":
                if not seen:
                    self.fail("'*' with nothing to multiply", pos)
                self.take()
                kind, val, pos = self.peek()
                if kind not in ("num", "var"):
                    self.fail("expected a factor after '*'", pos)
            if kind == "num":
                self.take()
                value = Fraction(val)
                if self.peek()[0] == "/":
                    self.take()
                    k2, v2, p2 = self.take()
                    if k2 != "num":
                        self.fail("expected a denominator after '/'", p2)
                    if v2 == 0:
                        self.fail("zero denominator", p2)
                    value /= v2
                coef *= value
            elif kind == "var":
                self.take()
                if val >= self.num_vars:
                    self.fail(f"variable x{val} out of range (x0..x{self.num_vars - 1})", pos)
                power = 1
                if self.peek()[0] == "^":
                    self.take()
                    k2, v2, p2 = self.take()
                    if k2 != "num":
                        self.fail("expected an integer exponent after '^'", p2)
                    power = v2
                exp[val] += power
            else:
                if not seen:
                    self.fail("expected a coefficient or variable", pos)
                return tuple(exp), coef
            seen = True


def parse_polynomial(text: str, num_vars: int) -> HomogeneousPolynomial:
    """Parse ``text`` into a homogeneous form in ``num_vars`` variables."""
    terms = _Parser(text, num_vars).parse()
    try:
        return HomogeneousPolynomial.from_dict(num_vars, terms)
    except ValidationError as exc:
        raise ValidationError(f"{exc}: {text!r}") from None


# ---------------------------------------------------------------------------
# Projective points


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^n(Q) stored as its canonical primitive integer representative.

    Any nonzero rational coordinates are accepted; they are scaled to coprime
    integers whose first nonzero entry is positive.
    """

    coords: tuple[int, ...]

    def __post_init__(self):
        vals = [as_fraction(c) for c in self.coords]
        if len(vals) < 2:
            raise ValidationError("a projective point needs at least two coordinates")
        if all(v == 0 for v in vals):
            raise ValidationError("all coordinates are zero")
        lcm = 1
        for v in vals:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        ints = [int(v * lcm) for v in vals]
        g = math.gcd(*ints)
        lead = next(v for v in ints if v != 0)
        if lead < 0:
            g = -g
        object.__setattr__(self, "coords", tuple(v // g for v in ints))

    @classmethod
    def of(cls, *coords: RationalLike) -> "ProjectivePoint":
        return cls(tuple(coords))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.coords) + "]"


def evaluate_form(form: HomogeneousPolynomial, point: ProjectivePoint | Iterable[RationalLike]) -> Fraction:
    coords = point.coords if isinstance(point, ProjectivePoint) else tuple(point)
    return form.evaluate(coords)
