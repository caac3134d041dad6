"""Exact scalars: rationals, logarithms of rationals, places of Q.

Rationals are :class:`fractions.Fraction`.  Every height in the library is a
:class:`LogRational`, the real number ``log(arg) / den`` for a positive
rational ``arg`` and a positive integer ``den``.  Sums of logs multiply
arguments, so all arithmetic and all comparisons stay exact integer work.
``den`` is 1 for every local or global height; it only grows when a height is
scaled by a non-integral rational weight (for instance a Seshadri constant
``1/d``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from contextlib import contextmanager
from functools import total_ordering
from typing import Iterable, Union

import mpmath
from sympy import factorint, integer_nthroot, isprime, perfect_power, primefactors

from .errors import FactorizationLimitError, ValidationError

RationalLike = Union[int, Fraction, str]

DEFAULT_FACTOR_LIMIT = 10**12


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are rejected."""
    if isinstance(value, bool):
        raise ValidationError(f"not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational number: {value!r}") from exc
    raise ValidationError(f"not an exact rational: {value!r}")


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# LogRational


def _reduce_power(arg: Fraction, den: int) -> tuple[Fraction, int]:
    """Cancel common factors between ``den`` and the perfect-power exponent of arg."""
    if arg == 1:
        return Fraction(1), 1
    num, dnm = arg.numerator, arg.denominator
    for p in primefactors(den) if den > 1 else ():
        while den % p == 0:
            rn, exact_n = integer_nthroot(num, p)
            if not exact_n:
                break
            rd, exact_d = integer_nthroot(dnm, p)
            if not exact_d:
                break
            num, dnm, den = int(rn), int(rd), den // p
    return Fraction(num, dnm), den


@contextmanager
def _iv_dps(dps: int):
    # mpmath's interval context has no workdps helper
    old = mpmath.iv.dps
    mpmath.iv.dps = dps
    try:
        yield
    finally:
        mpmath.iv.dps = old


@total_ordering
class LogRational:
    """The real number ``log(arg) / den`` with ``arg`` a positive rational.

    Instances are immutable and kept in a reduced form (``den`` as small as
    possible), so equality and hashing are structural.
    """

    __slots__ = ("_arg", "_den")

    def __init__(self, arg: RationalLike = 1, den: int = 1):
        a = as_fraction(arg)
        if a <= 0:
            raise ValidationError(f"LogRational argument must be positive, got {a}")
        if not isinstance(den, int) or den < 1:
            raise ValidationError(f"LogRational denominator must be a positive integer, got {den!r}")
        self._arg, self._den = _reduce_power(a, den)

    @classmethod
    def zero(cls) -> "LogRational":
        return cls(1)

    @property
    def arg(self) -> Fraction:
        return self._arg

    @property
    def den(self) -> int:
        return self._den

    def __repr__(self) -> str:
        if self._den == 1:
            return f"LogRational({format_fraction(self._arg)})"
        return f"LogRational({format_fraction(self._arg)}, den={self._den})"

    def __str__(self) -> str:
        if self._den == 1:
            return f"log({self._arg})"
        return f"log({self._arg})/{self._den}"

    def __hash__(self) -> int:
        return hash((self._arg, self._den))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogRational):
            return NotImplemented
        return self._arg == other._arg and self._den == other._den

    def __lt__(self, other: "LogRational") -> bool:
        if not isinstance(other, LogRational):
            return NotImplemented
        left, right = self._common(other)
        return left < right

    def _common(self, other: "LogRational") -> tuple[Fraction, Fraction]:
        lcm = self._den * other._den // math.gcd(self._den, other._den)
        return self._arg ** (lcm // self._den), other._arg ** (lcm // other._den)

    def __add__(self, other: "LogRational") -> "LogRational":
        if not isinstance(other, LogRational):
            return NotImplemented
        if other._arg == 1:
            return self
        if self._arg == 1:
            return other
        lcm = self._den * other._den // math.gcd(self._den, other._den)
        left, right = self._common(other)
        return LogRational(left * right, lcm)

    def __radd__(self, other):
        # lets sum() start from 0
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self) -> "LogRational":
        return LogRational(1 / self._arg, self._den)

    def __sub__(self, other: "LogRational") -> "LogRational":
        return self + (-other)

    def scale(self, factor: RationalLike) -> "LogRational":
        f = as_fraction(factor)
        if f == 0 or self._arg == 1:
            return LogRational.zero()
        return LogRational(self._arg ** f.numerator, self._den * f.denominator)

    def __mul__(self, factor: RationalLike) -> "LogRational":
        if isinstance(factor, LogRational):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def sign(self) -> int:
        return (self._arg > 1) - (self._arg < 1)

    def is_zero(self) -> bool:
        return self._arg == 1

    def to_real(self) -> float:
        return (math.log(self._arg.numerator) - math.log(self._arg.denominator)) / self._den

    def to_mpf(self, dps: int = 50):
        """High precision value as an ``mpmath`` interval enclosing the exact value."""
        with _iv_dps(dps):
            num = mpmath.iv.log(mpmath.iv.mpf(self._arg.numerator))
            dnm = mpmath.iv.log(mpmath.iv.mpf(self._arg.denominator))
            return (num - dnm) / self._den

    def to_json(self) -> dict:
        return {"arg": format_fraction(self._arg), "den": self._den, "float": round(self.to_real(), 12)}

    @classmethod
    def from_json(cls, data: dict) -> "LogRational":
        return cls(as_fraction(data["arg"]), int(data.get("den", 1)))


def log_sum(values: Iterable[LogRational]) -> LogRational:
    total = LogRational.zero()
    for v in values:
        total = total + v
    return total


def _primitive_base(x: Fraction) -> tuple[Fraction, int]:
    """Write ``x = g**k`` with ``g`` not a perfect power (x != 1, x > 0)."""
    exps = []
    for part in (x.numerator, x.denominator):
        if part == 1:
            exps.append(0)
            continue
        pp = perfect_power(part)
        exps.append(pp[1] if pp else 1)
    k = math.gcd(*exps)
    num = int(integer_nthroot(x.numerator, k)[0])
    dnm = int(integer_nthroot(x.denominator, k)[0])
    return Fraction(num, dnm), k


def exact_ratio(x: LogRational, y: LogRational) -> Fraction | None:
    """Return ``x / y`` when it is rational, else ``None``.

    Decided exactly: ``log a / log b`` is rational iff ``a`` and ``b`` are
    rational powers of a common base, i.e. share a primitive root.
    """
    if y.is_zero():
        raise ZeroDivisionError("ratio by a zero logarithm")
    if x.is_zero():
        return Fraction(0)
    gx, kx = _primitive_base(x.arg)
    gy, ky = _primitive_base(y.arg)
    if gx == gy:
        sign = 1
    elif gx == 1 / gy:
        sign = -1
    else:
        return None
    return sign * Fraction(kx * y.den, ky * x.den)


def compare_ratios(x1: LogRational, y1: LogRational, x2: LogRational, y2: LogRational,
                   max_dps: int = 2000) -> int:
    """Sign of ``x1/y1 - x2/y2`` (denominators positive), certified.

    Rational ratios are compared exactly.  Otherwise interval arithmetic is
    refined until the enclosure excludes zero; equality of two irrational
    ratios is only recognised when the numerators and denominators are
    proportional by the same rational.
    """
    if y1.sign() <= 0 or y2.sign() <= 0:
        raise ValidationError("ratio denominators must be positive")
    r1, r2 = exact_ratio(x1, y1), exact_ratio(x2, y2)
    if r1 is not None and r2 is not None:
        return (r1 > r2) - (r1 < r2)
    if r1 is None and r2 is None and not x2.is_zero():
        qx, qy = exact_ratio(x1, x2), exact_ratio(y1, y2)
        if qx is not None and qx == qy:
            return 0
    dps = 30
    while dps <= max_dps:
        with _iv_dps(dps):
            diff = x1.to_mpf(dps) / y1.to_mpf(dps) - x2.to_mpf(dps) / y2.to_mpf(dps)
            if diff.a > 0:
                return 1
            if diff.b < 0:
                return -1
        dps *= 2
    raise ValidationError("could not separate two irrational height ratios")


# ---------------------------------------------------------------------------
# Places and absolute values


@total_ordering
@dataclass(frozen=True)
class Place:
    """A place of Q: ``prime == 0`` is the archimedean place."""

    prime: int

    def __post_init__(self):
        if self.prime != 0 and not isprime(self.prime):
            raise ValidationError(f"{self.prime} is not prime")

    @property
    def is_archimedean(self) -> bool:
        return self.prime == 0

    def __lt__(self, other: "Place") -> bool:
        return self.prime < other.prime

    def __str__(self) -> str:
        return "inf" if self.prime == 0 else str(self.prime)

    @classmethod
    def parse(cls, text: str | int) -> "Place":
        if isinstance(text, str) and text.strip().lower() in ("inf", "oo", "infinity", "∞"):
            return ARCH
        try:
            return cls(int(text))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"not a place: {text!r}") from exc


ARCH = Place(0)


@dataclass(frozen=True)
class PlaceSet:
    """A finite set S of places: optionally the real place plus some primes."""

    archimedean: bool = True
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        primes = tuple(self.primes)
        for p in primes:
            if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
                raise ValidationError(f"place set entry {p!r} is not a prime")
        if len(set(primes)) != len(primes):
            raise ValidationError(f"duplicate primes in place set: {list(primes)}")
        object.__setattr__(self, "primes", tuple(sorted(primes)))

    def places(self) -> tuple[Place, ...]:
        head = (ARCH,) if self.archimedean else ()
        return head + tuple(Place(p) for p in self.primes)

    def __contains__(self, place: Place) -> bool:
        if place.is_archimedean:
            return self.archimedean
        return place.prime in self.primes

    def __len__(self) -> int:
        return int(self.archimedean) + len(self.primes)

    def union(self, other: "PlaceSet") -> "PlaceSet":
        return PlaceSet(self.archimedean or other.archimedean,
                        tuple(sorted(set(self.primes) | set(other.primes))))

    def to_json(self) -> dict:
        return {"archimedean": self.archimedean, "primes": list(self.primes)}


def ord_p(x: RationalLike, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = as_fraction(x)
    if x == 0:
        raise ValidationError("valuation of 0 is undefined")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_abs(x: RationalLike, p: int) -> LogRational:
    """``log |x|_p`` with ``|x|_p = p**(-ord_p x)``."""
    return LogRational(Fraction(p) ** (-ord_p(x, p)))


def arch_abs(x: RationalLike) -> LogRational:
    x = as_fraction(x)
    if x == 0:
        raise ValidationError("log |0| is undefined")
    return LogRational(abs(x))


def abs_at(x: RationalLike, place: Place) -> Fraction:
    """``|x|_v`` as a rational (0 for x = 0)."""
    x = as_fraction(x)
    if x == 0:
        return Fraction(0)
    if place.is_archimedean:
        return abs(x)
    return Fraction(place.prime) ** (-ord_p(x, place.prime))


def factorize(n: int, limit: int = DEFAULT_FACTOR_LIMIT) -> dict[int, int]:
    """Prime factorization of a nonzero integer's absolute value, capped in size."""
    n = abs(int(n))
    if n == 0:
        raise ValidationError("cannot factor 0")
    if n > limit:
        raise FactorizationLimitError(
            f"integer {n} exceeds the factorization cap {limit}; raise factor_limit to proceed")
    return {int(p): int(e) for p, e in factorint(n).items()}


def support_primes(values: Iterable[RationalLike], limit: int = DEFAULT_FACTOR_LIMIT) -> set[int]:
    """All primes dividing a numerator or denominator of the given nonzero rationals."""
    primes: set[int] = set()
    for v in values:
        f = as_fraction(v)
        for part in (f.numerator, f.denominator):
            if abs(part) > 1:
                primes.update(factorize(part, limit))
    return primes
