"""Exact local Weil functions and heights on P^n(Q).

Normalisation: ``lambda_v(P) = log(||x||_v^d * ||F||_v / |F(x)|_v)``.  It is
independent of the representative ``x`` and summed over all places gives
``d*h(P) + sum_v log ||F||_v`` on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .config import DivisorEntry, WeightedConfiguration
from .errors import PointOnDivisorError, ValidationError
from .poly import HomogeneousPolynomial, ProjectivePoint
from .rational import (ARCH, DEFAULT_FACTOR_LIMIT, LogRational, Place, PlaceSet, RationalLike,
                       abs_at, as_fraction, log_sum, support_primes)


@dataclass(frozen=True)
class LocalHeightValue:
    place: Place
    value: LogRational

    def to_json(self) -> dict:
        return {"place": str(self.place), **self.value.to_json()}


def global_height(point: ProjectivePoint) -> LogRational:
    """log max |x_i| over the primitive integer representative."""
    return LogRational(max(abs(x) for x in point.coords))


def _coords_of(point: ProjectivePoint | Sequence[RationalLike]) -> tuple[Fraction, ...]:
    if isinstance(point, ProjectivePoint):
        return tuple(Fraction(x) for x in point.coords)
    coords = tuple(as_fraction(x) for x in point)
    if not any(coords):
        raise ValidationError("all coordinates are zero")
    return coords


def local_weil(form: HomogeneousPolynomial, place: Place,
               point: ProjectivePoint | Sequence[RationalLike]) -> LocalHeightValue:
    """Weil function of V(form) at ``place``; any nonzero rational representative is accepted."""
    coords = _coords_of(point)
    if len(coords) != form.num_vars:
        raise ValidationError(f"point has {len(coords)} coordinates, form expects {form.num_vars}")
    value = form.evaluate(coords)
    if value == 0:
        raise PointOnDivisorError(f"point {list(map(str, coords))} lies on V({form})")
    xnorm = max(abs_at(x, place) for x in coords)
    arg = xnorm ** form.degree * form.coeff_norm(place) / abs_at(value, place)
    return LocalHeightValue(place, LogRational(arg))


def multi_weil(entry: DivisorEntry, place: Place,
               point: ProjectivePoint | Sequence[RationalLike]) -> LocalHeightValue:
    """Sum over components of multiplicity times the component Weil function."""
    total = log_sum(local_weil(c.form, place, point).value.scale(c.multiplicity)
                    for c in entry.components)
    return LocalHeightValue(place, total)


def min_weil(entries: Iterable[DivisorEntry], place: Place,
             point: ProjectivePoint | Sequence[RationalLike]) -> LocalHeightValue:
    """Weil function of an intersection: the minimum over the entries."""
    values = [multi_weil(e, place, point).value for e in entries]
    if not values:
        raise ValidationError("min_weil needs at least one entry")
    return LocalHeightValue(place, min(values))


def form_height_constant(form: HomogeneousPolynomial, limit: int = DEFAULT_FACTOR_LIMIT) -> LogRational:
    """sum over all places of log ||F||_v; equals log ||F||_inf for primitive F."""
    primes = support_primes(form.coefficients(), limit)
    places = [ARCH] + [Place(p) for p in sorted(primes)]
    return log_sum(LogRational(form.coeff_norm(v)) for v in places)


def relevant_primes(entries: Iterable[DivisorEntry], point: ProjectivePoint,
                    limit: int = DEFAULT_FACTOR_LIMIT) -> set[int]:
    """Primes where some entry's local height can be nonzero."""
    values = []
    for e in entries:
        for c in e.components:
            v = c.form.evaluate(point.coords)
            if v == 0:
                raise PointOnDivisorError(f"point {point} lies on V({c.form}) of divisor {e.label!r}")
            values.append(v)
            values.extend(c.form.coefficients())
    values.extend(x for x in point.coords if x)
    return support_primes(values, limit)


@dataclass(frozen=True)
class DivisorHeights:
    label: str
    degree: int
    local: tuple[LocalHeightValue, ...]
    m_S: LogRational
    N_S: LogRational

    @property
    def total(self) -> LogRational:
        return self.m_S + self.N_S

    def value_at(self, place: Place) -> LogRational:
        for lv in self.local:
            if lv.place == place:
                return lv.value
        return LogRational.zero()

    def to_json(self) -> dict:
        return {"label": self.label, "degree": self.degree,
                "local": [lv.to_json() for lv in self.local],
                "m_S": self.m_S.to_json(), "N_S": self.N_S.to_json(), "total": self.total.to_json()}


@dataclass(frozen=True)
class HeightBreakdown:
    point: ProjectivePoint
    places: PlaceSet
    h: LogRational
    divisors: tuple[DivisorHeights, ...]

    def divisor(self, label: str) -> DivisorHeights:
        for d in self.divisors:
            if d.label == label:
                return d
        raise KeyError(label)

    def to_json(self) -> dict:
        return {"point": [str(x) for x in self.point.coords], "h": self.h.to_json(),
                "places": self.places.to_json(),
                "divisors": [d.to_json() for d in self.divisors]}


def proximity_counting(cfg: WeightedConfiguration, places: PlaceSet, point: ProjectivePoint,
                       factor_limit: int = DEFAULT_FACTOR_LIMIT) -> HeightBreakdown:
    """Split each divisor's height sum into the part over S (m_S) and the rest (N_S).

    Places off S where every local value is zero are not listed; the
    archimedean place is always evaluated and lands in N_S when not in S.
    """
    if point.dim + 1 != cfg.n + 1:
        raise ValidationError(f"point {point} does not live in P^{cfg.n}")
    primes = relevant_primes(cfg.entries, point, factor_limit) | set(places.primes)
    all_places = [ARCH] + [Place(p) for p in sorted(primes)]
    rows = []
    for e in cfg.entries:
        local = tuple(multi_weil(e, v, point) for v in all_places)
        m = log_sum(lv.value for lv in local if lv.place in places)
        nn = log_sum(lv.value for lv in local if lv.place not in places)
        rows.append(DivisorHeights(e.label, e.degree, local, m, nn))
    return HeightBreakdown(point, places, global_height(point), tuple(rows))


def seshadri_pn(degree: int, override: RationalLike | None = None) -> Fraction:
    """Seshadri constant of a degree-d hypersurface against a hyperplane: 1/d."""
    if override is not None:
        val = as_fraction(override)
        if val <= 0:
            raise ValidationError("Seshadri override must be positive")
        return val
    if isinstance(degree, bool) or not isinstance(degree, int) or degree < 1:
        raise ValidationError(f"degree must be a positive integer, got {degree!r}")
    return Fraction(1, degree)


def entry_seshadri(entry: DivisorEntry) -> Fraction:
    return seshadri_pn(entry.degree, entry.seshadri)
