"""Point families, inequality experiments, per-point proof traces and reports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .config import WeightedConfiguration
from .errors import InternalCheckError, PointOnDivisorError, ValidationError
from .heights import entry_seshadri, min_weil, multi_weil, proximity_counting
from .incidence import IncidenceStructure, structure_for
from .position import coefficient_menu, max_alpha_ratio
from .poly import ProjectivePoint
from .linalg import rank
from .rational import (DEFAULT_FACTOR_LIMIT, LogRational, Place, PlaceSet, compare_ratios,
                       exact_ratio, format_fraction, log_sum)


# ---------------------------------------------------------------------------
# Families


@dataclass(frozen=True)
class PointFamily:
    """Either an explicit point list or the S-unit family ``A + s^k B`` for k in a range."""

    kind: str
    points: tuple[tuple[int, ...], ...] = ()
    line: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    base: int | None = None
    k_range: tuple[int, int] | None = None

    def __post_init__(self):
        kind = {"explicit-list": "explicit", "line-power-family": "line-power"}.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind == "explicit":
            if not self.points:
                raise ValidationError("explicit family needs at least one point")
        elif kind == "line-power":
            if self.line is None or len(self.line) != 2 or len(self.line[0]) != len(self.line[1]):
                raise ValidationError("line-power family needs two basis points of equal length")
            if isinstance(self.base, bool) or not isinstance(self.base, int) or self.base < 2:
                raise ValidationError("base must be an integer >= 2")
            if self.k_range is None or len(self.k_range) != 2 or self.k_range[0] > self.k_range[1] \
                    or self.k_range[0] < 0:
                raise ValidationError("k_range must be [k0, k1] with 0 <= k0 <= k1")
        else:
            raise ValidationError(f"unknown family kind {self.kind!r}")

    @classmethod
    def line_power(cls, a: Sequence[int], b: Sequence[int], base: int, k0: int, k1: int) -> "PointFamily":
        return cls("line-power", line=(tuple(a), tuple(b)), base=base, k_range=(k0, k1))

    @classmethod
    def explicit(cls, points: Sequence[Sequence[int]]) -> "PointFamily":
        return cls("explicit", points=tuple(tuple(p) for p in points))

    @classmethod
    def from_dict(cls, doc: Any) -> "PointFamily":
        if not isinstance(doc, dict) or "kind" not in doc:
            raise ValidationError("family description must be an object with a 'kind'")
        try:
            if doc["kind"] in ("explicit", "explicit-list"):
                return cls.explicit(doc["points"])
            a, b = doc["line"]
            k0, k1 = doc["k_range"]
            return cls(doc["kind"], line=(tuple(a), tuple(b)), base=doc["base"], k_range=(k0, k1))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed family description: {exc}") from None

    def to_json(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "points": [list(p) for p in self.points]}
        return {"kind": "line-power", "line": [list(self.line[0]), list(self.line[1])],
                "base": self.base, "k_range": list(self.k_range)}


def _check_ints(coords, what):
    if any(isinstance(x, bool) or not isinstance(x, int) for x in coords):
        raise ValidationError(f"{what} must contain integers only")


def generate_family(family: PointFamily, cfg: WeightedConfiguration | None = None) -> list[ProjectivePoint]:
    """Canonical, distinct family members.

    For line families the line must not lie inside a configured divisor:
    each component restricted to ``A + tB`` is a polynomial in t of degree
    at most d, so vanishing at t = 0..d means it vanishes identically.
    """
    if family.kind == "explicit":
        for p in family.points:
            _check_ints(p, "points")
        pts = [ProjectivePoint(p) for p in family.points]
        if len(set(pts)) != len(pts):
            raise ValidationError("explicit family contains repeated points")
        if cfg is not None and any(p.dim != cfg.n for p in pts):
            raise ValidationError(f"family points must have {cfg.n + 1} coordinates")
        return pts
    a, b = family.line
    _check_ints(a, "line")
    _check_ints(b, "line")
    if rank([a, b]) < 2:
        raise ValidationError("line basis points must be linearly independent")
    if cfg is not None:
        if len(a) != cfg.n + 1:
            raise ValidationError(f"line basis points must have {cfg.n + 1} coordinates")
        for e in cfg.entries:
            for comp in e.components:
                d = comp.form.degree
                if all(comp.form.evaluate([x + t * y for x, y in zip(a, b)]) == 0 for t in range(d + 1)):
                    raise ValidationError(f"the family line lies inside divisor {e.label!r} (V({comp.form}))")
    k0, k1 = family.k_range
    pts = []
    for k in range(k0, k1 + 1):
        t = family.base ** k
        pts.append(ProjectivePoint(tuple(x + t * y for x, y in zip(a, b))))
    return pts


# ---------------------------------------------------------------------------
# Experiments


def log_cell(x: LogRational) -> str:
    """Exact cell for a log value: the argument, with a root index when needed."""
    if x.den == 1:
        return format_fraction(x.arg)
    return f"({format_fraction(x.arg)})^(1/{x.den})"


def _float6(x: float | None) -> str:
    return "" if x is None else f"{x:.6g}"


@dataclass(frozen=True)
class ExperimentRow:
    point: ProjectivePoint
    h: LogRational
    m_S: tuple[LogRational, ...]
    lhs: LogRational
    ratio: Fraction | None
    ratio_float: float | None
    sup_ratio: Fraction | None
    sup_float: float | None
    sup_point: ProjectivePoint | None

    def to_json(self, labels: Sequence[str]) -> dict:
        return {
            "point": list(self.point.coords), "h": self.h.to_json(),
            "m_S": {lab: v.to_json() for lab, v in zip(labels, self.m_S)},
            "lhs": self.lhs.to_json(),
            "ratio": None if self.ratio is None else format_fraction(self.ratio),
            "ratio_float": None if self.ratio_float is None else round(self.ratio_float, 6),
            "sup_ratio": None if self.sup_ratio is None else format_fraction(self.sup_ratio),
            "sup_ratio_float": None if self.sup_float is None else round(self.sup_float, 6),
            "sup_point": None if self.sup_point is None else list(self.sup_point.coords),
        }


@dataclass(frozen=True)
class ExperimentReport:
    labels: tuple[str, ...]
    places: PlaceSet
    rows: tuple[ExperimentRow, ...]
    skipped: tuple[tuple[ProjectivePoint, str], ...]
    menu: dict[str, Fraction] | None = None
    family: dict | None = None

    @property
    def supremum(self) -> ExperimentRow | None:
        return self.rows[-1] if self.rows else None

    def to_json(self) -> dict:
        return {
            "divisors": list(self.labels), "places": self.places.to_json(),
            "family": self.family,
            "rows": [r.to_json(self.labels) for r in self.rows],
            "skipped": [{"point": list(p.coords), "reason": why} for p, why in self.skipped],
            "coefficients": None if self.menu is None else {k: format_fraction(v) for k, v in self.menu.items()},
        }

    def to_csv(self) -> str:
        return rows_to_csv(
            ["point"],
            ["h"] + [f"m_S[{lab}]" for lab in self.labels] + ["lhs", "ratio", "sup_ratio"],
            ["h_float", "lhs_float", "ratio_float", "sup_ratio_float"],
            ([[str(r.point)],
             [log_cell(r.h)] + [log_cell(m) for m in r.m_S] + [
                 log_cell(r.lhs),
                 "" if r.ratio is None else format_fraction(r.ratio),
                 "" if r.sup_ratio is None else format_fraction(r.sup_ratio)],
             [_float6(r.h.to_real()), _float6(r.lhs.to_real()), _float6(r.ratio_float), _float6(r.sup_float)]]
             for r in self.rows))


def rows_to_csv(label_cols, exact_cols, float_cols, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(label_cols) + list(exact_cols) + list(float_cols))
    for labels, exact, floats in rows:
        w.writerow(list(labels) + list(exact) + list(floats))
    return buf.getvalue()


def experiment_lhs(cfg: WeightedConfiguration, places: PlaceSet, breakdown) -> LogRational:
    """sum over v in S and divisors of c_{i,v} * eps_i * lambda_{i,v}."""
    terms = []
    for e, dh in zip(cfg.entries, breakdown.divisors):
        eps = entry_seshadri(e)
        for lv in dh.local:
            if lv.place in places:
                terms.append(lv.value.scale(e.weight_at(lv.place) * eps))
    return log_sum(terms)


def run_inequality_experiment(cfg: WeightedConfiguration, places: PlaceSet,
                              family: PointFamily | Sequence[ProjectivePoint],
                              factor_limit: int = DEFAULT_FACTOR_LIMIT,
                              struct: IncidenceStructure | None = None) -> ExperimentReport:
    if isinstance(family, PointFamily):
        points = generate_family(family, cfg)
        fam_json = family.to_json()
    else:
        points = list(family)
        fam_json = None
    evaluated, skipped = [], []
    for p in points:
        try:
            bd = proximity_counting(cfg, places, p, factor_limit)
        except PointOnDivisorError as exc:
            skipped.append((p, str(exc)))
            continue
        evaluated.append((p, bd, experiment_lhs(cfg, places, bd)))
    evaluated.sort(key=lambda t: t[1].h)

    rows = []
    sup = None  # (lhs, h, ratio_exact, ratio_float, point)
    for p, bd, lhs in evaluated:
        h = bd.h
        if h.is_zero():
            ratio, rf = None, None
        else:
            ratio = exact_ratio(lhs, h)
            rf = lhs.to_real() / h.to_real()
            if sup is None or compare_ratios(lhs, h, sup[0], sup[1]) > 0:
                sup = (lhs, h, ratio, rf, p)
        rows.append(ExperimentRow(p, h, tuple(d.m_S for d in bd.divisors), lhs, ratio, rf,
                                  None if sup is None else sup[2],
                                  None if sup is None else sup[3],
                                  None if sup is None else sup[4]))
    menu = None
    try:
        s = struct if struct is not None else structure_for(cfg)
        menu = coefficient_menu(s, cfg)
    except ValidationError:
        pass
    return ExperimentReport(cfg.labels, places, tuple(rows), tuple(skipped), menu, fam_json)


# ---------------------------------------------------------------------------
# Proof trace


@dataclass(frozen=True)
class PlaceTrace:
    place: Place
    order: tuple[str, ...]
    lambdas: tuple[LogRational, ...]  # clipped at 0, in sorted order
    chain: tuple[int, ...]
    b_diffs: tuple[int, ...]
    m_v: int
    min_identity: bool
    factor: Fraction
    factor_j: int
    ratio_cap: Fraction
    cheb_lhs: LogRational
    cheb_rhs: LogRational
    tail: LogRational

    def to_json(self) -> dict:
        return {
            "place": str(self.place), "order": list(self.order),
            "lambda": [x.to_json() for x in self.lambdas],
            "codim_chain": list(self.chain), "b_diffs": list(self.b_diffs), "m_v": self.m_v,
            "min_identity": self.min_identity,
            "factor": format_fraction(self.factor), "factor_j": self.factor_j,
            "ratio_cap": format_fraction(self.ratio_cap),
            "chebyshev_lhs": self.cheb_lhs.to_json(), "chebyshev_rhs": self.cheb_rhs.to_json(),
            "tail": self.tail.to_json(),
        }


@dataclass(frozen=True)
class ProofTrace:
    point: ProjectivePoint
    places: tuple[PlaceTrace, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"point": list(self.point.coords), "places": [t.to_json() for t in self.places]}


def _trace_place(cfg: WeightedConfiguration, struct: IncidenceStructure, place: Place,
                 point: ProjectivePoint) -> PlaceTrace:
    zero = LogRational.zero()
    lam = [max(multi_weil(e, place, point).value, zero) for e in cfg.entries]
    order = sorted(range(cfg.q), key=lambda i: cfg.entries[i].label)
    order.sort(key=lambda i: lam[i], reverse=True)

    chain = []
    for j in range(1, cfg.q + 1):
        node = struct.intersection_of(order[:j])
        if node.is_empty:
            break
        chain.append(node.codim)
    m_v = len(chain)
    if m_v == 0:
        raise InternalCheckError(f"support of {cfg.entries[order[0]].label!r} is empty")

    # lambda of the j-th entry equals the min over the prefix
    min_ok = all(
        lam[order[j]] == max(min_weil([cfg.entries[i] for i in order[:j + 1]], place, point).value, zero)
        for j in range(cfg.q))
    if not min_ok:
        raise InternalCheckError(f"intersection min identity failed at {place} for {point}")

    eps_v = max(entry_seshadri(e) for e in cfg.entries)
    weights = [cfg.entries[i].weight_at(place) for i in order[:m_v]]
    b_diffs = [chain[0]] + [chain[j] - chain[j - 1] for j in range(1, m_v)]
    a = [lam[order[j]].scale(eps_v) for j in range(m_v)]

    factor, factor_j, csum = None, None, Fraction(0)
    for j in range(m_v):
        csum += weights[j]
        r = csum / chain[j]
        if factor is None or r >= factor:
            factor, factor_j = r, j + 1
    lhs = log_sum(x.scale(b) for x, b in zip(a, b_diffs)).scale(factor)
    rhs = log_sum(x.scale(c) for x, c in zip(a, weights))
    if lhs < rhs:
        raise InternalCheckError(f"Chebyshev step failed at {place} for {point}: {lhs} < {rhs}")

    cap = max_alpha_ratio(struct, cfg, (place,)).value
    if factor > cap:
        raise InternalCheckError(f"prefix ratio {factor} exceeds max alpha/codim {cap} at {place}")

    tail = log_sum(lam[i].scale(cfg.entries[i].weight_at(place) * entry_seshadri(cfg.entries[i]))
                   for i in order[m_v:])
    return PlaceTrace(place, tuple(cfg.entries[i].label for i in order), tuple(lam[i] for i in order),
                      tuple(chain), tuple(b_diffs), m_v, min_ok, factor, factor_j, cap, lhs, rhs, tail)


def proof_trace(cfg: WeightedConfiguration, places: PlaceSet, point: ProjectivePoint,
                struct: IncidenceStructure | None = None) -> ProofTrace:
    """Replay the sorting / intersection chain / Chebyshev step at each v in S.

    Local heights are clipped at 0 so the sorted chain is nonnegative; any
    failed identity raises :class:`InternalCheckError`.
    """
    if point.dim != cfg.n:
        raise ValidationError(f"point {point} does not live in P^{cfg.n}")
    for e in cfg.entries:
        for c in e.components:
            if c.form.evaluate(point.coords) == 0:
                raise PointOnDivisorError(f"point {point} lies on divisor {e.label!r}")
    struct = struct if struct is not None else structure_for(cfg)
    return ProofTrace(point, tuple(_trace_place(cfg, struct, v, point) for v in places.places()))


def dumps(obj: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"

