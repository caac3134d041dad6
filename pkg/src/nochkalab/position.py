"""Position invariants of a weighted configuration.

All maxima and minima run over lattice nodes only; every closed subset is
dominated by the intersection of the divisors containing it, so nothing is
lost.  Witness ties go to the lexicographically smallest node label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .config import WeightedConfiguration
from .incidence import Flat, IncidenceStructure, alpha, alpha_count
from .rational import Place, format_fraction


@dataclass(frozen=True)
class Invariant:
    value: int | Fraction
    witness: str | None = None


@dataclass(frozen=True)
class BezoutResult:
    ok: bool
    violation: tuple[str, str, str] | None = None


@dataclass(frozen=True)
class PositionReport:
    n: int
    m_min: int
    m_min_witness: str | None
    m_unweighted: int
    kappa: int
    kappa_witness: str | None
    delta: Fraction
    delta_witness: str | None
    max_ratio: Fraction
    max_ratio_witness: str | None
    bezout_ok: bool
    bezout_violation: tuple[str, str, str] | None
    menu: dict[str, Fraction] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m_min": self.m_min, "m_min_witness": self.m_min_witness,
            "m_unweighted": self.m_unweighted,
            "kappa": self.kappa, "kappa_witness": self.kappa_witness,
            "delta": format_fraction(self.delta), "delta_witness": self.delta_witness,
            "max_ratio": format_fraction(self.max_ratio), "max_ratio_witness": self.max_ratio_witness,
            "bezout_ok": self.bezout_ok,
            "bezout_violation": list(self.bezout_violation) if self.bezout_violation else None,
            "coefficients": {k: format_fraction(v) for k, v in self.menu.items()},
        }


def _argbest(items, better):
    """First item by (value, label) preference; ``better(a, b)`` is strict."""
    best = None
    for value, label in items:
        if best is None or better(value, best[0]) or (value == best[0] and label < best[1]):
            best = (value, label)
    return best


def min_subgeneral_m(struct: IncidenceStructure, cfg: WeightedConfiguration | None = None,
                     weighted: bool = True, place: Place | None = None) -> Invariant:
    """Smallest m >= n with ``codim W >= alpha(W) + n - m`` on every nonempty node."""
    n = struct.n
    items = []
    for node in struct.nonempty_nodes:
        a = alpha(struct, cfg, node, place) if weighted else alpha_count(node)
        items.append((math.ceil(a) + n - node.codim, node.label))
    best = _argbest(items, lambda x, y: x > y)
    if best is None or best[0] < n:
        return Invariant(n, None)
    return Invariant(best[0], best[1])


def min_subgeneral_m_all_places(struct: IncidenceStructure, cfg: WeightedConfiguration) -> Invariant:
    """Weighted m, maximised over the base weights and every per-place override."""
    results = [min_subgeneral_m(struct, cfg, True, None)]
    results += [min_subgeneral_m(struct, cfg, True, p) for p in cfg.weight_places()]
    return max(results, key=lambda r: r.value)


def index_kappa(struct: IncidenceStructure) -> Invariant:
    """Largest kappa <= n+1 such that any <= kappa divisors meet in codim >= their count."""
    items = [(node.codim, node.label) for node in struct.nonempty_nodes
             if alpha_count(node) > node.codim]
    best = _argbest(items, lambda x, y: x < y)
    n1 = struct.n + 1
    if best is None or best[0] >= n1:
        return Invariant(n1, None)
    return Invariant(best[0], best[1])


def distributive_constant(struct: IncidenceStructure) -> Invariant:
    """max(1, max over nonempty nodes of count/codim); the empty set never contributes."""
    items = [(Fraction(alpha_count(node), node.codim), node.label)
             for node in struct.nonempty_nodes]
    best = _argbest(items, lambda x, y: x > y)
    if best is None:
        return Invariant(Fraction(1), None)
    return Invariant(max(Fraction(1), best[0]), best[1] if best[0] >= 1 else None)


def max_alpha_ratio(struct: IncidenceStructure, cfg: WeightedConfiguration,
                    places: tuple[Place | None, ...] | None = None) -> Invariant:
    """max of alpha(W)/codim W over nonempty proper nodes (and over places with overrides)."""
    if places is None:
        places = (None,) + cfg.weight_places()
    items = []
    for p in places:
        for node in struct.nonempty_nodes:
            a = alpha(struct, cfg, node, p)
            if a > 0:
                items.append((a / node.codim, node.label))
    best = _argbest(items, lambda x, y: x > y)
    if best is None:
        return Invariant(Fraction(0), None)
    return Invariant(best[0], best[1])


def bezout_check(struct: IncidenceStructure) -> BezoutResult:
    """codim(W & W') <= codim W + codim W' for all node pairs (empty counts as n+1)."""
    nodes = struct.nonempty_nodes
    for i, a in enumerate(nodes):
        for b in nodes[i:]:
            m = struct.meet(a, b)
            if struct.codim(m, "finite") > a.codim + b.codim:
                return BezoutResult(False, (a.label, b.label, m.label))
    return BezoutResult(True, None)


MENU_KEYS = ("2m-n+1", "3/2(2m-n+1)", "(m-n+1)(n+1)", "JYY", "Shi", "Delta(n+1)", "(n+1)maxratio")


def coefficient_menu(struct: IncidenceStructure, cfg: WeightedConfiguration,
                     m: int | None = None, kappa: int | None = None,
                     delta: Fraction | None = None, ratio: Fraction | None = None) -> dict[str, Fraction]:
    """Right-hand-side height coefficients of the classical bounds, epsilon omitted.

    ``m``, ``kappa`` and ``delta`` are the unweighted invariants; only the
    last entry uses the weighted ratio maximum.
    """
    n = struct.n
    m = min_subgeneral_m(struct, cfg, weighted=False).value if m is None else m
    kappa = index_kappa(struct).value if kappa is None else kappa
    delta = distributive_constant(struct).value if delta is None else delta
    ratio = max_alpha_ratio(struct, cfg).value if ratio is None else ratio
    ru_wong = Fraction(2 * m - n + 1)
    return {
        "2m-n+1": ru_wong,
        "3/2(2m-n+1)": Fraction(3, 2) * ru_wong,
        "(m-n+1)(n+1)": Fraction((m - n + 1) * (n + 1)),
        "JYY": (Fraction(m - n, max(1, min(m - n, kappa))) + 1) * (n + 1),
        "Shi": (Fraction(m - n, kappa) + 1) * (n + 1),
        "Delta(n+1)": delta * (n + 1),
        "(n+1)maxratio": (n + 1) * ratio,
    }


def analyze(struct: IncidenceStructure, cfg: WeightedConfiguration) -> PositionReport:
    m_w = min_subgeneral_m_all_places(struct, cfg)
    m_u = min_subgeneral_m(struct, cfg, weighted=False)
    kappa = index_kappa(struct)
    delta = distributive_constant(struct)
    ratio = max_alpha_ratio(struct, cfg)
    bez = bezout_check(struct)
    menu = coefficient_menu(struct, cfg, m_u.value, kappa.value, delta.value, ratio.value)
    return PositionReport(
        n=struct.n,
        m_min=m_w.value, m_min_witness=m_w.witness,
        m_unweighted=m_u.value,
        kappa=kappa.value, kappa_witness=kappa.witness,
        delta=delta.value, delta_witness=delta.witness,
        max_ratio=ratio.value, max_ratio_witness=ratio.witness,
        bezout_ok=bez.ok, bezout_violation=bez.violation,
        menu=menu,
    )
