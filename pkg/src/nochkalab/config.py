"""Weighted divisor configurations and their JSON file format.

A configuration file looks like::

    {
      "ambient_dim": 2,
      "divisors": [
        {"label": "L1", "weight": "1",
         "components": [{"poly": "x0", "multiplicity": 1}]}
      ],
      "places": {"archimedean": true, "primes": [2]},
      "incidence_override": {"nodes": [{"label": "Q", "codim": 2, "contains": [1]}]}
    }

Optional per-divisor keys: ``place_weights`` (place name to rational weight,
overriding ``weight`` at that place) and ``seshadri`` (a positive rational,
only allowed together with ``incidence_override``).  Optional per-component
key: ``irreducible`` (defaults to true for linear forms, false otherwise).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import ConfigSyntaxError, ValidationError
from .poly import HomogeneousPolynomial, parse_polynomial
from .rational import ARCH, Place, PlaceSet, RationalLike, as_fraction


@dataclass(frozen=True)
class DivisorComponent:
    form: HomogeneousPolynomial
    multiplicity: int = 1
    label: str = ""
    irreducible: bool | None = None

    def __post_init__(self):
        if isinstance(self.multiplicity, bool) or not isinstance(self.multiplicity, int) \
                or self.multiplicity < 1:
            raise ValidationError(f"component multiplicity must be a positive integer, got {self.multiplicity!r}")
        if self.irreducible is None:
            object.__setattr__(self, "irreducible", self.form.is_linear)

    @property
    def degree(self) -> int:
        return self.multiplicity * self.form.degree


@dataclass(frozen=True)
class DivisorEntry:
    """One weighted divisor ``D = sum mult_j * V(F_j)`` with weight ``c``."""

    label: str
    weight: Fraction
    components: tuple[DivisorComponent, ...]
    place_weights: tuple[tuple[Place, Fraction], ...] = ()
    seshadri: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "weight", as_fraction(self.weight))
        if self.weight < 0:
            raise ValidationError(f"divisor {self.label!r}: negative weight {self.weight}")
        if not self.components:
            raise ValidationError(f"divisor {self.label!r} has no components")
        pw = tuple(sorted((p, as_fraction(w)) for p, w in self.place_weights))
        for p, w in pw:
            if w < 0:
                raise ValidationError(f"divisor {self.label!r}: negative weight {w} at place {p}")
        if len({p for p, _ in pw}) != len(pw):
            raise ValidationError(f"divisor {self.label!r}: duplicate place weights")
        object.__setattr__(self, "place_weights", pw)
        if self.seshadri is not None:
            object.__setattr__(self, "seshadri", as_fraction(self.seshadri))
            if self.seshadri <= 0:
                raise ValidationError(f"divisor {self.label!r}: Seshadri override must be positive")

    @property
    def degree(self) -> int:
        return sum(c.degree for c in self.components)

    @property
    def num_vars(self) -> int:
        return self.components[0].form.num_vars

    def weight_at(self, place: Place | None = None) -> Fraction:
        if place is not None:
            for p, w in self.place_weights:
                if p == place:
                    return w
        return self.weight

    def support_forms(self) -> tuple[HomogeneousPolynomial, ...]:
        """Distinct primitive component forms (the support, set-theoretically)."""
        seen: list[HomogeneousPolynomial] = []
        for comp in self.components:
            f = comp.form.primitive()
            if f not in seen:
                seen.append(f)
        return tuple(seen)

    @property
    def has_irreducible_support(self) -> bool:
        forms = self.support_forms()
        return len(forms) == 1 and all(c.irreducible for c in self.components)

    @property
    def is_linear(self) -> bool:
        return all(c.form.is_linear for c in self.components)


@dataclass(frozen=True)
class AbstractNodeSpec:
    label: str
    codim: int
    contains: tuple[bool, ...]


@dataclass(frozen=True)
class WeightedConfiguration:
    ambient_dim: int
    entries: tuple[DivisorEntry, ...]
    incidence_override: tuple[AbstractNodeSpec, ...] | None = None

    def __post_init__(self):
        if isinstance(self.ambient_dim, bool) or not isinstance(self.ambient_dim, int) or self.ambient_dim < 1:
            raise ValidationError(f"ambient_dim must be an integer >= 1, got {self.ambient_dim!r}")
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValidationError("configuration has no divisors")
        labels = [e.label for e in entries]
        dupes = sorted({x for x in labels if labels.count(x) > 1})
        if dupes:
            raise ValidationError(f"duplicate divisor labels: {dupes}")
        for e in entries:
            if e.num_vars != self.ambient_dim + 1 or any(
                    c.form.num_vars != self.ambient_dim + 1 for c in e.components):
                raise ValidationError(
                    f"divisor {e.label!r} does not use {self.ambient_dim + 1} variables")
            if e.seshadri is not None and self.incidence_override is None:
                raise ValidationError(
                    f"divisor {e.label!r}: Seshadri overrides are only accepted in abstract mode")
        if all(e.weight == 0 for e in entries):
            raise ValidationError("all weights are zero")

    @property
    def n(self) -> int:
        return self.ambient_dim

    @property
    def q(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)

    def weights(self, place: Place | None = None) -> tuple[Fraction, ...]:
        return tuple(e.weight_at(place) for e in self.entries)

    def weight_places(self) -> tuple[Place, ...]:
        """Places that carry a per-place weight override somewhere."""
        return tuple(sorted({p for e in self.entries for p, _ in e.place_weights}))

    @property
    def is_linear(self) -> bool:
        return all(e.is_linear for e in self.entries)

    def with_weights(self, weights: Sequence[RationalLike]) -> "WeightedConfiguration":
        if len(weights) != self.q:
            raise ValidationError("weight vector length does not match the number of divisors")
        entries = tuple(
            DivisorEntry(e.label, as_fraction(w), e.components, (), e.seshadri)
            for e, w in zip(self.entries, weights))
        return WeightedConfiguration(self.ambient_dim, entries, self.incidence_override)

    def entry(self, label: str) -> DivisorEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)


def simple_configuration(ambient_dim: int, polys: Sequence[str],
                         weights: Sequence[RationalLike] | None = None,
                         labels: Sequence[str] | None = None) -> WeightedConfiguration:
    """Build a configuration with one single-component divisor per polynomial."""
    nv = ambient_dim + 1
    weights = weights if weights is not None else [1] * len(polys)
    labels = labels if labels is not None else [f"D{i + 1}" for i in range(len(polys))]
    entries = tuple(
        DivisorEntry(lab, as_fraction(w), (DivisorComponent(parse_polynomial(p, nv).primitive()),))
        for p, w, lab in zip(polys, weights, labels))
    return WeightedConfiguration(ambient_dim, entries)


# ---------------------------------------------------------------------------
# JSON


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ValidationError(f"{where}: missing required field {key!r}")
    return obj[key]


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_weight(value: Any, where: str) -> Fraction:
    if isinstance(value, (bool, float)) or not isinstance(value, (int, str)):
        raise ValidationError(f"{where}: weights are rationals written as strings, got {value!r}")
    return as_fraction(value)


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigSyntaxError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})",
                                exc.pos) from None
    if not isinstance(doc, dict):
        raise ValidationError("configuration must be a JSON object")
    return doc


def parse_places(obj: Any) -> PlaceSet:
    if obj is None:
        return PlaceSet(True, ())
    if not isinstance(obj, dict):
        raise ValidationError("places must be an object")
    arch = obj.get("archimedean", True)
    if not isinstance(arch, bool):
        raise ValidationError("places.archimedean must be a boolean")
    primes = obj.get("primes", [])
    if not isinstance(primes, list):
        raise ValidationError("places.primes must be an array")
    return PlaceSet(arch, tuple(_as_int(p, "places.primes") for p in primes))


def config_from_dict(doc: dict) -> tuple[WeightedConfiguration, PlaceSet]:
    n = _as_int(_require(doc, "ambient_dim", "config"), "ambient_dim")
    if n < 1:
        raise ValidationError("ambient_dim must be >= 1")
    divisors = _require(doc, "divisors", "config")
    if not isinstance(divisors, list):
        raise ValidationError("divisors must be an array")
    override = doc.get("incidence_override")
    entries = []
    for k, d in enumerate(divisors):
        where = f"divisors[{k}]"
        if not isinstance(d, dict):
            raise ValidationError(f"{where} must be an object")
        label = d.get("label", f"D{k + 1}")
        if not isinstance(label, str) or not label:
            raise ValidationError(f"{where}.label must be a nonempty string")
        weight = _as_weight(_require(d, "weight", where), f"{where}.weight")
        comps_raw = _require(d, "components", where)
        if not isinstance(comps_raw, list) or not comps_raw:
            raise ValidationError(f"{where}.components must be a nonempty array")
        comps = []
        for j, c in enumerate(comps_raw):
            cw = f"{where}.components[{j}]"
            if not isinstance(c, dict):
                raise ValidationError(f"{cw} must be an object")
            text = _require(c, "poly", cw)
            if not isinstance(text, str):
                raise ValidationError(f"{cw}.poly must be a string")
            try:
                form = parse_polynomial(text, n + 1)
            except ConfigSyntaxError as exc:
                raise ConfigSyntaxError(f"{cw}.poly: {exc}") from None
            except ValidationError as exc:
                raise ValidationError(f"{cw}.poly: {exc}") from None
            mult = _as_int(c.get("multiplicity", 1), f"{cw}.multiplicity")
            irreducible = c.get("irreducible")
            if irreducible is not None and not isinstance(irreducible, bool):
                raise ValidationError(f"{cw}.irreducible must be a boolean")
            comps.append(DivisorComponent(form.primitive(), mult, c.get("label", ""), irreducible))
        pw_raw = d.get("place_weights", {})
        if not isinstance(pw_raw, dict):
            raise ValidationError(f"{where}.place_weights must be an object")
        pw = tuple((Place.parse(key), _as_weight(val, f"{where}.place_weights"))
                   for key, val in pw_raw.items())
        sesh = d.get("seshadri")
        if sesh is not None:
            sesh = _as_weight(sesh, f"{where}.seshadri")
        entries.append(DivisorEntry(label, weight, tuple(comps), pw, sesh))
    nodes = None
    if override is not None:
        if not isinstance(override, dict) or not isinstance(override.get("nodes"), list):
            raise ValidationError("incidence_override must be an object with a 'nodes' array")
        nodes = []
        for k, node in enumerate(override["nodes"]):
            where = f"incidence_override.nodes[{k}]"
            if not isinstance(node, dict):
                raise ValidationError(f"{where} must be an object")
            label = _require(node, "label", where)
            codim = _as_int(_require(node, "codim", where), f"{where}.codim")
            contains = _require(node, "contains", where)
            if not isinstance(contains, list) or any(
                    not isinstance(b, (bool, int)) or b not in (0, 1) for b in contains):
                raise ValidationError(f"{where}.contains must be an array of booleans or 0/1")
            nodes.append(AbstractNodeSpec(str(label), codim, tuple(bool(b) for b in contains)))
        nodes = tuple(nodes)
    cfg = WeightedConfiguration(n, tuple(entries), nodes)
    return cfg, parse_places(doc.get("places"))


def parse_config(text: str) -> tuple[WeightedConfiguration, PlaceSet]:
    """Parse and validate a configuration document."""
    return config_from_dict(load_document(text))


def config_to_dict(cfg: WeightedConfiguration, places: PlaceSet | None = None) -> dict:
    divisors = []
    for e in cfg.entries:
        d: dict[str, Any] = {
            "label": e.label,
            "weight": str(e.weight),
            "components": [
                {"poly": str(c.form), "multiplicity": c.multiplicity,
                 **({"label": c.label} if c.label else {}),
                 "irreducible": c.irreducible}
                for c in e.components],
        }
        if e.place_weights:
            d["place_weights"] = {str(p): str(w) for p, w in e.place_weights}
        if e.seshadri is not None:
            d["seshadri"] = str(e.seshadri)
        divisors.append(d)
    doc: dict[str, Any] = {"ambient_dim": cfg.ambient_dim, "divisors": divisors}
    doc["places"] = (places or PlaceSet(True, ())).to_json()
    if cfg.incidence_override is not None:
        doc["incidence_override"] = {"nodes": [
            {"label": nd.label, "codim": nd.codim, "contains": [int(b) for b in nd.contains]}
            for nd in cfg.incidence_override]}
    return doc


def serialize_config(cfg: WeightedConfiguration, places: PlaceSet | None = None) -> str:
    return json.dumps(config_to_dict(cfg, places), indent=2, ensure_ascii=False) + "\n"


__all__ = [
    "ARCH", "AbstractNodeSpec", "DivisorComponent", "DivisorEntry", "WeightedConfiguration",
    "config_from_dict", "config_to_dict", "load_document", "parse_config", "parse_places",
    "serialize_config", "simple_configuration",
]
