"""Intersection lattices of divisor supports.

For linear configurations the lattice is computed exactly: every node is a
flat (an intersection of component hyperplanes) keyed by the reduced row
echelon form of its defining forms.  For anything else the user supplies the
nodes (label, codimension, containment bitset) and the structure is taken on
trust after shape checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from .config import AbstractNodeSpec, WeightedConfiguration
from .errors import NodeLimitError, ValidationError
from .linalg import Row, in_span, rref
from .poly import HomogeneousPolynomial
from .rational import Place

DEFAULT_NODE_CAP = 20000
EMPTY_LABEL = "EMPTY"

EmptyConvention = Literal["finite", "infinite"]


@dataclass(frozen=True)
class Flat:
    """A lattice node.

    ``contains[i]`` is true iff the node lies in the support of entry ``i``.
    The empty set is a node with ``is_empty`` set and ``codim == n + 1``.
    """

    label: str
    codim: int
    contains: tuple[bool, ...]
    basis: tuple[Row, ...] | None = None
    is_empty: bool = False

    def containing(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.contains) if b)


def _flat_label(basis: Sequence[Row]) -> str:
    forms = [str(HomogeneousPolynomial.linear(row).primitive()) for row in basis]
    return "V(" + ", ".join(forms) + ")"


class IncidenceStructure:
    """Immutable collection of lattice nodes plus intersection queries."""

    def __init__(self, ambient_dim: int, num_entries: int, nodes: Iterable[Flat],
                 source: Literal["linear", "abstract"],
                 entry_hyperplanes: Sequence[tuple[Row, ...]] | None = None):
        self.ambient_dim = ambient_dim
        self.num_entries = num_entries
        self.source = source
        self.nodes: tuple[Flat, ...] = tuple(sorted(nodes, key=lambda f: (f.codim, f.label)))
        self._by_label = {f.label: f for f in self.nodes}
        self._by_key = {f.basis: f for f in self.nodes if f.basis is not None}
        self._entry_hyperplanes = tuple(entry_hyperplanes) if entry_hyperplanes is not None else None
        empties = [f for f in self.nodes if f.is_empty]
        self._empty = empties[0] if empties else None

    def __repr__(self) -> str:
        return f"IncidenceStructure(n={self.ambient_dim}, nodes={len(self.nodes)}, source={self.source!r})"

    @property
    def n(self) -> int:
        return self.ambient_dim

    @property
    def nonempty_nodes(self) -> tuple[Flat, ...]:
        return tuple(f for f in self.nodes if not f.is_empty)

    @property
    def empty_node(self) -> Flat | None:
        return self._empty

    def node(self, label: str) -> Flat:
        return self._by_label[label]

    def codim(self, node: Flat, empty: EmptyConvention = "finite") -> float | int:
        """Codimension, with the empty set counted as ``n + 1`` or as infinity."""
        if node.is_empty:
            return self.ambient_dim + 1 if empty == "finite" else math.inf
        return node.codim

    def _synthetic_empty(self) -> Flat:
        return self._empty or Flat(EMPTY_LABEL, self.ambient_dim + 1,
                                   (True,) * self.num_entries, None, True)

    def intersection_of(self, entries: Iterable[int]) -> Flat:
        """The node equal to the intersection of the supports of ``entries``."""
        idx = sorted(set(entries))
        if not idx:
            raise ValidationError("intersection of no divisors is the whole space")
        if self.source == "linear":
            rows = []
            for i in idx:
                hyps = self._entry_hyperplanes[i]
                if len(hyps) != 1:
                    raise ValidationError(
                        f"entry {i} has a reducible support; decompose it into components first")
                rows.append(hyps[0])
            basis = rref(rows)
            if len(basis) == self.ambient_dim + 1:
                return self._synthetic_empty()
            return self._by_key[basis]
        wanted = set(idx)
        candidates = [f for f in self.nodes
                      if not f.is_empty and wanted.issubset(f.containing())]
        if not candidates:
            return self._synthetic_empty()
        return min(candidates, key=lambda f: (f.codim, f.label))

    def meet(self, a: Flat, b: Flat) -> Flat:
        """Intersection of two nodes."""
        if a.is_empty or b.is_empty:
            return self._synthetic_empty()
        if self.source == "linear":
            basis = rref(a.basis + b.basis)
            if len(basis) == self.ambient_dim + 1:
                return self._synthetic_empty()
            return self._by_key[basis]
        union = set(a.containing()) | set(b.containing())
        if not union:
            raise ValidationError(
                f"cannot intersect abstract nodes {a.label!r}, {b.label!r}: neither lies in any divisor")
        return self.intersection_of(union)

    def to_json(self) -> list[dict]:
        return [{"label": f.label, "codim": f.codim,
                 "contains": [int(b) for b in f.contains], "empty": f.is_empty}
                for f in self.nodes]


def build_lattice(cfg: WeightedConfiguration, node_cap: int = DEFAULT_NODE_CAP) -> IncidenceStructure:
    """All distinct flats cut out by the component hyperplanes of ``cfg``."""
    if not cfg.is_linear:
        bad = [e.label for e in cfg.entries if not e.is_linear]
        raise ValidationError(
            f"divisors {bad} have non-linear components; factor them into linear components "
            "or describe the incidences with 'incidence_override' (abstract mode)")
    n = cfg.ambient_dim
    hyperplanes: list[Row] = []
    entry_hyps: list[tuple[Row, ...]] = []
    for e in cfg.entries:
        keys = []
        for form in e.support_forms():
            key = rref([form.linear_vector()])[0]
            if key not in hyperplanes:
                hyperplanes.append(key)
            if key not in keys:
                keys.append(key)
        entry_hyps.append(tuple(keys))

    flats: dict[tuple[Row, ...], None] = {}
    frontier = []
    for h in hyperplanes:
        key = (h,)
        if key not in flats:
            flats[key] = None
            frontier.append(key)
    has_empty = False
    while frontier:
        nxt = []
        for basis in frontier:
            for h in hyperplanes:
                if in_span(basis, h):
                    continue
                new = rref(basis + (h,))
                if len(new) == n + 1:
                    has_empty = True
                    continue
                if new not in flats:
                    flats[new] = None
                    nxt.append(new)
                    if len(flats) > node_cap:
                        raise NodeLimitError(
                            f"intersection lattice exceeds {node_cap} nodes; raise node_cap")
        frontier = nxt

    nodes = []
    for basis in flats:
        contains = tuple(any(in_span(basis, h) for h in hyps) for hyps in entry_hyps)
        nodes.append(Flat(_flat_label(basis), len(basis), contains, basis, False))
    if has_empty:
        nodes.append(Flat(EMPTY_LABEL, n + 1, (True,) * cfg.q, None, True))
    return IncidenceStructure(n, cfg.q, nodes, "linear", entry_hyps)


def abstract_structure(ambient_dim: int, num_entries: int,
                       nodes: Sequence[AbstractNodeSpec | tuple]) -> IncidenceStructure:
    """Validate user-declared lattice nodes; codim ``n + 1`` marks the empty set."""
    if not nodes:
        raise ValidationError("at least one node is required for analysis")
    out = []
    seen_pairs = set()
    labels = set()
    for spec in nodes:
        if not isinstance(spec, AbstractNodeSpec):
            spec = AbstractNodeSpec(str(spec[0]), spec[1], tuple(bool(b) for b in spec[2]))
        if isinstance(spec.codim, bool) or not isinstance(spec.codim, int) \
                or not 1 <= spec.codim <= ambient_dim + 1:
            raise ValidationError(
                f"node {spec.label!r}: codim {spec.codim!r} outside [1, {ambient_dim + 1}]")
        if len(spec.contains) != num_entries:
            raise ValidationError(
                f"node {spec.label!r}: bitset has length {len(spec.contains)}, expected {num_entries}")
        pair = (spec.codim, spec.contains)
        if pair in seen_pairs:
            raise ValidationError(f"node {spec.label!r} duplicates another node's codim and bitset")
        if spec.label in labels:
            raise ValidationError(f"duplicate node label {spec.label!r}")
        seen_pairs.add(pair)
        labels.add(spec.label)
        out.append(Flat(spec.label, spec.codim, spec.contains, None, spec.codim == ambient_dim + 1))
    if sum(f.is_empty for f in out) > 1:
        raise ValidationError("at most one empty node (codim n+1) may be declared")
    return IncidenceStructure(ambient_dim, num_entries, out, "abstract")


def structure_for(cfg: WeightedConfiguration, node_cap: int = DEFAULT_NODE_CAP) -> IncidenceStructure:
    """Abstract structure when the config carries an override, else the computed lattice."""
    if cfg.incidence_override is not None:
        return abstract_structure(cfg.ambient_dim, cfg.q, cfg.incidence_override)
    return build_lattice(cfg, node_cap)


def alpha(struct: IncidenceStructure, cfg: WeightedConfiguration, node: Flat,
          place: Place | None = None) -> Fraction:
    """Total weight of the divisors whose support contains ``node``."""
    return sum((e.weight_at(place) for e, b in zip(cfg.entries, node.contains) if b), Fraction(0))


def alpha_count(node: Flat) -> int:
    return sum(node.contains)
