"""Weight machinery: generalised Chebyshev bounds, the Nochka diagram's last
segment, explicit weights in dimensions <= 3, and admissible subsets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .config import DivisorComponent, DivisorEntry, WeightedConfiguration
from .errors import InternalCheckError, ValidationError
from .incidence import Flat, IncidenceStructure, alpha
from .position import min_subgeneral_m
from .rational import RationalLike, as_fraction, format_fraction


# ---------------------------------------------------------------------------
# Generalised Chebyshev inequality


@dataclass(frozen=True)
class ChebyshevInstance:
    """Sequences a (nonincreasing), b, c of nonnegative rationals, equal length.

    Sorting ``a`` is the caller's job: the pairing of a with b and c matters.
    """

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self):
        a, b, c = (tuple(as_fraction(x) for x in s) for s in (self.a, self.b, self.c))
        if not (len(a) == len(b) == len(c)) or not a:
            raise ValidationError("a, b, c must be nonempty and of equal length")
        if any(x < 0 for x in a + b + c):
            raise ValidationError("entries must be nonnegative")
        if any(a[i] < a[i + 1] for i in range(len(a) - 1)):
            raise ValidationError("a must be nonincreasing")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def of(cls, a: Sequence[RationalLike], b: Sequence[RationalLike], c: Sequence[RationalLike]):
        return cls(tuple(a), tuple(b), tuple(c))

    def dot(self, other: Sequence[Fraction]) -> Fraction:
        return sum((x * y for x, y in zip(self.a, other)), Fraction(0))


@dataclass(frozen=True)
class ChebyshevBound:
    bound: Fraction
    j: int  # 1-based; ties go to the largest index
    lhs: Fraction
    rhs: Fraction


def _prefix(xs: Sequence[Fraction]) -> list[Fraction]:
    out, s = [], Fraction(0)
    for x in xs:
        s += x
        out.append(s)
    return out


def chebyshev_min_bound(inst: ChebyshevInstance) -> ChebyshevBound:
    """min over j >= i0 of (b_1+..+b_j)/(c_1+..+c_j); then sum a*b >= bound * sum a*c."""
    i0 = next((i for i, x in enumerate(inst.c) if x != 0), None)
    if i0 is None:
        raise ValidationError("at least one c entry must be nonzero")
    pb, pc = _prefix(inst.b), _prefix(inst.c)
    best, best_j = None, None
    for j in range(i0, len(inst.a)):
        r = pb[j] / pc[j]
        if best is None or r <= best:
            best, best_j = r, j
    lhs, rhs = inst.dot(inst.b), best * inst.dot(inst.c)
    if lhs < rhs:
        raise InternalCheckError(f"generalised Chebyshev inequality failed: {lhs} < {rhs}")
    return ChebyshevBound(best, best_j + 1, lhs, rhs)


def chebyshev_max_bound(inst: ChebyshevInstance) -> ChebyshevBound:
    """max over j of (c_1+..+c_j)/(b_1+..+b_j); then factor * sum a*b >= sum a*c."""
    if inst.b[0] == 0:
        raise ValidationError("b_1 must be nonzero")
    pb, pc = _prefix(inst.b), _prefix(inst.c)
    best, best_j = None, None
    for j in range(len(inst.a)):
        r = pc[j] / pb[j]
        if best is None or r >= best:
            best, best_j = r, j
    lhs, rhs = best * inst.dot(inst.b), inst.dot(inst.c)
    if lhs < rhs:
        raise InternalCheckError(f"Chebyshev corollary failed: {lhs} < {rhs}")
    return ChebyshevBound(best, best_j + 1, lhs, rhs)


# ---------------------------------------------------------------------------
# Nochka diagram, last segment


@dataclass(frozen=True)
class NochkaDiagram:
    trivial: bool
    m: int
    w0: str | None = None
    sigma: Fraction | None = None
    alpha_w0: Fraction | None = None
    codim_w0: int | None = None

    def to_json(self) -> dict:
        return {"trivial": self.trivial, "m": self.m, "w0": self.w0,
                "sigma": None if self.sigma is None else format_fraction(self.sigma),
                "alpha_w0": None if self.alpha_w0 is None else format_fraction(self.alpha_w0),
                "codim_w0": self.codim_w0}


def _check_m(struct: IncidenceStructure, cfg: WeightedConfiguration, m: int) -> None:
    need = min_subgeneral_m(struct, cfg).value
    if m < need:
        raise ValidationError(f"configuration is not in {m}-subgeneral position (needs m >= {need})")


def nochka_diagram(struct: IncidenceStructure, cfg: WeightedConfiguration, m: int) -> NochkaDiagram:
    """Locate W0 maximising (n+1-codim W)/(2m-n+1-alpha(W)) when the diagram is non-trivial."""
    _check_m(struct, cfg, m)
    n = struct.n
    top = 2 * m - n + 1
    slope = Fraction(n + 1, top)
    nodes = struct.nonempty_nodes
    if all(node.codim >= slope * alpha(struct, cfg, node) for node in nodes):
        return NochkaDiagram(True, m)
    best = None
    for node in nodes:
        a = alpha(struct, cfg, node)
        den = top - a
        if den <= 0:
            raise InternalCheckError(f"node {node.label}: 2m-n+1-alpha = {den} is not positive")
        s = Fraction(n + 1 - node.codim) / den
        if best is None or s > best[0] or (s == best[0] and node.label < best[1].label):
            best = (s, node, a)
    sigma, w0, a0 = best
    if not (a0 < Fraction(top, 2) and w0.codim < Fraction(n + 1, 2)):
        raise InternalCheckError(f"W0 = {w0.label} is not below and left of ((2m-n+1)/2, (n+1)/2)")
    if not a0 + (n + 1) / sigma < Fraction(3, 2) * top:
        raise InternalCheckError("alpha(W0) + (n+1)/sigma is not below 3/2 (2m-n+1)")
    return NochkaDiagram(False, m, w0.label, sigma, a0, w0.codim)


def corollary_coefficient(struct: IncidenceStructure, cfg: WeightedConfiguration, w0: Flat) -> Fraction:
    """alpha(W0) + (n+1) * max_W (alpha(W) - alpha(W u W0)) / codim W.

    ``alpha(W u W0)`` is the weight of divisors containing both W and W0.
    """
    n = struct.n
    a0 = alpha(struct, cfg, w0)
    best = Fraction(0)
    for node in struct.nonempty_nodes:
        both = sum((e.weight for e, x, y in zip(cfg.entries, node.contains, w0.contains) if x and y),
                   Fraction(0))
        best = max(best, (alpha(struct, cfg, node) - both) / node.codim)
    return a0 + (n + 1) * best


# ---------------------------------------------------------------------------
# Weights


@dataclass(frozen=True)
class NochkaWeights:
    omega: tuple[Fraction, ...]
    tau: Fraction
    B: Fraction
    w0: str | None = None
    sigma: Fraction | None = None
    c: Fraction | None = None

    def to_json(self) -> dict:
        return {"omega": [format_fraction(w) for w in self.omega], "tau": format_fraction(self.tau),
                "B": format_fraction(self.B),
                "w0": self.w0, "sigma": None if self.sigma is None else format_fraction(self.sigma),
                "c": None if self.c is None else format_fraction(self.c)}


@dataclass(frozen=True)
class DirectCase:
    """Weights are unnecessary.

    ``reason`` is "ratio" when max alpha/codim is at most (2m-n+1)/(n+1),
    or "single-support" when every weighted divisor has support W0, so the
    trivial bound c*h with c <= m-n+1 already suffices.
    """

    c: Fraction | None
    threshold: Fraction
    reason: str = "ratio"

    def to_json(self) -> dict:
        return {"direct": True, "reason": self.reason,
                "c": None if self.c is None else format_fraction(self.c),
                "threshold": format_fraction(self.threshold)}


def b_coefficient(cfg: WeightedConfiguration, omega: Sequence[RationalLike]) -> Fraction:
    """(n+1)/tau + sum c_i (1 - omega_i/tau) with tau = max omega."""
    omega = [as_fraction(w) for w in omega]
    if len(omega) != cfg.q:
        raise ValidationError("omega length does not match the number of divisors")
    if any(w < 0 for w in omega):
        raise ValidationError("omega must be nonnegative")
    tau = max(omega)
    if tau == 0:
        raise ValidationError("omega must not be identically zero")
    return Fraction(cfg.n + 1) / tau + sum(
        (e.weight * (1 - w / tau) for e, w in zip(cfg.entries, omega)), Fraction(0))


def verify_nochka_property(struct: IncidenceStructure, cfg: WeightedConfiguration,
                           omega: Sequence[RationalLike]) -> tuple[bool, str | None]:
    """True iff sum over divisors containing W of c_i * omega_i <= codim W on every nonempty node."""
    omega = [as_fraction(w) for w in omega]
    if len(omega) != cfg.q:
        raise ValidationError("omega length does not match the number of divisors")
    for node in struct.nonempty_nodes:
        total = sum((e.weight * w for e, w, b in zip(cfg.entries, omega, node.contains) if b),
                    Fraction(0))
        if total > node.codim:
            return False, node.label
    return True, None


def low_dim_weights(struct: IncidenceStructure, cfg: WeightedConfiguration,
                    m: int) -> NochkaWeights | DirectCase:
    """Explicit weights for n in {1, 2, 3} with irreducible supports.

    Returns :class:`DirectCase` when the largest hyperplane weight
    c = max alpha over codim-1 nodes is at most (2m-n+1)/(n+1).
    """
    n = struct.n
    if n > 3:
        raise ValidationError("explicit weights are only constructed for n <= 3")
    bad = [e.label for e in cfg.entries if not e.has_irreducible_support]
    if bad:
        raise ValidationError(f"divisors {bad} do not have irreducible support; decompose them first")
    _check_m(struct, cfg, m)
    top = 2 * m - n + 1
    threshold = Fraction(top, n + 1)
    if n == 1:
        return DirectCase(None, threshold)
    hyper = [node for node in struct.nonempty_nodes if node.codim == 1]
    if not hyper:
        return DirectCase(None, threshold)
    c = max(alpha(struct, cfg, node) for node in hyper)
    w0 = min((node for node in hyper if alpha(struct, cfg, node) == c), key=lambda f: f.label)
    if c <= threshold:
        return DirectCase(c, threshold)
    if all(b or e.weight == 0 for e, b in zip(cfg.entries, w0.contains)):
        # all weight sits on W0: h-bound c*h with c <= m-n+1 is already enough
        if c > m - n + 1:
            raise InternalCheckError(f"c = {c} exceeds m-n+1 = {m - n + 1}")
        return DirectCase(c, threshold, "single-support")
    big = Fraction(n) / (top - c)
    omega = tuple(1 / c if b else big for b in w0.contains)
    tau = max(omega)
    B = b_coefficient(cfg, omega)
    if tau != big:
        raise InternalCheckError(f"tau = {tau}, expected {big}")
    if B != top:
        raise InternalCheckError(f"B = {B}, expected 2m-n+1 = {top}")
    return NochkaWeights(omega, tau, B, w0.label, None, c)


def decompose_divisors(cfg: WeightedConfiguration) -> WeightedConfiguration:
    """Replace each divisor by its distinct components.

    Component ``F`` of entry ``i`` gets weight ``c_i * mult * deg F / d_i``
    (summed over repeats), which keeps ``sum c_i eps_i m_i`` unchanged and
    never increases alpha.
    """
    entries = []
    for e in cfg.entries:
        d = e.degree
        merged: dict = {}
        order = []
        for comp in e.components:
            f = comp.form.primitive()
            if f not in merged:
                merged[f] = [Fraction(0), comp.irreducible]
                order.append(f)
            merged[f][0] += e.weight * comp.multiplicity * f.degree / d
        multi = len(order) > 1
        for j, f in enumerate(order):
            w, irr = merged[f]
            label = f"{e.label}.{j + 1}" if multi else e.label
            entries.append(DivisorEntry(label, w, (DivisorComponent(f, 1, "", irr),)))
    return WeightedConfiguration(cfg.ambient_dim, tuple(entries))


# ---------------------------------------------------------------------------
# Admissible subsets


@dataclass(frozen=True)
class AdmissibleSubset:
    members: tuple[int, ...]
    total: Fraction


def _feasible_add(loads, node_codims, contains_j, c_j, delta) -> bool:
    return all(not b or load + c_j <= delta * cod
               for load, cod, b in zip(loads, node_codims, contains_j))


def admissible_max_subset(struct: IncidenceStructure, cfg: WeightedConfiguration,
                          delta: RationalLike, values: Sequence[RationalLike],
                          max_entries: int = 20) -> AdmissibleSubset:
    """Maximise sum of values over J subject to: for each nonempty node W,
    the weight of members of J containing W is at most delta * codim W.

    Depth-first branch and bound; include-before-exclude with entries in
    index order, so the first optimum found is deterministic.
    """
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValidationError("delta must be positive")
    values = [as_fraction(v) for v in values]
    if len(values) != cfg.q:
        raise ValidationError("values length does not match the number of divisors")
    if any(v < 0 for v in values):
        raise ValidationError("values must be nonnegative")
    if cfg.q > max_entries:
        raise ValidationError(f"admissible subset search is limited to {max_entries} divisors")
    nodes = struct.nonempty_nodes
    codims = [nd.codim for nd in nodes]
    weights = [e.weight for e in cfg.entries]
    cols = [tuple(nd.contains[j] for nd in nodes) for j in range(cfg.q)]
    suffix = [Fraction(0)] * (cfg.q + 1)
    for j in range(cfg.q - 1, -1, -1):
        suffix[j] = suffix[j + 1] + values[j]

    best = [Fraction(-1), ()]

    def search(j, loads, chosen, total):
        if total + suffix[j] <= best[0]:
            return
        if j == cfg.q:
            best[0], best[1] = total, tuple(chosen)
            return
        if _feasible_add(loads, codims, cols[j], weights[j], delta):
            new_loads = [l + weights[j] if b else l for l, b in zip(loads, cols[j])]
            chosen.append(j)
            search(j + 1, new_loads, chosen, total + values[j])
            chosen.pop()
        search(j + 1, loads, chosen, total)

    search(0, [Fraction(0)] * len(nodes), [], Fraction(0))
    return AdmissibleSubset(best[1], best[0])


def is_admissible(struct: IncidenceStructure, cfg: WeightedConfiguration,
                  delta: RationalLike, members: Sequence[int]) -> bool:
    delta = as_fraction(delta)
    chosen = set(members)
    for node in struct.nonempty_nodes:
        load = sum((cfg.entries[j].weight for j in chosen if node.contains[j]), Fraction(0))
        if load > delta * node.codim:
            return False
    return True
