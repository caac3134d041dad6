"""Independent brute-force oracles.

Geometry goes through sympy's Matrix.rank; invariants are recomputed from
their subset definitions without touching the lattice code.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import sympy

from nochkalab import (DivisorComponent, DivisorEntry, HomogeneousPolynomial, ProjectivePoint,
                       WeightedConfiguration)


def sym_rank(rows) -> int:
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in r] for r in rows]).rank()


def rows_of(cfg, idx):
    return [cfg.entries[i].components[0].form.linear_vector() for i in idx]


def subset_codim(cfg, idx):
    """Codimension of the intersection of the supports; n+1 means empty."""
    return sym_rank(rows_of(cfg, idx))


def containing(cfg, idx):
    """Entries whose hyperplane contains the intersection of ``idx``."""
    base = rows_of(cfg, idx)
    r = sym_rank(base)
    return [j for j in range(cfg.q) if sym_rank(base + rows_of(cfg, [j])) == r]


def nonempty_subsets(cfg):
    n1 = cfg.n + 1
    for size in range(1, cfg.q + 1):
        for idx in itertools.combinations(range(cfg.q), size):
            c = subset_codim(cfg, idx)
            yield idx, c, c < n1


def oracle_m(cfg, weighted=False):
    """Smallest m >= n with the subgeneral position inequality on every subset I."""
    n = cfg.n
    for m in itertools.count(n):
        ok = True
        for idx, c, nonempty in nonempty_subsets(cfg):
            if weighted:
                if nonempty:
                    a = sum(cfg.entries[j].weight for j in containing(cfg, idx))
                    ok = c >= a + n - m
            elif len(idx) <= m + 1:
                ok = c >= len(idx) + n - m
            if not ok:
                break
        if ok:
            return m


def oracle_kappa(cfg):
    """Largest kappa <= n+1 with codim of any |J| <= kappa intersection >= |J|."""
    n1 = cfg.n + 1
    best = 0
    for kappa in range(1, n1 + 1):
        if all(subset_codim(cfg, idx) >= len(idx)
               for size in range(1, min(kappa, cfg.q) + 1)
               for idx in itertools.combinations(range(cfg.q), size)):
            best = kappa
        else:
            break
    return best


def oracle_delta(cfg):
    best = Fraction(1)
    for idx, c, nonempty in nonempty_subsets(cfg):
        if nonempty:
            best = max(best, Fraction(len(idx), c))
    return best


def oracle_ratio(cfg):
    best = Fraction(0)
    for idx, c, nonempty in nonempty_subsets(cfg):
        if nonempty:
            a = sum((cfg.entries[j].weight for j in containing(cfg, idx)), Fraction(0))
            best = max(best, a / c)
    return best


def oracle_admissible(cfg, delta, values):
    nodes = {}
    for idx, c, nonempty in nonempty_subsets(cfg):
        if nonempty:
            nodes[tuple(containing(cfg, idx))] = c
    best = Fraction(0)
    for size in range(cfg.q + 1):
        for J in itertools.combinations(range(cfg.q), size):
            Js = set(J)
            if all(sum((cfg.entries[j].weight for j in cont if j in Js), Fraction(0)) <= delta * c
                   for cont, c in nodes.items()):
                best = max(best, sum((values[j] for j in J), Fraction(0)))
    return best


def random_linear_config(rng: random.Random, n: int, q: int, coeff: int = 2,
                         max_weight: int = 1, concurrent: bool = True) -> WeightedConfiguration:
    """Random hyperplanes; with ``concurrent`` some pass through a common point or repeat."""
    forms = []
    center = [rng.randint(-1, 1) for _ in range(n + 1)]
    if not any(center):
        center[-1] = 1
    while len(forms) < q:
        roll = rng.random()
        if forms and concurrent and roll < 0.15:
            vec = list(rng.choice(forms))
        else:
            vec = [rng.randint(-coeff, coeff) for _ in range(n + 1)]
            if concurrent and roll < 0.5:
                # force the hyperplane through ``center``
                k = next((i for i, x in enumerate(center) if x), None)
                s = sum(a * b for a, b in zip(vec, center))
                vec[k] -= Fraction(s, center[k])
                den = math.lcm(*[Fraction(x).denominator for x in vec])
                vec = [int(Fraction(x) * den) for x in vec]
        if any(vec):
            forms.append(tuple(vec))
    entries = tuple(
        DivisorEntry(f"D{i + 1}", Fraction(rng.randint(1, max_weight)),
                     (DivisorComponent(HomogeneousPolynomial.linear(v).primitive()),))
        for i, v in enumerate(forms))
    return WeightedConfiguration(n, entries)


# ---------------------------------------------------------------------------
# random forms and points

def monomials(nv, d):
    for combo in itertools.combinations_with_replacement(range(nv), d):
        yield tuple(combo.count(i) for i in range(nv))


def random_form(rng, nv, d):
    while True:
        terms = {e: rng.randint(-9, 9) for e in monomials(nv, d) if rng.random() < 0.6}
        terms = {e: c for e, c in terms.items() if c}
        if terms:
            return HomogeneousPolynomial.from_dict(nv, terms).primitive()


def random_point(rng, nv, bound=10**6):
    while True:
        coords = [rng.randint(-bound, bound) for _ in range(nv)]
        if any(coords):
            return ProjectivePoint(tuple(coords))


def form_and_point(rng, limit=10**6):
    while True:
        nv = rng.randint(3, 4) if rng.random() < 0.8 else 2
        form = random_form(rng, nv, rng.randint(1, 3))
        point = random_point(rng, nv, limit)
        if form.evaluate(point.coords) != 0:
            return form, point
