"""Built-in configurations and their S-unit point families."""

from __future__ import annotations

from .config import WeightedConfiguration, simple_configuration
from .harness import PointFamily
from .rational import PlaceSet, support_primes


def five_lines() -> WeightedConfiguration:
    """Four lines through Q = [0:0:1] plus the line x2 = 0."""
    return simple_configuration(2, ["x0", "x1", "x0 - x1", "x0 - 2x1", "x2"],
                                labels=["L1", "L2", "L3", "L4", "L5"])


def five_lines_family(k0: int = 1, k1: int = 30) -> tuple[PlaceSet, PointFamily]:
    return PlaceSet(True, (2,)), PointFamily.line_power((3, 1, 0), (0, 0, 1), 2, k0, k1)


def weighted_p2() -> WeightedConfiguration:
    return simple_configuration(2, ["x0", "x1", "x2"], weights=[3, 1, 1], labels=["A", "B", "C"])


_THROUGH_P0 = {
    (2, 1): ["x0", "x1"],
    (2, 2): ["x0", "x1", "x0 - x1", "x0 + x1"],
    (3, 1): ["x0", "x1", "x2"],
}

_BASE_POINT = {(2, 1): (1, 1), (2, 2): (1, 3), (3, 1): (1, 1, 1)}


def _vandermonde_forms(n: int, count: int) -> list[str]:
    # rows (1, t, ..., t^(n-1)) for distinct t: any n of them are independent
    forms = []
    for t in range(count):
        terms = [f"{t ** i}*x{i}" for i in range(n) if t ** i]
        forms.append(" + ".join(terms))
    return forms


def sharpness(n: int, r: int) -> WeightedConfiguration:
    """r*n hyperplanes through P0 = [0:..:0:1], meeting generally otherwise, plus x_n taken r times."""
    through = _THROUGH_P0.get((n, r)) or _vandermonde_forms(n, r * n)
    polys = through + [f"x{n}"] * r
    labels = [f"H{i + 1}" for i in range(r * n)] + [f"H{r * n + i + 1}" for i in range(r)]
    return simple_configuration(n, polys, labels=labels)


def sharpness_family(n: int, r: int, k0: int = 1, k1: int = 30) -> tuple[PlaceSet, PointFamily]:
    """Points A + 2^k e_n on a line through P0, with S covering the values H_i(A).

    Every H_i(A) is then an S-unit and x_n = 2^k is one too.
    """
    cfg = sharpness(n, r)
    base = _BASE_POINT.get((n, r)) or tuple(1 for _ in range(n))
    a = tuple(base) + (0,)
    values = [e.components[0].form.evaluate(a) for e in cfg.entries[: r * n]]
    primes = tuple(sorted(support_primes(values) | {2}))
    e_n = tuple([0] * n + [1])
    return PlaceSet(True, primes), PointFamily.line_power(a, e_n, 2, k0, k1)
