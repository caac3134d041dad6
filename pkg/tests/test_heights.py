import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from nochkalab import (ARCH, LogRational, Place, PlaceSet, ProjectivePoint, global_height, local_weil,
                       min_weil, multi_weil, parse_polynomial, proximity_counting, seshadri_pn,
                       simple_configuration)
from nochkalab.config import DivisorComponent, DivisorEntry
from nochkalab.errors import FactorizationLimitError, PointOnDivisorError, ValidationError
from nochkalab.heights import form_height_constant, relevant_primes
from nochkalab.rational import log_sum, support_primes

from oracles import form_and_point, random_form, random_point

P7 = ProjectivePoint.of(7, 1, 1)


def entry(label, *forms, mults=None, nv=3):
    mults = mults or [1] * len(forms)
    return DivisorEntry(label, F(1), tuple(DivisorComponent(parse_polynomial(f, nv), k)
                                           for f, k in zip(forms, mults)))


def test_global_height_examples():
    assert global_height(ProjectivePoint.of(1, 2, 3)) == LogRational(3)
    assert global_height(ProjectivePoint.of(4, 6, 10)) == LogRational(5)
    assert global_height(ProjectivePoint.of(1, 1, 1)).is_zero()
    assert global_height(ProjectivePoint.of(F(1, 2), F(1, 3), 1)) == LogRational(6)


def test_local_weil_examples():
    x0 = parse_polynomial("x0", 3)
    assert local_weil(x0, Place(7), P7).value == LogRational(7)
    assert local_weil(x0, ARCH, P7).value.is_zero()
    conic = parse_polynomial("x0*x1 - x2^2", 3)
    assert local_weil(conic, ARCH, ProjectivePoint.of(1, 2, 1)).value == LogRational(4)


def test_local_weil_on_divisor():
    with pytest.raises(PointOnDivisorError):
        local_weil(parse_polynomial("x0 - x1", 3), ARCH, ProjectivePoint.of(2, 2, 1))
    with pytest.raises(ValidationError):
        local_weil(parse_polynomial("x0", 3), ARCH, (1, 2))


def test_multi_weil_examples():
    v = Place(7)
    assert multi_weil(entry("D", "x0", mults=[2]), v, P7).value == LogRational(49)
    assert multi_weil(entry("D", "x0", "x1"), v, ProjectivePoint.of(7, 7, 1)).value == LogRational(49)
    single = entry("D", "x0 + x2")
    assert multi_weil(single, ARCH, P7).value == local_weil(single.components[0].form, ARCH, P7).value


def test_min_weil_examples():
    v = Place(7)
    a, b = entry("A", "x0"), entry("B", "x1")
    assert min_weil([a, b], v, P7).value.is_zero()
    assert min_weil([a, a], v, P7).value == LogRational(7)
    assert min_weil([a], v, P7).value == multi_weil(a, v, P7).value
    with pytest.raises(ValidationError):
        min_weil([], v, P7)


def test_proximity_examples():
    cfg = simple_configuration(2, ["x0"])
    b = proximity_counting(cfg, PlaceSet(True, ()), P7)
    d = b.divisor("D1")
    assert (d.m_S, d.N_S, b.h) == (LogRational.zero(), LogRational(7), LogRational(7))
    d = proximity_counting(cfg, PlaceSet(True, (7,)), P7).divisor("D1")
    assert (d.m_S, d.N_S) == (LogRational(7), LogRational.zero())
    cfg = simple_configuration(2, ["x0*x1 - x2^2"])
    b = proximity_counting(cfg, PlaceSet(True, ()), ProjectivePoint.of(1, 2, 1))
    assert b.divisor("D1").m_S == LogRational(4) == b.h.scale(2)
    assert b.divisor("D1").N_S.is_zero()


def test_proximity_errors():
    cfg = simple_configuration(2, ["x0 - x1"])
    with pytest.raises(PointOnDivisorError):
        proximity_counting(cfg, PlaceSet(True, ()), ProjectivePoint.of(1, 1, 5))
    with pytest.raises(ValidationError):
        proximity_counting(cfg, PlaceSet(True, ()), ProjectivePoint.of(1, 1))
    big = ProjectivePoint.of(1, 2, 10**13 + 1)
    with pytest.raises(FactorizationLimitError):
        proximity_counting(cfg, PlaceSet(True, ()), big)
    assert proximity_counting(cfg, PlaceSet(True, ()), big, factor_limit=10**14)


def test_seshadri():
    assert seshadri_pn(1) == 1
    assert seshadri_pn(3) == F(1, 3)
    assert seshadri_pn(2, F(5, 7)) == F(5, 7)
    for bad in (0, -1, True):
        with pytest.raises(ValidationError):
            seshadri_pn(bad)
    with pytest.raises(ValidationError):
        seshadri_pn(1, 0)


# ---------------------------------------------------------------------------
# random forms

def all_places_sum(form, point, limit):
    primes = support_primes([form.evaluate(point.coords), *point.coords, *form.coefficients()], limit)
    places = [ARCH] + [Place(p) for p in sorted(primes)]
    values = [local_weil(form, v, point).value for v in places]
    return log_sum(values), values


def test_decomposition_identity_random_corpus():
    rng = random.Random(61)
    for _ in range(1000):
        form, point = form_and_point(rng)
        total, values = all_places_sum(form, point, 10**40)
        expected = global_height(point).scale(form.degree) + LogRational(form.coeff_norm(ARCH))
        assert total == expected
        assert total == global_height(point).scale(form.degree) + form_height_constant(form)
        assert all(v.arg >= 1 for v in values[1:])
        assert values[0].arg >= F(1, form.num_terms)
        # height domination with constant log||F||/d
        assert total.scale(F(1, form.degree)) <= global_height(point) + \
            LogRational(form.coeff_norm(ARCH)).scale(F(1, form.degree))


def test_unlisted_primes_contribute_nothing():
    rng = random.Random(62)
    for _ in range(200):
        form, point = form_and_point(rng, 1000)
        e = DivisorEntry("D", F(1), (DivisorComponent(form),))
        rel = relevant_primes([e], point)
        for p in (2, 3, 5, 7, 11, 13, 101):
            if p not in rel:
                assert local_weil(form, Place(p), point).value.is_zero()


scales = st.builds(F, st.integers(-50, 50).filter(bool), st.integers(1, 50))


@given(st.integers(0, 10**6), scales)
def test_representative_invariance(seed, scale):
    rng = random.Random(seed)
    form, point = form_and_point(rng, 1000)
    scaled = [scale * x for x in point.coords]
    for v in (ARCH, Place(2), Place(3), Place(5)):
        assert local_weil(form, v, scaled).value == local_weil(form, v, point).value


@given(st.integers(0, 10**6))
def test_m_S_additive_and_monotone(seed):
    rng = random.Random(seed)
    nv = rng.randint(3, 4)
    forms = [str(random_form(rng, nv, rng.randint(1, 2))) for _ in range(rng.randint(1, 3))]
    cfg = simple_configuration(nv - 1, forms)
    point = random_point(rng, nv, 500)
    if any(e.components[0].form.evaluate(point.coords) == 0 for e in cfg.entries):
        return
    pool = [2, 3, 5, 7, 11]
    small = PlaceSet(rng.random() < 0.5, tuple(p for p in pool if rng.random() < 0.4))
    # only finite places are added: the archimedean value may be negative
    large = PlaceSet(small.archimedean, tuple(sorted(set(small.primes) | {p for p in pool if rng.random() < 0.5})))
    b_small = proximity_counting(cfg, small, point)
    b_large = proximity_counting(cfg, large, point)
    b_arch = proximity_counting(cfg, PlaceSet(True, large.primes), point)
    for ds, dl, da in zip(b_small.divisors, b_large.divisors, b_arch.divisors):
        assert ds.total == dl.total
        assert ds.m_S <= dl.m_S
        if not large.archimedean:
            assert da.m_S == dl.m_S + dl.value_at(ARCH)
        assert ds.total == global_height(point).scale(ds.degree) + \
            LogRational(cfg.entry(ds.label).components[0].form.coeff_norm(ARCH))
    assert b_small.h.arg >= 1


def test_breakdown_json_is_exact():
    cfg = simple_configuration(2, ["x0", "x1 + x2"])
    b = proximity_counting(cfg, PlaceSet(True, (2,)), ProjectivePoint.of(4, 1, 2))
    doc = b.to_json()
    assert doc["h"]["arg"] == "4/1"
    assert [d["label"] for d in doc["divisors"]] == ["D1", "D2"]
    two = b.divisor("D1").value_at(Place(2))
    assert two == LogRational(4)
    assert b.divisor("D1").value_at(Place(97)).is_zero()
