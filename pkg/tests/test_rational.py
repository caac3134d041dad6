import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nochkalab import ARCH, LogRational, Place, PlaceSet, arch_abs, padic_abs
from nochkalab.errors import FactorizationLimitError, ValidationError
from nochkalab.rational import (as_fraction, compare_ratios, exact_ratio, factorize, format_fraction,
                                log_sum, ord_p, support_primes)

positive_q = st.builds(Fraction, st.integers(1, 10**6), st.integers(1, 10**6))


def test_padic_and_arch_examples():
    assert padic_abs(12, 2).arg == Fraction(1, 4)
    assert padic_abs(Fraction(1, 5), 5).arg == 5
    assert arch_abs(-7).arg == 7


def test_valuation_of_zero_rejected():
    with pytest.raises(ValidationError):
        padic_abs(0, 3)
    with pytest.raises(ValidationError):
        arch_abs(0)


def test_product_formula_random_corpus():
    rng = random.Random(20261014)
    for _ in range(10_000):
        num = rng.randint(-10**6, 10**6) or 1
        x = Fraction(num, rng.randint(1, 10**6))
        total = arch_abs(x) + log_sum(padic_abs(x, p) for p in support_primes([x]))
        assert total.arg == 1


def test_order_embedding_random_corpus():
    rng = random.Random(7)
    for _ in range(10_000):
        a = LogRational(Fraction(rng.randint(1, 1000), rng.randint(1, 1000)), rng.randint(1, 4))
        b = LogRational(Fraction(rng.randint(1, 1000), rng.randint(1, 1000)), rng.randint(1, 4))
        ra, rb = a.to_real(), b.to_real()
        if abs(ra - rb) > 1e-12:
            assert (a < b) == (ra < rb)
        if a == b:
            assert math.isclose(ra, rb, abs_tol=1e-12)


@given(positive_q, positive_q)
def test_addition_multiplies_arguments(x, y):
    assert (LogRational(x) + LogRational(y)).arg == x * y
    assert (-LogRational(x)).arg == 1 / x


@given(positive_q, st.integers(1, 5), st.builds(Fraction, st.integers(0, 20), st.integers(1, 6)))
def test_scale_matches_real_value(x, den, f):
    v = LogRational(x, den)
    assert math.isclose(v.scale(f).to_real(), float(f) * v.to_real(), rel_tol=1e-9, abs_tol=1e-9)


def test_reduced_form_makes_equality_structural():
    assert LogRational(4, 2) == LogRational(2)
    assert LogRational(8, 3) == LogRational(2)
    assert hash(LogRational(9, 2)) == hash(LogRational(3))
    assert LogRational(2).scale(Fraction(1, 2)) == LogRational(2, 2)


def test_sum_and_zero():
    assert sum([LogRational(2), LogRational(3)]) == LogRational(6)
    assert LogRational.zero().is_zero()
    assert LogRational(Fraction(1, 2)).sign() == -1


def test_exact_ratio():
    assert exact_ratio(LogRational(8), LogRational(4)) == Fraction(3, 2)
    assert exact_ratio(LogRational(Fraction(1, 9)), LogRational(27)) == Fraction(-2, 3)
    assert exact_ratio(LogRational(3), LogRational(2)) is None
    assert exact_ratio(LogRational(1), LogRational(5)) == 0
    assert exact_ratio(LogRational(2, 3), LogRational(2)) == Fraction(1, 3)


def test_compare_ratios_certified():
    two, three = LogRational(2), LogRational(3)
    # log3/log2 ~ 1.585 vs 3/2
    assert compare_ratios(three, two, LogRational(8), LogRational(4)) == 1
    assert compare_ratios(LogRational(6), two, LogRational(36), LogRational(4)) == 0
    # nearly equal irrational ratios need refinement
    big = LogRational(3 ** 200 + 1)
    assert compare_ratios(big, three, LogRational(3 ** 200), three) == 1
    with pytest.raises(ValidationError):
        compare_ratios(two, LogRational(1), two, three)


def test_json_round_trip():
    v = LogRational(Fraction(27, 4), 2)
    assert LogRational.from_json(v.to_json()) == v
    assert v.to_json()["arg"] == "27/4"


def test_as_fraction_rejects_floats_and_bools():
    with pytest.raises(ValidationError):
        as_fraction(0.5)
    with pytest.raises(ValidationError):
        as_fraction(True)
    assert as_fraction("3/6") == Fraction(1, 2)
    assert format_fraction(Fraction(4)) == "4/1"
    assert format_fraction(Fraction(-3, 6)) == "-1/2"


def test_places():
    assert Place.parse("inf") == ARCH
    assert str(Place(5)) == "5"
    s = PlaceSet(True, (5, 2))
    assert s.primes == (2, 5)
    assert ARCH in s and Place(3) not in s
    assert PlaceSet(False, (2,)).places() == (Place(2),)
    with pytest.raises(ValidationError):
        PlaceSet(True, (4,))
    with pytest.raises(ValidationError):
        PlaceSet(True, (3, 3))


def test_ord_and_factor_cap():
    assert ord_p(Fraction(50, 3), 5) == 2
    assert ord_p(Fraction(50, 3), 3) == -1
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    with pytest.raises(FactorizationLimitError):
        factorize(10**13 + 1)
    assert factorize(10**13 + 1, limit=10**14)
