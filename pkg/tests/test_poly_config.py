import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nochkalab import (HomogeneousPolynomial, ProjectivePoint, evaluate_form, parse_config,
                       parse_polynomial, serialize_config)
from nochkalab.config import config_to_dict
from nochkalab.errors import ConfigSyntaxError, ValidationError


def doc(**kw):
    base = {"ambient_dim": 2, "divisors": [{"label": "A", "weight": "3", "components": [{"poly": "x0"}]}],
            "places": {"archimedean": True, "primes": [2]}}
    base.update(kw)
    return json.dumps(base)


def test_single_linear_divisor():
    cfg, places = parse_config(doc())
    e = cfg.entries[0]
    assert e.weight == 3 and e.degree == 1 and len(e.components) == 1
    assert places.primes == (2,)


def test_conic_term_count():
    f = parse_polynomial("x0*x1 - x2^2", 3)
    assert f.degree == 2 and f.num_terms == 2


@pytest.mark.parametrize("text", ["x0 + x1^2", "x0^2 + x1"])
def test_non_homogeneous_rejected(text):
    with pytest.raises(ValidationError, match="homogeneous"):
        parse_polynomial(text, 3)


def test_zero_polynomial_rejected():
    with pytest.raises(ValidationError):
        parse_polynomial("x0 - x0", 2)


def test_syntax_error_has_position():
    with pytest.raises(ConfigSyntaxError) as info:
        parse_polynomial("x0 + * x1", 2)
    assert info.value.position is not None


def test_variable_out_of_range():
    with pytest.raises(ValidationError):
        parse_polynomial("x3", 3)


def test_grammar_variants():
    a = parse_polynomial("3/2 x0^2 x1 - 2*x1^3", 2)
    b = parse_polynomial("-2x1^3+3/2*x0^2*x1", 2)
    assert a == b
    assert str(a.primitive()) == "3*x0^2*x1 - 4*x1^3"


def test_evaluate_examples():
    assert evaluate_form(parse_polynomial("x0*x1 - x2^2", 3), ProjectivePoint.of(1, 2, 1)) == 1
    assert evaluate_form(parse_polynomial("x0", 3), ProjectivePoint.of(0, 0, 1)) == 0
    assert evaluate_form(parse_polynomial("2x0^3", 3), ProjectivePoint.of(3, 1, 1)) == 54


def test_primitive_canonical_form():
    f = parse_polynomial("-4x0 + 6x1", 2).primitive()
    assert f.coefficients() == (Fraction(2), Fraction(-3))
    assert f.is_primitive


def test_projective_point_canonical():
    assert ProjectivePoint.of(4, 6, 10).coords == (2, 3, 5)
    assert ProjectivePoint.of(0, -2, 4).coords == (0, 1, -2)
    assert ProjectivePoint.of(Fraction(1, 2), Fraction(1, 3), 1).coords == (3, 2, 6)
    with pytest.raises(ValidationError):
        ProjectivePoint.of(0, 0, 0)


@pytest.mark.parametrize("bad, msg", [
    ({"divisors": [{"label": "A", "weight": "-1", "components": [{"poly": "x0"}]}]}, "negative"),
    ({"places": {"archimedean": True, "primes": [6]}}, "prime"),
    ({"divisors": [{"label": "A", "weight": 0.5, "components": [{"poly": "x0"}]}]}, "weight"),
    ({"divisors": [{"label": "A", "weight": "1", "components": [{"poly": "x0"}]},
                   {"label": "A", "weight": "1", "components": [{"poly": "x1"}]}]}, "duplicate"),
    ({"divisors": [{"label": "A", "weight": "0", "components": [{"poly": "x0"}]}]}, "zero"),
])
def test_config_validation(bad, msg):
    with pytest.raises(ValidationError, match=msg):
        parse_config(doc(**bad))


def test_json_syntax_error_is_positioned():
    with pytest.raises(ConfigSyntaxError) as info:
        parse_config('{"ambient_dim": 2,, }')
    assert info.value.position is not None


def test_multiplicity_and_degree():
    cfg, _ = parse_config(doc(divisors=[{"label": "A", "weight": "1/2", "components": [
        {"poly": "x0", "multiplicity": 2}, {"poly": "x1*x2 - x0^2"}]}]))
    assert cfg.entries[0].degree == 4
    assert cfg.entries[0].weight == Fraction(1, 2)


poly_text = st.lists(
    st.tuples(st.integers(-9, 9).filter(bool), st.integers(0, 3), st.integers(0, 3)),
    min_size=1, max_size=4)


@given(poly_text, st.lists(st.integers(1, 4), min_size=1, max_size=3))
def test_parse_serialize_parse_identity(terms, weights):
    divisors = []
    for k, w in enumerate(weights):
        comps = []
        for coef, a, b in terms:
            c = 3 - a - b if a + b <= 3 else None
            if c is None:
                continue
            comps.append(f"{coef}*x0^{a}*x1^{b}*x2^{c}")
        text = " + ".join(comps) or "x0^3"
        divisors.append({"label": f"D{k}", "weight": f"{w}/{k + 1}", "components": [{"poly": text}]})
    try:
        cfg, places = parse_config(json.dumps({"ambient_dim": 2, "divisors": divisors}))
    except ValidationError:
        return  # terms cancelled to zero
    once = serialize_config(cfg, places)
    cfg2, places2 = parse_config(once)
    assert cfg2 == cfg and places2 == places
    assert serialize_config(cfg2, places2) == once


def test_override_round_trip():
    text = doc(incidence_override={"nodes": [{"label": "W", "codim": 1, "contains": [1]}]},
               divisors=[{"label": "A", "weight": "1", "seshadri": "5/7",
                          "components": [{"poly": "x0^2 - x1 x2", "irreducible": True}]}])
    cfg, places = parse_config(text)
    assert cfg.entries[0].seshadri == Fraction(5, 7)
    assert parse_config(serialize_config(cfg, places))[0] == cfg
    assert config_to_dict(cfg)["incidence_override"]["nodes"][0]["contains"] == [1]


def test_seshadri_override_requires_abstract_mode():
    with pytest.raises(ValidationError, match="abstract"):
        parse_config(doc(divisors=[{"label": "A", "weight": "1", "seshadri": "1/2",
                                    "components": [{"poly": "x0"}]}]))


def test_linear_constructor():
    f = HomogeneousPolynomial.linear([1, -2, 0])
    assert f.is_linear and f.linear_vector() == (1, -2, 0)
