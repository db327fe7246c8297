"""Polynomial kernel: canonical forms, parsing, calculus, ring axioms."""

import random

import pytest

from clpoisson import ParseError, PolyError, Polynomial, VarTable
from clpoisson.rationals import rational

VT = VarTable(("x12", "x13", "x21", "x23", "x31", "x32", "y13", "y23"), ("b0", "h"))


def parse(text, vt=VT):
    return Polynomial.parse(text, vt)


def random_poly(rng, vt, max_deg=4, n_terms=4):
    p = Polynomial.zero(vt)
    for _ in range(n_terms):
        mono = {}
        for _ in range(rng.randint(0, max_deg)):
            v = rng.randrange(vt.n_coordinates)
            mono[v] = mono.get(v, 0) + 1
        c = rational(rng.randint(-9, 9), rng.choice((1, 2, 3)))
        p = p + Polynomial(vt, {tuple(sorted(mono.items())): c} if c else {})
    return p


# -- parsing ---------------------------------------------------------------------

def test_parse_zero():
    assert parse("0").is_zero()
    assert parse("0").format() == "0"


def test_parse_q12_expands_to_four_terms():
    # x12*x21 - 1/2*(y13-y23)^2 = x12*x21 - 1/2 y13^2 + y13 y23 - 1/2 y23^2
    p = parse("x12*x21-1/2*(y13-y23)^2")
    expected = parse("x12*x21-1/2*y13*y13+y13*y23-1/2*y23*y23")
    assert p == expected
    assert p.n_terms() == 4


def test_parse_single_term_with_rational_coefficient():
    p = parse("3/2*b0^2*y13")
    assert p.n_terms() == 1
    [(mono, coeff)] = p.terms.items()
    assert coeff == rational(3, 2)
    assert p.degree() == 3


def test_parse_implicit_multiplication_and_signs():
    assert parse("2x12") == parse("2*x12")
    assert parse("-x12+x12").is_zero()
    assert parse("-1/2*x12*2+x12").is_zero()
    assert parse("x12(x21+1)") == parse("x12*x21+x12")


def test_parse_unknown_variable_reports_position():
    with pytest.raises(ParseError) as err:
        parse("x12*zz9")
    assert err.value.position == 4


def test_parse_syntax_error_reports_position():
    with pytest.raises(ParseError):
        parse("x12*")
    with pytest.raises(ParseError):
        parse("(x12")
    with pytest.raises(ParseError):
        parse("x12 x13)")


def test_format_emits_no_carets_or_parens():
    p = parse("(x12+y13)^2")
    text = p.format()
    assert "^" not in text and "(" not in text
    assert Polynomial.parse(text, VT) == p


def test_format_parse_roundtrip_random():
    rng = random.Random(5)
    for _ in range(200):
        p = random_poly(rng, VT)
        assert Polynomial.parse(p.format(), VT) == p


def test_format_leading_term_unsigned():
    assert parse("x12+x13").format()[0] not in "+-"
    assert parse("-x12-x13").format().startswith("-")


# -- ring axioms -----------------------------------------------------------------

def test_ring_axioms_thousand_trials():
    rng = random.Random(11)
    vt = VarTable(tuple(f"z{i}" for i in range(6)))
    for _ in range(1000):
        a, b, c = (random_poly(rng, vt, 4, 3) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a + b == b + a


def test_canonical_form_has_no_zero_entries():
    rng = random.Random(13)
    for _ in range(100):
        a = random_poly(rng, VT)
        b = random_poly(rng, VT)
        assert (a - a).terms == {}
        assert ((a * b) - (b * a)).terms == {}
        assert all(c for c in (a * b).terms.values())


def test_pow_matches_repeated_multiplication():
    p = parse("x12+2*y13")
    assert p ** 3 == p * p * p
    assert (p ** 0) == Polynomial.const(VT, 1)


# -- calculus --------------------------------------------------------------------

def test_partial_derivative_examples():
    assert parse("x12^2*y13").diff("x12") == parse("2*x12*y13")
    assert parse("7/3").diff("x12").is_zero()
    q12 = parse("x12*x21-1/2*(y13-y23)^2")
    assert q12.diff("y13") == parse("-y13+y23")


def test_partial_derivative_unknown_variable():
    with pytest.raises(PolyError):
        parse("x12").diff("nope")


def test_derivative_against_shift_oracle():
    """d/dv p = coefficient of h in p(v -> v + h), an independent route."""
    rng = random.Random(17)
    h = Polynomial.variable(VT, "h")
    for _ in range(60):
        p = random_poly(rng, VT)
        for var in ("x12", "y23"):
            shifted = p.substitute_poly({var: Polynomial.variable(VT, var) + h})
            hi = VT.index("h")
            linear = {}
            for m, c in shifted.terms.items():
                d = dict(m)
                if d.pop(hi, 0) == 1:
                    linear[tuple(sorted(d.items()))] = c
            assert Polynomial(VT, linear) == p.diff(var)


def test_substitute_examples():
    p = parse("b0*x12+y13*x13")
    assert p.substitute({"b0": 1, "y13": 0}) == parse("x12")
    q12 = parse("x12*x21-1/2*(y13-y23)^2")
    zeros = {n: 0 for n in VT.coordinates}
    assert q12.substitute(zeros).is_zero()
    # partial substitution leaves other variables formal
    assert parse("b0*x12").substitute({"b0": rational(1, 2)}) == parse("1/2*x12")


def test_substitute_poly_composition():
    p = parse("x12^2+x13")
    image = p.substitute_poly({"x12": parse("y13+y23")})
    assert image == parse("(y13+y23)^2+x13")


def test_homogeneity_queries():
    assert parse("x12*x21+y13^2").homogeneous_coordinate_degree() == 2
    assert parse("x12+x13*x21").homogeneous_coordinate_degree() is None
    assert parse("b0^2*x12").homogeneous_coordinate_degree() == 1  # parameters free


def test_rename_variables_swaps_labels():
    p = parse("b0*x12+x13")
    vt2 = VarTable(("x12", "x13"), ("b0", "b1"))
    q = Polynomial.parse("b0*x12+x13", vt2).rename_variables({"b0": "b1", "b1": "b0"})
    assert q == Polynomial.parse("b1*x12+x13", vt2)


def test_vartable_rejects_duplicates():
    with pytest.raises(PolyError):
        VarTable(("a", "a"))
