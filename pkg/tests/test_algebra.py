from fractions import Fraction

import numpy as np
import pytest
import sympy

from utils.algebra import (
    GradedPoly,
    Var,
    VarSpace,
    add,
    class_variables,
    coefficient_of,
    elementary_symmetric,
    grade_component,
    invert_series,
    linear_form,
    monomials_of_degree,
    mul,
    partitions,
    substitute,
)
from utils.exceptions import (
    InvalidMonomialError,
    ParseError,
    PreconditionError,
    TruncationError,
    VarSpaceMismatchError,
)
from utils.parser import (
    canonical_name,
    expand_name,
    format_poly,
    name_multiplicities,
    parse_monomial_map,
    parse_poly,
    parse_rational,
)

CLASSES = VarSpace.classes(0)
TORUS = VarSpace.torus()


def _to_sympy(p: GradedPoly):
    expr = sympy.Integer(0)
    for monomial, coefficient in p.terms.items():
        term = sympy.Rational(coefficient.numerator, coefficient.denominator)
        for var, exponent in monomial:
            term *= sympy.Symbol(str(var)) ** exponent
        expr += term
    return sympy.expand(expr)


def _random_poly(rng, space, variables, degree):
    terms = {}
    for monomial in [m for d in range(degree + 1) for m in monomials_of_degree(space, variables, d)]:
        value = int(rng.integers(-4, 5))
        if value:
            terms[monomial] = Fraction(value, int(rng.integers(1, 4)))
    return GradedPoly(space, terms)


def test_parse_and_format_round_trip():
    """Canonical text parses back to the same polynomial"""
    p = parse_poly("-2 c1^3 - 3 c1 c2 - c3", CLASSES)
    assert format_poly(p) == "-2 c1^3 - 3 c1 c2 - c3"
    assert parse_poly(format_poly(p), CLASSES) == p


def test_parse_parentheses_and_rationals():
    """Groups and rational prefactors expand exactly"""
    space = VarSpace.classes(1)
    p = parse_poly("1/2 (s[]^2 - s[1])", space)
    assert coefficient_of(p, {Var.landweber(): 2}) == Fraction(1, 2)
    assert coefficient_of(p, {Var.landweber([1]): 1}) == Fraction(-1, 2)
    assert parse_poly("(a + 1)^2", TORUS) == parse_poly("a^2 + 2 a + 1", TORUS)


def test_parse_errors():
    """Malformed text and foreign variables raise ParseError"""
    with pytest.raises(ParseError):
        parse_poly("c1 +", CLASSES)
    with pytest.raises(ParseError):
        parse_poly("c1 ? c2", CLASSES)
    with pytest.raises(ParseError):
        parse_poly("a1 + c1", TORUS)
    with pytest.raises(ParseError):
        parse_rational("1/0")


def test_landweber_degrees():
    """s_I has degree kappa + sum of (j+1) i_j"""
    space = VarSpace.classes(1)
    assert space.degree(Var.landweber()) == 1
    assert space.degree(Var.landweber([1])) == 2
    assert space.degree(Var.landweber([0, 1])) == 3
    assert Var.landweber([2, 0, 0]) == Var.landweber([2])


def test_invalid_variables():
    """Bad indices and floats are rejected"""
    with pytest.raises(InvalidMonomialError):
        Var.chern(0)
    with pytest.raises(PreconditionError):
        GradedPoly.constant(CLASSES, 0.5)
    with pytest.raises(InvalidMonomialError):
        GradedPoly.variable(TORUS, Var.chern(1))


def test_space_mismatch():
    """Arithmetic across variable spaces is refused"""
    with pytest.raises(VarSpaceMismatchError):
        add(GradedPoly.variable(CLASSES, Var.chern(1)), GradedPoly.variable(TORUS, Var.torus(1)))
    with pytest.raises(VarSpaceMismatchError):
        mul(GradedPoly.variable(VarSpace.classes(1), Var.chern(1)), GradedPoly.variable(CLASSES, Var.chern(1)))


def test_ring_axioms_against_sympy():
    """Products and sums agree with sympy on random polynomials"""
    rng = np.random.default_rng(7)
    variables = [Var.chern(1), Var.chern(2), Var.chern(3)]
    for _ in range(100):
        p = _random_poly(rng, CLASSES, variables, 3)
        q = _random_poly(rng, CLASSES, variables, 3)
        r = _random_poly(rng, CLASSES, variables, 2)
        assert _to_sympy(mul(p, q)) == sympy.expand(_to_sympy(p) * _to_sympy(q))
        assert _to_sympy(add(p, q)) == sympy.expand(_to_sympy(p) + _to_sympy(q))
        assert mul(p, add(q, r)) == add(mul(p, q), mul(p, r))
        assert mul(mul(p, q), r) == mul(p, mul(q, r))
        assert mul(p, q) == mul(q, p)


def test_truncated_product_keeps_low_degrees():
    """Truncation at K keeps exactly the terms of degree <= K"""
    rng = np.random.default_rng(11)
    variables = [Var.chern(1), Var.chern(2)]
    p = _random_poly(rng, CLASSES, variables, 4)
    q = _random_poly(rng, CLASSES, variables, 4)
    full = mul(p, q)
    truncated = mul(p, q, 3)
    assert truncated.truncation == 3
    for degree in range(4):
        assert grade_component(truncated, degree) == grade_component(full, degree)
    with pytest.raises(TruncationError):
        grade_component(truncated, 4)


def test_invert_series():
    """(1 + a)^-1 = 1 - a + a^2 - ... and p * p^-1 = 1 to the truncation"""
    inverse = invert_series(1 + linear_form([1]), 4)
    assert inverse == parse_poly("1 - a + a^2 - a^3 + a^4", TORUS)
    rng = np.random.default_rng(3)
    variables = [Var.chern(1), Var.chern(2)]
    for _ in range(200):
        p = _random_poly(rng, CLASSES, variables, 3)
        p = p - p.constant_term() + int(rng.integers(1, 5))
        assert mul(p, invert_series(p, 5), 5) == GradedPoly.constant(CLASSES, 1)
    with pytest.raises(PreconditionError):
        invert_series(GradedPoly.variable(CLASSES, Var.chern(1)), 3)


def test_substitute_roots():
    """Elementary symmetric functions of roots expand the total class"""
    roots = [GradedPoly.variable(TORUS, Var.torus(j)) for j in (1, 2, 3)]
    e2 = elementary_symmetric(roots, 2)
    assert e2 == parse_poly("a1 a2 + a1 a3 + a2 a3", TORUS)
    p = parse_poly("c1^2 - 2 c2", CLASSES)
    image = substitute(p, {Var.chern(1): elementary_symmetric(roots, 1), Var.chern(2): e2}, space=TORUS)
    assert image == parse_poly("a1^2 + a2^2 + a3^2", TORUS)


@pytest.mark.parametrize("count", [1, 2, 3, 4, 5])
def test_elementary_symmetric_against_sympy(count):
    """e_k of distinct roots is the t^k coefficient of prod (1 + x_i t), zero past the root count"""
    roots = [GradedPoly.variable(TORUS, Var.torus(j)) for j in range(1, count + 1)]
    t = sympy.Symbol("t")
    generating = sympy.expand(sympy.prod([1 + _to_sympy(root) * t for root in roots]))
    for k in range(count + 2):
        assert _to_sympy(elementary_symmetric(roots, k)) == generating.coeff(t, k)
    squares = [mul(root, root) for root in roots]
    assert _to_sympy(elementary_symmetric(squares, count)) == sympy.expand(sympy.prod([_to_sympy(s) for s in squares]))


def test_coefficient_beyond_truncation():
    """Reading past the valid degree is an error"""
    p = parse_poly("1 + a + a^2", TORUS, truncation=2)
    assert coefficient_of(p, {Var.torus(1): 2}) == 1
    with pytest.raises(TruncationError):
        coefficient_of(p, {Var.torus(1): 3})


def test_partitions_and_class_variables():
    """Basis enumeration matches partition counts"""
    assert sorted(partitions(4)) == sorted([(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)])
    assert len(monomials_of_degree(CLASSES, [Var.chern(k) for k in range(1, 5)], 4)) == 5
    variables = class_variables(1, 3)
    assert Var.landweber() in variables and Var.landweber([0, 1]) in variables
    assert len(monomials_of_degree(VarSpace.classes(1), variables, 3)) == 11


def test_singularity_names():
    """Names group repeated mono-types and carry deg1 and |Aut|"""
    assert canonical_name("A1A1A2") == "A1^2A2"
    assert expand_name("A0^3") == ["A0", "A0", "A0"]
    assert name_multiplicities("A1^3") == (3, 6)
    assert name_multiplicities("A1A2") == (1, 1)
    assert name_multiplicities("A0^4") == (4, 24)


def test_parse_monomial_map():
    """Map components become exponent dictionaries"""
    names, components = parse_monomial_map("x^2+y^2+x*z, x*y, z")
    assert names == ["x", "y", "z"]
    assert components[0] == [{"x": 2}, {"y": 2}, {"x": 1, "z": 1}]
    assert components[2] == [{"z": 1}]
    with pytest.raises(ParseError):
        parse_monomial_map("x, , y")
