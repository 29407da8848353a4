from fractions import Fraction

import pytest

from components.database import load_database
from models.schemas import EntryKind, GermSignature, SingularityKey
from utils.algebra import VarSpace
from utils.chern import (
    chern_components,
    infer_weights,
    landweber_novikov,
    quotient_chern,
    quotient_expansion,
    s0_class,
    specialize,
    supersymmetry_check,
    to_quotient_classes,
    total_chern_of_rep,
)
from utils.exceptions import (
    AmbiguousSolutionError,
    KappaMismatchError,
    NoPositiveSolutionError,
    NotSupersymmetricError,
    PreconditionError,
)
from utils.parser import parse_monomial_map, parse_poly

TORUS = VarSpace.torus()
SOURCE_TARGET = VarSpace.source_target()
FOLD = GermSignature.of([1, 1, 1], [2, 2, 1])


def test_quotient_chern_of_a_fold_germ():
    """c(f) = (1+2a)^2 (1+a) / (1+a)^3"""
    assert quotient_chern(FOLD, 3) == parse_poly("1 + 2 a - a^2", TORUS)
    components = chern_components(FOLD, 3)
    assert components[1] == parse_poly("2 a", TORUS)
    assert components[3].is_zero()
    with pytest.raises(PreconditionError):
        quotient_chern(FOLD, 0)


def test_s0_and_landweber_novikov():
    """s0 = prod d / prod w * a^kappa and s_I multiplies in c^I"""
    assert s0_class(FOLD) == parse_poly("4", TORUS)
    assert landweber_novikov(FOLD, [1], 2) == parse_poly("8 a", TORUS)
    assert landweber_novikov(FOLD, [0, 1], 3) == parse_poly("-4 a^2", TORUS)
    whitney = GermSignature.of([1, 1], [1, 2, 2])
    assert s0_class(whitney) == parse_poly("4 a", TORUS)


def test_specialize():
    """Universal classes evaluate to torus monomials on a germ"""
    series = specialize(parse_poly("c1^2 + c2 + s[0,1]", VarSpace.classes(0)), FOLD, 3)
    assert series == parse_poly("-a^2", TORUS)
    with pytest.raises(KappaMismatchError):
        specialize(parse_poly("s[] - c1", VarSpace.classes(1)), FOLD, 2)


def test_specialize_is_scale_covariant():
    """Scaling weights and degrees scales a degree-k class by k-th power"""
    p = parse_poly("c1^3 + 3 c1 c2 + 2 c3", VarSpace.classes(0))
    sig = GermSignature.of([2, 9, 16], [18, 11, 16])
    base = specialize(p, sig, 3)
    doubled = specialize(p, sig.scaled(2), 3)
    assert doubled == base * 8


def test_total_chern_of_rep():
    """prod (1 + <w, a>) over characters of a rank-2 torus"""
    total = total_chern_of_rep([[1, 0], [1, -1]], 2)
    assert total == parse_poly("1 + 2 a1 - a2 + a1^2 - a1 a2", TORUS)
    with pytest.raises(PreconditionError):
        total_chern_of_rep([[1]], 2)


def test_supersymmetry():
    """The lips class is not supersymmetric"""
    lips = load_database().get(SingularityKey(name="lips", kappa=0, kind=EntryKind.tpA))
    assert not supersymmetry_check(lips.polynomial, 2, 2)
    with pytest.raises(PreconditionError):
        supersymmetry_check(parse_poly("c1", SOURCE_TARGET), 0, 2)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_supersymmetry_over_ranks(m, n):
    """c(target) / c(source) has no shared root for every pair of ranks"""
    assert supersymmetry_check(quotient_expansion(m, n, 3), m, n)
    assert supersymmetry_check(parse_poly("c'1 - c1", SOURCE_TARGET), m, n)
    assert not supersymmetry_check(parse_poly("c1", SOURCE_TARGET), m, n)
    assert not supersymmetry_check(parse_poly("c'1", SOURCE_TARGET), m, n)


def test_to_quotient_classes():
    """Supersymmetric polynomials rewrite in quotient classes"""
    classes = VarSpace.classes(0)
    assert to_quotient_classes(parse_poly("c'1 - c1", SOURCE_TARGET), 2, 3, 2) == parse_poly("c1", classes)
    p = parse_poly("c'2 - c'1 c1 - c2 + c1^2 + 2 c'1 - 2 c1", SOURCE_TARGET)
    assert to_quotient_classes(p, 2, 3, 2) == parse_poly("c2 + 2 c1", classes)
    with pytest.raises(NotSupersymmetricError):
        to_quotient_classes(parse_poly("c1", SOURCE_TARGET), 2, 2, 1)


def test_infer_weights():
    """Weights come out primitive and positive"""
    names, components = parse_monomial_map("x^2+y^2+x*z, x*y, z")
    assert infer_weights(components, names) == FOLD
    names, components = parse_monomial_map("x^2 + y^3, x*y")
    sig = infer_weights(components, names)
    assert sig.weights == (3, 2)
    assert sig.degrees == (6, 5)


def test_infer_weights_failures():
    """Inhomogeneous, degenerate and under-constrained maps are refused"""
    names, components = parse_monomial_map("x^2+y^3+x, y")
    with pytest.raises(NoPositiveSolutionError):
        infer_weights(components, names)
    names, components = parse_monomial_map("x + x*y, y")
    with pytest.raises(NoPositiveSolutionError):
        infer_weights(components, names)
    names, components = parse_monomial_map("x, y")
    with pytest.raises(AmbiguousSolutionError):
        infer_weights(components, names)


def test_weight_product_ratio():
    """s0 coefficient is an exact rational"""
    sig = GermSignature.of([2, 9, 16], [18, 11, 16])
    assert s0_class(sig).constant_term() == Fraction(18 * 11 * 16, 2 * 9 * 16)
