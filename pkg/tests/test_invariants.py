from fractions import Fraction

import numpy as np
import pytest

from components.database import load_database
from models.schemas import EntryKind, GermSignature, MilnorKind, SingularityKey
from utils.algebra import VarSpace
from utils.closed_forms import (
    corank_one_A1A1A1,
    corank_one_A1A2,
    corank_one_A3,
    corank_one_discriminant_milnor_33,
    corank_one_image_milnor_34,
    corank_one_quadruple,
    corank_one_signature,
    count_A0A0A0_23,
    count_A1_23,
    count_A1A1_22,
    count_A1A1A1_33,
    count_A1A2_33,
    count_A2_22,
    count_A3_33,
    discriminant_milnor_33,
    double_image_milnor_34,
    gaffney_mond_discriminant_milnor,
    hat_a_quadruple,
    image_milnor_34,
    mond_image_milnor_23,
    quadruple_34,
)
from utils.exceptions import (
    CodimensionMismatchError,
    KappaMismatchError,
    OddCrosscapCountError,
    PreconditionError,
    SignatureError,
    TruncationError,
    UnknownKeyError,
)
from utils.invariants import (
    NON_INTEGER_WARNING,
    chi_image,
    chi_image_global,
    count_all,
    count_stable,
    enriques_intersections,
    enriques_invariants,
    free_divisor_target_ssm,
    izumiya_marar_real,
    milnor_number,
    mu_discriminant,
    mu_image,
    mu_image2,
    resolve_invariant,
)

FOLD = GermSignature.of([1, 1, 1], [2, 2, 1])
GENERIC = GermSignature.of([2, 9, 16], [18, 11, 16])
HAT_A_IMAGE_MILNOR = {2: 18, 3: 186, 4: 844, 5: 2620, 6: 6510}


def _random_pairs(seed, count, weight_max=30, degree_max=30):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield [int(x) for x in rng.integers(1, weight_max + 1, size=2)], [int(x) for x in rng.integers(1, degree_max + 1, size=3)]


def _random_signatures(seed, count, m, n, top=30):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        weights = [int(x) for x in rng.integers(1, top + 1, size=m)]
        degrees = [int(x) for x in rng.integers(1, top + 1, size=n)]
        yield GermSignature.of(weights, degrees)


def test_counts_of_a_fold_germ():
    """One A3 point and no triple or fold-cusp pairs"""
    counts = count_all(FOLD)
    assert set(counts) == {"A3", "A1^3", "A1A2", "A2A1"}
    assert counts["A3"].value == 2
    assert counts["A1A2"].value == 0
    assert counts["A1^3"].value == 0
    assert counts["A3"].integral and counts["A3"].nonnegative


def test_counts_of_a_generic_signature():
    """Counts at weights (2,9,16) and degrees (18,11,16)"""
    assert count_stable(GENERIC, "A3").value == 16
    assert count_stable(GENERIC, "A1A2").value == 105
    assert count_stable(GENERIC, "A1A1A1").value == 98
    assert count_stable(GermSignature.of([1, 1, 1], [2, 2, 2]), "A3").value == 23


def test_count_warnings():
    """Non-integral output is flagged rather than rounded"""
    result = count_stable(GermSignature.of([2, 3], [1, 1]), "A2")
    assert result.value == Fraction(19, 6)
    assert not result.integral
    assert NON_INTEGER_WARNING in result.warnings


def test_count_errors():
    """Wrong kappa, wrong codimension and unknown types"""
    with pytest.raises(KappaMismatchError):
        count_stable(FOLD, "A0^2")
    with pytest.raises(CodimensionMismatchError):
        count_stable(FOLD, "A2")
    with pytest.raises(UnknownKeyError):
        count_stable(FOLD, "E6")


@pytest.mark.parametrize("factor", [2, 3, 5])
def test_invariants_are_scale_invariant(factor):
    """Multiplying all weights and degrees leaves counts and Milnor numbers unchanged"""
    for name in ("A3", "A1A2", "A1^3"):
        assert count_stable(GENERIC.scaled(factor), name).value == count_stable(GENERIC, name).value
    assert mu_discriminant(GENERIC.scaled(factor)).value == mu_discriminant(GENERIC).value
    for sig in (GermSignature.of([3, 2, 5], [5, 2, 8, 9]), GermSignature.of([1, 2, 5], [1, 6, 7, 10])):
        assert mu_image(sig.scaled(factor)).value == mu_image(sig).value
        assert mu_image2(sig.scaled(factor)).value == mu_image2(sig).value
        assert count_stable(sig.scaled(factor), "A0^4").value == count_stable(sig, "A0^4").value


def test_plane_counts_match_closed_forms():
    """Localized counts agree with the closed forms for maps of the plane"""
    for sig in _random_signatures(17, 100, 2, 2):
        assert count_stable(sig, "A2").value == count_A2_22(sig)
        assert count_stable(sig, "A1^2").value == count_A1A1_22(sig)
        assert milnor_number(sig, MilnorKind.discriminant).value == gaffney_mond_discriminant_milnor(sig)


def test_surface_counts_match_closed_forms():
    """Crosscaps, triple points and image Milnor numbers of C^2 -> C^3"""
    for weights, degrees in _random_pairs(23, 100):
        sig = GermSignature.of(weights, degrees)
        assert count_stable(sig, "A1").value == count_A1_23(sig)
        assert count_stable(sig, "A0^3").value == count_A0A0A0_23(sig)
        assert mu_image(sig).value == mond_image_milnor_23(sig)


def test_corank_one_closed_forms():
    """Corank-one germs C^3 -> C^3 and C^3 -> C^4"""
    rng = np.random.default_rng(29)
    for _ in range(100):
        w0, w1, w2 = (int(x) for x in rng.integers(1, 31, size=3))
        d1, d2 = (int(x) for x in rng.integers(1, 31, size=2))
        sig = corank_one_signature(w0, w1, w2, [d1])
        assert count_stable(sig, "A3").value == corank_one_A3(w0, w1, w2, d1)
        assert count_stable(sig, "A1A2").value == corank_one_A1A2(w0, w1, w2, d1)
        assert count_stable(sig, "A1^3").value == corank_one_A1A1A1(w0, w1, w2, d1)
        assert mu_discriminant(sig).value == corank_one_discriminant_milnor_33(w0, w1, w2, d1)
        quadruple = corank_one_signature(w0, w1, w2, [d1, d2])
        # printed values count ordered quadruples: deg1 * #A0^4 with deg1 = 4
        assert 4 * count_stable(quadruple, "A0^4").value == corank_one_quadruple(w0, w1, w2, d1, d2)
        image = GermSignature.of([w0, w1, w2], [d1, d2, w1, w2])
        assert mu_image(image).value == corank_one_image_milnor_34(w0, w1, w2, d1, d2)


def test_general_closed_forms_for_threefolds():
    """Counts and mu_Delta of C^3 -> C^3 agree with the closed forms at any signature"""
    for sig in _random_signatures(31, 100, 3, 3):
        assert count_stable(sig, "A3").value == count_A3_33(sig)
        assert count_stable(sig, "A1A2").value == count_A1A2_33(sig)
        assert count_stable(sig, "A1^3").value == count_A1A1A1_33(sig)
        assert mu_discriminant(sig).value == discriminant_milnor_33(sig)


def test_general_closed_forms_into_four_space():
    """Quadruple points, mu_I and mu_I2 of C^3 -> C^4 agree with the closed forms"""
    for sig in _random_signatures(37, 100, 3, 4):
        assert 4 * count_stable(sig, "A0^4").value == quadruple_34(sig)
        assert mu_image(sig).value == image_milnor_34(sig)
        assert mu_image2(sig).value == double_image_milnor_34(sig)


def test_general_closed_forms_at_anchors():
    """Hand-checked values of the closed forms"""
    fold = GermSignature.of([1, 1, 1], [1, 2, 2])
    assert (count_A3_33(fold), count_A1A2_33(fold), count_A1A1A1_33(fold)) == (2, 0, 0)
    assert (count_A3_33(GENERIC), count_A1A2_33(GENERIC), count_A1A1A1_33(GENERIC)) == (16, 105, 98)
    assert count_A3_33(GermSignature.of([1, 1, 1], [2, 2, 2])) == 23
    assert discriminant_milnor_33(fold) == 1
    assert discriminant_milnor_33(GENERIC) == 183
    stable = GermSignature.of([1, 1, 1], [1, 1, 2, 2])
    assert (image_milnor_34(stable), double_image_milnor_34(stable)) == (0, 0)
    assert image_milnor_34(GermSignature.of([1, 1, 1], [1, 1, 2, 3])) == 1
    assert quadruple_34(GermSignature.of([1, 1, 1], [1, 1, 4, 4])) == 6


def test_closed_forms_check_dimensions():
    with pytest.raises(SignatureError):
        count_A2_22(FOLD)
    with pytest.raises(SignatureError):
        mond_image_milnor_23(GermSignature.of([1, 1], [1, 2]))
    with pytest.raises(SignatureError):
        quadruple_34(FOLD)
    with pytest.raises(SignatureError):
        discriminant_milnor_33(GermSignature.of([1, 1, 1], [1, 1, 2, 2]))


@pytest.mark.parametrize("germ, expected", [
    (GermSignature.of([1, 1], [1, 2, 2]), 0),
    (GermSignature.of([1, 1], [1, 2, 3]), 1),
])
def test_image_milnor_of_surface_germs(germ, expected):
    """Crosscap is stable, S1 has one vanishing cycle"""
    assert mu_image(germ).value == expected
    assert chi_image(germ) == 1 + expected


def test_discriminant_milnor_anchors():
    """Lips, the cusp, a fold germ and a generic signature"""
    assert mu_discriminant(GermSignature.of([1, 1], [1, 3])).value == 1
    assert mu_discriminant(GermSignature.of([2, 1], [2, 3])).value == 0
    assert mu_discriminant(FOLD).value == 1
    assert mu_discriminant(GENERIC).value == 183


@pytest.mark.parametrize("k", range(2, 9))
def test_hat_a_family(k):
    """Image Milnor numbers and quadruple points of a corank-two family"""
    sig = GermSignature.of([1, 2, 2 * k - 1], [1, 2 * k, 2 * k + 1, 2 * (2 * k - 1)])
    assert mu_image(sig).value == image_milnor_34(sig)
    if k in HAT_A_IMAGE_MILNOR:
        assert mu_image(sig).value == HAT_A_IMAGE_MILNOR[k]
    quadruples = count_stable(sig, "A0^4").value
    # printed values count ordered quadruples: deg1 * #A0^4 with deg1 = 4
    assert 4 * quadruples == hat_a_quadruple(k) == quadruple_34(sig)


@pytest.mark.parametrize("k", range(2, 9))
def test_hat_b_family(k):
    sig = GermSignature.of([1, 1, 1], [1, 2, 2, 2 * k + 1])
    assert mu_image(sig).value == 3 * k ** 2 * (1 + 10 * k)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_q_family(k):
    """mu_I = k while the double-point image stays contractible"""
    sig = GermSignature.of([k, 2, k + 2], [k + 2, 2, 2 * k + 2, 3 * k])
    assert mu_image(sig).value == k
    assert mu_image2(sig).value == 0


@pytest.mark.parametrize("level", [1, 2, 3, 4, 5])
def test_linear_image_milnor_family(level):
    sig = GermSignature.of([level, level, 1], [2 * level, 2 * level, 3 * level, 1])
    assert mu_image(sig).value == 45 * level - 12


def test_milnor_errors():
    """Kind must match kappa and the series must reach degree m"""
    with pytest.raises(KappaMismatchError):
        mu_image(FOLD)
    with pytest.raises(TruncationError):
        mu_image(GermSignature.of([1, 1, 1, 1], [2, 2, 2, 2, 1]))
    with pytest.raises(PreconditionError):
        resolve_invariant(FOLD, "mu_bogus")


def test_resolve_invariant():
    """'all' adds the Milnor numbers the kappa allows"""
    results = resolve_invariant(FOLD, "all")
    assert set(results) == {"A3", "A1^3", "A1A2", "A2A1", "mu_discriminant"}
    assert set(resolve_invariant(FOLD, "counts")) == {"A3", "A1^3", "A1A2", "A2A1"}
    assert resolve_invariant(FOLD, "A3")["A3"].value == 2


def test_enriques():
    """Smooth quartic: K3 numbers"""
    surface = enriques_invariants(4, 0, 0, 0)
    assert (surface.c1_squared, surface.c2, surface.chi) == (0, 24, 24)
    with pytest.raises(PreconditionError):
        enriques_invariants(0, 0, 0, 0)


@pytest.mark.parametrize("data", [(4, 0, 0, 0), (5, 3, 2, 1), (3, 1, 0, 0), (6, 4, 4, 2)])
def test_enriques_round_trip(data):
    """The global image formula reproduces the Enriques Euler characteristic"""
    assert chi_image_global(enriques_intersections(*data)) == enriques_invariants(*data).chi


def test_izumiya_marar():
    assert izumiya_marar_real(2, 2, 1) == 4
    with pytest.raises(OddCrosscapCountError):
        izumiya_marar_real(2, 1, 0)


def test_free_divisor_complement():
    """1 - rho(alpha_dis) is the complement of the target discriminant class"""
    target = load_database().get(SingularityKey(name="target_dis", kappa=0, kind=EntryKind.tpsm_target_dis))
    complement = free_divisor_target_ssm(3)
    assert complement.space == VarSpace.classes(0)
    assert complement == 1 - target.polynomial.truncate(3)
    with pytest.raises(TruncationError):
        free_divisor_target_ssm(4)
