"""
Printed closed-form formulas for weighted-homogeneous germs.

These are independent of the localization pipeline and serve as reference
values for it. Corank-one helpers take the weight ``w0`` of the folding
coordinate, the weights ``w1, w2`` of the unfolding parameters (which are also
the degrees of the trivial components) and the remaining degrees.

General-signature formulas for C^3 -> C^3 and C^3 -> C^4 keep the printed
grouping by powers of d1, with s = w1 + w2 + w3 and p = w1 w2 w3.
"""
from fractions import Fraction
from math import prod
from typing import Sequence

from models.schemas import GermSignature
from utils.exceptions import SignatureError


def _expect(sig: GermSignature, m: int, n: int) -> None:
    if (sig.m, sig.n) != (m, n):
        raise SignatureError(
            f"Formula is for (m, n) = ({m}, {n}), got ({sig.m}, {sig.n})",
            details={"weights": list(sig.weights), "degrees": list(sig.degrees)}
        )


def count_A2_22(sig: GermSignature) -> Fraction:
    _expect(sig, 2, 2)
    (w1, w2), (d1, d2) = sig.weights, sig.degrees
    numerator = (
        d1 ** 2 + d2 ** 2 + 2 * w1 ** 2 + 3 * d1 * (d2 - w1 - w2)
        + 3 * w1 * w2 + 2 * w2 ** 2 - 3 * d2 * (w1 + w2)
    )
    return Fraction(numerator, w1 * w2)


def count_A1A1_22(sig: GermSignature) -> Fraction:
    _expect(sig, 2, 2)
    (w1, w2), (d1, d2) = sig.weights, sig.degrees
    c1 = d1 + d2 - w1 - w2
    numerator = (
        d1 * d2 * c1 ** 2
        - 4 * w1 * w2 * c1 ** 2
        - 2 * w1 * w2 * (w1 ** 2 + w1 * w2 + w2 ** 2 + d1 * (d2 - w1 - w2) - d2 * (w1 + w2))
    )
    return Fraction(numerator, 2 * w1 ** 2 * w2 ** 2)


def count_A1_23(sig: GermSignature) -> Fraction:
    _expect(sig, 2, 3)
    (w1, w2), (d1, d2, d3) = sig.weights, sig.degrees
    total = d1 + d2 + d3
    numerator = d1 * d2 + (d1 + d2) * d3 - total * w1 + w1 ** 2 - (total - w1) * w2 + w2 ** 2
    return Fraction(numerator, w1 * w2)


def count_A0A0A0_23(sig: GermSignature) -> Fraction:
    _expect(sig, 2, 3)
    (w1, w2), (d1, d2, d3) = sig.weights, sig.degrees
    total = d1 + d2 + d3
    bracket = (
        d1 * d2 + (d1 + d2) * d3 - total * w1 + w1 ** 2
        + (total - w1 - w2) ** 2 - (total - w1) * w2 + w2 ** 2
    )
    numerator = (
        d1 ** 2 * d2 ** 2 * d3 ** 2
        - 3 * d1 * d2 * d3 * w1 * w2 * (total - w1 - w2)
        + 2 * w1 ** 2 * w2 ** 2 * bracket
    )
    return Fraction(numerator, 6 * w1 ** 3 * w2 ** 3)


def _falling(d: int, w0: int, k: int) -> int:
    return prod(d - i * w0 for i in range(1, k + 1))


def corank_one_A3(w0: int, w1: int, w2: int, d: int) -> Fraction:
    return Fraction(_falling(d, w0, 3), w0 * w1 * w2)


def corank_one_A1A2(w0: int, w1: int, w2: int, d: int) -> Fraction:
    return Fraction(_falling(d, w0, 4), w0 ** 2 * w1 * w2)


def corank_one_A1A1A1(w0: int, w1: int, w2: int, d: int) -> Fraction:
    return Fraction(_falling(d, w0, 5), 6 * w0 ** 3 * w1 * w2)


def corank_one_quadruple(w0: int, w1: int, w2: int, d1: int, d2: int) -> Fraction:
    """Printed quadruple point value for corank-one germs C^3 -> C^4.

    This includes the factor deg1 = 4, i.e. it equals tp(A0^4) / prod(w).
    """
    return Fraction(_falling(d1, w0, 3) * _falling(d2, w0, 3), 6 * w0 ** 4 * w1 * w2)


def hat_a_quadruple(k: int) -> Fraction:
    """Printed quadruple point value of the corank-two family A^_k (includes deg1 = 4)."""
    return Fraction(8, 3) * (k - 1) ** 2 * (k ** 3 - 5 * k ** 2 + 9 * k - 6)


def corank_one_signature(w0: int, w1: int, w2: int, degrees: Sequence[int]) -> GermSignature:
    """(u, v, x) -> (u, v, ...) with x of weight w0 listed last."""
    return GermSignature.of([w1, w2, w0], [w1, w2, *degrees])


def mond_image_milnor_23(sig: GermSignature) -> Fraction:
    _expect(sig, 2, 3)
    (w1, w2), (d1, d2, d3) = sig.weights, sig.degrees
    ww = w1 * w2
    numerator = (
        d1 ** 2 * (d2 ** 2 * d3 ** 2 - ww ** 2)
        - ww ** 2 * (
            d2 ** 2 + d3 ** 2 + 5 * w1 ** 2 + 9 * ww + 5 * w2 ** 2
            - 6 * d3 * (w1 + w2) + 3 * d2 * (d3 - 2 * (w1 + w2))
        )
        - 3 * d1 * ww * (ww * (d3 - 2 * (w1 + w2)) + d2 * (ww + d3 * (w1 + w2)))
    )
    return Fraction(numerator, 6 * ww ** 3)


def corank_one_image_milnor_34(w0: int, w1: int, w2: int, d1: int, d2: int) -> Fraction:
    """Weights (w0, w1, w2) and degrees (d1, d2, w1, w2)."""
    s = w1 + w2
    bracket = (
        d1 ** 2 * (d2 ** 2 + 3 * d2 * w0 + 2 * w0 ** 2)
        + d1 * w0 * (3 * d2 ** 2 - d2 * (19 * w0 + 4 * s) + 2 * w0 * (w0 - 2 * s))
        + 2 * w0 ** 2 * (d2 ** 2 + d2 * (w0 - 2 * s) + 2 * (5 * w0 * s + 3 * w1 * w2))
    )
    return Fraction((w0 - d1) * (w0 - d2) * bracket, 24 * w0 ** 4 * w1 * w2)


def gaffney_mond_discriminant_milnor(sig: GermSignature) -> Fraction:
    _expect(sig, 2, 2)
    (w1, w2), (d1, d2) = sig.weights, sig.degrees
    second = d1 ** 2 + d2 ** 2 + w1 ** 2 + 2 * d1 * (d2 - w1 - w2) + w2 ** 2 - 2 * d2 * (w1 + w2)
    return Fraction((d1 * d2 - 2 * w1 * w2) * second, 2 * w1 ** 2 * w2 ** 2)


def corank_one_discriminant_milnor_33(w0: int, w1: int, w2: int, d: int) -> Fraction:
    s = w1 + w2
    bracket = (
        d ** 4 - 4 * d ** 3 * w0 + d ** 2 * w0 * (8 * w0 - 3 * s)
        + 2 * d * w0 ** 2 * (3 * s - 4 * w0)
        + 3 * w0 ** 2 * (w0 ** 2 - w0 * s + 2 * w1 * w2)
    )
    return Fraction((d - 2 * w0) * bracket, 6 * w0 ** 3 * w1 * w2)


def count_A3_33(sig: GermSignature) -> Fraction:
    _expect(sig, 3, 3)
    (w1, w2, w3), (d1, d2, d3) = sig.weights, sig.degrees
    total = d1 + d2 + d3
    pairs = d1 * d2 + (d1 + d2) * d3
    c1 = total - w1 - w2 - w3
    c2 = pairs - total * w1 + w1 ** 2 - (total - w1) * w2 + w2 ** 2 - (total - w1 - w2) * w3 + w3 ** 2
    c3 = (
        d1 * d2 * d3 - (d2 * d3 + d1 * (d2 + d3)) * w1 + total * w1 ** 2 - w1 ** 3
        - (pairs - total * w1 + w1 ** 2) * w2 + (total - w1) * w2 ** 2 - w2 ** 3
        - (pairs - total * w1 + w1 ** 2 - (total - w1) * w2 + w2 ** 2) * w3
        + (total - w1 - w2) * w3 ** 2 - w3 ** 3
    )
    return Fraction(c1 ** 3 + 3 * c1 * c2 + 2 * c3, w1 * w2 * w3)


def count_A1A2_33(sig: GermSignature) -> Fraction:
    _expect(sig, 3, 3)
    (w1, w2, w3), (d1, d2, d3) = sig.weights, sig.degrees
    s = w1 + w2 + w3
    p = w1 * w2 * w3
    q8 = 8 * w1 ** 2 + 8 * w2 ** 2 + 13 * w2 * w3 + 8 * w3 ** 2 + 13 * w1 * (w2 + w3)
    q5 = 5 * w1 ** 2 + 5 * w2 ** 2 + 9 * w2 * w3 + 5 * w3 ** 2 + 9 * w1 * (w2 + w3)
    cubic = (
        2 * w1 ** 3 + 2 * w2 ** 3 + 5 * w2 ** 2 * w3 + 5 * w2 * w3 ** 2 + 2 * w3 ** 3
        + 5 * w1 ** 2 * (w2 + w3) + w1 * (5 * w2 ** 2 + 87 * w2 * w3 + 5 * w3 ** 2)
    )
    free = (
        d2 ** 3 + d3 ** 3 - 4 * w1 ** 3 - 8 * w1 ** 2 * w2 - 8 * w1 * w2 ** 2 - 4 * w2 ** 3
        + 5 * d2 ** 2 * (d3 - s) - 8 * w1 ** 2 * w3 - 13 * p - 8 * w2 ** 2 * w3 - 8 * w1 * w3 ** 2
        - 8 * w2 * w3 ** 2 - 4 * w3 ** 3 - 5 * d3 ** 2 * s + d3 * q8
        + d2 * (5 * d3 ** 2 + q8 - 13 * d3 * s)
    )
    square = 4 * d3 ** 3 - 30 * p - 9 * d3 ** 2 * s + d3 * q5
    numerator = (
        d1 ** 4 * d2 * d3
        + d1 ** 3 * (4 * d2 ** 2 * d3 + 4 * d2 * d3 * (d3 - s) - 6 * p)
        - 6 * p * free
        + d1 ** 2 * (
            4 * d2 ** 3 * d3 + 9 * d2 ** 2 * d3 * (d3 - s) + 30 * p * (s - d3) + d2 * square
        )
        + d1 * (
            d2 ** 4 * d3 + 4 * d2 ** 3 * d3 * (d3 - s)
            - 6 * p * (5 * d3 ** 2 + q8 - 13 * d3 * s)
            + d2 ** 2 * square
            + d2 * (d3 ** 4 - 4 * d3 ** 3 * s + 78 * p * s + d3 ** 2 * q5 - d3 * cubic)
        )
    )
    return Fraction(numerator, p ** 2)


def count_A1A1A1_33(sig: GermSignature) -> Fraction:
    _expect(sig, 3, 3)
    (w1, w2, w3), (d1, d2, d3) = sig.weights, sig.degrees
    s = w1 + w2 + w3
    p = w1 * w2 * w3
    q16 = 16 * w1 ** 2 + 16 * w2 ** 2 + 27 * w2 * w3 + 16 * w3 ** 2 + 27 * w1 * (w2 + w3)
    q8 = 8 * w1 ** 2 + 8 * w2 ** 2 + 15 * w2 * w3 + 8 * w3 ** 2 + 15 * w1 * (w2 + w3)
    cubic = (
        w1 ** 3 + 3 * w1 ** 2 * (w2 + w3) + (w2 + w3) ** 3
        + 3 * w1 * (w2 ** 2 + 32 * w2 * w3 + w3 ** 2)
    )
    cubic3 = (
        3 * w1 ** 3 + 3 * w2 ** 3 + 8 * w2 ** 2 * w3 + 8 * w2 * w3 ** 2 + 3 * w3 ** 3
        + 8 * w1 ** 2 * (w2 + w3) + w1 * (8 * w2 ** 2 + 87 * w2 * w3 + 8 * w3 ** 2)
    )
    free = (
        -5 * d2 ** 3 - 5 * d3 ** 3 + 15 * w1 ** 3 + 32 * w1 ** 2 * w2 + 32 * w1 * w2 ** 2 + 15 * w2 ** 3
        - 22 * d2 ** 2 * (d3 - s) + 32 * w1 ** 2 * w3 + 54 * p + 32 * w2 ** 2 * w3 + 32 * w1 * w3 ** 2
        + 32 * w2 * w3 ** 2 + 15 * w3 ** 3 + 22 * d3 ** 2 * s - 2 * d3 * q16
        - 2 * d2 * (11 * d3 ** 2 + q16 - 27 * d3 * s)
    )
    tail = d3 ** 3 - 14 * p - 2 * d3 ** 2 * s + d3 * s ** 2
    mixed = 21 * d3 ** 3 - 88 * p - 45 * d3 ** 2 * s + 3 * d3 * q8
    numerator = (
        d1 ** 5 * d2 ** 2 * d3 ** 2
        + 3 * d1 ** 4 * d2 * d3 * (d2 ** 2 * d3 + d2 * d3 * (d3 - s) - 4 * p)
        - 8 * p ** 2 * free
        + d1 ** 3 * (
            3 * d2 ** 4 * d3 ** 2 + 6 * d2 ** 3 * d3 ** 2 * (d3 - s)
            - 42 * d2 * d3 * p * (d3 - s) + 40 * p ** 2 + 3 * d2 ** 2 * d3 * tail
        )
        + d1 ** 2 * (
            d2 ** 5 * d3 ** 2 + 3 * d2 ** 4 * d3 ** 2 * (d3 - s) - 176 * p ** 2 * (s - d3)
            + 3 * d2 ** 3 * d3 * tail - 2 * d2 * p * mixed
            + d2 ** 2 * d3 * (
                d3 ** 4 - 3 * d3 ** 3 * s + 90 * p * s + 3 * d3 ** 2 * s ** 2 - d3 * cubic
            )
        )
        + 2 * d1 * p * (
            -6 * d2 ** 4 * d3 - 21 * d2 ** 3 * d3 * (d3 - s)
            + 8 * p * (11 * d3 ** 2 + q16 - 27 * d3 * s)
            - d2 ** 2 * mixed
            - 3 * d2 * (2 * d3 ** 4 - 7 * d3 ** 3 * s + 72 * p * s + d3 ** 2 * q8 - d3 * cubic3)
        )
    )
    return Fraction(numerator, 6 * p ** 3)


def quadruple_34(sig: GermSignature) -> Fraction:
    """Printed quadruple point value for germs C^3 -> C^4 (includes deg1 = 4)."""
    _expect(sig, 3, 4)
    (w1, w2, w3), (d1, d2, d3, d4) = sig.weights, sig.degrees
    s = w1 + w2 + w3
    p = w1 * w2 * w3
    q11 = 11 * w1 ** 2 + 17 * w1 * w2 + 11 * w2 ** 2 + 17 * w1 * w3 + 17 * w2 * w3 + 11 * w3 ** 2
    q19 = 19 * w1 ** 2 + 19 * w2 ** 2 + 30 * w2 * w3 + 19 * w3 ** 2 + 30 * w1 * (w2 + w3)
    linear = 6 * d3 ** 2 + 6 * d4 ** 2 + q11 + 17 * d3 * (d4 - s) - 17 * d4 * s
    free = (
        d2 ** 3 + d3 ** 3 + d4 ** 3 - 6 * d4 ** 2 * s + d4 * q11
        - 6 * w1 ** 3 - 11 * w1 ** 2 * w2 - 11 * w1 * w2 ** 2 - 6 * w2 ** 3
        - 11 * w1 ** 2 * w3 - 17 * p - 11 * w2 ** 2 * w3 - 11 * w1 * w3 ** 2 - 11 * w2 * w3 ** 2 - 6 * w3 ** 3
        + 6 * d3 ** 2 * (d4 - s) + 6 * d2 ** 2 * (d3 + d4 - s)
        + d2 * linear + d3 * (6 * d4 ** 2 + q11 - 17 * d4 * s)
    )
    numerator = (
        d1 ** 3 * (
            d2 ** 3 * d3 ** 3 * d4 ** 3 - 6 * d2 ** 2 * d3 ** 2 * d4 ** 2 * p
            + 11 * d2 * d3 * d4 * p ** 2 - 6 * p ** 3
        )
        - 6 * p ** 3 * free
        - 6 * d1 ** 2 * p * (
            d2 ** 3 * d3 ** 2 * d4 ** 2 - 6 * p ** 2 * (s - d3 - d4)
            + d2 ** 2 * d3 * d4 * (d3 ** 2 * d4 + d3 * d4 * (d4 - s) - 5 * p)
            + d2 * p * (-5 * d3 ** 2 * d4 + 6 * p + 5 * d3 * d4 * (s - d4))
        )
        + d1 * p ** 2 * (
            11 * d2 ** 3 * d3 * d4
            + 6 * d2 ** 2 * (5 * d3 ** 2 * d4 + 5 * d3 * d4 * (d4 - s) - 6 * p)
            - 6 * p * linear
            + d2 * (
                11 * d3 ** 3 * d4 + 30 * d3 ** 2 * d4 * (d4 - s) + 102 * p * (s - d4)
                + d3 * (11 * d4 ** 3 - 102 * p - 30 * d4 ** 2 * s + d4 * q19)
            )
        )
    )
    return Fraction(numerator, 6 * p ** 4)


def image_milnor_34(sig: GermSignature) -> Fraction:
    _expect(sig, 3, 4)
    (w1, w2, w3), (d1, d2, d3, d4) = sig.weights, sig.degrees
    s = w1 + w2 + w3
    p = w1 * w2 * w3
    q1 = w1 ** 2 + w2 ** 2 + w3 ** 2 - 9 * (w1 * w2 + w1 * w3 + w2 * w3)
    q17 = 17 * w1 ** 2 + 17 * w2 ** 2 + 6 * w2 * w3 + 17 * w3 ** 2 + 6 * w1 * (w2 + w3)
    linear = 2 * d3 ** 2 + 2 * d4 ** 2 + q1 - 3 * d4 * s + d3 * (9 * d4 - 3 * s)
    free = (
        -d2 ** 3 - d3 ** 3 + 2 * d3 ** 2 * d4 - d4 ** 3 + 2 * d2 ** 2 * (d3 + d4) + d4 * q1
        + 9 * w1 ** 2 * w2 + 9 * w1 * w2 ** 2 + 9 * w1 ** 2 * w3 + 27 * p + 9 * w2 ** 2 * w3
        + 9 * w1 * w3 ** 2 + 9 * w2 * w3 ** 2
        + d3 * (2 * d4 ** 2 + q1 - 3 * d4 * s) + d2 * linear
    )
    numerator = (
        d1 ** 3 * (
            d2 ** 3 * d3 ** 3 * d4 ** 3 + 2 * d2 ** 2 * d3 ** 2 * d4 ** 2 * p
            - d2 * d3 * d4 * p ** 2 - 2 * p ** 3
        )
        + 2 * d1 ** 2 * p * (
            d2 ** 3 * d3 ** 2 * d4 ** 2 + 2 * (d3 + d4) * p ** 2
            + d2 * p * (-9 * d3 ** 2 * d4 + 2 * p + 9 * d3 * d4 * (s - d4))
            + d2 ** 2 * d3 * d4 * (d3 ** 2 * d4 - 9 * p + d3 * d4 * (d4 - 3 * s))
        )
        + 2 * p ** 3 * free
        - d1 * p ** 2 * (
            d2 ** 3 * d3 * d4
            + 2 * d2 ** 2 * (9 * d3 ** 2 * d4 + 9 * d3 * d4 * (d4 - s) - 2 * p)
            - 2 * p * linear
            + d2 * (
                d3 ** 3 * d4 + 18 * d3 ** 2 * d4 * (d4 - s) + 6 * p * (s - 3 * d4)
                + d3 * (d4 ** 3 - 18 * p - 18 * d4 ** 2 * s + d4 * q17)
            )
        )
    )
    return Fraction(numerator, 24 * p ** 4)


def double_image_milnor_34(sig: GermSignature) -> Fraction:
    """Milnor number of the double-point image of a germ C^3 -> C^4."""
    _expect(sig, 3, 4)
    (w1, w2, w3), (d1, d2, d3, d4) = sig.weights, sig.degrees
    s = w1 + w2 + w3
    p = w1 * w2 * w3
    q47 = 47 * (w1 ** 2 + w2 ** 2 + w3 ** 2) + 57 * (w1 * w2 + w1 * w3 + w2 * w3)
    q17 = 17 * w1 ** 2 + 17 * w2 ** 2 + 18 * w2 * w3 + 17 * w3 ** 2 + 18 * w1 * (w2 + w3)
    linear = 22 * d3 ** 2 + 22 * d4 ** 2 + q47 - 69 * d4 * s + d3 * (75 * d4 - 69 * s)
    free = (
        d2 ** 3 + d3 ** 3 + d4 ** 3 - 24 * d4 ** 2 * s + d4 * q47
        - 24 * w1 ** 3 - 33 * w1 ** 2 * w2 - 33 * w1 * w2 ** 2 - 24 * w2 ** 3
        - 33 * w1 ** 2 * w3 - 51 * p - 33 * w2 ** 2 * w3 - 33 * w1 * w3 ** 2 - 33 * w2 * w3 ** 2 - 24 * w3 ** 3
        + d3 ** 2 * (22 * d4 - 24 * s) + d2 ** 2 * (22 * d3 + 22 * d4 - 24 * s)
        + d3 * (22 * d4 ** 2 + q47 - 69 * d4 * s) + d2 * linear
    )
    numerator = (
        d1 ** 3 * (
            3 * d2 ** 3 * d3 ** 3 * d4 ** 3 - 2 * d2 ** 2 * d3 ** 2 * d4 ** 2 * p
            - 3 * d2 * d3 * d4 * p ** 2 + 2 * p ** 3
        )
        + 2 * p ** 3 * free
        - 2 * d1 ** 2 * p * (
            d2 ** 3 * d3 ** 2 * d4 ** 2 + 2 * p ** 2 * (-11 * d3 - 11 * d4 + 12 * s)
            - d2 * p * (-21 * d3 ** 2 * d4 + 22 * p - 3 * d3 * d4 * (7 * d4 - 9 * s))
            + d2 ** 2 * d3 * d4 * (d3 ** 2 * d4 + 21 * p + d3 * d4 * (d4 + 3 * s))
        )
        + d1 * p ** 2 * (
            -3 * d2 ** 3 * d3 * d4 + 2 * p * linear
            + d2 ** 2 * (-42 * d3 ** 2 * d4 + 44 * p - 6 * d3 * d4 * (7 * d4 - 9 * s))
            - 3 * d2 * (
                d3 ** 3 * d4 + 2 * d3 ** 2 * d4 * (7 * d4 - 9 * s) + 2 * p * (23 * s - 25 * d4)
                + d3 * (d4 ** 3 - 50 * p - 18 * d4 ** 2 * s + d4 * q17)
            )
        )
    )
    return Fraction(numerator, 24 * p ** 4)


def discriminant_milnor_33(sig: GermSignature) -> Fraction:
    _expect(sig, 3, 3)
    (w1, w2, w3), (d1, d2, d3) = sig.weights, sig.degrees
    s = w1 + w2 + w3
    p = w1 * w2 * w3
    q13 = 13 * w1 ** 2 + 13 * w2 ** 2 + 15 * w2 * w3 + 13 * w3 ** 2 + 15 * w1 * (w2 + w3)
    q5 = 5 * w1 ** 2 + 5 * w2 ** 2 + 8 * w2 * w3 + 5 * w3 ** 2 + 8 * w1 * (w2 + w3)
    cubic = (
        w1 ** 3 + 3 * w1 ** 2 * (w2 + w3) + (w2 + w3) ** 3
        + 3 * w1 * (w2 ** 2 + 14 * w2 * w3 + w3 ** 2)
    )
    cubic2 = (
        2 * w1 ** 3 + 4 * w1 ** 2 * (w2 + w3) + w1 * (4 * w2 ** 2 + 21 * w2 * w3 + 4 * w3 ** 2)
        + 2 * (w2 ** 3 + 2 * w2 ** 2 * w3 + 2 * w2 * w3 ** 2 + w3 ** 3)
    )
    free = (
        d2 ** 3 + d3 ** 3 - 6 * w1 ** 3 - 7 * w1 ** 2 * w2 - 7 * w1 * w2 ** 2 - 6 * w2 ** 3
        - 7 * w1 ** 2 * w3 - 15 * p - 7 * w2 ** 2 * w3 - 7 * w1 * w3 ** 2 - 7 * w2 * w3 ** 2 - 6 * w3 ** 3
        - 8 * d3 ** 2 * s + d3 * q13 + 2 * d2 ** 2 * (7 * d3 - 4 * s)
        + d2 * (14 * d3 ** 2 + q13 - 27 * d3 * s)
    )
    tail = d3 ** 3 - 5 * p - 2 * d3 ** 2 * s + d3 * s ** 2
    mixed = 15 * d3 ** 3 - 14 * p - 30 * d3 ** 2 * s + 3 * d3 * q5
    numerator = (
        d1 ** 5 * d2 ** 2 * d3 ** 2
        + 3 * d1 ** 4 * d2 * d3 * (d2 ** 2 * d3 + d2 * d3 * (d3 - s) - p)
        + p ** 2 * free
        + d1 ** 3 * (
            3 * d2 ** 4 * d3 ** 2 + 6 * d2 ** 3 * d3 ** 2 * (d3 - s) + p ** 2
            - 3 * d2 * d3 * p * (5 * d3 - 4 * s) + 3 * d2 ** 2 * d3 * tail
        )
        + d1 ** 2 * (
            d2 ** 5 * d3 ** 2 + 3 * d2 ** 4 * d3 ** 2 * (d3 - s) - 2 * p ** 2 * (4 * s - 7 * d3)
            + 3 * d2 ** 3 * d3 * tail - d2 * p * mixed
            + d2 ** 2 * d3 * (
                d3 ** 4 - 3 * d3 ** 3 * s + 30 * p * s + 3 * d3 ** 2 * s ** 2 - d3 * cubic
            )
        )
        + d1 * p * (
            -3 * d2 ** 4 * d3 - 3 * d2 ** 3 * d3 * (5 * d3 - 4 * s)
            + p * (14 * d3 ** 2 + q13 - 27 * d3 * s)
            - d2 ** 2 * mixed
            - 3 * d2 * (d3 ** 4 - 4 * d3 ** 3 * s + 9 * p * s + d3 ** 2 * q5 - d3 * cubic2)
        )
    )
    return Fraction(numerator, 6 * p ** 3)
