"""
Enumerative invariants of weighted-homogeneous germs by localization.

Counts of 0-stable singularities come from specializing a Thom polynomial to
the germ and reading off the top torus coefficient; Euler characteristics of
images and discriminants of a stable perturbation come from the Segre-SM
series of the relevant constructible function.
"""
import logging
from fractions import Fraction
from typing import Dict, List

from components.database import load_database
from models.schemas import (
    EntryKind,
    GermSignature,
    IntersectionNumbers,
    InvariantResult,
    MilnorKind,
    SingularityKey,
    SurfaceInvariants,
    TpEntry,
)
from utils.algebra import Var, add, coefficient_of, mul
from utils.chern import specialize, total_chern_of_rep
from utils.exceptions import (
    CodimensionMismatchError,
    KappaMismatchError,
    OddCrosscapCountError,
    PreconditionError,
    ThomForgeError,
    TruncationError,
    UnknownKeyError,
)
from utils.parser import canonical_name
from utils.pushforward import rho, target_tp

logger = logging.getLogger(__name__)

A = Var.torus(1)

NON_INTEGER_WARNING = "non-integer output: input likely not A-finite or wrong type/kappa"
NEGATIVE_WARNING = "negative output: input likely not A-finite or wrong type/kappa"

# kind of Milnor number -> (required kappa, alpha series name and kind)
_MILNOR_SERIES = {
    MilnorKind.image: (1, "alpha_image", EntryKind.tpsm_alpha_image),
    MilnorKind.image2: (1, "alpha_image2", EntryKind.tpsm_alpha_image2),
    MilnorKind.discriminant: (0, "alpha_dis", EntryKind.tpsm_alpha_dis),
}


def _database(database):
    return database if database is not None else load_database()


def _count_warnings(value: Fraction) -> List[str]:
    warnings = []
    if value.denominator != 1:
        warnings.append(NON_INTEGER_WARNING)
    if value < 0:
        warnings.append(NEGATIVE_WARNING)
    return warnings


def top_coefficient(entry_poly, sig: GermSignature, degree: int) -> Fraction:
    return coefficient_of(specialize(entry_poly, sig, degree), {A: degree})


def count_stable(sig: GermSignature, name: str, database=None) -> InvariantResult:
    """Number of 0-stable singularities of type ``name`` in a stable perturbation."""
    database = _database(database)
    try:
        entry: TpEntry = database.get(SingularityKey(name=name, kappa=sig.kappa, kind=EntryKind.tp_source))
    except UnknownKeyError:
        others = [e.key.kappa for e in database.select(EntryKind.tp_source) if e.key.name == canonical_name(name)]
        if others:
            raise KappaMismatchError(
                f"{name} is stored for kappa {others}, the germ has kappa {sig.kappa}",
                details={"type": name, "kappa": sig.kappa, "stored_kappa": others}
            )
        raise
    if entry.codim != sig.m:
        raise CodimensionMismatchError(
            f"{entry.key.name} has codimension {entry.codim}, the germ has m = {sig.m}",
            details={"type": entry.key.name, "codim": entry.codim, "m": sig.m}
        )
    source = top_coefficient(entry.polynomial, sig, sig.m) / (entry.deg1 * sig.weight_product)
    stored = database.find(entry.key.name, sig.kappa, EntryKind.tp_target)
    target_poly = stored.polynomial if stored is not None else target_tp(entry)
    target = top_coefficient(target_poly, sig, sig.n) / sig.degree_product
    if source != target:
        raise ThomForgeError(
            1,
            "Source and target counting routes disagree",
            error_code="INTERNAL_ERROR",
            details={"type": entry.key.name, "source": str(source), "target": str(target)}
        )
    warnings = _count_warnings(source)
    for warning in warnings:
        logger.warning("%s for %s at %s", warning, entry.key.name, sig)
    return InvariantResult.from_value(source, warnings)


def count_all(sig: GermSignature, database=None) -> Dict[str, InvariantResult]:
    """Every stored type whose codimension equals the source dimension."""
    database = _database(database)
    entries = [e for e in database.select(EntryKind.tp_source, sig.kappa) if e.codim == sig.m]
    return {e.key.name: count_stable(sig, e.key.name, database) for e in entries}


def localized_euler(sig: GermSignature, series_entry: TpEntry) -> Fraction:
    """[c(TM) * tp^SM(alpha)(f)]_m / c_m(TM) for the germ's torus fixed point."""
    if series_entry.key.kappa != sig.kappa:
        raise KappaMismatchError(
            "Series and germ have different kappa",
            details={"series": series_entry.key.name, "series_kappa": series_entry.key.kappa, "kappa": sig.kappa}
        )
    if sig.m > series_entry.max_valid_degree:
        raise TruncationError(
            f"{series_entry.key.name} is only known through degree {series_entry.max_valid_degree}",
            details={"m": sig.m, "max_valid_degree": series_entry.max_valid_degree}
        )
    tangent = total_chern_of_rep([[w] for w in sig.weights], 1, sig.m)
    product = mul(tangent, specialize(series_entry.polynomial, sig, sig.m), sig.m)
    return coefficient_of(product, {A: sig.m}) / sig.weight_product


def euler_characteristic(sig: GermSignature, kind: MilnorKind, database=None) -> Fraction:
    database = _database(database)
    kappa, name, entry_kind = _MILNOR_SERIES[kind]
    if sig.kappa != kappa:
        raise KappaMismatchError(
            f"{kind.value} Milnor numbers need kappa = {kappa}",
            details={"kind": kind.value, "kappa": sig.kappa}
        )
    return localized_euler(sig, database.get(SingularityKey(name=name, kappa=kappa, kind=entry_kind)))


def milnor_number(sig: GermSignature, kind: MilnorKind, database=None) -> InvariantResult:
    chi = euler_characteristic(sig, kind, database)
    exponent = sig.n - 1 if kind == MilnorKind.discriminant else sig.m
    value = (-1) ** exponent * (chi - 1)
    warnings = [] if value.denominator == 1 else [NON_INTEGER_WARNING]
    for warning in warnings:
        logger.warning("%s for mu_%s at %s", warning, kind.value, sig)
    return InvariantResult.from_value(value, warnings)


def chi_image(sig: GermSignature, database=None) -> Fraction:
    return euler_characteristic(sig, MilnorKind.image, database)


def mu_image(sig: GermSignature, database=None) -> InvariantResult:
    return milnor_number(sig, MilnorKind.image, database)


def mu_image2(sig: GermSignature, database=None) -> InvariantResult:
    return milnor_number(sig, MilnorKind.image2, database)


def mu_discriminant(sig: GermSignature, database=None) -> InvariantResult:
    return milnor_number(sig, MilnorKind.discriminant, database)


def chi_image_global(numbers: IntersectionNumbers) -> Fraction:
    """Euler characteristic of the image of a stable map from a surface to a threefold."""
    return Fraction(1, 6) * (
        3 * numbers.c1tm_c1
        + 6 * numbers.c2tm
        - 3 * numbers.c1tm_s0
        - numbers.c1_sq
        - numbers.c2
        - 2 * numbers.c1_s0
        + numbers.s0_sq
        + 2 * numbers.s1
    )


def _check_surface_data(d: int, delta: int, crosscaps: int, triple: int) -> None:
    if d < 1 or min(delta, crosscaps, triple) < 0:
        raise PreconditionError(
            "Need d >= 1 and non-negative delta, C, T",
            details={"d": d, "delta": delta, "C": crosscaps, "T": triple}
        )


def enriques_invariants(d: int, delta: int, crosscaps: int, triple: int) -> SurfaceInvariants:
    """Chern numbers of the normalization and Euler characteristic of a surface in P^3.

    Args:
        d: degree of the surface
        delta: degree of the double curve
        crosscaps: number of crosscaps C
        triple: number of triple points T
    """
    _check_surface_data(d, delta, crosscaps, triple)
    c1_squared = d * (d - 4) ** 2 - (3 * d - 16) * delta + 3 * triple - crosscaps
    c2 = d * (d * d - 4 * d + 6) - (3 * d - 8) * delta + 3 * triple - 2 * crosscaps
    chi = d * (d * d - 4 * d + 6) + 2 * (2 - d) * delta + triple - Fraction(3, 2) * crosscaps
    return SurfaceInvariants(c1_squared=Fraction(c1_squared), c2=Fraction(c2), chi=Fraction(chi))


def enriques_intersections(d: int, delta: int, crosscaps: int, triple: int) -> IntersectionNumbers:
    """The eight integrals chi_image_global needs, for the normalization of a surface in P^3."""
    surface = enriques_invariants(d, delta, crosscaps, triple)
    # f_* c1 = (d(4 - d) + 2 delta) a^2 and s0 = d a
    pushed_c1 = d * (4 - d) + 2 * delta
    return IntersectionNumbers(
        c1tm_c1=4 * pushed_c1 - surface.c1_squared,
        c2tm=surface.c2,
        c1tm_s0=d * pushed_c1,
        c1_sq=16 * d - 8 * pushed_c1 + surface.c1_squared,
        c2=6 * d - 4 * pushed_c1 + surface.c1_squared - surface.c2,
        c1_s0=d * (4 * d - pushed_c1),
        s0_sq=d ** 3,
        s1=d * (d * d - 2 * delta),
    )


def izumiya_marar_real(chi_m: int, crosscaps: int, triple: int) -> int:
    """Euler characteristic of the image of a stable map of a closed surface to R^3."""
    if crosscaps < 0 or triple < 0:
        raise PreconditionError("Counts must be non-negative", details={"C": crosscaps, "T": triple})
    if crosscaps % 2:
        raise OddCrosscapCountError(
            "A closed surface has an even number of crosscaps",
            details={"C": crosscaps}
        )
    return chi_m + crosscaps // 2 + triple


def free_divisor_target_ssm(order: int = 3, database=None):
    """1 - rho(tp^SM(alpha_dis)): the complementary target class of the discriminant."""
    database = _database(database)
    entry = database.get(SingularityKey(name="alpha_dis", kappa=0, kind=EntryKind.tpsm_alpha_dis))
    if order > entry.max_valid_degree:
        raise TruncationError(
            f"alpha_dis is only known through degree {entry.max_valid_degree}",
            details={"order": order}
        )
    image = rho(entry.polynomial, 0, order)
    return 1 - image


def milnor_all(sig: GermSignature, database=None) -> Dict[str, InvariantResult]:
    """Milnor numbers applicable to the germ's kappa."""
    results: Dict[str, InvariantResult] = {}
    for kind, (kappa, _, _) in _MILNOR_SERIES.items():
        if sig.kappa == kappa:
            results[f"mu_{kind.value}"] = milnor_number(sig, kind, database)
    return results


def resolve_invariant(sig: GermSignature, invariant: str, database=None) -> Dict[str, InvariantResult]:
    """Evaluate one requested invariant name: a type, ``mu_<kind>``, ``counts`` or ``all``."""
    if invariant == "all":
        results = count_all(sig, database)
        try:
            results.update(milnor_all(sig, database))
        except TruncationError as e:
            logger.info("skipping Milnor numbers: %s", e.message)
        return results
    if invariant == "counts":
        return count_all(sig, database)
    if invariant.startswith("mu_"):
        try:
            kind = MilnorKind(invariant[3:])
        except ValueError:
            raise PreconditionError(f"Unknown Milnor number {invariant}", details={"invariant": invariant})
        return {invariant: milnor_number(sig, kind, database)}
    return {invariant: count_stable(sig, invariant, database)}

