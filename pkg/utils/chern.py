"""
Characteristic classes of weighted-homogeneous germs.

Under the one-dimensional torus acting with weights w on the source and
degrees d on the target, the quotient Chern class of the germ is
prod(1 + d_j a) / prod(1 + w_i a) and the Landweber-Novikov classes are
s_I = c^I * s0 with s0 = (prod d / prod w) a^kappa.
"""
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Mapping, Optional, Sequence

from models.schemas import GermSignature
from utils.algebra import (
    GradedPoly,
    Var,
    VarSpace,
    add,
    elementary_symmetric,
    grade_component,
    invert_series,
    linear_form,
    mul,
    partitions,
    substitute,
)
from utils.constraints import VALIDATION_LIMITS
from utils.exceptions import (
    AmbiguousSolutionError,
    KappaMismatchError,
    NoPositiveSolutionError,
    NotSupersymmetricError,
    PreconditionError,
)
from utils.linear import Inconsistent, LinearSystem, Underdetermined, nullspace, solve_exact

logger = logging.getLogger(__name__)

A = Var.torus(1)


def quotient_chern(sig: GermSignature, order: int) -> GradedPoly:
    """Total quotient Chern class c(f) as a series in a, truncated at ``order``."""
    if order < 1:
        raise PreconditionError("Truncation order must be at least 1", details={"order": order})
    torus = VarSpace.torus()
    numerator = GradedPoly.constant(torus, 1, order)
    for d in sig.degrees:
        numerator = mul(numerator, 1 + linear_form([d]), order)
    denominator = GradedPoly.constant(torus, 1, order)
    for w in sig.weights:
        denominator = mul(denominator, 1 + linear_form([w]), order)
    return mul(numerator, invert_series(denominator, order), order)


def chern_components(sig: GermSignature, top: int) -> Dict[int, GradedPoly]:
    total = quotient_chern(sig, max(top, 1))
    return {k: grade_component(total, k) for k in range(1, top + 1)}


def s0_class(sig: GermSignature) -> GradedPoly:
    return GradedPoly.monomial(VarSpace.torus(), {A: sig.kappa}, Fraction(sig.degree_product, sig.weight_product))


def landweber_novikov(sig: GermSignature, exponents: Sequence[int], order: int) -> GradedPoly:
    """s_I = prod_k c_k(f)^{i_k} * s0, truncated at ``order``."""
    torus = VarSpace.torus()
    top = len(exponents)
    components = chern_components(sig, top) if top else {}
    result = s0_class(sig).truncate(order)
    for k, e in enumerate(exponents, start=1):
        for _ in range(e):
            result = mul(result, components[k], order)
    return GradedPoly(torus, result.terms, order)


def specialize(p: GradedPoly, sig: GermSignature, order: int) -> GradedPoly:
    """Evaluate a universal class on the germ: c_k, s_I -> torus series."""
    if p.space.kappa != sig.kappa:
        raise KappaMismatchError(
            "Polynomial and germ have different relative codimension",
            details={"polynomial_kappa": p.space.kappa, "germ_kappa": sig.kappa}
        )
    variables = p.variables()
    top = max([v.index[0] for v in variables if v.kind == "c"] + [len(v.index) for v in variables if v.kind == "s"] + [1])
    components = chern_components(sig, max(top, order))
    assignment: Dict[Var, GradedPoly] = {}
    for var in variables:
        if var.kind == "c":
            assignment[var] = components[var.index[0]]
        elif var.kind == "s":
            image = s0_class(sig)
            for k, e in enumerate(var.index, start=1):
                for _ in range(e):
                    image = mul(image, components[k])
            assignment[var] = image
        else:
            raise PreconditionError(f"Cannot specialize variable {var}", details={"variable": str(var)})
    return substitute(p, assignment, order, space=VarSpace.torus())


def total_chern_of_rep(weights: Sequence[Sequence[int]], rank: int, order: Optional[int] = None) -> GradedPoly:
    """prod_i (1 + <w_i, a>) for characters of a rank-``rank`` torus."""
    torus = VarSpace.torus()
    result = GradedPoly.constant(torus, 1, order)
    for weight in weights:
        if len(weight) != rank:
            raise PreconditionError(
                "Character length does not match the torus rank",
                details={"weight": list(weight), "rank": rank}
            )
        result = mul(result, 1 + linear_form(weight), order)
    return result


def _root_assignment(m: int, n: int) -> Dict[Var, GradedPoly]:
    torus = VarSpace.torus()
    shared = GradedPoly.variable(torus, Var.torus(m))
    source = [GradedPoly.variable(torus, Var.torus(j)) for j in range(1, m)] + [shared]
    target = [GradedPoly.variable(torus, Var.torus(j)) for j in range(m + 1, m + n)] + [shared]
    assignment: Dict[Var, GradedPoly] = {}
    for k in range(1, m + 1):
        assignment[Var.chern(k)] = elementary_symmetric(source, k)
    for k in range(1, n + 1):
        assignment[Var.target_chern(k)] = elementary_symmetric(target, k)
    return assignment


def supersymmetry_check(P: GradedPoly, m: int, n: int) -> bool:
    """True iff P(c, c') is independent of t after setting a_m = b_n = t."""
    limits = VALIDATION_LIMITS["supersymmetry_rank"]
    for label, value in (("m", m), ("n", n)):
        if not limits["min"] <= value <= limits["max"]:
            raise PreconditionError(
                f"{label} must be between {limits['min']} and {limits['max']}",
                details={label: value}
            )
    if P.space != VarSpace.source_target():
        raise PreconditionError("Supersymmetry is defined for polynomials in c and c'")
    assignment = _root_assignment(m, n)
    for var in P.variables():
        if var not in assignment:
            # c_k with k > m or c'_k with k > n vanish on roots
            assignment[var] = GradedPoly.zero(VarSpace.torus())
    expanded = substitute(P, assignment, space=VarSpace.torus())
    shared = Var.torus(m)
    return all(all(var != shared for var, _ in monomial) for monomial in expanded.terms)


def quotient_expansion(m: int, n: int, order: int) -> GradedPoly:
    """(1 + c'_1 + ... + c'_n) / (1 + c_1 + ... + c_m) in the (c, c') space."""
    space = VarSpace.source_target()
    source = GradedPoly(space, {((Var.chern(k), 1),): 1 for k in range(1, m + 1)}) + 1
    target = GradedPoly(space, {((Var.target_chern(k), 1),): 1 for k in range(1, n + 1)}) + 1
    return mul(target, invert_series(source, order), order)


def to_quotient_classes(P: GradedPoly, m: int, n: int, order: int) -> GradedPoly:
    """Rewrite a supersymmetric P(c, c') as a polynomial in quotient classes c_k."""
    if not supersymmetry_check(P, m, n):
        raise NotSupersymmetricError("Polynomial is not supersymmetric", details={"m": m, "n": n})
    quotient = quotient_expansion(m, n, order)
    pieces = {k: grade_component(quotient, k) for k in range(1, order + 1)}
    classes = VarSpace.classes(0)
    result = GradedPoly.zero(classes, order)
    constant = P.constant_term()
    if constant:
        result = result + constant
    for degree in range(1, order + 1):
        target = grade_component(P.truncate(order), degree)
        if target.is_zero():
            continue
        basis = [tuple(parts) for parts in partitions(degree)]
        images = {}
        for parts in basis:
            image = GradedPoly.constant(quotient.space, 1)
            for part in parts:
                image = mul(image, pieces[part])
            images[parts] = image
        names = ["u" + "_".join(map(str, parts)) for parts in basis]
        monomials = set(target.terms)
        for image in images.values():
            monomials |= set(image.terms)
        equations = [
            ({name: images[parts].terms.get(mono, 0) for name, parts in zip(names, basis)}, target.terms.get(mono, 0))
            for mono in monomials
        ]
        outcome = solve_exact(LinearSystem.from_equations(names, equations))
        logger.debug("degree %d quotient rewrite: %d unknowns, %d equations", degree, len(names), len(equations))
        if isinstance(outcome, Inconsistent):
            raise NotSupersymmetricError(
                "No quotient-class representative in this degree",
                details={"degree": degree}
            )
        if isinstance(outcome, Underdetermined):
            logger.warning(
                "degree %d representative is not unique (free: %s); using the particular solution",
                degree, ", ".join(outcome.free)
            )
            values = outcome.particular
        else:
            values = outcome.values
        for name, parts in zip(names, basis):
            if values[name]:
                exponents: Dict[Var, int] = {}
                for part in parts:
                    exponents[Var.chern(part)] = exponents.get(Var.chern(part), 0) + 1
                result = add(result, GradedPoly.monomial(classes, exponents, values[name]))
    return result


def infer_weights(components: Sequence[Sequence[Mapping[str, int]]], variables: Sequence[str]) -> GermSignature:
    """Primitive positive weights making every component weighted homogeneous.

    Args:
        components: per target component, a list of monomials {variable: exponent}
        variables: source variable names in weight order

    Returns:
        GermSignature with weights in ``variables`` order
    """
    index = {name: i for i, name in enumerate(variables)}
    rows: List[List[int]] = []
    vectors: List[List[List[int]]] = []
    for component in components:
        if not component:
            raise PreconditionError("Map components must be nonzero")
        exps = []
        for monomial in component:
            vector = [0] * len(variables)
            for name, e in monomial.items():
                vector[index[name]] += e
            exps.append(vector)
        vectors.append(exps)
        for other in exps[1:]:
            rows.append([x - y for x, y in zip(other, exps[0])])
    basis = nullspace(rows, len(variables))
    if not basis:
        raise NoPositiveSolutionError("The map is not weighted homogeneous", details={"variables": list(variables)})
    if len(basis) > 1:
        raise AmbiguousSolutionError(
            "Weights are not determined up to scale; choose weights explicitly",
            details={"basis": [[str(x) for x in v] for v in basis], "variables": list(variables)}
        )
    vector = basis[0]
    scale = lcm(*(x.denominator for x in vector))
    integers = [int(x * scale) for x in vector]
    divisor = gcd(*integers)
    integers = [x // divisor for x in integers]
    if sum(integers) < 0:
        integers = [-x for x in integers]
    if any(x <= 0 for x in integers):
        raise NoPositiveSolutionError(
            "No positive weight vector makes the map weighted homogeneous",
            details={"solution": integers, "variables": list(variables)}
        )
    degrees = [sum(w * e for w, e in zip(integers, exps[0])) for exps in vectors]
    try:
        return GermSignature.of(integers, degrees)
    except PreconditionError as e:
        raise NoPositiveSolutionError(e.message, details=e.details)
