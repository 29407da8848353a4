"""
Restriction method: fix unknown coefficients of a universal class by
evaluating it on equivariant model germs.

A model is a (multi-)germ with a torus acting on source and target by
characters. The c-classes of a candidate restrict through the quotient Chern
class of the distinguished branch; the s-classes aggregate the pushforwards
of all branches sharing the target.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from models.solver import Branch, LocusPiece, ModelGerm
from utils.algebra import (
    GradedPoly,
    Monomial,
    Var,
    VarSpace,
    add,
    class_variables,
    grade_component,
    invert_series,
    linear_form,
    monomials_of_degree,
    mul,
    substitute,
    sum_polys,
)
from utils.chern import total_chern_of_rep
from utils.exceptions import KappaMismatchError, NonProperModelError, PreconditionError
from utils.linear import Inconsistent, LinearSystem, Solution, Underdetermined, Unique, solve_exact
from utils.parser import format_poly

logger = logging.getLogger(__name__)


def _euler_class(characters: Sequence[Sequence[int]]) -> GradedPoly:
    result = GradedPoly.constant(VarSpace.torus(), 1)
    for w in characters:
        result = mul(result, linear_form(w))
    return result


def model_quotient_chern(model: ModelGerm, branch: Optional[int] = None, order: int = 4) -> GradedPoly:
    """c(f) = c(target) / c(source) of one branch, truncated at ``order``."""
    index = model.distinguished if branch is None else branch
    if not 0 <= index < len(model.branches):
        raise PreconditionError(f"Model {model.label} has no branch {index}", details={"branch": index})
    chosen = model.branches[index]
    source = total_chern_of_rep(chosen.source, model.torus_rank, order)
    target = total_chern_of_rep(chosen.target, model.torus_rank, order)
    return mul(target, invert_series(source, order), order)


def _proportion(target: Sequence[int], source: Sequence[int]) -> Optional[Fraction]:
    """lambda with target = lambda * source, if any."""
    pivot = next((j for j, w in enumerate(source) if w), None)
    if pivot is None:
        return None
    ratio = Fraction(target[pivot], source[pivot])
    if ratio == 0 or any(t != ratio * w for t, w in zip(target, source)):
        return None
    return ratio


def branch_pushforward(branch: Branch, rank: int) -> GradedPoly:
    """f_*(1) for one branch: the Euler class of the target divided by that of the source.

    Each source character cancels against a proportional target character.
    """
    remaining = [list(w) for w in branch.target]
    factor = Fraction(1)
    for w in branch.source:
        match = next((i for i, t in enumerate(remaining) if _proportion(t, w) is not None), None)
        if match is None:
            raise NonProperModelError(
                "Source characters do not divide the target Euler class",
                details={"source": branch.source, "target": branch.target, "rank": rank}
            )
        factor *= _proportion(remaining.pop(match), w)
    return _euler_class(remaining) * factor


def _chern_monomial(components: Mapping[int, GradedPoly], exponents: Sequence[int], order: int) -> GradedPoly:
    result = GradedPoly.constant(VarSpace.torus(), 1, order)
    for k, e in enumerate(exponents, start=1):
        for _ in range(e):
            result = mul(result, components[k], order)
    return result


def _components(model: ModelGerm, branch: int, top: int) -> Dict[int, GradedPoly]:
    total = model_quotient_chern(model, branch, max(top, 1))
    return {k: grade_component(total, k) for k in range(1, top + 1)}


def model_s_classes(model: ModelGerm, exponents: Sequence[int], order: int) -> GradedPoly:
    """s_I of a model: sum over branches of c^I(branch) * f_*(1)(branch)."""
    if len(model.branches) > 1 and model.kappa < 1:
        raise NonProperModelError(
            "Multi-germ Landweber-Novikov classes need kappa >= 1",
            details={"model": model.label}
        )
    top = len(exponents)
    pieces = []
    for i, branch in enumerate(model.branches):
        components = _components(model, i, top) if top else {}
        monomial = _chern_monomial(components, exponents, order)
        pieces.append(mul(monomial, branch_pushforward(branch, model.torus_rank), order))
    return sum_polys(VarSpace.torus(), pieces, order)


def inverse_normal_class(normal: Sequence[Sequence[int]], order: int) -> GradedPoly:
    """Segre-SM class of a smooth invariant subspace: e(nu) / c(nu)."""
    if not normal:
        raise PreconditionError("Need at least one normal character")
    rank = len(normal[0])
    total = total_chern_of_rep(normal, rank, order)
    return mul(_euler_class(normal), invert_series(total, order), order)


def union_ssm(pieces: Sequence[Union[LocusPiece, Tuple[Sequence[Sequence[int]], int]]], order: int) -> GradedPoly:
    """Inclusion-exclusion of smooth strata: sum of sign * inverse_normal_class."""
    result = GradedPoly.zero(VarSpace.torus(), order)
    for piece in pieces:
        normal, sign = (piece.normal, piece.sign) if isinstance(piece, LocusPiece) else piece
        result = add(result, inverse_normal_class(normal, order) * sign)
    return result


def restrict(p: GradedPoly, model: ModelGerm, order: int) -> GradedPoly:
    """Evaluate a universal class on a model germ as a torus series."""
    if p.space.kappa != model.kappa:
        raise KappaMismatchError(
            "Candidate and model have different relative codimension",
            details={"candidate_kappa": p.space.kappa, "model": model.label, "model_kappa": model.kappa}
        )
    variables = p.variables()
    chern_top = max([v.index[0] for v in variables if v.kind == "c"] + [order, 1])
    components = _components(model, model.distinguished, chern_top)
    assignment: Dict[Var, GradedPoly] = {}
    for var in variables:
        if var.kind == "c":
            assignment[var] = components[var.index[0]]
        elif var.kind == "s":
            assignment[var] = model_s_classes(model, var.index, order)
        else:
            raise PreconditionError(f"Cannot restrict variable {var} to a model", details={"variable": str(var)})
    return substitute(p, assignment, order, space=VarSpace.torus())


@dataclass(frozen=True)
class Ansatz:
    """fixed + sum_i x_i * basis_i with every basis element homogeneous of ``degree``."""
    degree: int
    basis: Tuple[GradedPoly, ...]
    unknowns: Tuple[str, ...]
    fixed: Optional[GradedPoly] = None

    def __post_init__(self):
        if len(self.basis) != len(self.unknowns):
            raise PreconditionError("Each basis element needs one unknown", details={"unknowns": list(self.unknowns)})
        spaces = {b.space for b in self.basis} | ({self.fixed.space} if self.fixed is not None else set())
        if len(spaces) > 1:
            raise PreconditionError("Ansatz pieces live in different variable spaces")
        for name, element in zip(self.unknowns, self.basis):
            if element.is_zero() or not element.is_homogeneous(self.degree):
                raise PreconditionError(
                    f"Basis element {name} is not homogeneous of degree {self.degree}",
                    details={"unknown": name, "element": format_poly(element)}
                )

    @property
    def space(self) -> VarSpace:
        return self.basis[0].space if self.basis else self.fixed.space

    @classmethod
    def full(cls, kappa: int, degree: int, with_s: bool = True, fixed: Optional[GradedPoly] = None) -> "Ansatz":
        """Every monomial of ``degree`` in c_i (and s_I) with its own unknown."""
        space = VarSpace.classes(kappa)
        variables = [v for v in class_variables(kappa, degree) if with_s or v.kind == "c"]
        monomials = monomials_of_degree(space, variables, degree)
        basis = tuple(GradedPoly(space, {m: 1}) for m in monomials)
        return cls(degree, basis, tuple(format_poly(b) for b in basis), fixed)

    def candidate(self, values: Mapping[str, Fraction]) -> GradedPoly:
        result = self.fixed if self.fixed is not None else GradedPoly.zero(self.space)
        for name, element in zip(self.unknowns, self.basis):
            result = add(result, element * Fraction(values.get(name, 0)))
        return result


@dataclass(frozen=True)
class SeriesEquality:
    model: ModelGerm
    expected: GradedPoly
    degrees: Tuple[int, ...]

    @property
    def order(self) -> int:
        return max(self.degrees)


@dataclass(frozen=True)
class EulerDegree:
    """[c(E0) * candidate]_m = chi * e(E0) for the source E0 of the distinguished branch."""
    model: ModelGerm
    chi: int

    @property
    def order(self) -> int:
        return self.model.source_dimension


Constraint = Union[SeriesEquality, EulerDegree]


def _torus_monomials(polys: Sequence[GradedPoly], degree: int) -> List[Monomial]:
    found = set()
    for p in polys:
        found.update(m for m in p.terms if p.space.monomial_degree(m) == degree)
    return sorted(found, key=lambda m: tuple((v.sort_key, -e) for v, e in m))


def _equations(ansatz: Ansatz, constraint: Constraint) -> List[Tuple[Dict[str, Fraction], Fraction]]:
    order = constraint.order
    model = constraint.model
    fixed = restrict(ansatz.fixed, model, order) if ansatz.fixed is not None else GradedPoly.zero(VarSpace.torus(), order)
    restricted = [restrict(b, model, order) for b in ansatz.basis]
    if isinstance(constraint, EulerDegree):
        source = model.branches[model.distinguished].source
        tangent = total_chern_of_rep(source, model.torus_rank, order)
        fixed = mul(tangent, fixed, order)
        restricted = [mul(tangent, r, order) for r in restricted]
        expected = _euler_class(source) * constraint.chi
        degrees: Sequence[int] = (order,)
    else:
        expected = constraint.expected
        degrees = constraint.degrees
    equations = []
    for degree in degrees:
        for monomial in _torus_monomials([fixed, expected, *restricted], degree):
            row = {name: r.terms.get(monomial, Fraction(0)) for name, r in zip(ansatz.unknowns, restricted)}
            rhs = expected.terms.get(monomial, Fraction(0)) - fixed.terms.get(monomial, Fraction(0))
            equations.append((row, rhs))
    logger.debug("model %s contributes %d equations", model.label, len(equations))
    return equations


def assemble_and_solve(ansatz: Ansatz, constraints: Sequence[Constraint]) -> Solution:
    """Equate restrictions with the expected values and solve exactly."""
    equations = []
    for constraint in constraints:
        equations.extend(_equations(ansatz, constraint))
    solution = solve_exact(LinearSystem.from_equations(ansatz.unknowns, equations))
    if isinstance(solution, Underdetermined):
        logger.info("ansatz of degree %d is underdetermined: free %s", ansatz.degree, list(solution.free))
    elif isinstance(solution, Inconsistent):
        logger.info("ansatz of degree %d is inconsistent with its constraints", ansatz.degree)
    return solution


def solution_polynomial(ansatz: Ansatz, solution: Solution) -> Optional[GradedPoly]:
    if isinstance(solution, Unique):
        return ansatz.candidate(solution.values)
    return None


def satisfies(p: GradedPoly, constraint: Constraint) -> bool:
    """Substitute-and-verify a known class against one constraint."""
    known = Ansatz(constraint.order, (), (), p)
    return all(rhs == 0 for _, rhs in _equations(known, constraint))


def euler_check(entry, model: ModelGerm, chi: int) -> bool:
    """Whether a stored series meets the Euler-degree constraint at ``model``."""
    return satisfies(entry.polynomial, EulerDegree(model=model, chi=chi))
