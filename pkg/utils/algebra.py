"""
Exact sparse graded polynomials and truncated power series.

Every coefficient is a ``fractions.Fraction``. A polynomial lives in a
``VarSpace``, which fixes the relative codimension kappa (used to grade the
Landweber-Novikov classes) and the kinds of variables it admits. Terms are
stored sparsely as ``{monomial: coefficient}`` where a monomial is a tuple of
``(Var, exponent)`` pairs sorted by the canonical variable order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from utils.exceptions import (
    InvalidMonomialError,
    PreconditionError,
    TruncationError,
    VarSpaceMismatchError,
)

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]

# torus variable, quotient (or source) Chern class, target Chern class,
# Landweber-Novikov class, formal generating-function marker
VAR_KINDS = ("a", "c", "c'", "s", "t")
_KIND_RANK = {kind: rank for rank, kind in enumerate(VAR_KINDS)}


@dataclass(frozen=True)
class Var:
    kind: str
    index: Tuple[int, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise InvalidMonomialError(f"Unknown variable kind: {self.kind}", details={"kind": self.kind})
        if self.kind in ("a", "c", "c'") and (len(self.index) != 1 or self.index[0] < 1):
            raise InvalidMonomialError(
                f"Variable {self.kind} needs one positive index",
                details={"kind": self.kind, "index": list(self.index)}
            )
        if self.kind == "s" and any(i < 0 for i in self.index):
            raise InvalidMonomialError("Exponent vectors of s-classes are non-negative", details={"index": list(self.index)})

    @classmethod
    def torus(cls, j: int) -> "Var":
        return cls("a", (j,))

    @classmethod
    def chern(cls, k: int) -> "Var":
        return cls("c", (k,))

    @classmethod
    def target_chern(cls, k: int) -> "Var":
        return cls("c'", (k,))

    @classmethod
    def landweber(cls, exponents: Iterable[int] = ()) -> "Var":
        index = list(exponents)
        while index and index[-1] == 0:
            index.pop()
        return cls("s", tuple(index))

    @classmethod
    def marker(cls, name: str) -> "Var":
        return cls("t", (), name)

    @property
    def sort_key(self) -> Tuple:
        # s-classes order by weighted size first so s[] < s[1] < s[0,1] ~ s[2]
        if self.kind == "s":
            return (_KIND_RANK["s"], sum((j + 1) * e for j, e in enumerate(self.index)), self.index, self.name)
        return (_KIND_RANK[self.kind], 0, self.index, self.name)

    def __lt__(self, other: "Var") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if self.kind in ("a", "c", "c'"):
            return f"{self.kind}{self.index[0]}"
        if self.kind == "s":
            return "s[" + ",".join(str(i) for i in self.index) + "]"
        return f"t[{self.name}]"


Monomial = Tuple[Tuple[Var, int], ...]
ONE: Monomial = ()


@dataclass(frozen=True)
class VarSpace:
    """Grading context: kappa and the admissible variable kinds."""
    kappa: int
    kinds: FrozenSet[str]

    @classmethod
    def torus(cls) -> "VarSpace":
        return cls(0, frozenset({"a"}))

    @classmethod
    def classes(cls, kappa: int) -> "VarSpace":
        return cls(kappa, frozenset({"c", "s", "t"}))

    @classmethod
    def source_target(cls) -> "VarSpace":
        return cls(0, frozenset({"c", "c'"}))

    def admits(self, var: Var) -> bool:
        return var.kind in self.kinds

    def degree(self, var: Var) -> int:
        if var.kind == "a":
            return 1
        if var.kind in ("c", "c'"):
            return var.index[0]
        if var.kind == "s":
            return self.kappa + sum((j + 1) * e for j, e in enumerate(var.index))
        return 0

    def monomial_degree(self, monomial: Monomial) -> int:
        return _monomial_degree(self.kappa, monomial)

    def check(self, monomial: Monomial) -> None:
        for var, _ in monomial:
            if not self.admits(var):
                raise InvalidMonomialError(
                    f"Variable {var} is not admitted in this space",
                    details={"variable": str(var), "kinds": sorted(self.kinds), "kappa": self.kappa}
                )


@lru_cache(maxsize=65536)
def _monomial_degree(kappa: int, monomial: Monomial) -> int:
    total = 0
    for var, e in monomial:
        if var.kind == "a":
            total += e
        elif var.kind in ("c", "c'"):
            total += var.index[0] * e
        elif var.kind == "s":
            total += (kappa + sum((j + 1) * x for j, x in enumerate(var.index))) * e
    return total


def monomial_mul(left: Monomial, right: Monomial) -> Monomial:
    if not left:
        return right
    if not right:
        return left
    merged: Dict[Var, int] = dict(left)
    for var, e in right:
        merged[var] = merged.get(var, 0) + e
    return tuple(sorted(merged.items(), key=lambda item: item[0].sort_key))


def make_monomial(exponents: Mapping[Var, int]) -> Monomial:
    for var, e in exponents.items():
        if e < 0:
            raise InvalidMonomialError("Negative exponent", details={"variable": str(var), "exponent": e})
    return tuple(sorted(((v, e) for v, e in exponents.items() if e), key=lambda item: item[0].sort_key))


def monomial_order_key(space: VarSpace, monomial: Monomial) -> Tuple:
    """Graded-lexicographic: ascending degree, then lex-descending exponents."""
    return (space.monomial_degree(monomial), tuple((v.sort_key, -e) for v, e in monomial))


def _min_truncation(*orders: Optional[int]) -> Optional[int]:
    known = [k for k in orders if k is not None]
    return min(known) if known else None


class GradedPoly:
    """Immutable sparse polynomial, optionally a series truncated at a degree."""

    __slots__ = ("space", "_terms", "truncation")

    def __init__(
        self,
        space: VarSpace,
        terms: Optional[Mapping[Monomial, Scalar]] = None,
        truncation: Optional[int] = None,
    ):
        if truncation is not None and truncation < 0:
            raise PreconditionError("Truncation order must be non-negative", details={"truncation": truncation})
        clean: Dict[Monomial, Fraction] = {}
        for monomial, coefficient in (terms or {}).items():
            if isinstance(coefficient, float):
                raise PreconditionError("Floating-point coefficients are not allowed", details={"coefficient": coefficient})
            value = Fraction(coefficient)
            if value == 0:
                continue
            space.check(monomial)
            if truncation is not None and space.monomial_degree(monomial) > truncation:
                continue
            clean[monomial] = value
        self.space = space
        self._terms = clean
        self.truncation = truncation

    # construction helpers

    @classmethod
    def zero(cls, space: VarSpace, truncation: Optional[int] = None) -> "GradedPoly":
        return cls(space, {}, truncation)

    @classmethod
    def constant(cls, space: VarSpace, value: Scalar, truncation: Optional[int] = None) -> "GradedPoly":
        return cls(space, {ONE: value}, truncation)

    @classmethod
    def variable(cls, space: VarSpace, var: Var, truncation: Optional[int] = None) -> "GradedPoly":
        return cls(space, {((var, 1),): 1}, truncation)

    @classmethod
    def monomial(
        cls,
        space: VarSpace,
        exponents: Mapping[Var, int],
        coefficient: Scalar = 1,
        truncation: Optional[int] = None,
    ) -> "GradedPoly":
        return cls(space, {make_monomial(exponents): coefficient}, truncation)

    # inspection

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda item: monomial_order_key(self.space, item[0]))

    def degrees(self) -> List[int]:
        return sorted({self.space.monomial_degree(m) for m in self._terms})

    def min_degree(self) -> Optional[int]:
        degrees = self.degrees()
        return degrees[0] if degrees else None

    def max_degree(self) -> Optional[int]:
        degrees = self.degrees()
        return degrees[-1] if degrees else None

    def variables(self) -> List[Var]:
        found = {var for monomial in self._terms for var, _ in monomial}
        return sorted(found, key=lambda v: v.sort_key)

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def is_homogeneous(self, degree: int) -> bool:
        return all(self.space.monomial_degree(m) == degree for m in self._terms)

    def truncate(self, order: Optional[int]) -> "GradedPoly":
        return GradedPoly(self.space, self._terms, _min_truncation(self.truncation, order))

    def without_truncation(self) -> "GradedPoly":
        return GradedPoly(self.space, self._terms, None)

    def map_coefficients(self, factor: Scalar) -> "GradedPoly":
        value = Fraction(factor)
        return GradedPoly(self.space, {m: c * value for m, c in self._terms.items()}, self.truncation)

    # arithmetic

    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return GradedPoly.constant(self.space, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "GradedPoly":
        return self.map_coefficients(-1)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.map_coefficients(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.map_coefficients(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise PreconditionError("Division by zero scalar")
            return self.map_coefficients(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, exponent: int) -> "GradedPoly":
        return power(self, exponent)

    def __eq__(self, other) -> bool:
        # truncation is metadata; equality is on the stored terms
        if isinstance(other, (int, Fraction)):
            other = GradedPoly.constant(self.space, other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.space, frozenset(self._terms.items())))

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __repr__(self) -> str:
        from utils.parser import format_poly
        order = "" if self.truncation is None else f", K={self.truncation}"
        return f"GradedPoly({format_poly(self)}{order})"

    def __str__(self) -> str:
        from utils.parser import format_poly
        return format_poly(self)


def _same_space(p: GradedPoly, q: GradedPoly) -> None:
    if p.space != q.space:
        raise VarSpaceMismatchError(
            "Polynomials live in different variable spaces",
            details={
                "left": {"kappa": p.space.kappa, "kinds": sorted(p.space.kinds)},
                "right": {"kappa": q.space.kappa, "kinds": sorted(q.space.kinds)},
            }
        )


def add(p: GradedPoly, q: GradedPoly) -> GradedPoly:
    _same_space(p, q)
    terms: Dict[Monomial, Fraction] = dict(p.terms)
    for monomial, coefficient in q.terms.items():
        terms[monomial] = terms.get(monomial, Fraction(0)) + coefficient
    return GradedPoly(p.space, terms, _min_truncation(p.truncation, q.truncation))


def mul(p: GradedPoly, q: GradedPoly, order: Optional[int] = None) -> GradedPoly:
    _same_space(p, q)
    space = p.space
    bound = _min_truncation(p.truncation, q.truncation, order)
    right = [(m, c, space.monomial_degree(m)) for m, c in q.terms.items()]
    terms: Dict[Monomial, Fraction] = {}
    for m1, c1 in p.terms.items():
        d1 = space.monomial_degree(m1)
        for m2, c2, d2 in right:
            if bound is not None and d1 + d2 > bound:
                continue
            monomial = monomial_mul(m1, m2)
            terms[monomial] = terms.get(monomial, Fraction(0)) + c1 * c2
    return GradedPoly(space, terms, bound)


def power(p: GradedPoly, exponent: int, order: Optional[int] = None) -> GradedPoly:
    if exponent < 0:
        raise PreconditionError("Negative powers need invert_series", details={"exponent": exponent})
    result = GradedPoly.constant(p.space, 1, _min_truncation(p.truncation, order))
    base = p.truncate(order)
    while exponent:
        if exponent & 1:
            result = mul(result, base, order)
        exponent >>= 1
        if exponent:
            base = mul(base, base, order)
    return result


def invert_series(p: GradedPoly, order: int) -> GradedPoly:
    """Inverse of a unit series, exact modulo degree ``order + 1``."""
    space = p.space
    for monomial in p.terms:
        if monomial and space.monomial_degree(monomial) == 0:
            raise PreconditionError(
                "Unit series may not contain degree-0 variables",
                details={"monomial": "*".join(str(v) for v, _ in monomial)}
            )
    head = p.constant_term()
    if head == 0:
        raise PreconditionError("Cannot invert a series with zero constant term")
    bound = _min_truncation(order, p.truncation)
    tail = GradedPoly(space, {m: -c / head for m, c in p.terms.items() if m}, bound)
    result = GradedPoly.constant(space, 1, bound)
    step = GradedPoly.constant(space, 1, bound)
    for _ in range(bound if bound is not None else order):
        step = mul(step, tail, bound)
        if step.is_zero():
            break
        result = add(result, step)
    return result / head


def as_monomial(space: VarSpace, monomial) -> Monomial:
    if isinstance(monomial, GradedPoly):
        if len(monomial) != 1:
            raise InvalidMonomialError("Expected a single-term polynomial", details={"terms": len(monomial)})
        (key, _), = monomial.items()
        return key
    if isinstance(monomial, Var):
        result: Monomial = ((monomial, 1),)
    elif isinstance(monomial, Mapping):
        result = make_monomial(monomial)
    else:
        result = tuple(monomial)
    space.check(result)
    return result


def coefficient_of(p: GradedPoly, monomial) -> Fraction:
    key = as_monomial(p.space, monomial)
    degree = p.space.monomial_degree(key)
    if p.truncation is not None and degree > p.truncation:
        raise TruncationError(
            "Coefficient requested beyond the series truncation",
            details={"degree": degree, "truncation": p.truncation}
        )
    return p.terms.get(key, Fraction(0))


def grade_component(p: GradedPoly, degree: int) -> GradedPoly:
    if p.truncation is not None and degree > p.truncation:
        raise TruncationError(
            "Degree component requested beyond the series truncation",
            details={"degree": degree, "truncation": p.truncation}
        )
    space = p.space
    return GradedPoly(space, {m: c for m, c in p.terms.items() if space.monomial_degree(m) == degree})


def substitute(
    p: GradedPoly,
    assignment: Mapping[Var, GradedPoly],
    order: Optional[int] = None,
    space: Optional[VarSpace] = None,
) -> GradedPoly:
    """Compose ``p`` with ``assignment``; unassigned variables pass through."""
    targets = {image.space for image in assignment.values()}
    if space is not None:
        targets.add(space)
    if len(targets) > 1:
        raise VarSpaceMismatchError("Assignment images live in different spaces")
    target = targets.pop() if targets else p.space
    for var, image in assignment.items():
        low = image.min_degree()
        if low is not None and low < p.space.degree(var):
            raise PreconditionError(
                f"Image of {var} starts below the variable's degree",
                details={"variable": str(var), "degree": p.space.degree(var), "image_degree": low}
            )
    bound = _min_truncation(order, p.truncation, *(image.truncation for image in assignment.values()))
    cache: Dict[Tuple[Var, int], GradedPoly] = {}

    def image_power(var: Var, exponent: int) -> GradedPoly:
        key = (var, exponent)
        if key not in cache:
            if var in assignment:
                base = assignment[var]
            else:
                if not target.admits(var):
                    raise VarSpaceMismatchError(
                        f"Unassigned variable {var} does not exist in the target space",
                        details={"variable": str(var)}
                    )
                base = GradedPoly.variable(target, var)
            cache[key] = power(base, exponent, bound)
        return cache[key]

    result = GradedPoly.zero(target, bound)
    for monomial, coefficient in p.terms.items():
        term = GradedPoly.constant(target, coefficient, bound)
        for var, exponent in monomial:
            term = mul(term, image_power(var, exponent), bound)
            if term.is_zero():
                break
        result = add(result, term)
    return result


def sum_polys(space: VarSpace, polys: Iterable[GradedPoly], truncation: Optional[int] = None) -> GradedPoly:
    result = GradedPoly.zero(space, truncation)
    for poly in polys:
        result = add(result, poly)
    return result


def partitions(n: int, max_part: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of n as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def monomials_of_degree(space: VarSpace, variables: Sequence[Var], degree: int) -> List[Monomial]:
    """All monomials in ``variables`` of exact degree (positive-degree variables only)."""
    graded = [(v, space.degree(v)) for v in variables if space.degree(v) > 0]
    found: List[Monomial] = []

    def extend(start: int, remaining: int, chosen: Dict[Var, int]) -> None:
        if remaining == 0:
            found.append(make_monomial(chosen))
            return
        for i in range(start, len(graded)):
            var, d = graded[i]
            if d <= remaining:
                chosen[var] = chosen.get(var, 0) + 1
                extend(i, remaining - d, chosen)
                chosen[var] -= 1
                if not chosen[var]:
                    del chosen[var]

    extend(0, degree, {})
    return sorted(found, key=lambda m: monomial_order_key(space, m))


def class_variables(kappa: int, degree: int) -> List[Var]:
    """c_k and s_I variables of positive degree up to ``degree`` (s[] included when it has degree > 0)."""
    variables = [Var.chern(k) for k in range(1, degree + 1)]
    for total in range(0, degree - kappa + 1):
        for parts in partitions(total):
            exponents = [0] * (max(parts) if parts else 0)
            for part in parts:
                exponents[part - 1] += 1
            var = Var.landweber(exponents)
            if kappa + total > 0:
                variables.append(var)
    return sorted(set(variables), key=lambda v: v.sort_key)


def linear_form(weight: Sequence[int], space: Optional[VarSpace] = None) -> GradedPoly:
    """Sum_j w_j a_j for a torus character."""
    space = space or VarSpace.torus()
    return GradedPoly(space, {((Var.torus(j + 1), 1),): w for j, w in enumerate(weight) if w})


def elementary_symmetric(roots: Sequence[GradedPoly], k: int) -> GradedPoly:
    if not roots:
        raise PreconditionError("Need at least one root")
    space = roots[0].space
    if k == 0:
        return GradedPoly.constant(space, 1)
    total = GradedPoly.zero(space)
    for combo in combinations(roots, k):
        term = GradedPoly.constant(space, 1)
        for root in combo:
            term = mul(term, root)
        total = add(total, term)
    return total
