"""
Formal Gysin pushforward on the ring generated by c_k and s_I.

f_* is linear over the s-subring (projection formula) and sends a pure Chern
monomial c^J to the Landweber-Novikov class s_J. rho(w) = f_*(c(f)^{-1} w) turns
source Segre-SM classes into target classes. Multi-singularity classes are
rebuilt from residual polynomials by the recursion

    alpha(e1, ..., er) = sum over S of R(e1 + S) * F(rest - S)

where F(T) sums, over set partitions of T, the product of the pushed-forward
residues of the blocks.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import factorial, prod
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from models.schemas import EntryKind, SingularityKey
from utils.algebra import (
    ONE,
    GradedPoly,
    Monomial,
    Var,
    VarSpace,
    add,
    invert_series,
    make_monomial,
    mul,
    power,
)
from utils.exceptions import (
    MissingResidueError,
    PreconditionError,
    ResidueNotSFreeError,
    WrongKindError,
)
from utils.parser import canonical_name
from utils.validation import validate_in_range

logger = logging.getLogger(__name__)

Pushforward = Callable[[GradedPoly], GradedPoly]

# normalization of the source class of an r-tuple before residues are extracted
CONVENTIONS = ("plain", "aut_over_deg1")


def _push_monomial(monomial: Monomial) -> Monomial:
    chern: Dict[int, int] = {}
    rest: Dict[Var, int] = {}
    for var, exponent in monomial:
        if var.kind == "c":
            chern[var.index[0]] = exponent
        else:
            rest[var] = exponent
    exponents = [chern.get(k, 0) for k in range(1, max(chern, default=0) + 1)]
    lnclass = Var.landweber(exponents)
    rest[lnclass] = rest.get(lnclass, 0) + 1
    return make_monomial(rest)


def formal_pushforward(p: GradedPoly, kappa: int, order: Optional[int] = None) -> GradedPoly:
    """f_*(c^J * S) = s_J * S for S a product of s-classes (or t markers)."""
    if p.space.kappa != kappa or "c" not in p.space.kinds:
        raise PreconditionError(
            "Pushforward needs a polynomial in c and s classes of the same kappa",
            details={"kappa": kappa, "space_kappa": p.space.kappa}
        )
    terms: Dict[Monomial, Fraction] = {}
    for monomial, coefficient in p.terms.items():
        if any(var.kind == "c'" or var.kind == "a" for var, _ in monomial):
            raise PreconditionError("Pushforward is defined on c and s classes only")
        image = _push_monomial(monomial)
        terms[image] = terms.get(image, Fraction(0)) + coefficient
    truncation = None if p.truncation is None else p.truncation + kappa
    result = GradedPoly(p.space, terms, truncation)
    return result.truncate(order) if order is not None else result


def inverse_total_chern(kappa: int, order: int) -> GradedPoly:
    space = VarSpace.classes(kappa)
    total = GradedPoly(space, {((Var.chern(k), 1),): 1 for k in range(1, order + 1)}) + 1
    return invert_series(total, order)


def rho(p: GradedPoly, kappa: int, order: int) -> GradedPoly:
    """f_*(c(f)^{-1} p), truncated at target degree ``order``."""
    source_order = order - kappa
    if source_order < 0:
        return GradedPoly.zero(p.space, order)
    product = mul(inverse_total_chern(kappa, max(source_order, 0)), p.truncate(source_order), source_order)
    return formal_pushforward(product, kappa, order)


def target_tp(entry) -> GradedPoly:
    """(1/deg1) f_* tp of a fundamental-class entry."""
    if entry.key.kind.value != "tp_source":
        raise WrongKindError(
            f"target_tp needs a tp_source entry, got {entry.key.kind.value}",
            details={"name": entry.key.name, "kind": entry.key.kind.value}
        )
    return formal_pushforward(entry.polynomial, entry.key.kappa) / entry.deg1


def target_class(entry) -> GradedPoly:
    """Target Segre-SM class rho(tp^SM) of a series entry, to its valid degree."""
    if not entry.key.kind.value.startswith("tpsm_") or entry.key.kind.value.startswith("tpsm_target"):
        raise WrongKindError(
            f"target_class needs a source Segre-SM series, got {entry.key.kind.value}",
            details={"name": entry.key.name, "kind": entry.key.kind.value}
        )
    kappa = entry.key.kappa
    return rho(entry.polynomial, kappa, entry.max_valid_degree + kappa)


def is_s_free(p: GradedPoly) -> bool:
    return all(var.kind != "s" for monomial in p.terms for var, _ in monomial)


Types = Tuple[str, ...]


@dataclass(frozen=True)
class ResidueTable:
    kappa: int
    order: Optional[int]
    residues: Mapping[Types, GradedPoly] = field(default_factory=dict)

    def get(self, types: Sequence[str]) -> GradedPoly:
        types = tuple(types)
        for key in (types, types[:1] + tuple(sorted(types[1:])), tuple(sorted(types))):
            if key in self.residues:
                return self.residues[key]
        raise MissingResidueError(
            f"No residual polynomial for {''.join(types)}",
            details={"types": list(types), "kappa": self.kappa}
        )

    def with_residue(self, types: Sequence[str], residue: GradedPoly) -> "ResidueTable":
        residues = dict(self.residues)
        residues[tuple(types)] = residue
        return ResidueTable(kappa=self.kappa, order=self.order, residues=residues)


def set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    """Set partitions of a list of positions, blocks in first-occurrence order."""
    if not items:
        yield []
        return
    first, rest = items[0], list(items[1:])
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def _target_sum(table: ResidueTable, types: Types, positions: Sequence[int], push: Pushforward, space: VarSpace, order) -> GradedPoly:
    total = GradedPoly.zero(space, order)
    for partition in set_partitions(sorted(positions)):
        term = GradedPoly.constant(space, 1, order)
        for block in partition:
            term = mul(term, push(table.get(tuple(types[i] for i in block))), order)
        total = add(total, term)
    return total


def multi_recursion(
    table: ResidueTable,
    types: Sequence[str],
    order: Optional[int] = None,
    push: Optional[Pushforward] = None,
    skip_own: bool = False,
) -> GradedPoly:
    """Source class alpha of a tuple rebuilt from residual polynomials.

    Args:
        table: residual polynomials for every needed sub-tuple
        types: the tuple, first entry distinguished
        order: truncation of the result
        push: pushforward applied to target blocks (rho by default)
        skip_own: leave out the tuple's own residue (used to extract it)
    """
    types = tuple(types)
    if not types:
        raise PreconditionError("Empty singularity tuple")
    kappa = table.kappa
    if push is None:
        if order is None:
            raise PreconditionError("rho-level recursion needs a truncation order")
        push = lambda p: rho(p, kappa, order)
    space = VarSpace.classes(kappa)
    rest = list(range(1, len(types)))
    total = GradedPoly.zero(space, order)
    for size in range(len(rest) + 1):
        for chosen in combinations(rest, size):
            if skip_own and size == len(rest):
                continue
            head = table.get((types[0],) + tuple(types[i] for i in chosen))
            remaining = [i for i in rest if i not in chosen]
            total = add(total, mul(head, _target_sum(table, types, remaining, push, space, order), order))
    return total


def multi_target(table: ResidueTable, types: Sequence[str], order: int) -> GradedPoly:
    """Target class beta of a tuple: sum over set partitions of products of rho(R_block)."""
    types = tuple(types)
    kappa = table.kappa
    space = VarSpace.classes(kappa)
    return _target_sum(table, types, range(len(types)), lambda p: rho(p, kappa, order), space, order)


def source_class_scale(deg1: int, aut: int, convention: str) -> Fraction:
    if convention not in CONVENTIONS:
        raise PreconditionError(f"Unknown convention {convention}", details={"conventions": list(CONVENTIONS)})
    if convention == "plain":
        return Fraction(1)
    return Fraction(aut, deg1)


def extract_residues(
    database,
    types: Sequence[str],
    kappa: int,
    level: str = "tp",
    convention: Optional[str] = None,
) -> ResidueTable:
    """Residual polynomials of a tuple and all its sub-tuples.

    At level "tp" the cross terms use plain f_* on fundamental classes and
    run untruncated, every term being homogeneous of the tuple codimension.
    At level "tpsm" they use rho on Segre-SM series truncated at the lowest
    valid degree among the entries. Tuples of three or more types need an
    explicit normalization ``convention``.
    """
    types = tuple(types)
    if len(types) >= 3 and convention is None:
        raise PreconditionError(
            "Residues of tuples with three or more entries need an explicit convention",
            details={"types": list(types), "conventions": list(CONVENTIONS)}
        )
    if level not in ("tp", "tpsm"):
        raise PreconditionError(f"Unknown recursion level {level}", details={"level": level})
    convention = convention or "plain"
    space = VarSpace.classes(kappa)
    subtuples = _subtuples(types)

    def source_entry(sub: Types):
        # A0 is a regular point: its class is the whole source
        if sub == ("A0",):
            return None
        name = canonical_name("".join(sub))
        if level == "tpsm":
            return database.closure_series(name, kappa)
        return database.get(SingularityKey(name=name, kappa=kappa, kind=EntryKind.tp_source))

    entries = {sub: source_entry(sub) for sub in subtuples}
    order: Optional[int] = None
    if level == "tpsm":
        degrees = [e.max_valid_degree for e in entries.values() if e is not None]
        order = min(degrees) if degrees else 0
        push: Pushforward = lambda p: rho(p, kappa, order + kappa)
    else:
        push = lambda p: formal_pushforward(p, kappa)

    table = ResidueTable(kappa=kappa, order=order)
    for sub in subtuples:
        entry = entries[sub]
        if entry is None:
            alpha = GradedPoly.constant(space, 1, order)
        else:
            alpha = entry.polynomial.truncate(order) * source_class_scale(entry.deg1, entry.aut, convention)
        if len(sub) > 1:
            alpha = add(alpha, -multi_recursion(table, sub, order, push, skip_own=True))
        if not is_s_free(alpha):
            raise ResidueNotSFreeError(
                f"Residual polynomial of {''.join(sub)} still contains s-classes",
                details={"types": list(sub), "kappa": kappa, "residue": str(alpha), "convention": convention}
            )
        logger.debug("residue %s: %s", "".join(sub), alpha)
        table = table.with_residue(sub, alpha)
    return table


def _subtuples(types: Types) -> List[Types]:
    """Sub-tuples in order of size, each preserving the original order."""
    seen: Dict[Types, None] = {}
    for size in range(1, len(types) + 1):
        for positions in combinations(range(len(types)), size):
            seen.setdefault(tuple(types[i] for i in positions), None)
    return list(seen)


def multisets(mono_types: Sequence[str], max_size: int) -> List[Types]:
    found: List[Types] = []
    for size in range(1, max_size + 1):
        found.extend(combinations_with_replacement(tuple(mono_types), size))
    return found


def automorphisms(types: Sequence[str]) -> int:
    return prod(factorial(types.count(t)) for t in set(types))


def marker_monomial(types: Sequence[str]) -> Monomial:
    counts: Dict[Var, int] = {}
    for t in types:
        counts[Var.marker(t)] = counts.get(Var.marker(t), 0) + 1
    return make_monomial(counts)


def _marker_degree(monomial: Monomial) -> int:
    return sum(e for var, e in monomial if var.kind == "t")


def generating_function(table: ResidueTable, mono_types: Sequence[str], max_size: int, order: int) -> GradedPoly:
    """exp(sum rho(R) t^types / |Aut|) up to ``max_size`` markers."""
    validate_in_range(max_size, "tuple_size")
    kappa = table.kappa
    space = VarSpace.classes(kappa)
    exponent = GradedPoly.zero(space, order)
    for types in multisets(mono_types, max_size):
        markers = GradedPoly(space, {marker_monomial(types): Fraction(1, automorphisms(types))})
        exponent = add(exponent, mul(rho(table.get(types), kappa, order), markers, order))
    result = GradedPoly.constant(space, 1, order)
    for k in range(1, max_size + 1):
        result = add(result, power(exponent, k, order) / factorial(k))
    kept = {m: c for m, c in result.terms.items() if _marker_degree(m) <= max_size}
    return GradedPoly(space, kept, order)


def generating_coefficient(series: GradedPoly, types: Sequence[str]) -> GradedPoly:
    """|Aut| times the coefficient of t^types, as a polynomial in s-classes."""
    markers = dict(marker_monomial(types))
    terms: Dict[Monomial, Fraction] = {}
    for monomial, coefficient in series.terms.items():
        own = {v: e for v, e in monomial if v.kind == "t"}
        if own == markers:
            rest = tuple((v, e) for v, e in monomial if v.kind != "t")
            terms[rest or ONE] = terms.get(rest or ONE, Fraction(0)) + coefficient
    return GradedPoly(series.space, terms, series.truncation) * automorphisms(types)

