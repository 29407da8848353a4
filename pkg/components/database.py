import hashlib
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, Field

from models.schemas import EntryKind, SingularityKey, TpEntry
from utils.algebra import GradedPoly, Var, VarSpace, add, grade_component
from utils.constraints import COMBINATION_TARGETS, RHO_TARGETS, database_path
from utils.exceptions import DatabaseError, ParseError, PreconditionError, UnknownKeyError
from utils.parser import canonical_name, name_multiplicities, parse_poly, parse_rational
from utils.pushforward import rho, target_tp

logger = logging.getLogger(__name__)

_FIELD_COUNT = 9
_TP_KINDS = {EntryKind.tp_source, EntryKind.tp_target, EntryKind.tpA}
_MORIN_TYPES = ["A1", "A2", "A3", "A4"]


def entry_space(kind: EntryKind, kappa: int) -> VarSpace:
    if kind == EntryKind.tpA:
        return VarSpace.source_target()
    return VarSpace.classes(kappa)


@dataclass(frozen=True)
class TpDatabase:
    path: str
    content_hash: str
    entries: Mapping[SingularityKey, TpEntry]
    coefficients: Mapping[Tuple[str, int], Dict[str, Fraction]]

    def get(self, key: SingularityKey) -> TpEntry:
        lookup = SingularityKey(name=canonical_name(key.name), kappa=key.kappa, kind=key.kind)
        if lookup not in self.entries:
            raise UnknownKeyError(
                f"No database entry for {key}",
                details={"name": key.name, "kappa": key.kappa, "kind": key.kind.value}
            )
        return self.entries[lookup]

    def find(self, name: str, kappa: int, kind: EntryKind) -> Optional[TpEntry]:
        return self.entries.get(SingularityKey(name=canonical_name(name), kappa=kappa, kind=kind))

    def select(self, kind: Optional[EntryKind] = None, kappa: Optional[int] = None) -> List[TpEntry]:
        return [
            entry for key, entry in self.entries.items()
            if (kind is None or key.kind == kind) and (kappa is None or key.kappa == kappa)
        ]

    def combination_coefficients(self, name: str, kappa: int) -> Dict[str, Fraction]:
        if (name, kappa) not in self.coefficients:
            raise UnknownKeyError(
                f"No coefficient vector {name} for kappa={kappa}",
                details={"name": name, "kappa": kappa}
            )
        return self.coefficients[(name, kappa)]

    def closure_series(self, name: str, kappa: int) -> TpEntry:
        """Segre-SM class of a closure, falling back to the fundamental class."""
        entry = self.find(name, kappa, EntryKind.tpsm_closure) or self.find(name, kappa, EntryKind.tp_source)
        if entry is None:
            raise UnknownKeyError(
                f"No closure series for {name} (kappa={kappa})",
                details={"name": name, "kappa": kappa}
            )
        return entry

    def combination(self, name: str, kappa: int) -> Tuple[GradedPoly, int]:
        """Sum of coef * tp^SM(closure) for a stored coefficient vector.

        Returns:
            (series, degree up to which every summand is valid)
        """
        space = VarSpace.classes(kappa)
        coefficients = self.combination_coefficients(name, kappa)
        used = [self.closure_series(t, kappa) for t in coefficients if t != "1"]
        order = min(entry.max_valid_degree for entry in used) if used else 0
        total = GradedPoly.zero(space, order)
        for type_name, coefficient in coefficients.items():
            if type_name == "1":
                total = add(total, GradedPoly.constant(space, coefficient))
            else:
                total = add(total, self.closure_series(type_name, kappa).polynomial * coefficient)
        return total.truncate(order), order


def _parse_coefficients(text: str, line_number: int) -> Dict[str, Fraction]:
    coefficients: Dict[str, Fraction] = {}
    for item in filter(None, (part.strip() for part in text.split(";"))):
        name, sep, value = item.partition("=")
        if not sep:
            raise DatabaseError(f"Line {line_number}: coefficient item needs '='", details={"item": item})
        try:
            coefficients[canonical_name(name.strip())] = parse_rational(value)
        except ParseError as e:
            raise DatabaseError(f"Line {line_number}: {e.message}", details=e.details)
    return coefficients


def parse_database(text: str, source: str = "<memory>") -> TpDatabase:
    entries: Dict[SingularityKey, TpEntry] = {}
    coefficients: Dict[Tuple[str, int], Dict[str, Fraction]] = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|", _FIELD_COUNT - 1)]
        if len(fields) != _FIELD_COUNT:
            raise DatabaseError(
                f"Line {line_number}: expected {_FIELD_COUNT} fields, found {len(fields)}",
                details={"line": line_number, "source": source}
            )
        name, kappa_text, kind_text, codim, deg1, aut, max_degree, citation, body = fields
        try:
            kind = EntryKind(kind_text)
            kappa, codim_value, deg1_value, aut_value, max_value = (
                int(x) for x in (kappa_text, codim, deg1, aut, max_degree)
            )
        except ValueError as e:
            raise DatabaseError(f"Line {line_number}: {e}", details={"line": line_number, "source": source})
        if kind == EntryKind.alpha_coefficients:
            coefficients[(name, kappa)] = _parse_coefficients(body, line_number)
            continue
        try:
            polynomial = parse_poly(body, entry_space(kind, kappa))
        except (ParseError, PreconditionError) as e:
            raise DatabaseError(
                f"Line {line_number}: {e.message}",
                details={"line": line_number, "source": source, "entry": name}
            )
        if (polynomial.max_degree() or 0) > max_value:
            raise DatabaseError(
                f"Line {line_number}: terms beyond max_degree {max_value}",
                details={"line": line_number, "entry": name}
            )
        key = SingularityKey(name=canonical_name(name), kappa=kappa, kind=kind)
        if key in entries:
            raise DatabaseError(f"Line {line_number}: duplicate entry {key}", details={"line": line_number})
        entries[key] = TpEntry(
            key=key,
            codim=codim_value,
            deg1=deg1_value,
            aut=aut_value,
            max_valid_degree=max_value,
            citation=citation,
            polynomial=polynomial if kind in _TP_KINDS else polynomial.truncate(max_value),
            text=body,
        )
    content_hash = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return TpDatabase(path=source, content_hash=content_hash, entries=entries, coefficients=coefficients)


@lru_cache(maxsize=8)
def _load_cached(path: str) -> TpDatabase:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DatabaseError(f"Cannot read database file: {e}", details={"path": path})
    database = parse_database(text, source=path)
    logger.debug(
        "loaded %s (sha256 %s, %d entries)",
        path, database.content_hash[:12], len(database.entries) + len(database.coefficients)
    )
    return database


def load_database(path: Optional[Path] = None) -> TpDatabase:
    return _load_cached(str(Path(path or database_path()).resolve()))


def get(key: SingularityKey, database: Optional[TpDatabase] = None) -> TpEntry:
    return (database or load_database()).get(key)


class CheckResult(BaseModel):
    check: str
    entry: str
    passed: bool
    message: str = ""


class ValidationReport(BaseModel):
    content_hash: str
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


def _check_grading(entry: TpEntry) -> CheckResult:
    label = str(entry.key)
    poly = entry.polynomial
    if entry.key.kind in _TP_KINDS:
        ok = poly.is_homogeneous(entry.codim) and not poly.is_zero()
        message = "" if ok else f"degrees {poly.degrees()} differ from codim {entry.codim}"
    else:
        low = poly.min_degree()
        ok = low == entry.codim and entry.max_valid_degree >= entry.codim
        message = "" if ok else f"series starts in degree {low}, codim is {entry.codim}"
    return CheckResult(check="grading", entry=label, passed=ok, message=message)


def _check_multiplicities(entry: TpEntry) -> Optional[CheckResult]:
    try:
        deg1, aut = name_multiplicities(entry.key.name)
    except ParseError:
        return None
    ok = (deg1, aut) == (entry.deg1, entry.aut)
    message = "" if ok else f"name implies deg1={deg1}, aut={aut}; stored {entry.deg1}, {entry.aut}"
    return CheckResult(check="multiplicities", entry=str(entry.key), passed=ok, message=message)


def _check_leading_term(database: TpDatabase, entry: TpEntry) -> Optional[CheckResult]:
    tp = database.find(entry.key.name, entry.key.kappa, EntryKind.tp_source)
    if tp is None:
        return None
    leading = grade_component(entry.polynomial, entry.codim)
    ok = leading == tp.polynomial
    return CheckResult(
        check="leading_term", entry=str(entry.key), passed=ok,
        message="" if ok else f"leading term {leading} differs from tp {tp.polynomial}"
    )


def target_tp_check(database: TpDatabase, entry: TpEntry) -> CheckResult:
    """A stored target class equals (1/deg1) f_* of its source class."""
    source = database.find(entry.key.name, entry.key.kappa, EntryKind.tp_source)
    if source is None:
        return CheckResult(check="target_tp", entry=str(entry.key), passed=False, message="no tp_source entry")
    difference = add(target_tp(source), -entry.polynomial)
    return CheckResult(
        check="target_tp", entry=str(entry.key), passed=difference.is_zero(),
        message="" if difference.is_zero() else f"residual {difference}"
    )


def milnor_function_check(database: TpDatabase) -> CheckResult:
    """Sum of the kappa=0 Morin closures is c1 + c2 + c3 + c4 through degree 4."""
    space = VarSpace.classes(0)
    try:
        closures = [database.get(SingularityKey(name=t, kappa=0, kind=EntryKind.tpsm_closure)) for t in _MORIN_TYPES]
    except UnknownKeyError as e:
        return CheckResult(check="milnor_function", entry="A1..A4", passed=False, message=e.message)
    order = min(min(e.max_valid_degree for e in closures), len(_MORIN_TYPES))
    total = GradedPoly.zero(space, order)
    for entry in closures:
        total = add(total, entry.polynomial)
    expected = GradedPoly(space, {((Var.chern(k), 1),): 1 for k in range(1, order + 1)}, order)
    difference = add(total, -expected)
    return CheckResult(
        check="milnor_function", entry="A1..A4", passed=difference.is_zero(),
        message="" if difference.is_zero() else f"residual {difference}"
    )


def combination_check(database: TpDatabase, name: str, kappa: int) -> CheckResult:
    label = f"{name} (kappa={kappa})"
    target_kind = EntryKind(COMBINATION_TARGETS[name])
    target = database.find(name, kappa, target_kind)
    if target is None:
        return CheckResult(check="combination", entry=label, passed=False, message=f"no {target_kind.value} entry")
    try:
        series, order = database.combination(name, kappa)
    except UnknownKeyError as e:
        return CheckResult(check="combination", entry=label, passed=False, message=e.message)
    order = min(order, target.max_valid_degree)
    difference = add(series.truncate(order), -target.polynomial.truncate(order))
    return CheckResult(
        check="combination", entry=label, passed=difference.is_zero(),
        message=f"through degree {order}" if difference.is_zero() else f"residual {difference}"
    )


def target_series_check(database: TpDatabase, source: TpEntry) -> Optional[CheckResult]:
    """rho of a stored alpha series reproduces the stored target series."""
    if source.key.kind.value not in RHO_TARGETS:
        return None
    target_name, target_kind = RHO_TARGETS[source.key.kind.value]
    target = database.find(target_name, source.key.kappa, EntryKind(target_kind))
    if target is None:
        return None
    order = min(target.max_valid_degree, source.max_valid_degree + source.key.kappa)
    image = rho(source.polynomial, source.key.kappa, order)
    difference = add(image, -target.polynomial.truncate(order))
    return CheckResult(
        check="target_series", entry=str(source.key), passed=difference.is_zero(),
        message=f"through degree {order}" if difference.is_zero() else f"residual {difference}"
    )


def validate_all(database: Optional[TpDatabase] = None) -> ValidationReport:
    database = database or load_database()
    report = ValidationReport(content_hash=database.content_hash)
    for entry in database.entries.values():
        report.checks.append(_check_grading(entry))
        if entry.key.kind in (EntryKind.tp_source, EntryKind.tpsm_closure):
            multiplicities = _check_multiplicities(entry)
            if multiplicities is not None:
                report.checks.append(multiplicities)
        if entry.key.kind == EntryKind.tpsm_closure:
            leading = _check_leading_term(database, entry)
            if leading is not None:
                report.checks.append(leading)
        if entry.key.kind == EntryKind.tp_target:
            report.checks.append(target_tp_check(database, entry))
        rho_check = target_series_check(database, entry)
        if rho_check is not None:
            report.checks.append(rho_check)
    if database.select(EntryKind.tpsm_closure, 0):
        report.checks.append(milnor_function_check(database))
    for name, kappa in database.coefficients:
        if name in COMBINATION_TARGETS:
            report.checks.append(combination_check(database, name, kappa))
    for failure in report.failures:
        logger.warning("database check %s failed for %s: %s", failure.check, failure.entry, failure.message)
    return report
