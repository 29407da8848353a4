import json
import logging
from pathlib import Path
from typing import List, Tuple, Union

from pydantic import ValidationError

from models.solver import ConstraintKind, SolveReport, SolverJob
from utils.algebra import GradedPoly, VarSpace
from utils.exceptions import ParseError
from utils.linear import Inconsistent, Solution, Underdetermined, Unique
from utils.parser import format_poly, format_rational, parse_poly
from utils.restriction import (
    Ansatz,
    Constraint,
    EulerDegree,
    SeriesEquality,
    assemble_and_solve,
    solution_polynomial,
    union_ssm,
)

logger = logging.getLogger(__name__)

JOBS_DIR = Path(__file__).resolve().parent.parent / "jobs"


def load_job(path: Union[str, Path]) -> SolverJob:
    """Read a solver job file (JSON)."""
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as e:
        raise ParseError(f"Cannot read job file {path}: {e.strerror}", details={"path": str(path)})
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON in {path}: {e.msg}", details={"path": str(path), "line": e.lineno})
    try:
        return SolverJob.model_validate(raw)
    except ValidationError as e:
        raise ParseError(f"Invalid solver job {path}", details={"path": str(path), "errors": e.errors(include_url=False, include_context=False)})


def build_job(job: SolverJob) -> Tuple[Ansatz, List[Constraint]]:
    space = VarSpace.classes(job.kappa)
    basis = tuple(parse_poly(text, space) for text in job.basis)
    unknowns = tuple(job.unknowns) if job.unknowns is not None else tuple(job.basis)
    fixed = parse_poly(job.fixed, space)
    ansatz = Ansatz(job.degree, basis, unknowns, None if fixed.is_zero() else fixed)

    models = {m.label: m for m in job.models}
    constraints: List[Constraint] = []
    torus = VarSpace.torus()
    for declared in job.constraints:
        model = models[declared.model]
        if declared.kind == ConstraintKind.euler:
            constraints.append(EulerDegree(model=model, chi=declared.chi))
            continue
        order = max(declared.degrees)
        if declared.locus is not None:
            expected = union_ssm(declared.locus, order)
        else:
            expected = parse_poly(declared.expected, torus)
        constraints.append(SeriesEquality(model=model, expected=expected, degrees=tuple(sorted(set(declared.degrees)))))
    return ansatz, constraints


def report(job: SolverJob, ansatz: Ansatz, solution: Solution) -> SolveReport:
    if isinstance(solution, Unique):
        polynomial: GradedPoly = solution_polynomial(ansatz, solution)
        return SolveReport(
            job=job.name,
            status="unique",
            polynomial=format_poly(polynomial),
            values={k: format_rational(v) for k, v in solution.values.items()},
        )
    if isinstance(solution, Underdetermined):
        return SolveReport(
            job=job.name,
            status="underdetermined",
            rank=solution.rank,
            free=list(solution.free),
            values={k: format_rational(v) for k, v in solution.particular.items()},
            directions=[
                {k: format_rational(v) for k, v in d.items() if v != 0}
                for d in solution.directions
            ],
        )
    assert isinstance(solution, Inconsistent)
    return SolveReport(job=job.name, status="inconsistent", rank=solution.rank)


def run_job(job: SolverJob) -> Tuple[Solution, SolveReport]:
    ansatz, constraints = build_job(job)
    logger.info("solving %s: %d unknowns, %d constraints", job.name, len(ansatz.unknowns), len(constraints))
    solution = assemble_and_solve(ansatz, constraints)
    return solution, report(job, ansatz, solution)

