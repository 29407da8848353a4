"""JSONL batch runner: one JobRecord per line, results in input order."""
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Iterator, List, Optional, Sequence

from pydantic import ValidationError

from components.database import TpDatabase, load_database
from models.schemas import BatchErrorRecord, GermRecord, GermSignature, JobRecord, ResultRecord
from utils.chern import infer_weights
from utils.constraints import DEFAULT_VALUES
from utils.exceptions import ErrorResponse, ParseError, ThomForgeError
from utils.invariants import resolve_invariant
from utils.parser import format_rational, parse_monomial_map
from utils.validation import validate_in_range

logger = logging.getLogger(__name__)


def resolve_germ(
    weights: Optional[Sequence[int]] = None,
    degrees: Optional[Sequence[int]] = None,
    map_text: Optional[str] = None,
) -> GermSignature:
    """A germ from explicit weights/degrees or from a monomial map."""
    if map_text is not None:
        if weights is not None or degrees is not None:
            raise ParseError("Give either weights and degrees or a map, not both")
        variables, components = parse_monomial_map(map_text)
        return infer_weights(components, variables)
    if weights is None or degrees is None:
        raise ParseError("Both weights and degrees are required")
    return GermSignature.of(weights, degrees)


def evaluate_record(record: JobRecord, database: TpDatabase) -> List[ResultRecord]:
    sig = resolve_germ(record.weights, record.degrees, record.map)
    germ = GermRecord(weights=list(sig.weights), degrees=list(sig.degrees))
    results: List[ResultRecord] = []
    for invariant in record.invariants:
        for name, result in resolve_invariant(sig, invariant, database).items():
            results.append(ResultRecord(
                germ=germ,
                invariant=name,
                value=format_rational(result.value),
                integral=result.integral,
                warnings=result.warnings,
            ))
    return results


def _internal_error(e: Exception) -> ErrorResponse:
    return ErrorResponse(exit_code=1, error_code="INTERNAL_ERROR", message=str(e), details={"type": type(e).__name__})


def evaluate_line(line_number: int, text: str, database: TpDatabase) -> List[str]:
    """Serialized output records for one input line; errors stay on their line."""
    try:
        try:
            record = JobRecord.model_validate_json(text)
        except ValidationError as e:
            raise ParseError(
                f"Malformed job on line {line_number}",
                details={"errors": e.errors(include_url=False, include_context=False)}
            )
        return [r.model_dump_json() for r in evaluate_record(record, database)]
    except ThomForgeError as e:
        logger.warning("line %d: %s", line_number, e.message)
        return [BatchErrorRecord(line=line_number, error=e.to_response()).model_dump_json()]
    except Exception as e:
        logger.exception("line %d failed unexpectedly", line_number)
        return [BatchErrorRecord(line=line_number, error=_internal_error(e)).model_dump_json()]


def run_batch(lines: Iterable[str], jobs: Optional[int] = None, database: Optional[TpDatabase] = None) -> Iterator[str]:
    """Evaluate non-blank lines concurrently and yield output in input order."""
    jobs = jobs or DEFAULT_VALUES["batch_jobs"]
    validate_in_range(jobs, "batch_jobs")
    database = database or load_database()
    numbered = [(i, line) for i, line in enumerate(lines, start=1) if line.strip()]
    logger.debug("batch of %d lines with %d workers", len(numbered), jobs)
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        futures = [executor.submit(evaluate_line, i, line, database) for i, line in numbered]
        for future in futures:
            yield from future.result()


def parse_output(text: str) -> List[dict]:
    """Read batch output back as dictionaries, one per line."""
    return [json.loads(line) for line in text.splitlines() if line.strip()]
