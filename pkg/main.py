import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from components.batch import resolve_germ, run_batch
from components.database import load_database, validate_all
from components.jobs import load_job, run_job
from models.schemas import (
    EntryKind,
    GermRecord,
    GermSignature,
    IntersectionNumbers,
    InvariantResult,
    MilnorKind,
    ResultRecord,
    SingularityKey,
)
from utils.chern import specialize
from utils.constraints import DEFAULT_VALUES, default_log_level
from utils.exceptions import ErrorResponse, ParseError, SolveError, ThomForgeError
from utils.invariants import (
    chi_image_global,
    count_all,
    count_stable,
    enriques_invariants,
    izumiya_marar_real,
    milnor_number,
)
from utils.parser import format_poly, format_rational, parse_int_list

logger = logging.getLogger("thomforge")

LOG_FORMAT = "%(name)s:%(levelname)s:%(message)s"


def _int_list(field: str) -> Callable[[str], List[int]]:
    def convert(text: str) -> List[int]:
        try:
            return parse_int_list(text, field)
        except ParseError as e:
            raise argparse.ArgumentTypeError(e.message)
    return convert


def _add_germ_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--weights", type=_int_list("weights"), help="source weights, e.g. 1,1,1")
    parser.add_argument("--degrees", type=_int_list("degrees"), help="target degrees, e.g. 2,2,1")
    parser.add_argument("--map", dest="map_text", help='monomial map, e.g. "x^2+y^2+x*z, x*y, z"')


def _germ(args: argparse.Namespace) -> GermSignature:
    return resolve_germ(args.weights, args.degrees, args.map_text)


def _record(sig: GermSignature, name: str, result: InvariantResult) -> ResultRecord:
    return ResultRecord(
        germ=GermRecord(weights=list(sig.weights), degrees=list(sig.degrees)),
        invariant=name,
        value=format_rational(result.value),
        integral=result.integral,
        warnings=result.warnings,
    )


def _print_results(sig: GermSignature, results: Dict[str, InvariantResult], as_json: bool, single: bool) -> None:
    records = [_record(sig, name, result) for name, result in results.items()]
    if as_json:
        payload = records[0].model_dump() if single else [r.model_dump() for r in records]
        print(json.dumps(payload))
    elif single:
        print(records[0].value)
    else:
        for record in records:
            print(f"{record.invariant}: {record.value}")


def cmd_count(args: argparse.Namespace) -> int:
    sig = _germ(args)
    if args.all:
        _print_results(sig, count_all(sig), args.json, single=False)
    else:
        _print_results(sig, {args.type: count_stable(sig, args.type)}, args.json, single=True)
    return 0


def cmd_milnor(args: argparse.Namespace) -> int:
    sig = _germ(args)
    kind = MilnorKind(args.kind)
    _print_results(sig, {f"mu_{kind.value}": milnor_number(sig, kind)}, args.json, single=True)
    return 0


def _entry_dict(entry) -> dict:
    return {
        "name": entry.key.name,
        "kappa": entry.key.kappa,
        "kind": entry.key.kind.value,
        "codim": entry.codim,
        "deg1": entry.deg1,
        "aut": entry.aut,
        "max_valid_degree": entry.max_valid_degree,
        "citation": entry.citation,
        "polynomial": format_poly(entry.polynomial),
    }


def cmd_tp(args: argparse.Namespace) -> int:
    database = load_database()
    if args.tp_command == "validate":
        report = validate_all(database)
        if args.json:
            print(report.model_dump_json())
        else:
            for check in report.checks:
                status = "PASS" if check.passed else "FAIL"
                suffix = f"  {check.message}" if check.message else ""
                print(f"{status} {check.check} {check.entry}{suffix}")
            print(f"{len(report.checks) - len(report.failures)}/{len(report.checks)} checks passed")
        return 0 if report.passed else 3

    entry = database.get(SingularityKey(name=args.key, kappa=args.kappa, kind=EntryKind(args.kind)))
    if args.tp_command == "show":
        print(json.dumps(_entry_dict(entry)) if args.json else format_poly(entry.polynomial))
        return 0

    sig = _germ(args)
    order = args.order or max(entry.max_valid_degree, 1)
    series = specialize(entry.polynomial, sig, order)
    if args.json:
        print(json.dumps({"key": _entry_dict(entry)["name"], "order": order, "series": format_poly(series)}))
    else:
        print(format_poly(series))
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    job = load_job(args.job)
    _, report = run_job(job)
    if args.json:
        print(report.model_dump_json())
    elif report.status == "unique":
        print(report.polynomial)
    else:
        print(json.dumps(report.model_dump(), indent=2))
    if report.status != "unique":
        raise SolveError(f"Job {job.name} is {report.status}", details={"rank": report.rank, "free": report.free})
    return 0


def cmd_global(args: argparse.Namespace) -> int:
    if args.global_command == "enriques":
        surface = enriques_invariants(args.d, args.delta, args.C, args.T)
        values = {
            "c1_squared": format_rational(surface.c1_squared),
            "c2": format_rational(surface.c2),
            "chi": format_rational(surface.chi),
        }
    elif args.global_command == "izumiya-marar":
        values = {"chi_image": str(izumiya_marar_real(args.chi, args.C, args.T))}
    else:
        try:
            raw = json.loads(Path(args.intersections).read_text())
            numbers = IntersectionNumbers.model_validate(raw)
        except (json.JSONDecodeError, ValidationError) as e:
            raise ParseError(f"Cannot read intersection numbers: {e}", details={"path": args.intersections})
        values = {"chi_image": format_rational(chi_image_global(numbers))}
    if args.json:
        print(json.dumps(values))
    elif len(values) == 1:
        print(next(iter(values.values())))
    else:
        for name, value in values.items():
            print(f"{name}: {value}")
    return 0


def cmd_batch(args: argparse.Namespace) -> int:
    path = Path(args.jsonl)
    if not path.exists():
        raise ParseError(f"No such batch file: {path}", details={"path": str(path)})
    with path.open() as handle:
        for line in run_batch(handle.read().splitlines(), args.jobs):
            print(line)
    return 0


def cmd_schema(args: argparse.Namespace) -> int:
    print(json.dumps(ResultRecord.model_json_schema(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thomforge",
        description="Exact enumerative invariants of weighted-homogeneous map-germs.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", help="0-stable singularity counts")
    _add_germ_options(count)
    which = count.add_mutually_exclusive_group(required=True)
    which.add_argument("--type", help="singularity type, e.g. A3 or A1^3")
    which.add_argument("--all", action="store_true", help="every type of codimension m")
    count.add_argument("--json", action="store_true")
    count.set_defaults(handler=cmd_count)

    milnor = sub.add_parser("milnor", help="image and discriminant Milnor numbers")
    milnor.add_argument("--kind", required=True, choices=[k.value for k in MilnorKind])
    _add_germ_options(milnor)
    milnor.add_argument("--json", action="store_true")
    milnor.set_defaults(handler=cmd_milnor)

    tp = sub.add_parser("tp", help="inspect the Thom polynomial database")
    tp_sub = tp.add_subparsers(dest="tp_command", required=True)
    for name in ("show", "eval"):
        command = tp_sub.add_parser(name)
        command.add_argument("key")
        command.add_argument("--kappa", type=int, default=0)
        command.add_argument("--kind", default=EntryKind.tp_source.value, choices=[k.value for k in EntryKind])
        command.add_argument("--json", action="store_true")
        if name == "eval":
            _add_germ_options(command)
            command.add_argument("--order", type=int, help="truncation degree of the series")
    validate = tp_sub.add_parser("validate")
    validate.add_argument("--json", action="store_true")
    tp.set_defaults(handler=cmd_tp)

    solve = sub.add_parser("solve", help="run a restriction-method job file")
    solve.add_argument("--job", required=True)
    solve.add_argument("--json", action="store_true")
    solve.set_defaults(handler=cmd_solve)

    glob = sub.add_parser("global", help="global formulas for surfaces")
    glob_sub = glob.add_subparsers(dest="global_command", required=True)
    enriques = glob_sub.add_parser("enriques")
    enriques.add_argument("--d", type=int, required=True)
    enriques.add_argument("--delta", type=int, required=True)
    enriques.add_argument("--C", type=int, required=True)
    enriques.add_argument("--T", type=int, required=True)
    izumiya = glob_sub.add_parser("izumiya-marar")
    izumiya.add_argument("--chi", type=int, required=True)
    izumiya.add_argument("--C", type=int, required=True)
    izumiya.add_argument("--T", type=int, required=True)
    chi = glob_sub.add_parser("chi-image")
    chi.add_argument("--intersections", required=True, help="JSON file of intersection numbers")
    for command in (enriques, izumiya, chi):
        command.add_argument("--json", action="store_true")
    glob.set_defaults(handler=cmd_global)

    batch = sub.add_parser("batch", help="evaluate a JSONL file of jobs")
    batch.add_argument("--jsonl", required=True)
    batch.add_argument("--jobs", type=int, default=DEFAULT_VALUES["batch_jobs"])
    batch.set_defaults(handler=cmd_batch)

    schema = sub.add_parser("schema", help="JSON schema of result records")
    schema.set_defaults(handler=cmd_schema)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.ERROR if quiet else default_log_level()
    logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr, level=level, force=True)


def _report_error(error: ErrorResponse, as_json: bool) -> None:
    if as_json:
        print(error.model_dump_json())
    else:
        print(f"error: {error.message}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose, args.quiet)
    as_json = getattr(args, "json", False)
    try:
        return args.handler(args)
    except ThomForgeError as e:
        logger.debug("%s: %s", e.error_code, e.details)
        _report_error(e.to_response(), as_json)
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected error")
        _report_error(ErrorResponse(exit_code=1, error_code="INTERNAL_ERROR", message=str(e)), as_json)
        return 1


if __name__ == "__main__":
    sys.exit(main())
