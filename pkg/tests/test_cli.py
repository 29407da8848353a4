import json

import pytest

from components.jobs import JOBS_DIR
from main import main
from utils.algebra import VarSpace
from utils.invariants import enriques_intersections
from utils.parser import format_poly, parse_poly

FOLD = ["--weights", "1,1,1", "--degrees", "2,2,1"]


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count_single_type(capsys):
    """A single count prints the bare value"""
    code, out, _ = _run(capsys, "count", *FOLD, "--type", "A3")
    assert code == 0
    assert out.strip() == "2"


def test_count_all_and_json(capsys):
    code, out, _ = _run(capsys, "count", *FOLD, "--all")
    assert code == 0
    assert "A3: 2" in out.splitlines()
    assert "A1^3: 0" in out.splitlines()

    code, out, _ = _run(capsys, "count", *FOLD, "--type", "A3", "--json")
    record = json.loads(out)
    assert record["value"] == "2"
    assert record["integral"] is True
    assert record["germ"] == {"weights": [1, 1, 1], "degrees": [2, 2, 1]}


def test_count_from_a_map(capsys):
    """Weights are inferred from a monomial map"""
    code, out, _ = _run(capsys, "count", "--map", "x^2+y^2+x*z, x*y, z", "--type", "A3")
    assert code == 0
    assert out.strip() == "2"


def test_milnor(capsys):
    code, out, _ = _run(capsys, "milnor", "--kind", "discriminant", *FOLD)
    assert code == 0
    assert out.strip() == "1"
    code, out, _ = _run(capsys, "milnor", "--kind", "image", "--weights", "1,1", "--degrees", "1,2,3", "--json")
    assert json.loads(out)["invariant"] == "mu_image"
    assert json.loads(out)["value"] == "1"


def test_tp_show_and_eval(capsys):
    """Stored polynomials print canonically and specialize to a germ"""
    code, out, _ = _run(capsys, "tp", "show", "A1A1")
    assert code == 0
    assert out.strip() == format_poly(parse_poly("c1 s[1] - 4 c1^2 - 2 c2", VarSpace.classes(0)))

    code, out, _ = _run(capsys, "tp", "show", "A2", "--json")
    entry = json.loads(out)
    assert (entry["name"], entry["codim"], entry["kind"]) == ("A2", 2, "tp_source")

    code, out, _ = _run(capsys, "tp", "eval", "A1", *FOLD, "--order", "1")
    assert code == 0
    assert parse_poly(out.strip(), VarSpace.torus()) == parse_poly("2 a", VarSpace.torus())


def test_tp_validate(capsys):
    code, out, _ = _run(capsys, "tp", "validate")
    assert code == 0
    passed, total = out.splitlines()[-1].split()[0].split("/")
    assert passed == total


def test_solve(capsys):
    """A unique job prints its polynomial, an underdetermined one exits 5"""
    code, out, _ = _run(capsys, "solve", "--job", str(JOBS_DIR / "tpsm_A2_degree2.json"))
    assert code == 0
    assert out.strip() == "c1^2 + c2"

    code, out, err = _run(capsys, "solve", "--job", str(JOBS_DIR / "tp_A2_underdetermined.json"))
    assert code == 5
    assert json.loads(out)["status"] == "underdetermined"
    assert "underdetermined" in err


def test_global_enriques(capsys):
    code, out, _ = _run(capsys, "global", "enriques", "--d", "4", "--delta", "0", "--C", "0", "--T", "0")
    assert code == 0
    assert out.splitlines() == ["c1_squared: 0", "c2: 24", "chi: 24"]


def test_global_izumiya_marar(capsys):
    code, out, _ = _run(capsys, "global", "izumiya-marar", "--chi", "2", "--C", "2", "--T", "1")
    assert code == 0
    assert out.strip() == "4"
    code, _, err = _run(capsys, "global", "izumiya-marar", "--chi", "2", "--C", "1", "--T", "0")
    assert code == 3
    assert "error:" in err


def test_global_chi_image(capsys, tmp_path):
    """Intersection numbers are read from JSON with exact rationals"""
    numbers = enriques_intersections(5, 3, 2, 1)
    path = tmp_path / "numbers.json"
    path.write_text(json.dumps({k: str(v) for k, v in numbers.model_dump().items()}))
    code, out, _ = _run(capsys, "global", "chi-image", "--intersections", str(path), "--json")
    assert code == 0
    assert json.loads(out) == {"chi_image": "35"}

    path.write_text(json.dumps({"c1tm_c1": 1.5}))
    code, _, _ = _run(capsys, "global", "chi-image", "--intersections", str(path))
    assert code == 2


def test_batch(capsys, tmp_path):
    """Results keep input order and a bad line becomes an error record"""
    path = tmp_path / "jobs.jsonl"
    path.write_text("\n".join([
        json.dumps({"weights": [1, 1, 1], "degrees": [2, 2, 1], "invariants": ["A3"]}),
        "",
        json.dumps({"weights": [1, 1, 1]}),
        json.dumps({"map": "x^2+y^2+x*z, x*y, z", "invariants": ["A3", "mu_discriminant"]}),
    ]))
    code, out, _ = _run(capsys, "batch", "--jsonl", str(path), "--jobs", "2")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert len(records) == 4
    assert (records[0]["invariant"], records[0]["value"]) == ("A3", "2")
    assert records[1]["line"] == 3
    assert records[1]["error"]["error_code"] == "PARSE_ERROR"
    assert [r["invariant"] for r in records[2:]] == ["A3", "mu_discriminant"]
    assert records[3]["value"] == "1"


def test_empty_and_missing_batch(capsys, tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code, out, _ = _run(capsys, "batch", "--jsonl", str(empty))
    assert code == 0
    assert out == ""
    code, _, _ = _run(capsys, "batch", "--jsonl", str(tmp_path / "absent.jsonl"))
    assert code == 2


def test_schema(capsys):
    code, out, _ = _run(capsys, "schema")
    assert code == 0
    assert {"germ", "invariant", "value", "integral"} <= set(json.loads(out)["properties"])


@pytest.mark.parametrize(
    "argv, exit_code",
    [
        (["tp", "show", "E6"], 4),
        (["count", "--weights", "1,a", "--degrees", "2,2,1", "--type", "A3"], 2),
        (["count", "--weights", "1,1", "--type", "A1"], 2),
        (["count", *FOLD, "--type", "A2"], 3),
        (["count", *FOLD, "--type", "E6"], 4),
        (["solve", "--job", "no_such_job.json"], 2),
    ],
)
def test_exit_codes(capsys, argv, exit_code):
    """Parse errors, precondition failures and unknown keys map to fixed codes"""
    code, _, _ = _run(capsys, *argv)
    assert code == exit_code


def test_json_errors_go_to_stdout(capsys):
    code, out, _ = _run(capsys, "count", *FOLD, "--type", "E6", "--json")
    assert code == 4
    assert json.loads(out)["error_code"] == "UNKNOWN_KEY"
