import json

import pytest

from cdvcalc.cli import EXIT_FAIL, EXIT_OK, EXIT_PARSE, EXIT_UNDECIDED, EXIT_UNRECOGNIZED, main


def write_germ(tmp_path, equation, weights=None, variables=("x1", "x2", "x3", "x4")):
    data = {"variables": list(variables), "equation": equation}
    if weights is not None:
        data["weights"] = list(weights)
    path = tmp_path / "germ.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_classify_surface(capsys):
    assert main(["classify", "--equation", "x^2+y^3+z^5"]) == EXIT_OK
    assert "E8" in capsys.readouterr().out


def test_classify_threefold_json(tmp_path):
    out = tmp_path / "out.json"
    germ = write_germ(tmp_path, "x1^2+x2^3+x3^5+x4^7")
    assert main(["classify", germ, "--seed", "1", "--json", str(out)]) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["results"]["type"] == "cE8"
    assert data["seed"] == 1


def test_classify_json_is_deterministic(tmp_path):
    germ = write_germ(tmp_path, "x1^2+x2^2*x3+x3^4+x4^5")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["classify", germ, "--json", str(a)])
    main(["classify", germ, "--json", str(b)])
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    ja.pop("argv"), jb.pop("argv")
    assert ja == jb


def test_classify_undecided_exit_code():
    assert main(["classify", "--equation", "x^2+y^2", "--variables", "x,y,z", "--jet-bound", "6"]) == EXIT_UNDECIDED


def test_parse_error_exit_code(capsys):
    assert main(["classify", "--equation", "x^2+"]) == EXIT_PARSE
    assert "error" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path):
    assert main(["blowup", str(tmp_path / "missing.json")]) == EXIT_PARSE


def test_unknown_subcommand():
    assert main(["frobnicate"]) == EXIT_PARSE


def test_blowup_report(tmp_path, capsys):
    germ = write_germ(tmp_path, "x1^2+x2^2*x3+x3^3+x4^3", (3, 1, 4, 2))
    out = tmp_path / "out.json"
    assert main(["blowup", germ, "--json", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "E^3 = 1/4" in text and "IIb∨" in text
    data = json.loads(out.read_text())["results"]
    assert data["basket"] == [[2, 1], [4, 1]]
    assert data["contraction"]["type"] == "IIb∨"


def test_blowup_without_unit_weight_prints_note(tmp_path, capsys):
    germ = write_germ(tmp_path, "x1^2+x2^3+x2*x3^3+x4^7", (7, 5, 3, 2))
    assert main(["blowup", germ]) == EXIT_OK
    assert "no weight equals 1" in capsys.readouterr().out


def test_blowup_condition_failure_exit_code(tmp_path):
    # leading form x1^2 is a monomial and not reduced
    germ = write_germ(tmp_path, "x1^2+x2^3+x3^3+x4^3", (1, 1, 1, 1))
    assert main(["blowup", germ]) == EXIT_FAIL


def test_blowup_unrecognised_exit_code(tmp_path):
    germ = write_germ(tmp_path, "x1*x4+x2^3+x3^3+x4^2", (2, 1, 1, 1))
    assert main(["blowup", germ]) == EXIT_UNRECOGNIZED


def test_rr(capsys):
    assert main(["rr", "--a", "2", "--basket", "3,1;5,2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "E^3 = 1/15" in out and "type I" in out


def test_rr_bad_basket():
    assert main(["rr", "--a", "2", "--basket", "4,2"]) == EXIT_PARSE


def test_elephants(capsys):
    assert main(["elephants", "--type", "I", "--basket", "7,3"]) == EXIT_OK
    assert "conclusion: cE7" in capsys.readouterr().out


def test_elephants_ascii_type_alias(capsys):
    assert main(["elephants", "--type", "IIbv", "--basket", "2,1;4,1", "--a", "3"]) == EXIT_OK
    assert "E6 / D5" in capsys.readouterr().out


def test_can_weights(capsys):
    assert main(["can-weights", "--g", "x3^4+x4^4", "--bound", "5"]) == EXIT_OK
    assert "(1, 3, 1)" in capsys.readouterr().out
    assert main(["can-weights", "--g", "x3^4+x4^4", "--check", "1,3,2"]) == EXIT_OK


def test_verify_only_subset(capsys):
    assert main(["verify-paper", "--only", "rr,can"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS [6]" in out and "PASS [11]" in out


def test_verify_unknown_module():
    assert main(["verify-paper", "--only", "nope"]) == EXIT_PARSE


@pytest.mark.parametrize("argv", [["--version"], ["classify", "--help"]])
def test_informational_flags(argv):
    assert main(argv) == EXIT_OK
