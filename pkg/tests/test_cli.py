import json
import subprocess
import sys

import pytest

from fracconvex.cli import EXIT_FAILS, EXIT_HOLDS, EXIT_INDETERMINATE, EXIT_USAGE, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = run(["claims", "list"], capsys)
    assert code == EXIT_HOLDS
    assert len(out.splitlines()) == 17
    assert out.startswith("DEF1\t")


def test_verify_thm5(capsys):
    code, out, _ = run(["claims", "verify", "--id", "THM5-ELEM", "--p", "1"], capsys)
    assert code == EXIT_HOLDS
    doc = json.loads(out)
    assert [s["re"] for s in doc["sides"]] == [0.5, 2 / 3]
    assert '"re": 0.66666666666666663' in out


def test_verify_fails_exit_one(capsys):
    code, out, _ = run(["claims", "verify", "--id", "JENSEN-TYPE", "--f", "x^2", "--a", "1", "--b", "2", "--p", "1"],
                       capsys)
    assert code == EXIT_FAILS
    assert json.loads(out)["verdict"]["kind"] == "fails"


def test_verify_indeterminate_exit_two(capsys):
    code, out, _ = run(["claims", "verify", "--id", "DEF2", "--f", "x", "--k", "2", "--x", "2", "--y", "1", "--p", "1"],
                       capsys)
    assert code == EXIT_INDETERMINATE


@pytest.mark.parametrize("argv", [
    ["claims", "verify", "--id", "HH-THM1", "--f", "x^2", "--a", "1", "--b", "0.5", "--p", "1"],
    ["claims", "verify", "--id", "HH-THM1", "--f", "x^2", "--a", "2", "--b", "1", "--p", "1"],
    ["claims", "verify", "--id", "NOPE"],
    ["claims", "verify", "--id", "HH-THM1", "--f", "x^^2"],
    ["claims", "verify", "--id", "HH-THM1"],
    ["claims", "verify", "--id", "THM5-ELEM", "--p", "0.5", "--alpha", "0.2"],
    ["claims", "verify", "--id", "THM5-ELEM", "--t", "0.5"],
    ["claims", "verify", "--id", "LEM1-ID", "--f", "x^2", "--interp", "u=z"],
    ["claims", "search", "--id", "THM5-ELEM", "--box", "p=-2:1"],
    ["claims", "search", "--id", "THM5-ELEM", "--box", "p=0:1", "--budget", "0"],
    ["caputo", "--side", "left", "--f", "x", "--x", "2", "--alpha", "0.5"],
    ["caputo", "--side", "left", "--f", "x", "--a", "2", "--x", "1", "--alpha", "0.5"],
    ["caputo", "--side", "sideways", "--f", "x", "--x", "2", "--alpha", "0.5"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_three(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == EXIT_USAGE
    assert err.strip()


def test_parse_error_reports_offset(capsys):
    code, _, err = run(["claims", "verify", "--id", "HH-THM1", "--f", "x +"], capsys)
    assert code == EXIT_USAGE and "offset 3" in err
    assert len(err.strip().splitlines()) == 1


def test_alpha_and_n_set_p(capsys):
    code, out, _ = run(["claims", "verify", "--id", "INT-H", "--f", "x^2", "--a", "1", "--b", "2",
                        "--alpha", "0.5", "--n", "1"], capsys)
    assert code == EXIT_HOLDS
    assert json.loads(out)["params"] == {"x": 2.0, "y": 1.0, "p": 0.5}


def test_caputo_left(capsys):
    code, out, _ = run(["caputo", "--side", "left", "--f", "x", "--a", "1", "--x", "2", "--alpha", "0.5"], capsys)
    assert code == EXIT_HOLDS
    assert out.strip() == "1.1283791670955126"


def test_caputo_right(capsys):
    code, out, _ = run(["caputo", "--side", "right", "--f", "x", "--x", "0", "--b", "1", "--alpha", "0"], capsys)
    assert code == EXIT_HOLDS and float(out) == pytest.approx(-1.0)


def test_caputo_evaluation_problem_is_indeterminate(capsys):
    code, _, _ = run(["caputo", "--side", "left", "--f", "ln(x)", "--a", "-1", "--x", "2", "--alpha", "0.5"], capsys)
    assert code == EXIT_INDETERMINATE


def test_search_found_and_not_found(capsys):
    code, out, _ = run(["claims", "search", "--id", "DEF1", "--box", "t=0:1,x=1:2,y=1:2", "--f", "x",
                        "--budget", "2000", "--seed", "4", "--format", "csv"], capsys)
    assert code == EXIT_FAILS
    assert out.splitlines()[1].startswith("DEF1,fails,")
    code, out, _ = run(["claims", "search", "--id", "THM5-ELEM", "--box", "p=-0.99:1", "--budget", "500"], capsys)
    assert code == EXIT_HOLDS and "no counterexample" in out


def test_csv_single_row(capsys, tmp_path):
    path = tmp_path / "r.csv"
    code, out, _ = run(["claims", "verify", "--id", "THM5-ELEM", "--p", "1", "--format", "csv", "--out", str(path)],
                       capsys)
    assert code == EXIT_HOLDS
    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n")
    rows = text.splitlines()
    assert len(rows) == 2 and rows[1].split(",")[1] == "holds"


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run(["claims", "verify", "--id", "THM5-ELEM", "--out", str(tmp_path / "no" / "x.json")], capsys)
    assert code == EXIT_USAGE and "cannot write" in err


def test_report_echoes_configuration(capsys):
    code, out, _ = run(["report", "--f", "exp(x)", "--seed", "9", "--tol-abs", "1e-11"], capsys)
    docs = json.loads(out)
    assert len(docs) == 17 and code == EXIT_FAILS
    for d in docs:
        assert d["seed"] == 9 and d["tool_version"] == "0.1.0"
        assert d["config"]["abs_tol"] == 1e-11
        if d["claim_id"] != "THM5-ELEM":
            assert d["config"]["f"] == "exp(x)"


def test_same_seed_same_bytes(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        subprocess.run([sys.executable, "-m", "fracconvex", "report", "--seed", "3", "--out", str(p)],
                       check=False, capture_output=True)
    assert paths[0].read_bytes() == paths[1].read_bytes()
