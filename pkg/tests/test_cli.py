import csv
import io as _io
import json

import pytest

from eo_theta import cli, io
from eo_theta import dieudonne as dd
from eo_theta.field import GF


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_strata_csv(capsys):
    code, out, _ = run(capsys, "strata", "--n", "3")
    rows = list(csv.DictReader(_io.StringIO(out)))
    assert code == 0
    assert [int(r["length"]) for r in rows] == [2, 1, 0]
    assert rows[0]["w_r"] == "3 1 2" and rows[0]["closure"] == "312 > 132 > 123"
    assert rows[2]["delta"] == ""


def test_strata_delta_example(capsys):
    _, out, _ = run(capsys, "strata", "--n", "5", "--p", "7")
    first = next(csv.DictReader(_io.StringIO(out)))
    assert first["delta"] == "(8,7,7,7)" and first["lambda_shift"] == "(1,0,0,7)"


def test_strata_json_and_pretty(capsys):
    code, out, _ = run(capsys, "strata", "--n", "3-4", "--p", "2,3", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and len(rep["result"]["rows"]) == 2 * (3 + 4)
    assert rep["seed"] == 0 and rep["version"] and "timing" in rep
    code, out, _ = run(capsys, "strata", "--n", "3", "--format", "pretty")
    assert code == 0 and "w_r" in out


def test_strata_budget(capsys, monkeypatch):
    code, _, err = run(capsys, "strata", "--n", "9")
    assert code == 2 and "budget" in err
    monkeypatch.setenv("EO_THETA_BUDGET", "comb=9")
    assert run(capsys, "strata", "--n", "9")[0] == 0


def test_classify_fixture(capsys):
    code, out, _ = run(capsys, "classify", io.fixture_path("standard_3_2.json"))
    rep = json.loads(out)["result"]
    assert code == 0
    assert rep["class"] == {"r": 2, "w_r": [1, 3, 2], "length": 1, "p_ranks": {"total": 1, "sigmabar": 1}}
    assert rep["filtration"]["dims"] == [0, 1, 3, 5, 6]


def test_classify_conjugate_round_trip(capsys, tmp_path, rng):
    for r in (1, 2, 3):
        D, _ = dd.random_conjugate(dd.standard_module(3, r, GF(5)), rng)
        path = tmp_path / f"m{r}.json"
        path.write_text(io.dumps(dd.module_to_json(D)))
        code, out, _ = run(capsys, "classify", path)
        assert code == 0 and json.loads(out)["result"]["class"]["r"] == r


def test_classify_schema_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"p": 2, "n": 3}))
    code, out, err = run(capsys, "classify", path)
    assert code == 2 and out == "" and "schema" in err


def test_classify_verification_failure(capsys, tmp_path):
    obj = io.load_fixture("standard_3_2.json")
    obj["F"]["rows"][0][0] = [1]
    path = tmp_path / "notbt1.json"
    path.write_text(json.dumps(obj))
    code, out, err = run(capsys, "classify", path)
    assert code == 3 and "ker F = im V" in err
    assert json.loads(out)["result"]["bt1"]["ok"] is False


def test_filt_dims_default_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "filt-dims", "--n", "3,4")
    assert code == 0 and json.loads(out)["result"]["all_match"]
    spec = {"p": 3, "specs": [{"kind": "tensor", "A": [2, 1], "B": [3, 1, 0]},
                              {"kind": "koszul", "dim": 4, "sub": 2, "j": 2},
                              {"kind": "sym", "A": [3, 1], "j": 3},
                              {"kind": "dual", "A": [4, 2, 1]}]}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "filt-dims", path)
    rows = json.loads(out)["result"]["rows"]
    assert code == 0 and rows[1]["graded_dims"] == [1, 4, 1]
    assert rows[0]["total"] == 6 and rows[2]["total"] == 10


def test_filt_dims_bad_spec(capsys, tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"specs": [{"kind": "koszul", "dim": 2, "sub": 3, "j": 1}]}))
    assert run(capsys, "filt-dims", path)[0] == 2
    path.write_text(json.dumps({"specs": [{"kind": "cube"}]}))
    assert run(capsys, "filt-dims", path)[0] == 2


def test_theta_check(capsys):
    code, out, _ = run(capsys, "theta-check", "--n", "3", "--p", "3", "--negative-control")
    rep = json.loads(out)["result"]
    assert code == 0 and rep["passed"]
    assert [c["r"] for c in rep["cells"]] == [1, 2]
    assert rep["cells"][0]["negative_control"] == {"frobenius_kill": False, "expected_fail": True}
    code, out, _ = run(capsys, "theta-check", "--n", "4", "--r", "2", "--p", "2", "--trunc", "2")
    assert code == 0 and len(json.loads(out)["result"]["cells"]) == 1


def test_theta_check_config_errors(capsys):
    assert run(capsys, "theta-check", "--n", "3", "--p", "4")[0] == 2
    assert run(capsys, "theta-check", "--n", "6")[0] == 2
    assert run(capsys, "theta-check", "--n", "3", "--r", "3")[0] == 2


def test_theta_apply(capsys):
    code, out, _ = run(capsys, "theta-apply", io.fixture_path("section_3_2.json"))
    rep = json.loads(out)["result"]
    assert code == 0
    assert rep["image"] == {"k": [5, 1], "w": -1, "terms": [
        {"x": [[1], [1, 2], [2], [2], [2]],
         "coeff": [{"exp": [0], "c": [1]}, {"exp": [1], "c": [2]}, {"exp": [2], "c": [1]}]}]}


def test_theta_apply_bad_section(capsys, tmp_path):
    obj = io.load_fixture("section_3_2.json")
    obj["section"]["k"] = [0, 1]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj))
    assert run(capsys, "theta-apply", path)[0] == 2


def test_out_flag_and_reproducibility(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "verify-all", "--only", "strata_tables,adjugate_identity",
                   "--seed", "4", "--out", path)[0] == 0
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    assert io.dumps(io.strip_timing(ra)) == io.dumps(io.strip_timing(rb))
    assert ra["seed"] == 4 and ra["grid"]["only"] == ["strata_tables", "adjugate_identity"]


def test_verify_all_unknown_suite(capsys):
    assert run(capsys, "verify-all", "--only", "nope")[0] == 2


def test_csv_only_for_strata(capsys):
    assert run(capsys, "theta-check", "--format", "csv")[0] == 2


def test_verify_all_failure_exit(capsys, monkeypatch):
    from eo_theta import suites

    def broken(**_):
        res = suites.SuiteResult("strata_tables")
        res.check(False, "injected")
        return res

    monkeypatch.setitem(suites.SUITES, "strata_tables", broken)
    code, out, err = run(capsys, "verify-all", "--only", "strata_tables")
    assert code == 3 and "strata_tables" in err and "injected" in err
    assert json.loads(out)["result"]["passed"] is False
