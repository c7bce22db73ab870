import json
import math

import pytest

from ejaopt.cli import dumps_report, main

SQRT2_PROBLEM = {
    "algebra": {"kind": "sym", "n": 2},
    "fn": {"fn": "schatten", "p": 2},
    "a": {"matrix": [[2.0, 0.0], [0.0, 1.0]]},
    "feasible": {"orbit_of": {"matrix": [[3.0, 0.0], [0.0, 0.0]]}},
    "sense": "min",
}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


# ---------------------------------------------------------------------------
# verify


def test_verify_smoke(capsys):
    code, out = run(capsys, ["verify", "--trials", "2", "--no-timestamp"])
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert all(row["failures"] == 0 for row in report["suites"])


def test_verify_csv_format(capsys):
    code, out = run(capsys, ["verify", "--trials", "1", "--no-timestamp", "--format", "csv"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "case_id,algebra,fn,sense,value,cert_kind,cert_pass,residual"
    assert len(lines) > 10


def test_verify_determinism(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    argv = ["verify", "--trials", "10", "--no-timestamp", "--seed", "777"]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_unwritable_out_path_exit_2(capsys):
    code = main(["verify", "--trials", "1", "--no-timestamp", "--out", "/nonexistent-dir/x.json"])
    assert code == 2


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--tol", "-1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--trials", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# solve


def test_solve_sqrt2(tmp_path, capsys):
    path = write(tmp_path, "p.json", SQRT2_PROBLEM)
    code, out = run(capsys, ["solve", path, "--no-timestamp"])
    assert code == 0
    report = json.loads(out)
    assert report["solution"]["value"] == pytest.approx(math.sqrt(2.0), abs=1e-9)
    assert report["solution"]["certificate"]["passed"] is True
    assert report["fn"] == "schatten_2"


def test_solve_max_sense(tmp_path, capsys):
    doc = dict(SQRT2_PROBLEM, sense="max")
    path = write(tmp_path, "p.json", doc)
    code, out = run(capsys, ["solve", path, "--no-timestamp"])
    assert code == 0
    report = json.loads(out)
    assert report["solution"]["value"] == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-9)


def test_solve_spectral_set_zero(tmp_path, capsys):
    doc = dict(SQRT2_PROBLEM)
    doc["feasible"] = {"spectral_set": [[2.0, 1.0]]}
    path = write(tmp_path, "p.json", doc)
    code, out = run(capsys, ["solve", path, "--no-timestamp"])
    assert code == 0
    assert json.loads(out)["solution"]["value"] == pytest.approx(0.0, abs=1e-12)


def test_solve_with_local_search(tmp_path, capsys):
    path = write(tmp_path, "p.json", SQRT2_PROBLEM)
    code, out = run(capsys, ["solve", path, "--no-timestamp", "--local-search", "3"])
    assert code == 0
    report = json.loads(out)
    ls = report["local_search"]
    assert ls["starts"] == 3
    assert ls["max_gap_to_closed_form"] <= 1e-6
    assert ls["all_certified"] is True and ls["all_converged"] is True


def test_solve_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(capsys, ["solve", str(bad)])
    assert code == 2
    code, _ = run(capsys, ["solve", str(tmp_path / "missing.json")])
    assert code == 2
    path = write(tmp_path, "incomplete.json", {"algebra": {"kind": "sym", "n": 2}})
    code, _ = run(capsys, ["solve", path])
    assert code == 2


def test_solve_infeasible_exit_3(tmp_path, capsys):
    doc = dict(SQRT2_PROBLEM)
    doc["fn"] = {"fn": "cond_vector_norm"}
    path = write(tmp_path, "p.json", doc)
    code, _ = run(capsys, ["solve", path])
    assert code == 3


def test_solve_non_strict_fn_exit_3(tmp_path, capsys):
    doc = dict(SQRT2_PROBLEM)
    doc["fn"] = {"fn": "spread"}
    path = write(tmp_path, "p.json", doc)
    code, _ = run(capsys, ["solve", path])
    assert code == 3


# ---------------------------------------------------------------------------
# condition


def test_condition_command(tmp_path, capsys):
    doc = {
        "algebra": {"kind": "sym", "n": 2},
        "a": {"matrix": [[3.0, 0.0], [0.0, 1.0]]},
        "feasible": {"orbit_of": {"matrix": [[2.0, 0.0], [0.0, 1.0]]}},
    }
    path = write(tmp_path, "c.json", doc)
    code, out = run(capsys, ["condition", path, "--no-timestamp"])
    assert code == 0
    report = json.loads(out)
    assert report["solution"]["value"] == pytest.approx(4.0 / 3.0, abs=1e-12)
    vals = sorted(p["value"] for p in report["pairings"])
    assert vals == pytest.approx([4.0 / 3.0, 2.5], abs=1e-12)
    assert report["optimum_condition_report"]["bounds_ok"] is True

    code, out = run(capsys, ["condition", path, "--no-timestamp", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[0] == "case_id,algebra,fn,sense,value,cert_kind,cert_pass,residual"


def test_condition_infeasible_exit_3(tmp_path, capsys):
    doc = {
        "algebra": {"kind": "sym", "n": 2},
        "a": {"matrix": [[3.0, 0.0], [0.0, 1.0]]},
        "feasible": {"orbit_of": {"matrix": [[2.0, 0.0], [0.0, -5.0]]}},
    }
    path = write(tmp_path, "c.json", doc)
    code, _ = run(capsys, ["condition", path])
    assert code == 3


# ---------------------------------------------------------------------------
# counterexample


def test_counterexample_builtin(capsys):
    code, out = run(capsys, ["counterexample", "--no-timestamp"])
    assert code == 0
    report = json.loads(out)
    verdicts = report["verdicts"]
    assert all(verdicts.values())
    assert report["b_component_value"] == pytest.approx(math.sqrt(6.0), abs=1e-9)
    assert report["spectral_set_minimum"] == pytest.approx(0.0, abs=1e-12)
    assert len(report["components"]) == 3


def test_counterexample_modified_instance_flagged(tmp_path, capsys):
    # a inside the weak orbit of b: strong commutation appears
    doc = {
        "algebra": {"kind": "product", "factors": [{"kind": "sym", "n": 2}, {"kind": "sym", "n": 2}]},
        "a": {"coords": [4.0, 1.0, 0.0, 3.0, 2.0, 0.0]},
        "b": {"coords": [4.0, 1.0, 0.0, 3.0, 2.0, 0.0]},
        "fn": {"fn": "schatten", "p": 2},
    }
    path = write(tmp_path, "cx.json", doc)
    code, out = run(capsys, ["counterexample", "--input", path, "--no-timestamp"])
    assert code == 1
    report = json.loads(out)
    assert report["verdicts"]["is_counterexample"] is False


def test_counterexample_simple_algebra_warns(tmp_path, capsys):
    doc = {
        "algebra": {"kind": "sym", "n": 2},
        "a": {"matrix": [[2.0, 0.0], [0.0, 1.0]]},
        "b": {"matrix": [[3.0, 0.0], [0.0, 0.0]]},
    }
    path = write(tmp_path, "cx.json", doc)
    code, out = run(capsys, ["counterexample", "--input", path, "--no-timestamp"])
    assert code == 1
    report = json.loads(out)
    assert report["degenerate"] is True
    assert report["verdicts"]["degenerate_simple_algebra"] is True


# ---------------------------------------------------------------------------
# report emission


def test_dumps_report_canonical():
    doc = {"b": 1.5, "a": [1, 2.0, True, None, "x"], "c": {"z": math.sqrt(2.0)}}
    s = dumps_report(doc)
    assert s == '{"a":[1,2,true,null,"x"],"b":1.5,"c":{"z":1.4142135623730951}}'
    assert json.loads(s) == {"a": [1, 2.0, True, None, "x"], "b": 1.5, "c": {"z": math.sqrt(2.0)}}
    with pytest.raises(ValueError):
        dumps_report({"bad": float("nan")})
