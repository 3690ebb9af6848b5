import csv
import json
import math

import pytest

from monoword.cli import crosscheck_report, main


def run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = main([*argv, "--out", str(out)])
    return code, out.read_text(encoding="utf-8")


class TestDist:
    def test_enumeration_example(self, tmp_path):
        code, text = run(
            tmp_path, "dist", "--which", "I", "--k", "2", "--N", "2",
            "--route", "enum",
        )
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        byn = {row["n"]: row for row in rows}
        assert byn["1"]["value"] == "1/4"
        assert byn["1"]["exact_flag"] == "true"
        assert byn["2"]["value"] == "1/1"

    def test_series_zero_value(self, tmp_path):
        code, text = run(
            tmp_path, "dist", "--which", "I", "--k", "1", "--n-max", "1",
            "--N", "5", "--route", "series",
        )
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        assert rows[0]["value"] == "0/1"

    def test_length_zero_words(self, tmp_path):
        code, text = run(
            tmp_path, "dist", "--which", "I", "--k", "3", "--N", "0",
            "--route", "tableaux",
        )
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        assert all(row["value"] == "1/1" for row in rows)

    def test_budget_refusal_exits_nonzero(self, tmp_path, capsys):
        out = tmp_path / "x.csv"
        code = main(
            ["dist", "--which", "I", "--k", "6", "--N", "12", "--route", "enum",
             "--enum-budget", "1000", "--out", str(out)]
        )
        assert code == 1
        assert "budget" in capsys.readouterr().err

    def test_csv_json_roundtrip(self, tmp_path):
        _, text_csv = run(
            tmp_path, "dist", "--which", "D", "--k", "2", "--N", "4",
            "--route", "series", "--format", "csv",
        )
        _, text_json = run(
            tmp_path, "dist", "--which", "D", "--k", "2", "--N", "4",
            "--route", "series", "--format", "json",
        )
        csv_rows = list(csv.DictReader(text_csv.splitlines()))
        json_rows = json.loads(text_json)
        assert len(csv_rows) == len(json_rows)
        for c, j in zip(csv_rows, json_rows):
            assert c["value"] == j["value"]
            assert c["n"] == str(j["n"])


class TestCrosscheck:
    def test_report_passes_and_is_deterministic(self, tmp_path):
        code1, text1 = run(tmp_path, "crosscheck", "--seed", "3", "--points", "12")
        code2, text2 = run(tmp_path, "crosscheck", "--seed", "3", "--points", "12")
        assert code1 == code2 == 0
        assert text1 == text2
        report = json.loads(text1)
        assert report["passed"]
        names = {c["name"] for c in report["checks"]}
        assert "generating_function_exact" in names
        assert "identity:linear_ut" in names
        assert "derivative:dlog_det" in names

    def test_different_seed_changes_bytes(self, tmp_path):
        _, text1 = run(tmp_path, "crosscheck", "--seed", "3", "--points", "12")
        _, text2 = run(tmp_path, "crosscheck", "--seed", "4", "--points", "12")
        assert text1 != text2

    def test_fault_injection_fails_named_checks(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main(
            ["crosscheck", "--seed", "3", "--points", "6",
             "--perturb-det", "1e-3", "--out", str(out)]
        )
        assert code == 1
        report = json.loads(out.read_text())
        failed = {c["name"] for c in report["checks"] if not c["passed"]}
        assert failed == {"painleve_route", "fredholm_route"}
        assert "painleve_route" in capsys.readouterr().err

    def test_tolerance_override_reflected(self, tmp_path):
        _, text = run(
            tmp_path, "crosscheck", "--seed", "1", "--points", "6",
            "--tol-identity", "1e-3",
        )
        report = json.loads(text)
        assert report["tolerances"]["identity"] == 1e-3

    def test_report_function_threads_do_not_change_result(self, monkeypatch):
        base = crosscheck_report(seed=2, points=8)
        monkeypatch.setenv("MONOWORD_THREADS", "4")
        threaded = crosscheck_report(seed=2, points=8)
        assert base == threaded


class TestNumericCommands:
    def test_painleve_compare(self, tmp_path):
        code, text = run(
            tmp_path, "painleve", "--n", "2", "--k", "2", "--t", "0.5,1",
            "--compare",
        )
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        sigma = {r["N_or_t_or_s"]: float(r["value"])
                 for r in rows if r["route"] == "painleve-sigma"}
        direct = {r["N_or_t_or_s"]: float(r["value"])
                  for r in rows if r["route"] == "toeplitz"}
        for key in sigma:
            assert abs(sigma[key] - direct[key]) < 1e-8

    def test_laguerre_both_routes(self, tmp_path):
        code, text = run(
            tmp_path, "laguerre", "--k", "2", "--n", "1", "--t", "0.5,1",
            "--route", "both",
        )
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        assert {r["route"] for r in rows} == {
            "laguerre-fredholm", "laguerre-quadrature"
        }

    def test_limits_f0_known_value(self, tmp_path):
        code, text = run(tmp_path, "limits", "f0", "--k", "2", "--s", "0,1")
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        assert float(rows[0]["value"]) == 0.0
        from monoword.limits import f0_closed_form_k2

        assert abs(float(rows[1]["value"]) - f0_closed_form_k2(1.0)) < 1e-8

    def test_limits_f0_montecarlo_err_bar(self, tmp_path):
        code, text = run(
            tmp_path, "limits", "f0", "--k", "3", "--s", "1.0",
            "--method", "montecarlo", "--samples", "20000", "--seed", "2",
        )
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        assert float(rows[0]["err_bar"]) > 0

    def test_limits_f2_tail(self, tmp_path):
        code, text = run(tmp_path, "limits", "f2", "--s", "6")
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        assert float(rows[0]["value"]) > 1 - 1e-6

    def test_limits_thm4_decreasing(self, tmp_path):
        code, text = run(
            tmp_path, "limits", "thm4", "--k", "2", "--N", "50,100,200",
        )
        assert code == 0
        rows = list(csv.DictReader(text.splitlines()))
        errs = [float(r["value"]) for r in rows]
        assert errs[0] > errs[1] > errs[2]

    def test_float_formatting_roundtrips(self, tmp_path):
        _, text_csv = run(tmp_path, "limits", "f0", "--k", "2", "--s", "0.7",
                          "--format", "csv")
        _, text_json = run(tmp_path, "limits", "f0", "--k", "2", "--s", "0.7",
                           "--format", "json")
        csv_val = list(csv.DictReader(text_csv.splitlines()))[0]["value"]
        json_val = json.loads(text_json)[0]["value"]
        assert float(csv_val) == json_val


class TestUsage:
    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_missing_required_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["dist", "--which", "I"])
        assert err.value.code == 2
