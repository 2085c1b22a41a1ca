"""End-to-end command-line behavior: formats, determinism, exit codes."""

import csv
import json
import xml.etree.ElementTree as ET

import pytest

import rtfilter as rt
from rtfilter.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main

from conftest import BUNDLED_CSV


def run_cli(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestEstimate:
    def test_default_columns_and_exit(self, tmp_path):
        out = tmp_path / "est.csv"
        assert run_cli("estimate", BUNDLED_CSV, "--output", out) == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["date", "valid", "observed_rt",
                          "dlm_q10", "dlm_q25", "dlm_q50", "dlm_q75", "dlm_q90"]
        assert len(rows) == 120

    def test_both_adds_baseline_columns(self, tmp_path):
        out = tmp_path / "est.csv"
        assert run_cli("estimate", BUNDLED_CSV, "--estimator", "both", "--output", out) == EXIT_OK
        header, rows = read_csv(out)
        assert header[-6:] == ["cori_q10", "cori_q25", "cori_q50", "cori_q75", "cori_q90", "cori_cv"]

    def test_round_trip_recovers_library_values(self, tmp_path):
        out = tmp_path / "est.csv"
        run_cli("estimate", BUNDLED_CSV, "--output", out)
        header, rows = read_csv(out)
        series = rt.parse_csv(BUNDLED_CSV)
        gi = rt.discretize(rt.DEFAULT_ERLANG, 30)
        obs = rt.compute_observations(series, gi)
        post = rt.run_filter(obs)
        by_date = {r.date.isoformat(): r for r in post.records}
        col = header.index("dlm_q50")
        checked = 0
        for row in rows:
            if row[col]:
                assert float(row[col]) == by_date[row[0]].quantiles[0.5]
                checked += 1
        assert checked == len(by_date)

    def test_json_format(self, tmp_path):
        out = tmp_path / "est.json"
        assert run_cli("estimate", BUNDLED_CSV, "--format", "json", "--output", out) == EXIT_OK
        payload = json.loads(out.read_text())
        assert len(payload) == 120
        assert payload[0]["valid"] is False
        assert payload[0]["dlm_q50"] is None
        last = payload[-1]
        assert last["valid"] is True
        assert isinstance(last["dlm_q50"], float)

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli("estimate", BUNDLED_CSV, "--estimator", "both", "--output", a)
        run_cli("estimate", BUNDLED_CSV, "--estimator", "both", "--output", b)
        assert a.read_bytes() == b.read_bytes()

    def test_quantiles_flag(self, tmp_path):
        out = tmp_path / "est.csv"
        assert run_cli("estimate", BUNDLED_CSV, "--quantiles", "0.05,0.5,0.95",
                       "--output", out) == EXIT_OK
        header, _ = read_csv(out)
        assert header[3:] == ["dlm_q5", "dlm_q50", "dlm_q95"]

    def test_quantiles_env_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("RT_FILTER_QUANTILES", "0.2,0.8")
        out = tmp_path / "est.csv"
        assert run_cli("estimate", BUNDLED_CSV, "--output", out) == EXIT_OK
        header, _ = read_csv(out)
        assert header[3:] == ["dlm_q20", "dlm_q80"]

    def test_bad_quantiles_is_usage_error(self):
        assert run_cli("estimate", BUNDLED_CSV, "--quantiles", "0.9,0.1") == EXIT_USAGE
        assert run_cli("estimate", BUNDLED_CSV, "--quantiles", "0,0.5") == EXIT_USAGE

    def test_scale_check_reports_exact_invariance(self, tmp_path, capsys):
        # both estimators report even without --estimator both: the check
        # exists to show their contrast
        assert run_cli("estimate", BUNDLED_CSV, "--scale-check", "10") == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        table = dict(line.split(",", 1) for line in lines[1:])
        assert table["k"] == "10"
        for p in (10, 25, 50, 75, 90):
            assert float(table[f"dlm_q{p}_max_abs_delta"]) == 0.0
        assert float(table["cori_cv_ratio_max_rel_error"]) < 1e-12
        assert float(table["cori_cv_ratio_max"]) < 0.5  # CV shrank by ~1/sqrt(10)


class TestWgen:
    def test_default_weights(self, tmp_path, capsys):
        out = tmp_path / "w.csv"
        assert run_cli("wgen", "--output", out) == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["s", "w_s"]
        assert len(rows) == 30
        assert sum(float(r[1]) for r in rows) == pytest.approx(1.0, abs=1e-12)
        err = capsys.readouterr().err
        assert "mean=" in err and "truncated_mass=" in err

    def test_alternative_profile(self, tmp_path):
        out = tmp_path / "w.csv"
        assert run_cli("wgen", "--gi-shape", "5", "--gi-scale", str(9 / 5),
                       "--output", out) == EXIT_OK
        _, rows = read_csv(out)
        assert sum(float(r[1]) for r in rows) == pytest.approx(1.0, abs=1e-12)

    def test_truncation_is_data_error(self):
        assert run_cli("wgen", "--gi-smax", "10") == EXIT_DATA


class TestForecast:
    def test_deterministic_files(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli("forecast", BUNDLED_CSV, "--forecast", "7", "--seed", "42",
                       "--output", a) == EXIT_OK
        assert run_cli("forecast", BUNDLED_CSV, "--forecast", "7", "--seed", "42",
                       "--output", b) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_spread_nondecreasing_and_dates(self, tmp_path):
        out = tmp_path / "fc.csv"
        run_cli("forecast", BUNDLED_CSV, "--forecast", "7", "--seed", "1",
                "--draws", "50000", "--output", out)
        header, rows = read_csv(out)
        assert header == ["date", "q10", "q25", "q50", "q75", "q90"]
        assert len(rows) == 7
        assert rows[0][0] == "2020-08-29"  # day after the last input date
        widths = [float(r[5]) - float(r[1]) for r in rows]
        assert all(b >= a for a, b in zip(widths, widths[1:]))

    def test_zero_horizon_is_usage_error(self):
        assert run_cli("forecast", BUNDLED_CSV, "--forecast", "0") == EXIT_USAGE


class TestPlot:
    def test_well_formed_svg(self, tmp_path):
        out = tmp_path / "chart.svg"
        assert run_cli("plot", BUNDLED_CSV, "--estimator", "both", "--output", out) == EXIT_OK
        root = ET.parse(out).getroot()
        assert root.tag.endswith("svg")

    def test_estimate_plot_flag(self, tmp_path):
        table = tmp_path / "est.csv"
        chart = tmp_path / "chart.svg"
        assert run_cli("estimate", BUNDLED_CSV, "--output", table, "--plot", chart) == EXIT_OK
        assert chart.exists() and table.exists()
        ET.parse(chart)

    def test_requires_output(self):
        assert run_cli("plot", BUNDLED_CSV) == EXIT_USAGE

    def test_constant_series_median_sits_on_reference(self, tmp_path):
        # constant counts: once the window fills, median R = 1; its polyline
        # ordinates must match the R = 1 reference line within a pixel
        data = tmp_path / "flat.csv"
        lines = ["date,cases"]
        import datetime as dt

        for i in range(80):
            lines.append(f"{(dt.date(2021, 1, 1) + dt.timedelta(days=i)).isoformat()},300")
        data.write_text("\n".join(lines) + "\n")
        out = tmp_path / "chart.svg"
        assert run_cli("plot", data, "--output", out) == EXIT_OK
        ns = {"svg": "http://www.w3.org/2000/svg"}
        root = ET.parse(out).getroot()
        ref = root.find(".//svg:line[@class='reference']", ns)
        assert ref is not None
        ref_y = float(ref.get("y1"))
        median = root.findall(".//svg:polyline[@class='median dlm']", ns)
        assert median
        tail_ys = []
        for poly in median:
            pts = [tuple(map(float, tok.split(","))) for tok in poly.get("points").split()]
            tail_ys.extend(y for _, y in pts[-20:])
        assert all(abs(y - ref_y) <= 1.0 for y in tail_ys)

    def test_plot_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        run_cli("plot", BUNDLED_CSV, "--estimator", "both", "--output", a)
        run_cli("plot", BUNDLED_CSV, "--estimator", "both", "--output", b)
        assert a.read_bytes() == b.read_bytes()

    def test_two_band_groups_have_distinct_styles(self, tmp_path):
        out = tmp_path / "chart.svg"
        run_cli("plot", BUNDLED_CSV, "--estimator", "both", "--output", out)
        ns = {"svg": "http://www.w3.org/2000/svg"}
        root = ET.parse(out).getroot()
        dlm = root.findall(".//svg:polygon[@class='band dlm']", ns)
        cori = root.findall(".//svg:polygon[@class='band cori']", ns)
        assert dlm and cori
        assert dlm[0].get("fill") != cori[0].get("fill")


class TestBaselineOnlyLowCounts:
    def test_cori_alone_survives_subthreshold_counts(self, tmp_path):
        # every count sits below min_incidence: the filter has nothing to
        # assimilate, but the baseline still has positive windows
        import datetime as dt

        data = tmp_path / "low.csv"
        lines = ["date,cases"]
        for i in range(30):
            lines.append(f"{(dt.date(2021, 2, 1) + dt.timedelta(days=i)).isoformat()},5")
        data.write_text("\n".join(lines) + "\n")
        out = tmp_path / "est.csv"
        assert run_cli("estimate", data, "--estimator", "cori", "--output", out) == EXIT_OK
        header, rows = read_csv(out)
        assert all(r[1] == "false" for r in rows)  # nothing DLM-observable
        assert any(r[header.index("cori_q50")] for r in rows)
        # the filter alone must still refuse
        assert run_cli("estimate", data, "--estimator", "dlm") == EXIT_DATA


class TestExitCodes:
    def test_missing_file_is_data_error(self, tmp_path):
        assert run_cli("estimate", tmp_path / "nope.csv") == EXIT_DATA

    def test_malformed_csv_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("date,cases\n2020-05-01,-3\n")
        assert run_cli("estimate", bad) == EXIT_DATA

    def test_unknown_flag_is_usage_error(self):
        assert run_cli("estimate", BUNDLED_CSV, "--no-such-flag") == EXIT_USAGE

    def test_no_partial_output_on_failure(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("date,cases\n2020-05-01,-3\n")
        out = tmp_path / "est.csv"
        assert run_cli("estimate", bad, "--output", out) == EXIT_DATA
        assert not out.exists()
