"""Command-line contract: headers, round trips, determinism, exit codes."""

import json
import math

import numpy as np
import pytest

from thermaljc.cli import (
    EPE_HEADER,
    SCAN_HEADER,
    TIMESERIES_HEADER,
    main,
)

TS_FLAGS = [
    "--p", "1", "--kbar", "0.1", "--lbar", "0.1", "--delta", "0",
    "--gt-max", "25", "--steps", "200",
]


def _read_columns(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return {
        name: np.array([float(row[i]) for row in rows])
        for i, name in enumerate(header)
    }


class TestTimeseries:
    def test_csv_contract(self, tmp_path):
        out = tmp_path / "ts.csv"
        assert main(["timeseries", *TS_FLAGS, "--output", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == TIMESERIES_HEADER
        assert lines[0] == "gt,g_eff,x1,x2,x3_re,x3_im,x5,x6,concurrence,purity,energy"
        assert len(lines) == 202
        first = lines[1].split(",")
        assert len(first) == 11
        assert float(first[0]) == 0.0
        assert float(first[1]) == 0.0  # g_eff at the start
        assert float(first[8]) == pytest.approx(1.0, abs=1e-9)
        assert float(first[9]) == pytest.approx(1.0, abs=1e-9)
        assert float(first[10]) == pytest.approx(0.0, abs=1e-9)

    def test_json_round_trip_matches_csv_exactly(self, tmp_path):
        csv_out = tmp_path / "ts.csv"
        json_out = tmp_path / "ts.json"
        assert main(["timeseries", *TS_FLAGS, "--output", str(csv_out)]) == 0
        assert main(["timeseries", *TS_FLAGS, "--format", "json",
                     "--output", str(json_out)]) == 0
        csv_columns = _read_columns(csv_out)
        json_columns = json.loads(json_out.read_text())["columns"]
        assert set(json_columns) == set(csv_columns)
        for name, values in csv_columns.items():
            assert values.tolist() == json_columns[name]

    def test_json_metadata_echoes_inputs(self, tmp_path):
        out = tmp_path / "ts.json"
        assert main(["timeseries", *TS_FLAGS, "--format", "json",
                     "--output", str(out)]) == 0
        meta = json.loads(out.read_text())["metadata"]
        assert meta["subcommand"] == "timeseries"
        assert meta["p"] == 1
        assert meta["kbar"] == 0.1
        assert meta["lbar"] == 0.1
        assert meta["delta"] == 0.0
        assert meta["g"] == 1.0
        assert meta["motion"] is True
        assert meta["gt_max"] == 25.0
        assert meta["steps"] == 200
        assert meta["epsilon_tail"] == 1e-12
        assert "generated_at" in meta

    def test_timestamp_is_suppressible(self, tmp_path):
        out = tmp_path / "ts.json"
        assert main(["timeseries", *TS_FLAGS, "--format", "json",
                     "--no-timestamp", "--output", str(out)]) == 0
        assert "generated_at" not in json.loads(out.read_text())["metadata"]

    def test_byte_determinism(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            assert main(["timeseries", *TS_FLAGS, "--format", "json",
                         "--no-timestamp", "--output", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()
        c, d = tmp_path / "c.csv", tmp_path / "d.csv"
        for path in (c, d):
            assert main(["timeseries", *TS_FLAGS, "--output", str(path)]) == 0
        assert c.read_bytes() == d.read_bytes()

    def test_vacuum_concurrence_column(self, tmp_path):
        out = tmp_path / "vac.csv"
        assert main(["timeseries", "--kbar", "0", "--lbar", "0", "--delta", "0",
                     "--gt-max", "6", "--steps", "100", "--output", str(out)]) == 0
        columns = _read_columns(out)
        expected = np.cos(1.0 - np.cos(columns["gt"])) ** 2
        np.testing.assert_allclose(columns["concurrence"], expected, atol=1e-9)

    def test_fast_motion_avoids_sudden_death(self, tmp_path):
        out = tmp_path / "p4.csv"
        assert main(["timeseries", "--p", "4", "--kbar", "0.1", "--delta", "0",
                     "--gt-max", "10", "--steps", "400", "--output", str(out)]) == 0
        assert np.min(_read_columns(out)["concurrence"]) > 0.0

    def test_missing_output_is_a_usage_error(self, capsys):
        assert main(["timeseries", "--kbar", "0.1"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_coarse_truncation_is_a_validation_failure(self, tmp_path, capsys):
        out = tmp_path / "ts.csv"
        rc = main(["timeseries", "--kbar", "5", "--epsilon-tail", "1e-2",
                   "--steps", "50", "--output", str(out)])
        assert rc == 3
        assert "validation failure" in capsys.readouterr().err


class TestEpe:
    def test_csv_contract(self, tmp_path):
        out = tmp_path / "epe.csv"
        assert main(["epe", *TS_FLAGS, "--output", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == EPE_HEADER
        assert lines[0] == "gt,concurrence,purity,energy"
        assert len(lines) == 202
        first = [float(v) for v in lines[1].split(",")]
        assert first[0] == 0.0
        assert first[1] == pytest.approx(1.0, abs=1e-9)
        assert first[2] == pytest.approx(1.0, abs=1e-9)
        assert first[3] == pytest.approx(0.0, abs=1e-9)


class TestScan:
    def test_csv_report(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["scan", "--p", "1,4", "--kbar", "0.1", "--delta", "0",
                     "--gt-max", "25", "--steps", "2000",
                     "--output", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == SCAN_HEADER
        assert len(lines) == 3
        row_p1 = lines[1].split(",")
        row_p4 = lines[2].split(",")
        assert (row_p1[0], row_p4[0]) == ("1", "4")
        assert row_p1[10] == "4"  # sudden-death episodes
        assert row_p4[10] == "0"
        assert float(row_p1[11]) == 2.0 * math.pi
        assert float(row_p4[11]) == 0.5 * math.pi

    def test_json_report_with_window(self, tmp_path):
        out = tmp_path / "scan.json"
        assert main(["scan", "--p", "1", "--kbar", "0.1", "--delta", "0",
                     "--gt-max", "10", "--steps", "200", "--window-lo", "0.5",
                     "--format", "json", "--no-timestamp",
                     "--output", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["metadata"]["p"] == [1]
        assert data["metadata"]["window_lo"] == 0.5
        (report,) = data["reports"]
        assert report["p"] == 1
        assert report["max_concurrence"] < 1.0
        assert report["period"] == 2.0 * math.pi
        assert all(len(iv) == 2 for iv in report["dead_intervals"])

    def test_detuned_scan_has_no_period(self, tmp_path):
        out = tmp_path / "scan.csv"
        assert main(["scan", "--p", "1", "--kbar", "0.1", "--delta", "5",
                     "--gt-max", "10", "--steps", "200",
                     "--output", str(out)]) == 0
        row = out.read_text().splitlines()[1].split(",")
        assert row[11] == ""  # period column stays blank


class TestValidate:
    def test_single_configuration_ok(self, capsys):
        assert main(["validate", "--kbar", "0", "--times", "5"]) == 0
        out = capsys.readouterr().out
        assert "max_deviation=" in out
        assert " ok" in out

    def test_small_grid_ok(self, capsys):
        assert main(["validate", "--gt-max", "2", "--times", "3"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert len(out) == 19  # 18 configurations plus the summary
        assert out[-1].startswith("validate: all configurations ok")

    def test_coarse_truncation_fails(self, capsys):
        rc = main(["validate", "--kbar", "5", "--epsilon-tail", "1e-2",
                   "--times", "5"])
        assert rc == 3
        assert "validation failure" in capsys.readouterr().err


class TestConfigFileAndEnvironment:
    def test_environment_supplies_the_default_tail(self, monkeypatch, tmp_path):
        # the value must stay fine enough for the trace gate (deficit ~ 2*tail)
        monkeypatch.setenv("THERMALJC_EPSILON_TAIL", "1e-10")
        out = tmp_path / "ts.json"
        assert main(["timeseries", "--steps", "50", "--format", "json",
                     "--output", str(out)]) == 0
        assert json.loads(out.read_text())["metadata"]["epsilon_tail"] == 1e-10

    def test_flag_beats_environment(self, monkeypatch, tmp_path):
        monkeypatch.setenv("THERMALJC_EPSILON_TAIL", "1e-6")
        out = tmp_path / "ts.json"
        assert main(["timeseries", "--steps", "50", "--epsilon-tail", "1e-10",
                     "--format", "json", "--output", str(out)]) == 0
        assert json.loads(out.read_text())["metadata"]["epsilon_tail"] == 1e-10

    def test_config_file_supplies_flags(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# reference run\n"
            "p = 4\n"
            "kbar=0.2\n"
            "gt-max = 10\n"
            "steps=100\n"
            "\n"
        )
        out = tmp_path / "ts.json"
        assert main(["timeseries", "--config", str(cfg), "--format", "json",
                     "--output", str(out)]) == 0
        meta = json.loads(out.read_text())["metadata"]
        assert meta["p"] == 4
        assert meta["kbar"] == 0.2
        assert meta["gt_max"] == 10.0
        assert meta["steps"] == 100

    def test_flag_beats_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("p=4\nsteps=100\n")
        out = tmp_path / "ts.json"
        assert main(["timeseries", "--config", str(cfg), "--p", "2",
                     "--format", "json", "--output", str(out)]) == 0
        meta = json.loads(out.read_text())["metadata"]
        assert meta["p"] == 2
        assert meta["steps"] == 100

    def test_unknown_config_key_is_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus=1\n")
        assert main(["timeseries", "--config", str(cfg),
                     "--output", str(tmp_path / "x.csv")]) == 1
        assert "not accepted" in capsys.readouterr().err

    def test_malformed_config_line_is_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("just-some-words\n")
        assert main(["timeseries", "--config", str(cfg),
                     "--output", str(tmp_path / "x.csv")]) == 1
        assert "expected key=value" in capsys.readouterr().err

    def test_unparseable_config_value_is_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("steps=abc\n")
        assert main(["timeseries", "--config", str(cfg),
                     "--output", str(tmp_path / "x.csv")]) == 1
        assert "config key steps" in capsys.readouterr().err


@pytest.fixture()
def sample_csv(tmp_path):
    path = tmp_path / "sample.csv"
    assert main(["timeseries", "--kbar", "0.1", "--gt-max", "6", "--steps", "50",
                 "--output", str(path)]) == 0
    return path


class TestPlot:
    def test_default_columns(self, sample_csv, tmp_path):
        out = tmp_path / "plot.svg"
        assert main(["plot", "--input", str(sample_csv),
                     "--output", str(out)]) == 0
        svg = out.read_text()
        assert svg.startswith("<?xml")
        assert svg.count("<polyline") == 3
        assert ">gt<" in svg
        assert "concurrence" in svg

    def test_single_column(self, sample_csv, tmp_path):
        out = tmp_path / "plot.svg"
        assert main(["plot", "--input", str(sample_csv), "--columns",
                     "purity", "--output", str(out)]) == 0
        assert out.read_text().count("<polyline") == 1

    @pytest.mark.parametrize("projection", ["c-vs-u", "c-vs-p"])
    def test_projections(self, sample_csv, tmp_path, projection):
        out = tmp_path / "proj.svg"
        assert main(["plot", "--input", str(sample_csv), "--projection",
                     projection, "--output", str(out)]) == 0
        svg = out.read_text()
        assert svg.count("<polyline") == 1
        assert "concurrence" in svg

    def test_projection_conflicts_with_columns(self, sample_csv, tmp_path):
        assert main(["plot", "--input", str(sample_csv), "--projection", "c-vs-u",
                     "--columns", "purity",
                     "--output", str(tmp_path / "x.svg")]) == 1

    def test_unknown_column_is_a_usage_error(self, sample_csv, tmp_path, capsys):
        assert main(["plot", "--input", str(sample_csv), "--columns", "bogus",
                     "--output", str(tmp_path / "x.svg")]) == 1
        assert "no column" in capsys.readouterr().err

    def test_missing_input_file_is_an_io_error(self, tmp_path):
        assert main(["plot", "--input", str(tmp_path / "absent.csv"),
                     "--output", str(tmp_path / "x.svg")]) == 2

    @pytest.mark.parametrize(
        "content, lineno",
        [
            ("", 1),
            ("gt,gt\n0,1\n", 1),
            ("gt,concurrence\n0.0,1.0\n0.5\n", 3),
            ("gt,concurrence\n0.0,oops\n", 2),
            ("gt,concurrence\n", 2),
        ],
    )
    def test_malformed_csv_names_the_line(self, tmp_path, capsys, content, lineno):
        bad = tmp_path / "bad.csv"
        bad.write_text(content)
        assert main(["plot", "--input", str(bad),
                     "--output", str(tmp_path / "x.svg")]) == 2
        assert f"bad.csv:{lineno}:" in capsys.readouterr().err


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        assert main(["timeseries", "--bogus", "1"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_unknown_subcommand(self, capsys):
        assert main(["transmogrify"]) == 1

    def test_no_arguments(self, capsys):
        assert main([]) == 1

    def test_degenerate_grid_is_a_usage_error(self, tmp_path, capsys):
        assert main(["timeseries", "--steps", "1",
                     "--output", str(tmp_path / "x.csv")]) == 1

    def test_unwritable_output_is_an_io_error(self, tmp_path, capsys):
        target = tmp_path / "no" / "such" / "dir" / "x.csv"
        rc = main(["timeseries", "--steps", "50", "--output", str(target)])
        assert rc == 2
        assert "io error" in capsys.readouterr().err
