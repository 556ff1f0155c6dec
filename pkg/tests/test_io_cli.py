import json

import numpy as np
import pytest
from click.testing import CliRunner

from motionmatch.cli import cli
from motionmatch.inference import fit_kde
from motionmatch.io_files import (
    ParseError,
    format_table_csv,
    format_table_json,
    pdf_from_json,
    pdf_to_json,
    trajectory_from_text,
    trajectory_to_text,
)
from motionmatch.trajectory import gen_circle


class TestTrajectoryFormat:
    def test_round_trip(self, circle60):
        back = trajectory_from_text(trajectory_to_text(circle60))
        assert np.all(np.abs(back.samples - circle60.samples) < 1e-9)
        assert back.sample_rate_hz == circle60.sample_rate_hz
        assert back.closed == circle60.closed

    def test_crlf_equals_lf(self, circle60):
        text = trajectory_to_text(circle60)
        crlf = text.replace("\n", "\r\n")
        a = trajectory_from_text(text)
        b = trajectory_from_text(crlf)
        assert np.array_equal(a.samples, b.samples)

    def test_missing_header_names_line_one(self):
        with pytest.raises(ParseError, match="line 1"):
            trajectory_from_text("0,1,0\n0.1,0,1\n")

    def test_non_monotone_time_rejected(self):
        text = "t,x,y\n0,1,0\n0.2,0,1\n0.1,1,1\n"
        with pytest.raises(ParseError, match="strictly increasing"):
            trajectory_from_text(text)

    def test_bad_cell_names_line(self):
        text = "t,x,y\n0,1,0\n0.1,zero,1\n"
        with pytest.raises(ParseError, match="line 3"):
            trajectory_from_text(text)

    def test_rate_inferred_without_sidecar(self):
        text = "t,x,y\n0,0,0\n0.5,1,0\n1.0,2,0\n"
        traj = trajectory_from_text(text)
        assert abs(traj.sample_rate_hz - 2.0) < 1e-12
        assert traj.closed is False

    def test_extra_metadata_lines_skipped(self, circle60):
        text = trajectory_to_text(circle60, extra_meta={"seed": 9})
        back = trajectory_from_text(text)
        assert np.all(np.abs(back.samples - circle60.samples) < 1e-9)


class TestPdfFormat:
    def test_lossless_round_trip(self, rng):
        pdf = fit_kde(rng.normal(0.3, 0.2, 64), label="null")
        text = pdf_to_json(pdf, "pearson_min_axis")
        back, measure = pdf_from_json(text)
        assert measure == "pearson_min_axis"
        assert back.bandwidth == pdf.bandwidth
        assert np.array_equal(back.sample_values, pdf.sample_values)
        assert back.label == "null"


class TestTables:
    def test_csv_with_metadata(self):
        text = format_table_csv([{"a": 1, "b": 0.5}, {"a": 2, "b": 1.5}], {"seed": 7})
        lines = text.splitlines()
        assert lines[0] == "# seed=7"
        assert lines[1] == "a,b"
        assert lines[2].startswith("1,")

    def test_json_with_metadata(self):
        doc = json.loads(format_table_json([{"a": 1}], {"seed": 7}))
        assert doc["meta"]["seed"] == 7
        assert doc["rows"] == [{"a": 1}]


class TestCli:
    def setup_method(self):
        self.runner = CliRunner()

    def test_gen_circle_parses_back(self, tmp_path):
        out = tmp_path / "c.csv"
        res = self.runner.invoke(cli, ["gen-circle", "--n", "60", "--out", str(out)])
        assert res.exit_code == 0
        traj = trajectory_from_text(out.read_text())
        assert len(traj) == 60 and traj.closed

    def test_gen_circle_invalid_exits_one(self):
        res = self.runner.invoke(cli, ["gen-circle", "--n", "3"])
        assert res.exit_code == 1

    def test_unknown_flag_exits_two(self):
        res = self.runner.invoke(cli, ["gen-circle", "--n", "60", "--bogus"])
        assert res.exit_code == 2

    def test_distort_requires_seed(self, tmp_path):
        out = tmp_path / "c.csv"
        self.runner.invoke(cli, ["gen-circle", "--n", "60", "--out", str(out)])
        res = self.runner.invoke(cli, ["distort", "--input", str(out)])
        assert res.exit_code == 2

    def test_capacity_reference_row(self):
        res = self.runner.invoke(
            cli, ["analyze", "capacity", "--speed", "240", "--rate", "30", "--lambda", "0.8", "--window", "30"]
        )
        assert res.exit_code == 0
        data_lines = [l for l in res.output.splitlines() if not l.startswith("#")]
        assert data_lines[0] == "n_samples,count_above,proportion,entropy_bits,max_targets_bidirectional"
        cells = data_lines[1].split(",")
        assert cells[0] == "45" and cells[1] == "7" and cells[4] == "14"

    def test_noise_sweep_byte_identical(self):
        args = ["analyze", "noise-sweep", "--targets", "8", "--fractions", "0.1,0.3", "--reps", "3", "--seed", "5"]
        a = self.runner.invoke(cli, args)
        b = self.runner.invoke(cli, args)
        assert a.exit_code == 0
        assert a.output == b.output
        assert "# seed=5" in a.output

    def test_rotation_requires_seed(self):
        res = self.runner.invoke(cli, ["analyze", "rotation", "--measure", "rotated"])
        assert res.exit_code == 2

    def test_fit_pdf_output(self, tmp_path):
        samples = tmp_path / "s.txt"
        samples.write_text("\n".join(str(v) for v in np.linspace(0.2, 0.9, 40)))
        res = self.runner.invoke(cli, ["fit-pdf", "--samples", str(samples), "--label", "follow"])
        assert res.exit_code == 0
        pdf, measure = pdf_from_json(res.output)
        assert measure == "pearson_min_axis"
        assert len(pdf.sample_values) == 40

    def test_simulate_selects_followed_target(self, tmp_path):
        paths = []
        for i in range(3):
            p = tmp_path / f"t{i}.csv"
            self.runner.invoke(
                cli, ["gen-circle", "--n", "60", "--phase", str(120.0 * i), "--out", str(p)]
            )
            paths.append(str(p))
        res = self.runner.invoke(
            cli,
            ["simulate", "--input", paths[1], "--targets", paths[0], paths[1], paths[2],
             "--measure", "rotated", "--model", "step", "--window", "30", "--format", "json"],
        )
        assert res.exit_code == 0
        doc = json.loads(res.output)
        first = doc["rows"][0]
        assert first["selected"] == 2
        assert abs(sum(first[f"prob_{i}"] for i in (1, 2, 3)) + first["prob_null"] - 1.0) < 1e-9

    def test_entropy_profile_square_shape(self):
        res = self.runner.invoke(
            cli, ["analyze", "entropy-profile", "--shape", "square", "--n", "120", "--window", "15"]
        )
        assert res.exit_code == 0
        rows = [l for l in res.output.splitlines() if l and not l.startswith("#")]
        assert rows[0] == "start,entropy_bits"
        assert len(rows) == 1 + 120

    def test_window_sweep_best_window_in_metadata(self):
        res = self.runner.invoke(
            cli,
            ["analyze", "window-sweep", "--shape", "square", "--n", "120", "--w-min", "30", "--w-max", "50"],
        )
        assert res.exit_code == 0
        meta = [l for l in res.output.splitlines() if l.startswith("# best_window=")]
        assert meta and 35 <= int(meta[0].split("=")[1]) <= 45

    def test_gen_circle_json_format(self):
        res = self.runner.invoke(cli, ["gen-circle", "--n", "60", "--format", "json"])
        assert res.exit_code == 0
        doc = json.loads(res.output)
        assert len(doc["samples"]) == 60 and doc["closed"] is True

    def test_fit_pdf_csv_format(self, tmp_path):
        samples = tmp_path / "s.txt"
        samples.write_text("\n".join(str(0.5 + 0.01 * i) for i in range(20)))
        res = self.runner.invoke(cli, ["fit-pdf", "--samples", str(samples), "--format", "csv"])
        assert res.exit_code == 0
        assert "# bandwidth=" in res.output
        assert res.output.splitlines().count("sample") == 1

    def test_pairwise_command(self):
        res = self.runner.invoke(
            cli,
            ["analyze", "pairwise", "--shape", "circle", "--n", "160", "--targets", "10",
             "--window", "15", "--start", "15", "--reference", "5", "--format", "json"],
        )
        assert res.exit_code == 0
        doc = json.loads(res.output)
        assert doc["rows"][5]["similarity"] == 1.0
