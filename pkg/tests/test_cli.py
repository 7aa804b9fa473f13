"""Command-line integration tests: exit codes, determinism, round trips."""

import json
import subprocess
import sys

import numpy as np
import pytest

from heavytail.cli import main, parse_tau, read_series, write_series


def run_cli(*args):
    return main(list(args))


def run_cli_capture(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr()


class TestSeriesIO:
    def test_round_trip_precision(self, tmp_path):
        path = tmp_path / "v.txt"
        values = np.array([1.23456789012345e-7, -42.5, 3.141592653589793])
        write_series(values, path)
        back = read_series(path, min_n=1)
        np.testing.assert_array_equal(back, values)

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("# header\n1.0\n\n2.0\n# trailing\n3.0\n" + "4\n" * 7)
        assert len(read_series(path)) == 10

    def test_csv_column(self, tmp_path):
        path = tmp_path / "v.csv"
        path.write_text("\n".join(str(i) for i in range(12)))
        assert len(read_series(path)) == 12

    def test_non_numeric_token_reports_line(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1.0\n2.0\noops\n")
        with pytest.raises(Exception, match=":3"):
            read_series(path, min_n=1)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "v.txt"
        path.write_text("1.0\ninf\n")
        with pytest.raises(Exception, match="non-finite"):
            read_series(path, min_n=1)

    def test_parse_tau(self):
        tau = parse_tau("0.5,2,0.1")
        assert (tau.mu_x, tau.sigma_x, tau.delta) == (0.5, 2.0, 0.1)
        tau = parse_tau("0,1,0.1,0.3")
        assert tau.delta == (0.1, 0.3)
        with pytest.raises(Exception):
            parse_tau("1,2")
        with pytest.raises(Exception):
            parse_tau("a,b,c")


class TestSimulate:
    def test_deterministic_files(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for out in (a, b):
            assert run_cli(
                "simulate", "--tau", "0,1,0", "--n", "1000", "--seed", "7",
                "--out", str(out),
            ) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_heavy_tail_kurtosis(self, tmp_path):
        out = tmp_path / "h.txt"
        assert run_cli(
            "simulate", "--tau", "0,1,0.333", "--n", "5000", "--seed", "3",
            "--out", str(out),
        ) == 0
        y = np.loadtxt(out)
        c = y - y.mean()
        assert (c**4).mean() / (c**2).mean() ** 2 > 3.0

    def test_n_zero_rejected(self):
        assert run_cli("simulate", "--tau", "0,1,0", "--n", "0") == 2

    def test_forward_scale_inflation(self, tmp_path):
        out = tmp_path / "g.txt"
        run_cli("simulate", "--tau", "0,1,0", "--n", "20000", "--seed", "5",
                "--out", str(out))
        fwd = tmp_path / "f.txt"
        assert run_cli(
            "transform", str(out), "--tau", "0,1,0.1", "--direction", "forward",
            "--out", str(fwd),
        ) == 0
        assert abs(np.loadtxt(fwd).std() - 1.182) <= 0.03

    def test_nongaussian_family_needs_beta(self, tmp_path):
        assert run_cli("simulate", "--family", "gamma", "--tau", "0,1,0.1",
                       "--n", "100") == 2
        out = tmp_path / "gam.txt"
        assert run_cli(
            "simulate", "--family", "gamma", "--beta", "3,1", "--tau", "0,1,0.1",
            "--n", "100", "--seed", "1", "--out", str(out),
        ) == 0
        assert np.loadtxt(out).min() >= 0.0


class TestTransform:
    def test_forward_inverse_round_trip(self, tmp_path):
        src = tmp_path / "src.txt"
        run_cli("simulate", "--tau", "0.3,1.5,0.25", "--n", "500", "--seed", "2",
                "--out", str(src))
        fwd = tmp_path / "fwd.txt"
        back = tmp_path / "back.txt"
        assert run_cli("transform", str(src), "--tau", "0.3,1.5,0.2",
                       "--direction", "forward", "--out", str(fwd)) == 0
        assert run_cli("transform", str(fwd), "--tau", "0.3,1.5,0.2",
                       "--direction", "inverse", "--out", str(back)) == 0
        a, b = np.loadtxt(src), np.loadtxt(back)
        assert np.max(np.abs(a - b) / np.maximum(1, np.abs(a))) <= 1e-9

    def test_empty_file(self, tmp_path):
        empty = tmp_path / "e.txt"
        empty.write_text("")
        assert run_cli("transform", str(empty), "--tau", "0,1,0") == 2


@pytest.fixture(scope="module")
def sample_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("fit") / "y.txt"
    run_cli("simulate", "--tau", "0,1,0.2", "--n", "800", "--seed", "9",
            "--out", str(path))
    return path


class TestFit:
    def test_mle_json_report(self, sample_file, capsys):
        code, captured = run_cli_capture(
            capsys, "fit", str(sample_file), "--json"
        )
        assert code == 0
        report = json.loads(captured.out)
        est = report["parameters"]["delta"]["estimate"]
        assert abs(est - 0.2) <= 0.1
        assert report["loglik"]["penalty"] <= 0
        assert {"observed", "gaussianized"} <= set(report["summary"])
        assert report["normality"]["observed"]["p"] <= 1

    def test_igmm_method(self, sample_file, capsys):
        code, captured = run_cli_capture(
            capsys, "fit", str(sample_file), "--method", "igmm", "--json"
        )
        assert code == 0
        report = json.loads(captured.out)
        assert abs(report["summary"]["gaussianized"]["kurtosis"] - 3.0) <= 0.01

    def test_hh_reports_lr(self, sample_file, capsys):
        code, captured = run_cli_capture(
            capsys, "fit", str(sample_file), "--tail", "hh", "--json"
        )
        assert code == 0
        report = json.loads(captured.out)
        lr = report["lr_test"]
        assert lr["df"] == 1 and 0 <= lr["p"] <= 1
        assert lr["statistic"] >= -1e-6

    def test_student_t_family(self, sample_file, capsys):
        code, captured = run_cli_capture(
            capsys, "fit", str(sample_file), "--family", "student-t", "--json"
        )
        assert code == 0
        report = json.loads(captured.out)
        assert report["parameters"]["nu"]["estimate"] > 2.0

    def test_igmm_hh(self, sample_file, capsys):
        code, captured = run_cli_capture(
            capsys, "fit", str(sample_file), "--method", "igmm", "--tail", "hh",
            "--json",
        )
        assert code == 0
        report = json.loads(captured.out)
        assert "delta_left" in report["parameters"]
        assert 0.0 <= report["lr_test"]["p"] <= 1.0

    def test_insufficient_data(self, tmp_path):
        short = tmp_path / "s.txt"
        short.write_text("1\n2\n3\n4\n5\n")
        assert run_cli("fit", str(short)) == 2


class TestGaussianize:
    def test_identity_tau(self, tmp_path, capsys):
        src = tmp_path / "src.txt"
        run_cli("simulate", "--tau", "0,1,0", "--n", "100", "--seed", "1",
                "--out", str(src))
        capsys.readouterr()
        out = tmp_path / "out.txt"
        assert run_cli("gaussianize", str(src), "--tau", "0,1,0",
                       "--out", str(out)) == 0
        np.testing.assert_array_equal(np.loadtxt(src), np.loadtxt(out))

    def test_fit_flag_gaussianizes(self, tmp_path):
        src = tmp_path / "src.txt"
        run_cli("simulate", "--tau", "0,1,0.4", "--n", "1500", "--seed", "21",
                "--out", str(src))
        out = tmp_path / "out.txt"
        assert run_cli("gaussianize", str(src), "--fit", "--method", "igmm",
                       "--out", str(out)) == 0
        x = np.loadtxt(out)
        c = x - x.mean()
        # output kurtosis within 10x the moment-matching tolerance 1.22e-4
        assert abs((c**4).mean() / (c**2).mean() ** 2 - 3.0) <= 1.22e-3

    def test_requires_tau_or_fit(self, tmp_path):
        src = tmp_path / "src.txt"
        run_cli("simulate", "--tau", "0,1,0", "--n", "50", "--seed", "1",
                "--out", str(src))
        assert run_cli("gaussianize", str(src)) == 2

    def test_invalid_sigma(self, tmp_path):
        src = tmp_path / "src.txt"
        run_cli("simulate", "--tau", "0,1,0", "--n", "50", "--seed", "1",
                "--out", str(src))
        assert run_cli("gaussianize", str(src), "--tau", "0,-1,0") == 2


class TestReplicate:
    def test_plan_roundtrip_and_determinism(self, tmp_path):
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps({
            "sample_sizes": [100],
            "delta_values": [0.1],
            "replications": 8,
            "estimators": ["median", "igmm"],
            "seed": 13,
        }))
        d1, d2 = tmp_path / "r1", tmp_path / "r2"
        assert run_cli("replicate", "--plan", str(plan), "--out", str(d1)) == 0
        assert run_cli("replicate", "--plan", str(plan), "--out", str(d2)) == 0
        assert (d1 / "replication_table.csv").read_bytes() == (
            d2 / "replication_table.csv"
        ).read_bytes()
        rows = json.loads((d1 / "replication_table.json").read_text())
        assert rows and rows[0]["N"] == 100

    def test_unknown_estimator(self, tmp_path):
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps({
            "sample_sizes": [100], "delta_values": [0.1],
            "replications": 2, "estimators": ["nope"],
        }))
        assert run_cli("replicate", "--plan", str(plan), "--out",
                       str(tmp_path / "r")) == 2


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        out = tmp_path / "x.txt"
        proc = subprocess.run(
            [sys.executable, "-m", "heavytail.cli", "simulate", "--tau", "0,1,0",
             "--n", "20", "--seed", "1", "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert out.exists()

    def test_console_script(self, tmp_path):
        proc = subprocess.run(
            ["heavytail", "simulate", "--tau", "0,1,0", "--n", "5"],
            capture_output=True,
            text=True,
        )
        # 5 values stream to stdout
        assert proc.returncode == 0
        assert len(proc.stdout.strip().splitlines()) == 5
