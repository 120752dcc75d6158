import json

import numpy as np


def read_csv_column(path, name):
    lines = path.read_text().splitlines()
    idx = lines[0].split(",").index(name)
    return [line.split(",")[idx] for line in lines[1:]]


class TestExperimentCommand:
    def test_trig_poisson_writes_report(self, run_cli, tmp_path):
        out = tmp_path / "r.csv"
        proc = run_cli(
            "experiment", "--preset", "trig", "--matrix", "poisson",
            "--runs", "5", "--seed", "7", "--out", out,
        )
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().splitlines()
        assert lines[0].startswith("run_id,seed,signal,method,P,M,N,error")
        assert len(lines) == 1 + 5 + 1
        mean_error = float(lines[-1].split(",")[7])
        assert mean_error < 1e-8

    def test_naive_matrix_reports_large_error(self, run_cli, tmp_path):
        out = tmp_path / "naive.csv"
        proc = run_cli(
            "experiment", "--preset", "trig", "--matrix", "naive",
            "--runs", "5", "--seed", "7", "--out", out,
        )
        assert proc.returncode == 0, proc.stderr
        assert float(out.read_text().splitlines()[-1].split(",")[7]) > 0.2

    def test_stdout_when_no_out(self, run_cli):
        proc = run_cli("experiment", "--preset", "trig", "--runs", "2", "--seed", "1")
        assert proc.returncode == 0
        assert proc.stdout.startswith("run_id,seed,")

    def test_json_format(self, run_cli, tmp_path):
        out = tmp_path / "r.json"
        proc = run_cli(
            "experiment", "--preset", "trig", "--runs", "2", "--seed", "3",
            "--format", "json", "--out", out,
        )
        assert proc.returncode == 0, proc.stderr
        doc = json.loads(out.read_text())
        assert doc["signal"] == "trig"
        assert len(doc["runs"]) == 2

    def test_repeat_invocations_byte_identical(self, run_cli, tmp_path):
        argv = ("experiment", "--preset", "trig", "--runs", "3", "--seed", "5", "--out")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(*argv, a).returncode == 0
        assert run_cli(*argv, b).returncode == 0
        assert a.read_bytes() == b.read_bytes()

    def test_jobs_do_not_change_output(self, run_cli, tmp_path):
        base = ("experiment", "--preset", "trig", "--runs", "4", "--seed", "5")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(*base, "--jobs", "1", "--out", a).returncode == 0
        assert run_cli(*base, "--jobs", "4", "--out", b).returncode == 0
        assert a.read_bytes() == b.read_bytes()

    def test_all_runs_failed_exits_2(self, run_cli, tmp_path):
        proc = run_cli(
            "experiment", "--preset", "square", "--runs", "1",
            "--m", "8", "--n", "16", "--rate", "16",
            "--tv-step", "1e12", "--tv-iters", "20",
            "--out", tmp_path / "fail.csv",
        )
        assert proc.returncode == 2
        assert "failed" in proc.stderr

    def test_solver_override_flags(self, run_cli, tmp_path):
        out = tmp_path / "r.csv"
        proc = run_cli(
            "experiment", "--preset", "trig", "--runs", "2", "--seed", "2",
            "--max-atoms", "8", "--residual-tol", "1e-10", "--out", out,
        )
        assert proc.returncode == 0, proc.stderr


class TestSweepCommand:
    def test_sweep_csv_rows(self, run_cli, tmp_path):
        out = tmp_path / "sweep.csv"
        proc = run_cli(
            "sweep-p", "--p-list", "2,20", "--runs", "2", "--seed", "7", "--out", out,
        )
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().splitlines()
        assert lines[0] == "method,P,mean_error,mean_build_time_s,mean_solve_time_s"
        assert [ln.split(",")[1] for ln in lines[1:]] == ["2", "20", ""]

    def test_rejects_bad_p_list(self, run_cli):
        proc = run_cli("sweep-p", "--p-list", "2,x")
        assert proc.returncode == 1


class TestPipeline:
    def test_generate_sample_build_recover(self, run_cli, tmp_path):
        grid = tmp_path / "grid.csv"
        samples = tmp_path / "samples.csv"
        matrix = tmp_path / "matrix.csv"
        recovered = tmp_path / "recovered.csv"

        assert run_cli(
            "generate", "--signal", "trig", "--n", "256", "--rate", "800", "--out", grid,
        ).returncode == 0
        assert run_cli(
            "sample", "--signal", "trig", "--m", "64", "--duration", "0.32",
            "--seed", "11", "--out", samples,
        ).returncode == 0
        assert run_cli(
            "build-matrix", "--times", samples, "--interval", "0.00125", "--n", "256",
            "--method", "poisson", "--out", matrix,
        ).returncode == 0
        assert run_cli(
            "recover", "--matrix", matrix, "--measurements", samples, "--out", recovered,
        ).returncode == 0

        truth = np.array([float(v) for v in read_csv_column(grid, "value")])
        got = np.array([float(v) for v in read_csv_column(recovered, "value")])
        assert np.linalg.norm(got - truth) / np.linalg.norm(truth) < 1e-8

    def test_generate_gauspuls_implies_grid(self, run_cli, tmp_path):
        out = tmp_path / "pulse.csv"
        proc = run_cli("generate", "--signal", "gauspuls", "--rate", "1e7", "--out", out)
        assert proc.returncode == 0, proc.stderr
        assert len(out.read_text().splitlines()) == 1 + 928

    def test_recover_tv_square(self, run_cli, tmp_path):
        samples = tmp_path / "samples.csv"
        matrix = tmp_path / "matrix.csv"
        out = tmp_path / "rec.json"
        assert run_cli(
            "sample", "--signal", "square", "--period", "0.5", "--m", "40",
            "--duration", "1.0", "--seed", "3", "--out", samples,
        ).returncode == 0
        assert run_cli(
            "build-matrix", "--times", samples, "--interval", str(1.0 / 240.0),
            "--n", "240", "--out", matrix,
        ).returncode == 0
        proc = run_cli(
            "recover", "--matrix", matrix, "--measurements", samples,
            "--solver", "tv", "--tv-step", "1.0", "--tv-iters", "200",
            "--format", "json", "--out", out,
        )
        assert proc.returncode == 0, proc.stderr
        doc = json.loads(out.read_text())
        assert len(doc["values"]) == 240
        assert doc["iterations"] > 0


class TestUsage:
    def test_unknown_flag_exits_1(self, run_cli):
        proc = run_cli("experiment", "--preset", "trig", "--bogus")
        assert proc.returncode == 1
        assert "usage" in proc.stderr.lower()

    def test_missing_required_flag_exits_1(self, run_cli):
        proc = run_cli("sample", "--signal", "trig")
        assert proc.returncode == 1

    def test_no_subcommand_exits_1(self, run_cli):
        assert run_cli().returncode == 1

    def test_help_everywhere(self, run_cli):
        assert run_cli("--help").returncode == 0
        for sub in ("generate", "sample", "build-matrix", "recover", "experiment", "sweep-p"):
            proc = run_cli(sub, "--help")
            assert proc.returncode == 0
            assert "--out" in proc.stdout

    def test_experiment_help_documents_presets(self, run_cli):
        proc = run_cli("experiment", "--help")
        assert "trig" in proc.stdout and "gauspuls" in proc.stdout and "square" in proc.stdout


class TestConfigFile:
    def test_flags_win_over_config(self, run_cli, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("preset=trig\nruns=4\nseed=9\n")
        out = tmp_path / "r.csv"
        proc = run_cli("experiment", "--config", config, "--runs", "2", "--out", out)
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 2 + 1  # flag value (2 runs) wins
        from randsamp.experiments import derive_run_seed

        assert int(lines[1].split(",")[1]) == derive_run_seed(9, 0)  # config seed applies

    def test_boolean_config_values(self, run_cli, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("preset=trig\nruns=2\ntimings=true\n")
        out = tmp_path / "r.csv"
        assert run_cli("experiment", "--config", config, "--out", out).returncode == 0
        assert not out.read_text().splitlines()[1].endswith(",,")

    def test_malformed_config_rejected(self, run_cli, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("this is not a key value pair\n")
        assert run_cli("experiment", "--config", config).returncode == 1

    def test_missing_config_rejected(self, run_cli, tmp_path):
        assert run_cli("experiment", "--config", tmp_path / "nope.cfg").returncode == 1


class TestOutDirEnv:
    def test_relative_out_lands_in_env_dir(self, run_cli, tmp_path):
        outdir = tmp_path / "results"
        proc = run_cli(
            "experiment", "--preset", "trig", "--runs", "2", "--out", "r.csv",
            env_extra={"RANDSAMP_OUT_DIR": str(outdir)},
        )
        assert proc.returncode == 0, proc.stderr
        assert (outdir / "r.csv").exists()

    def test_absolute_out_ignores_env(self, run_cli, tmp_path):
        target = tmp_path / "abs.csv"
        proc = run_cli(
            "experiment", "--preset", "trig", "--runs", "2", "--out", target,
            env_extra={"RANDSAMP_OUT_DIR": str(tmp_path / "elsewhere")},
        )
        assert proc.returncode == 0, proc.stderr
        assert target.exists()
