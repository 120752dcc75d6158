"""Command-line front end: signal generation, sampling, matrix building,
recovery, and the bundled benchmark presets.

Exit codes: 0 success, 1 usage error, 2 numerical failure (every run failed).
Every flag can also be supplied through ``--config FILE`` as ``key=value``
lines (booleans as true/false); explicit flags win over config values. If
RANDSAMP_OUT_DIR is set, relative ``--out`` paths are placed inside it.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import experiments, obs_matrix, signals, solvers
from .fourier import sensing_matrix

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
OUT_DIR_ENV = "RANDSAMP_OUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so main() can return 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read_config_flags(path: str) -> list[str]:
    """Turn key=value lines into CLI tokens (booleans into --flag/--no-flag)."""
    flags: list[str] = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"config line {line!r} is not key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        name = "--" + key.replace("_", "-")
        if value.lower() in ("true", "false"):
            flags.append(name if value.lower() == "true" else "--no-" + name[2:])
        else:
            flags.extend([name, value])
    return flags


def _inject_config(argv: list[str]) -> list[str]:
    """Splice config-derived flags right after the subcommand so that flags
    typed on the command line (which come later) win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        return argv  # let argparse report the missing value
    config_flags = _read_config_flags(argv[idx + 1])
    return argv[:1] + config_flags + argv[1:]


def _resolve_out(path_str: str | None) -> Path | None:
    if path_str is None:
        return None
    path = Path(path_str)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _fmt(value: float) -> str:
    return repr(float(value))


def _make_signal(args) -> signals.ContinuousSignal:
    if args.signal == "trig":
        return signals.TrigSignal()
    if args.signal == "gauspuls":
        return signals.GaussPulseSignal(
            center_freq=args.fc, bandwidth=args.bw, bwr_db=args.bwr, tpr_db=args.tpr
        )
    return signals.SquareSignal(period=args.period, duty=args.duty, amplitude=args.amplitude)


def _add_signal_flags(parser) -> None:
    parser.add_argument("--signal", choices=("trig", "gauspuls", "square"), required=True)
    parser.add_argument("--fc", type=float, default=50e3, help="gauspuls center frequency [Hz]")
    parser.add_argument("--bw", type=float, default=0.6, help="gauspuls fractional bandwidth")
    parser.add_argument("--bwr", type=float, default=-6.0, help="gauspuls bandwidth reference level [dB]")
    parser.add_argument("--tpr", type=float, default=-60.0, help="gauspuls truncation level [dB]")
    parser.add_argument("--period", type=float, default=0.5, help="square-wave period [s]")
    parser.add_argument("--duty", type=float, default=0.5, help="square-wave duty ratio in (0,1)")
    parser.add_argument("--amplitude", type=float, default=1.0, help="square-wave amplitude")


def _add_common_out(parser, formats=("csv", "json")) -> None:
    parser.add_argument("--out", help=f"output path (default: stdout; ${OUT_DIR_ENV} prefixes relative paths)")
    if formats:
        parser.add_argument("--format", choices=formats, default="csv")
    parser.add_argument("--config", help="key=value file supplying defaults for any flag")


def _signal_t0(args, signal) -> float:
    if args.t0 is not None:
        return args.t0
    if isinstance(signal, signals.GaussPulseSignal):
        return -signal.cutoff_time
    return 0.0


def _series_csv(header: str, columns) -> str:
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in zip(*columns))
    return "\n".join(lines) + "\n"


def _cmd_generate(args) -> int:
    signal = _make_signal(args)
    interval = 1.0 / args.rate if args.rate else args.interval
    if interval is None:
        raise UsageError("generate needs --rate or --interval")
    t0 = _signal_t0(args, signal)
    n = args.n
    if n is None and isinstance(signal, signals.GaussPulseSignal) and args.rate:
        n = signal.grid_points(args.rate)
    if n is None:
        raise UsageError("generate needs --n (it is implied only for gauspuls with --rate)")
    grid = signals.uniform_samples(signal, n, interval, t0)
    if args.format == "csv":
        text = _series_csv("time,value", (grid.times, grid.values))
    else:
        import json

        text = json.dumps(
            {"interval": interval, "origin": t0, "values": list(map(float, grid.values))},
            indent=2,
            sort_keys=True,
        ) + "\n"
    _emit(text, _resolve_out(args.out))
    return EXIT_OK


def _cmd_sample(args) -> int:
    signal = _make_signal(args)
    t0 = _signal_t0(args, signal)
    times = signals.draw_random_times(args.m, args.duration, t0, args.seed)
    sample = signals.sample_at(signal, times, duration=args.duration, seed=args.seed)
    if args.format == "csv":
        text = _series_csv("time,value", (sample.times, sample.values))
    else:
        import json

        text = json.dumps(
            {
                "seed": args.seed,
                "duration": args.duration,
                "times": list(map(float, sample.times)),
                "values": list(map(float, sample.values)),
            },
            indent=2,
            sort_keys=True,
        ) + "\n"
    _emit(text, _resolve_out(args.out))
    return EXIT_OK


def _read_column(path: str, column: str) -> np.ndarray:
    try:
        lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    header = lines[0].split(",")
    if column not in header:
        raise UsageError(f"{path}: no {column!r} column in header {header}")
    idx = header.index(column)
    return np.array([float(ln.split(",")[idx]) for ln in lines[1:]])


def _cmd_build_matrix(args) -> int:
    times = _read_column(args.times, "time") - args.t0
    if args.method == "truncated" and args.p_terms is None:
        raise UsageError("--method truncated needs --p-terms")
    matrix = experiments._build_matrix(args.method, times, args.interval, args.n, args.p_terms)
    out = _resolve_out(args.out)
    if out is None:
        raise UsageError("build-matrix needs --out (matrix CSV is not written to stdout)")
    obs_matrix.save_matrix_csv(matrix, out)
    return EXIT_OK


def _cmd_recover(args) -> int:
    matrix = obs_matrix.load_matrix_csv(args.matrix)
    y = _read_column(args.measurements, "value")
    try:
        if args.solver == "omp":
            cfg = solvers.OmpConfig(
                max_atoms=args.max_atoms,
                residual_tol=args.residual_tol,
                conjugate_pairing=args.pairing,
            )
            result = solvers.omp_recover(sensing_matrix(matrix), y, cfg)
        else:
            cfg = solvers.TvConfig(
                step_size=args.tv_step,
                lam=args.tv_lambda,
                epsilon=args.tv_epsilon,
                max_iters=args.tv_iters,
                grad_tol=args.tv_grad_tol,
            )
            result = solvers.tv_recover(matrix, y, cfg)
    except (solvers.NonConvergenceError, solvers.SingularSystemError) as exc:
        print(f"recovery failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.format == "csv":
        text = _series_csv("index,value", (np.arange(len(result.recovered)), result.recovered))
    else:
        import json

        text = json.dumps(
            {
                "values": list(map(float, result.recovered)),
                "support": result.support,
                "iterations": result.iterations,
                "final_residual": result.final_residual,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"
    _emit(text, _resolve_out(args.out))
    return EXIT_OK


def _experiment_config(args) -> experiments.ExperimentConfig:
    omp = None
    if args.max_atoms is not None or args.residual_tol is not None or not args.pairing:
        base = experiments.resolve_plan(
            experiments.ExperimentConfig(preset=args.preset, method=args.matrix, p_terms=args.p_terms)
        ).omp
        omp = solvers.OmpConfig(
            max_atoms=args.max_atoms if args.max_atoms is not None else base.max_atoms,
            residual_tol=args.residual_tol if args.residual_tol is not None else base.residual_tol,
            conjugate_pairing=args.pairing,
        )
    tv = None
    if any(v is not None for v in (args.tv_step, args.tv_lambda, args.tv_epsilon, args.tv_iters)):
        base = experiments.resolve_plan(
            experiments.ExperimentConfig(preset=args.preset, method=args.matrix, p_terms=args.p_terms)
        ).tv
        tv = solvers.TvConfig(
            step_size=args.tv_step if args.tv_step is not None else base.step_size,
            lam=args.tv_lambda if args.tv_lambda is not None else base.lam,
            epsilon=args.tv_epsilon if args.tv_epsilon is not None else base.epsilon,
            max_iters=args.tv_iters if args.tv_iters is not None else base.max_iters,
            grad_tol=base.grad_tol,
        )
    return experiments.ExperimentConfig(
        preset=args.preset,
        method=args.matrix,
        p_terms=args.p_terms,
        solver=args.solver,
        runs=args.runs,
        master_seed=args.seed,
        m_samples=args.m,
        n_grid=args.n,
        sample_rate=args.rate,
        omp=omp,
        tv=tv,
    )


def _cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    report = experiments.run_experiment(cfg, jobs=args.jobs)
    text = (
        experiments.report_csv(report, include_timings=args.timings)
        if args.format == "csv"
        else experiments.report_json(report, include_timings=args.timings)
    )
    out = _resolve_out(args.out)
    _emit(text, out)
    if out is not None:
        print(
            f"{out}: {len(report.records)} runs, mean_error={_fmt(report.mean_error)}, "
            f"failed={report.n_failed}"
        )
    if report.n_failed == len(report.records):
        print("all runs failed", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_sweep_p(args) -> int:
    try:
        p_list = [int(tok) for tok in args.p_list.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"--p-list must be comma-separated integers: {exc}") from exc
    cfg = _experiment_config(args)
    rows = experiments.sweep_truncation(cfg, p_list, jobs=args.jobs)
    out = _resolve_out(args.out)
    _emit(experiments.sweep_csv(rows, include_timings=args.timings), out)
    if out is not None:
        print(f"{out}: {len(rows)} rows")
    if all(report.n_failed == len(report.records) for _, report in rows):
        print("all runs failed", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _add_experiment_flags(parser, default_p_list: bool = False) -> None:
    parser.add_argument("--preset", choices=experiments.PRESETS, required=not default_p_list)
    if default_p_list:
        parser.set_defaults(preset="trig")
        parser.add_argument(
            "--p-list", default="2,20,200,2000,20000", help="comma-separated even truncation lengths"
        )
    parser.add_argument("--matrix", choices=obs_matrix.METHODS, default="poisson")
    parser.add_argument("--p-terms", type=int, help="truncation length for --matrix truncated")
    parser.add_argument("--solver", choices=("omp", "tv"), help="default: preset's solver")
    parser.add_argument("--runs", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0, help="master seed; each run derives its own")
    parser.add_argument("--m", type=int, help="number of random samples (default: preset)")
    parser.add_argument("--n", type=int, help="grid length (default: preset)")
    parser.add_argument("--rate", type=float, help="grid sample rate in Hz (default: preset)")
    parser.add_argument("--jobs", type=int, default=1, help="parallel runs; output is identical for any value")
    parser.add_argument(
        "--timings",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="fill the wall-clock columns (off keeps output byte-reproducible)",
    )
    parser.add_argument("--max-atoms", type=int, help="OMP support budget")
    parser.add_argument("--residual-tol", type=float, help="OMP relative residual stop")
    parser.add_argument(
        "--pairing", action=argparse.BooleanOptionalAction, default=True, help="OMP conjugate pairing"
    )
    parser.add_argument("--tv-step", type=float, help="TV step factor (scaled by 1/||M0||^2)")
    parser.add_argument("--tv-lambda", type=float, help="TV regularization weight")
    parser.add_argument("--tv-epsilon", type=float, help="TV smoothing epsilon")
    parser.add_argument("--tv-iters", type=int, help="TV iteration cap")


def build_parser() -> _Parser:
    parser = _Parser(prog="randsamp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a signal on a uniform grid")
    _add_signal_flags(p)
    p.add_argument("--n", type=int, help="grid length (implied for gauspuls with --rate)")
    p.add_argument("--rate", type=float, help="sample rate in Hz")
    p.add_argument("--interval", type=float, help="sample interval in s (alternative to --rate)")
    p.add_argument("--t0", type=float, help="grid origin (default 0; gauspuls: -cutoff)")
    _add_common_out(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("sample", help="measure a signal at random times")
    _add_signal_flags(p)
    p.add_argument("--m", type=int, required=True, help="number of random samples")
    p.add_argument("--duration", type=float, required=True, help="sampling window length in s")
    p.add_argument("--t0", type=float, help="window start (default 0; gauspuls: -cutoff)")
    p.add_argument("--seed", type=int, default=0)
    _add_common_out(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("build-matrix", help="build an observation matrix for given sample times")
    p.add_argument("--times", required=True, help="CSV with a 'time' column (e.g. from sample)")
    p.add_argument("--interval", type=float, required=True, help="uniform grid interval in s")
    p.add_argument("--n", type=int, required=True, help="grid length")
    p.add_argument("--t0", type=float, default=0.0, help="grid origin subtracted from the times")
    p.add_argument("--method", choices=obs_matrix.METHODS, default="poisson")
    p.add_argument("--p-terms", type=int, help="truncation length for --method truncated")
    _add_common_out(p, formats=())
    p.set_defaults(func=_cmd_build_matrix)

    p = sub.add_parser("recover", help="recover a uniform signal from a matrix and measurements")
    p.add_argument("--matrix", required=True, help="matrix CSV from build-matrix")
    p.add_argument("--measurements", required=True, help="CSV with a 'value' column (e.g. from sample)")
    p.add_argument("--solver", choices=("omp", "tv"), default="omp")
    p.add_argument("--max-atoms", type=int, default=16)
    p.add_argument("--residual-tol", type=float, default=1e-12)
    p.add_argument("--pairing", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--tv-step", type=float, default=1e-2)
    p.add_argument("--tv-lambda", type=float)
    p.add_argument("--tv-epsilon", type=float, default=1e-3)
    p.add_argument("--tv-iters", type=int, default=10_000)
    p.add_argument("--tv-grad-tol", type=float, default=1e-8)
    _add_common_out(p)
    p.set_defaults(func=_cmd_recover)

    preset_values = (
        "preset defaults: trig = four-tone signal, M=64, N=256, 800 Hz grid, OMP; "
        "gauspuls = 50 kHz pulse with 60% bandwidth, M=93, N=928, 10 MHz grid, OMP; "
        "square = +-1 wave with two periods, M=80, N=240, 240 Hz grid, TV"
    )
    p = sub.add_parser(
        "experiment",
        help="run a benchmark preset (trig | gauspuls | square)",
        epilog=preset_values,
    )
    _add_experiment_flags(p)
    _add_common_out(p)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser(
        "sweep-p",
        help="error and build time versus truncation length",
        epilog=preset_values,
    )
    _add_experiment_flags(p, default_p_list=True)
    _add_common_out(p, formats=())
    p.set_defaults(func=_cmd_sweep_p)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_inject_config(argv))
        return args.func(args)
    except UsageError as exc:
        print(f"randsamp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"randsamp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
