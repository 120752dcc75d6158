"""Seeded, repeatable benchmark experiments: error metrics, timing, P-sweeps.

A run is fully determined by (master_seed, run_index): per-run seeds come
from a SplitMix64-style mix, so runs are independent random streams and batch
results do not depend on execution order or parallelism.

Builds and solves are timed separately with a monotonic wall clock. Timing
values are real measurements and therefore vary between invocations; the CSV
and JSON writers keep the timing columns in the schema but only fill them on
request, so that default artifacts are byte-reproducible.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from .fourier import sensing_matrix
from .obs_matrix import ObservationMatrix, build_naive, build_poisson, build_truncated
from .signals import (
    GaussPulseSignal,
    SquareSignal,
    TrigSignal,
    draw_random_times,
    sample_at,
    uniform_samples,
)
from .solvers import (
    NonConvergenceError,
    OmpConfig,
    SingularSystemError,
    TvConfig,
    omp_recover,
    tv_recover,
)

PRESETS = ("trig", "gauspuls", "square")

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15  # 2**64 / golden ratio, the SplitMix64 increment

CSV_HEADER = "run_id,seed,signal,method,P,M,N,error,build_time_s,solve_time_s"
SWEEP_CSV_HEADER = "method,P,mean_error,mean_build_time_s,mean_solve_time_s"


def derive_run_seed(master_seed: int, run_index: int) -> int:
    """Independent 64-bit stream seed for one run: the SplitMix64 finalizer
    applied to master_seed + (run_index + 1) * golden-ratio increment."""
    z = (master_seed + (run_index + 1) * _GOLDEN) & _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def relative_l2_error(x_rec, x_ref) -> float:
    """||x_rec - x_ref||_2 / ||x_ref||_2."""
    x_rec = np.asarray(x_rec, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    if x_rec.shape != x_ref.shape:
        raise ValueError("vectors must have equal length")
    ref_norm = float(np.linalg.norm(x_ref))
    if ref_norm == 0.0:
        raise ValueError("reference vector has zero norm; relative error undefined")
    return float(np.linalg.norm(x_rec - x_ref)) / ref_norm


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a signal preset, a matrix construction, a solver.

    Preset defaults (m_samples, n_grid, sample_rate -> interval):

    * trig:     M=64, N=256, 800 Hz grid over [0, 0.32 s)
    * gauspuls: M=93, N=928, 10 MHz grid spanning the -60 dB pulse support
    * square:   M=80, N=240, 240 Hz grid over [0, 1 s), two wave periods

    Any of the optional fields override the preset; solver defaults to OMP
    except for the square preset, which uses TV.
    """

    preset: str
    method: str = "poisson"
    p_terms: int | None = None
    solver: str | None = None
    runs: int = 50
    master_seed: int = 0
    m_samples: int | None = None
    n_grid: int | None = None
    sample_rate: float | None = None
    omp: OmpConfig | None = None
    tv: TvConfig | None = None
    out_path: str | None = None
    out_format: str = "csv"

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}; expected one of {PRESETS}")
        if self.method not in ("naive", "truncated", "poisson"):
            raise ValueError(f"unknown matrix method {self.method!r}")
        if self.method == "truncated" and (self.p_terms is None or self.p_terms % 2 != 0):
            raise ValueError("truncated method needs an even p_terms")
        if self.solver is not None and self.solver not in ("omp", "tv"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.out_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.out_format!r}")


# Solver settings used by the presets. The trig stopping rule covers the
# signal's 7 occupied bins with margin; the gauspuls budget keeps the
# dominant spectral lobe of the pulse; the square-wave TV settings are
# engineering choices tuned for the M=80/N=240 configuration.
TRIG_OMP = OmpConfig(max_atoms=16, residual_tol=1e-12, conjugate_pairing=True)
GAUSPULS_OMP = OmpConfig(max_atoms=24, residual_tol=1e-4, conjugate_pairing=True)
SQUARE_TV = TvConfig(step_size=1.0, lam=None, epsilon=1e-3, max_iters=20_000, grad_tol=1e-8)
# Warm-start budget for the square preset's TV solve (see ResolvedPlan.tv_init).
SQUARE_INIT_OMP = OmpConfig(max_atoms=24, residual_tol=1e-6, conjugate_pairing=True)


@dataclass(frozen=True)
class ResolvedPlan:
    """Fully concrete experiment parameters after preset resolution.

    tv_init selects the TV starting point: "adjoint" leaves the solver's
    M0^T y default; "spectral" warm-starts from the OMP reconstruction (using
    this plan's OmpConfig), which pins the transition locations so gradient
    descent only has to flatten the ripples between them.
    """

    signal: object
    m_samples: int
    n_grid: int
    interval: float
    t0: float
    duration: float
    solver: str
    omp: OmpConfig
    tv: TvConfig
    tv_init: str = "adjoint"


def _fit_default_budget(omp: OmpConfig, m: int, n: int) -> OmpConfig:
    """Clamp a preset's default OMP budget to an overridden problem size.

    Leaves room for conjugate pairing to overshoot by one atom without
    tripping the over-selection guard. User-supplied configs are not touched.
    """
    cap = min(omp.max_atoms, max(1, m - 1), n)
    return omp if cap == omp.max_atoms else replace(omp, max_atoms=cap)


def resolve_plan(cfg: ExperimentConfig) -> ResolvedPlan:
    """Apply preset defaults and overrides to a concrete run plan."""
    if cfg.preset == "trig":
        signal = TrigSignal()
        rate = cfg.sample_rate or 800.0
        m = cfg.m_samples or 64
        n = cfg.n_grid or 256
        t0 = 0.0
        solver = cfg.solver or "omp"
        omp = cfg.omp or _fit_default_budget(TRIG_OMP, m, n)
        tv = cfg.tv or TvConfig()
    elif cfg.preset == "gauspuls":
        signal = GaussPulseSignal()
        rate = cfg.sample_rate or 10e6
        m = cfg.m_samples or 93
        n = cfg.n_grid or signal.grid_points(rate)
        t0 = -signal.cutoff_time
        solver = cfg.solver or "omp"
        omp = cfg.omp or _fit_default_budget(GAUSPULS_OMP, m, n)
        tv = cfg.tv or TvConfig()
    else:  # square
        rate = cfg.sample_rate or 240.0
        m = cfg.m_samples or 80
        n = cfg.n_grid or 240
        # Two full periods across the grid, edges on grid points.
        signal = SquareSignal(period=n / (2.0 * rate), duty=0.5, amplitude=1.0)
        t0 = 0.0
        solver = cfg.solver or "tv"
        omp = cfg.omp or _fit_default_budget(SQUARE_INIT_OMP, m, n)
        tv = cfg.tv or SQUARE_TV
        interval = 1.0 / rate
        return ResolvedPlan(signal, m, n, interval, t0, n * interval, solver, omp, tv,
                            tv_init="spectral")
    interval = 1.0 / rate
    return ResolvedPlan(signal, m, n, interval, t0, n * interval, solver, omp, tv)


@dataclass(frozen=True)
class RunRecord:
    """One run's outcome; error is NaN when the solver failed."""

    run_id: int
    seed: int
    error: float
    build_time_s: float
    solve_time_s: float


def _mean_over(records, key) -> float:
    ok = [key(r) for r in records if not math.isnan(r.error)]
    return float(np.mean(ok)) if ok else float("nan")


@dataclass
class ExperimentReport:
    """Per-run records plus aggregates for one experiment configuration.

    Aggregates are arithmetic means over the successful runs; failed runs are
    counted in n_failed but excluded from the means. Consistency between the
    records and the aggregate fields is re-checked on construction.
    """

    preset: str
    method: str
    p_terms: int | None
    m_samples: int
    n_grid: int
    master_seed: int
    records: list[RunRecord] = field(default_factory=list)
    mean_error: float = float("nan")
    mean_build_time_s: float = float("nan")
    mean_solve_time_s: float = float("nan")
    n_failed: int = 0

    def __post_init__(self):
        if not self.records:
            raise ValueError("a report needs at least one run record")
        checks = (
            (self.mean_error, _mean_over(self.records, lambda r: r.error)),
            (self.mean_build_time_s, _mean_over(self.records, lambda r: r.build_time_s)),
            (self.mean_solve_time_s, _mean_over(self.records, lambda r: r.solve_time_s)),
        )
        for got, expect in checks:
            if not (got == expect or (math.isnan(got) and math.isnan(expect))):
                raise ValueError("aggregate fields do not match the per-run records")
        if self.n_failed != sum(1 for r in self.records if math.isnan(r.error)):
            raise ValueError("n_failed does not match the per-run records")

    @classmethod
    def from_records(cls, cfg: ExperimentConfig, plan: ResolvedPlan, records) -> "ExperimentReport":
        records = sorted(records, key=lambda r: r.run_id)
        return cls(
            preset=cfg.preset,
            method=cfg.method,
            p_terms=cfg.p_terms,
            m_samples=plan.m_samples,
            n_grid=plan.n_grid,
            master_seed=cfg.master_seed,
            records=records,
            mean_error=_mean_over(records, lambda r: r.error),
            mean_build_time_s=_mean_over(records, lambda r: r.build_time_s),
            mean_solve_time_s=_mean_over(records, lambda r: r.solve_time_s),
            n_failed=sum(1 for r in records if math.isnan(r.error)),
        )


def _build_matrix(method: str, times, interval: float, n_grid: int, p_terms) -> ObservationMatrix:
    if method == "naive":
        return build_naive(times, interval, n_grid)
    if method == "truncated":
        return build_truncated(times, interval, n_grid, p_terms)
    return build_poisson(times, interval, n_grid)


def _recover(plan: ResolvedPlan, m0: ObservationMatrix, values):
    if plan.solver == "omp":
        return omp_recover(sensing_matrix(m0), values, plan.omp)
    x_init = None
    if plan.tv_init == "spectral":
        x_init = omp_recover(sensing_matrix(m0), values, plan.omp).recovered
    return tv_recover(m0, values, plan.tv, x_init=x_init)


def _single_run(run_id: int, cfg: ExperimentConfig, plan: ResolvedPlan, reference) -> RunRecord:
    seed = derive_run_seed(cfg.master_seed, run_id)
    times = draw_random_times(plan.m_samples, plan.duration, plan.t0, seed)
    samples = sample_at(plan.signal, times, duration=plan.duration, seed=seed)

    tic = time.perf_counter()
    # The matrix kernel places grid point n at time n*interval, so sample
    # times are passed relative to the grid origin.
    m0 = _build_matrix(cfg.method, times - plan.t0, plan.interval, plan.n_grid, cfg.p_terms)
    build_time = time.perf_counter() - tic

    tic = time.perf_counter()
    try:
        result = _recover(plan, m0, samples.values)
        error = relative_l2_error(result.recovered, reference.values)
    except (NonConvergenceError, SingularSystemError):
        error = float("nan")
    solve_time = time.perf_counter() - tic
    return RunRecord(run_id, seed, error, build_time, solve_time)


@dataclass
class Reconstruction:
    """One fully materialized run: inputs, matrix, solver output, reference."""

    run_id: int
    seed: int
    times: np.ndarray
    measurements: np.ndarray
    matrix: ObservationMatrix
    result: object
    reference: object
    error: float


def reconstruct_once(cfg: ExperimentConfig, run_id: int = 0) -> Reconstruction:
    """Materialize a single run of an experiment (the figure-style view).

    Unlike :func:`run_experiment`, solver failures propagate.
    """
    plan = resolve_plan(cfg)
    reference = uniform_samples(plan.signal, plan.n_grid, plan.interval, plan.t0)
    seed = derive_run_seed(cfg.master_seed, run_id)
    times = draw_random_times(plan.m_samples, plan.duration, plan.t0, seed)
    samples = sample_at(plan.signal, times, duration=plan.duration, seed=seed)
    m0 = _build_matrix(cfg.method, times - plan.t0, plan.interval, plan.n_grid, cfg.p_terms)
    result = _recover(plan, m0, samples.values)
    return Reconstruction(
        run_id=run_id,
        seed=seed,
        times=times,
        measurements=samples.values,
        matrix=m0,
        result=result,
        reference=reference,
        error=relative_l2_error(result.recovered, reference.values),
    )


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    """Run cfg.runs seeded repetitions and aggregate them.

    jobs > 1 executes runs in a thread pool; results are identical to the
    sequential order because every run derives its own seed.
    """
    plan = resolve_plan(cfg)
    reference = uniform_samples(plan.signal, plan.n_grid, plan.interval, plan.t0)
    run_one = partial(_single_run, cfg=cfg, plan=plan, reference=reference)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_one, range(cfg.runs)))
    else:
        records = [run_one(i) for i in range(cfg.runs)]
    return ExperimentReport.from_records(cfg, plan, records)


def sweep_truncation(cfg: ExperimentConfig, p_list, jobs: int = 1):
    """Run the experiment once per truncation length plus a closed-form
    baseline row.

    Returns a list of (p_terms, report) pairs, ending with (None, report) for
    the closed-form kernel. All rows share the per-run sample times because
    seeds depend only on (master_seed, run_id).
    """
    p_list = list(p_list)
    if not p_list:
        raise ValueError("p_list must be nonempty")
    rows = []
    for p in p_list:
        rows.append((p, run_experiment(replace(cfg, method="truncated", p_terms=p), jobs=jobs)))
    rows.append((None, run_experiment(replace(cfg, method="poisson", p_terms=None), jobs=jobs)))
    return rows


def _fmt(value: float) -> str:
    """Shortest round-trip decimal for a float; 'nan' marks failed runs."""
    return repr(float(value))


def _report_rows(report: ExperimentReport, include_timings: bool):
    p = "" if report.p_terms is None else str(report.p_terms)
    for r in report.records:
        yield [
            str(r.run_id),
            str(r.seed),
            report.preset,
            report.method,
            p,
            str(report.m_samples),
            str(report.n_grid),
            _fmt(r.error),
            _fmt(r.build_time_s) if include_timings else "",
            _fmt(r.solve_time_s) if include_timings else "",
        ]
    yield [
        "mean",
        "",
        report.preset,
        report.method,
        p,
        str(report.m_samples),
        str(report.n_grid),
        _fmt(report.mean_error),
        _fmt(report.mean_build_time_s) if include_timings else "",
        _fmt(report.mean_solve_time_s) if include_timings else "",
    ]


def report_csv(report: ExperimentReport, include_timings: bool = False) -> str:
    """Per-run rows plus a trailing aggregate row (run_id == 'mean')."""
    lines = [CSV_HEADER]
    lines.extend(",".join(row) for row in _report_rows(report, include_timings))
    return "\n".join(lines) + "\n"


def report_json(report: ExperimentReport, include_timings: bool = False) -> str:
    """JSON variant of the CSV schema, with aggregates; NaN errors become null."""

    def _clean(value):
        return None if math.isnan(value) else value

    doc = {
        "signal": report.preset,
        "method": report.method,
        "p_terms": report.p_terms,
        "m_samples": report.m_samples,
        "n_grid": report.n_grid,
        "master_seed": report.master_seed,
        "runs": [
            {
                "run_id": r.run_id,
                "seed": r.seed,
                "error": _clean(r.error),
                "build_time_s": r.build_time_s if include_timings else None,
                "solve_time_s": r.solve_time_s if include_timings else None,
            }
            for r in report.records
        ],
        "aggregates": {
            "mean_error": _clean(report.mean_error),
            "mean_build_time_s": report.mean_build_time_s if include_timings else None,
            "mean_solve_time_s": report.mean_solve_time_s if include_timings else None,
            "n_failed": report.n_failed,
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_report(report: ExperimentReport, path, fmt: str = "csv", include_timings: bool = False) -> None:
    text = report_csv(report, include_timings) if fmt == "csv" else report_json(report, include_timings)
    with open(path, "w") as fh:
        fh.write(text)


def sweep_csv(rows, include_timings: bool = True) -> str:
    """Aggregate row per truncation length (and the closed-form baseline),
    ready for log-log plotting."""
    lines = [SWEEP_CSV_HEADER]
    for p, report in rows:
        lines.append(
            ",".join(
                [
                    report.method,
                    "" if p is None else str(p),
                    _fmt(report.mean_error),
                    _fmt(report.mean_build_time_s) if include_timings else "",
                    _fmt(report.mean_solve_time_s) if include_timings else "",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_sweep(rows, path, include_timings: bool = True) -> None:
    with open(path, "w") as fh:
        fh.write(sweep_csv(rows, include_timings))
