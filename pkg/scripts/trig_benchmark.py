#!/usr/bin/env python3
"""Four-tone benchmark: accuracy of the three matrix constructions plus the
error/build-time sweep over truncation lengths.

Writes one report CSV per construction and a sweep CSV ready for log-log
plotting, then prints a summary table.
"""

import argparse
from pathlib import Path

from randsamp import ExperimentConfig, run_experiment, sweep_truncation, write_report, write_sweep


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=50)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--p-list", default="2,20,200,2000,20000")
    parser.add_argument("--outdir", type=Path, default=Path("results"))
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    print(f"{'construction':>16} {'mean error':>12} {'mean build [s]':>15} {'mean solve [s]':>15}")
    for method, p in (("naive", None), ("truncated", 200), ("poisson", None)):
        cfg = ExperimentConfig(
            preset="trig", method=method, p_terms=p, runs=args.runs, master_seed=args.seed
        )
        report = run_experiment(cfg, jobs=args.jobs)
        label = f"{method}(P={p})" if p else method
        write_report(report, args.outdir / f"trig_{label}.csv", include_timings=True)
        print(
            f"{label:>16} {report.mean_error:>12.4e} {report.mean_build_time_s:>15.4e} "
            f"{report.mean_solve_time_s:>15.4e}"
        )

    p_list = [int(tok) for tok in args.p_list.split(",") if tok.strip()]
    rows = sweep_truncation(
        ExperimentConfig(preset="trig", runs=args.runs, master_seed=args.seed), p_list, jobs=args.jobs
    )
    sweep_path = args.outdir / "trig_sweep.csv"
    write_sweep(rows, sweep_path)
    print(f"\nsweep over P={p_list} written to {sweep_path}")


if __name__ == "__main__":
    main()
