"""Observation matrices linking a uniform grid to off-grid sample times.

Three constructions of the M x N interpolation matrix whose rows are indexed
by sample times t_m and columns by grid index n. All share the kernel
argument theta = t_m / T - n, which places grid point n at time n*T: sample
times must be measured from the grid origin (subtract t0 first when the grid
does not start at zero).

* ``naive``     -- plain sinc(theta); ignores the periodicity that the DFT
                   imposes on a finite grid.
* ``truncated`` -- sinc periodized over a finite window of P grid repeats,
                   sum_{p=-P/2+1}^{P/2} sinc(theta + p N). Converges slowly
                   (~1/P) to the exact periodization.
* ``poisson``   -- the exact periodization in closed form: the even-N
                   Dirichlet kernel sin(pi theta) / (N tan(pi theta / N)),
                   evaluated once per entry with no inner summation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

# Distance from the nearest multiple of N below which the closed-form kernel
# switches to its removable-singularity limit (exactly 1 for even N).
SINGULARITY_EPS = 1e-9

METHODS = ("naive", "truncated", "poisson")


@dataclass
class ObservationMatrix:
    """Dense M x N interpolation matrix tagged with how it was built."""

    entries: np.ndarray
    method: str
    times: np.ndarray
    interval: float
    n_grid: int
    p_terms: int | None = None

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        self.times = np.asarray(self.times, dtype=float)
        if self.method not in METHODS:
            raise ValueError(f"unknown construction method {self.method!r}")
        if self.entries.shape != (len(self.times), self.n_grid):
            raise ValueError("entries shape does not match times x grid")
        if self.m > self.n_grid:
            warnings.warn(
                f"M={self.m} exceeds N={self.n_grid}; expected the under-sampled regime M <= N",
                stacklevel=2,
            )

    @property
    def m(self) -> int:
        return self.entries.shape[0]


def periodized_sinc(theta, n_grid: int):
    """Periodized sinc kernel sum_p sinc(theta + p*n_grid) for even n_grid.

    Evaluated through the closed form sin(pi theta) / (n_grid tan(pi theta / n_grid)).
    Within SINGULARITY_EPS of a multiple of n_grid the removable singularity is
    replaced by its limit, which is 1 for even n_grid. Accepts scalars or
    arrays.
    """
    if n_grid < 2 or n_grid % 2 != 0:
        raise ValueError("n_grid must be an even integer >= 2")
    th = np.asarray(theta, dtype=float)
    delta = th - n_grid * np.round(th / n_grid)
    near = np.abs(delta) < SINGULARITY_EPS
    safe = np.where(near, 0.25, th)
    out = np.sin(np.pi * safe) / (n_grid * np.tan(np.pi * safe / n_grid))
    out = np.where(near, 1.0, out)
    return float(out) if np.ndim(theta) == 0 else out


def _kernel_args(times, interval: float, n_grid: int) -> tuple[np.ndarray, np.ndarray]:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a nonempty 1-D array")
    if interval <= 0:
        raise ValueError("interval must be positive")
    if n_grid < 2:
        raise ValueError("n_grid must be at least 2")
    theta = times[:, None] / interval - np.arange(n_grid)[None, :]
    return times, theta


def build_naive(times, interval: float, n_grid: int) -> ObservationMatrix:
    """Single-period sinc interpolation matrix: entry (m, n) = sinc(t_m/T - n)."""
    times, theta = _kernel_args(times, interval, n_grid)
    return ObservationMatrix(np.sinc(theta), "naive", times, interval, n_grid)


def build_truncated(times, interval: float, n_grid: int, p_terms: int) -> ObservationMatrix:
    """Periodized sinc matrix truncated to p_terms repeats, p = -P/2+1 .. P/2."""
    if p_terms < 1 or p_terms % 2 != 0:
        raise ValueError("p_terms must be an even integer >= 2")
    times, theta = _kernel_args(times, interval, n_grid)
    entries = np.zeros_like(theta)
    for p in range(-p_terms // 2 + 1, p_terms // 2 + 1):
        entries += np.sinc(theta + p * n_grid)
    return ObservationMatrix(entries, "truncated", times, interval, n_grid, p_terms=p_terms)


def build_poisson(times, interval: float, n_grid: int) -> ObservationMatrix:
    """Exact periodized sinc matrix via the closed-form kernel; even n_grid only."""
    times, theta = _kernel_args(times, interval, n_grid)
    return ObservationMatrix(periodized_sinc(theta, n_grid), "poisson", times, interval, n_grid)


def save_matrix_csv(matrix: ObservationMatrix, path) -> None:
    """Write a matrix in the interchange layout:

    line 1: ``M,N,method,P``  (column names)
    line 2: the four values; P is empty unless method == truncated
    then M rows of N comma-separated entries, row-major, shortest
    round-trip decimals.
    """
    lines = ["M,N,method,P"]
    p = "" if matrix.p_terms is None else str(matrix.p_terms)
    lines.append(f"{matrix.m},{matrix.n_grid},{matrix.method},{p}")
    for row in matrix.entries:
        lines.append(",".join(repr(float(v)) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix_csv(path) -> ObservationMatrix:
    """Read a matrix written by :func:`save_matrix_csv`.

    The layout stores entries and tags only, so ``times`` and ``interval``
    come back as NaN placeholders.
    """
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != "M,N,method,P":
        raise ValueError(f"{path}: not a matrix CSV (missing M,N,method,P header)")
    m_str, n_str, method, p_str = lines[1].split(",")
    m, n = int(m_str), int(n_str)
    p = int(p_str) if p_str else None
    entries = np.array([[float(v) for v in ln.split(",")] for ln in lines[2 : 2 + m]])
    if entries.shape != (m, n):
        raise ValueError(f"{path}: expected {m}x{n} entries, found {entries.shape}")
    return ObservationMatrix(entries, method, np.full(m, np.nan), float("nan"), n, p_terms=p)
