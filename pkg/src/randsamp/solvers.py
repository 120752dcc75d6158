"""Recovery of sparse spectra and gradient-sparse signals from random samples.

Two solvers:

* :func:`omp_recover` -- orthogonal matching pursuit on the complex sensing
  matrix A = M0 Psi*. Greedily selects the spectral bin whose (normalized)
  column correlates best with the residual, optionally together with its
  conjugate partner bin, then re-fits all selected bins by least squares.
* :func:`tv_recover` -- gradient descent on a smoothed total-variation
  objective, for signals whose variation rather than spectrum is sparse:
  J(x) = 0.5 ||M0 x - y||^2 + lam * sum_n sqrt((x[n+1]-x[n])^2 + eps^2)
  with circular differences.

Both are single-threaded and deterministic for fixed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import dft_adjoint


class SingularSystemError(RuntimeError):
    """The least-squares system on the selected support is rank-deficient."""

    def __init__(self, support):
        self.support = list(support)
        super().__init__(f"rank-deficient least-squares system on support {self.support}")


class NonConvergenceError(RuntimeError):
    """The objective kept increasing through repeated step halvings."""

    def __init__(self, history_length: int):
        self.history_length = history_length
        super().__init__(
            f"objective still increasing after 10 step halvings ({history_length} accepted iterates)"
        )


@dataclass(frozen=True)
class OmpConfig:
    """Stopping rule and selection options for orthogonal matching pursuit.

    max_atoms: largest support size before stopping.
    residual_tol: stop once ||residual|| <= residual_tol * ||y||.
    conjugate_pairing: select bin (N-j) mod N together with bin j so the
        recovered spectrum of a real signal stays conjugate-symmetric; the DC
        and Nyquist bins are their own partners.
    """

    max_atoms: int = 16
    residual_tol: float = 1e-12
    conjugate_pairing: bool = True

    def __post_init__(self):
        if self.max_atoms < 1:
            raise ValueError("max_atoms must be at least 1")
        if self.residual_tol < 0:
            raise ValueError("residual_tol must be nonnegative")


@dataclass(frozen=True)
class TvConfig:
    """Gradient-descent settings for the smoothed total-variation objective.

    step_size is dimensionless: the actual step is step_size / ||M0||_2^2,
    with the operator norm estimated by 20 power iterations. lam = None uses
    the data-scaled default 1e-2 * ||y||_2.
    """

    step_size: float = 1e-2
    lam: float | None = None
    epsilon: float = 1e-3
    max_iters: int = 10_000
    grad_tol: float = 1e-8

    def __post_init__(self):
        if self.step_size <= 0 or self.epsilon <= 0 or self.grad_tol <= 0:
            raise ValueError("step_size, epsilon and grad_tol must be positive")
        if self.lam is not None and self.lam <= 0:
            raise ValueError("lam must be positive (or None for the data-scaled default)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class RecoveryResult:
    """Output of a recovery run.

    recovered: real time-domain signal on the uniform grid.
    spectrum/support: selected DFT coefficients and bins (OMP only).
    residual_history: ||residual|| before the first and after each OMP
        iteration; objective_history: J at the start and after each accepted
        TV step.
    """

    recovered: np.ndarray
    spectrum: np.ndarray | None = None
    support: list[int] | None = None
    iterations: int = 0
    final_residual: float = 0.0
    residual_history: np.ndarray | None = None
    objective_history: np.ndarray | None = None


def omp_recover(sensing, y, cfg: OmpConfig = OmpConfig()) -> RecoveryResult:
    """Greedy sparse recovery of the spectrum behind measurements y.

    Per iteration: (1) pick the bin maximizing |<a_j/||a_j||, r>| (ties break
    to the lowest index), (2) with conjugate pairing also take bin (N-j) mod N
    when distinct, (3) least-squares re-fit y on all selected columns,
    (4) update the residual. Stops when the support reaches cfg.max_atoms or
    the residual drops below cfg.residual_tol * ||y||. The time-domain output
    is the real part of the adjoint DFT of the recovered spectrum.
    """
    a = np.asarray(sensing)
    y = np.asarray(y, dtype=float)
    m, n = a.shape
    if len(y) != m:
        raise ValueError("measurement length does not match matrix rows")
    if cfg.max_atoms > n:
        raise ValueError("max_atoms cannot exceed the number of columns")

    col_norms = np.linalg.norm(a, axis=0)
    col_norms = np.where(col_norms > 0.0, col_norms, 1.0)
    y_norm = float(np.linalg.norm(y))
    residual = y.astype(complex)
    support: list[int] = []
    coeffs = np.zeros(0, dtype=complex)
    history = [y_norm]
    iterations = 0

    while np.linalg.norm(residual) > cfg.residual_tol * y_norm and len(support) < cfg.max_atoms:
        corr = np.abs(a.conj().T @ residual) / col_norms
        if support:
            corr[support] = -1.0
        pick = int(np.argmax(corr))
        support.append(pick)
        if cfg.conjugate_pairing:
            partner = (n - pick) % n
            if partner != pick and partner not in support:
                support.append(partner)
        if len(support) > m:
            raise ValueError(f"support size {len(support)} exceeds the {m} measurements")
        a_sub = a[:, support]
        coeffs, _, rank, _ = np.linalg.lstsq(a_sub, y.astype(complex), rcond=None)
        if rank < len(support):
            raise SingularSystemError(support)
        residual = y - a_sub @ coeffs
        iterations += 1
        history.append(float(np.linalg.norm(residual)))

    spectrum = np.zeros(n, dtype=complex)
    if support:
        spectrum[support] = coeffs
    recovered = dft_adjoint(spectrum).real
    return RecoveryResult(
        recovered=recovered,
        spectrum=spectrum,
        support=support,
        iterations=iterations,
        final_residual=float(np.linalg.norm(residual)),
        residual_history=np.asarray(history),
    )


def total_variation(x, epsilon: float) -> float:
    """Smoothed circular TV: sum_n sqrt((x[n+1]-x[n])^2 + epsilon^2), n mod N."""
    x = np.asarray(x, dtype=float)
    d = np.roll(x, -1) - x
    return float(np.sum(np.sqrt(d * d + epsilon * epsilon)))


def tv_gradient(x, epsilon: float) -> np.ndarray:
    """Analytic gradient of :func:`total_variation`."""
    x = np.asarray(x, dtype=float)
    d = np.roll(x, -1) - x
    w = d / np.sqrt(d * d + epsilon * epsilon)
    return np.roll(w, 1) - w


def operator_norm_sq(entries, iters: int = 20) -> float:
    """Power-iteration estimate of ||A||_2^2, started from the all-ones vector
    so the estimate is deterministic."""
    a = np.asarray(entries, dtype=float)
    v = np.ones(a.shape[1]) / np.sqrt(a.shape[1])
    for _ in range(iters):
        w = a.T @ (a @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 1.0
        v = w / norm_w
    return float(v @ (a.T @ (a @ v)))


def tv_recover(m0, y, cfg: TvConfig = TvConfig(), x_init=None) -> RecoveryResult:
    """Gradient descent on the smoothed-TV objective.

    m0 may be an ObservationMatrix or a bare M x N array. Starts from
    x_init (default M0^T y) and takes fixed steps, halving the step whenever a
    proposal would increase the objective; ten consecutive failed halvings
    raise NonConvergenceError. Stops at cfg.max_iters accepted steps or when
    ||grad J|| <= cfg.grad_tol.
    """
    a = np.asarray(getattr(m0, "entries", m0), dtype=float)
    y = np.asarray(y, dtype=float)
    m, n = a.shape
    if len(y) != m:
        raise ValueError("measurement length does not match matrix rows")
    x = a.T @ y if x_init is None else np.array(x_init, dtype=float)
    if len(x) != n:
        raise ValueError("x_init length does not match matrix columns")

    lam = cfg.lam if cfg.lam is not None else 1e-2 * float(np.linalg.norm(y))
    step = cfg.step_size / operator_norm_sq(a)

    def objective(z):
        r = a @ z - y
        return 0.5 * float(r @ r) + lam * total_variation(z, cfg.epsilon)

    current = objective(x)
    history = [current]
    iterations = 0
    for _ in range(cfg.max_iters):
        grad = a.T @ (a @ x - y) + lam * tv_gradient(x, cfg.epsilon)
        if np.linalg.norm(grad) <= cfg.grad_tol:
            break
        halvings = 0
        while True:
            candidate = x - step * grad
            value = objective(candidate)
            if value <= current:
                break
            halvings += 1
            if halvings >= 10:
                raise NonConvergenceError(len(history))
            step *= 0.5
        x, current = candidate, value
        iterations += 1
        history.append(current)

    return RecoveryResult(
        recovered=x,
        iterations=iterations,
        final_residual=float(np.linalg.norm(a @ x - y)),
        objective_history=np.asarray(history),
    )
