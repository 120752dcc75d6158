"""Unitary DFT basis as an explicit matrix, plus the composed sensing matrix.

Convention: forward coefficients are
``X[k] = (1/sqrt(N)) sum_n x[n] exp(-2 pi j k n / N)`` for k = 0..N-1, with
negative frequencies stored at index N-k. The adjoint is the exact inverse
under this normalization, so forward/adjoint round trips are the identity to
machine precision and Parseval holds without scale factors.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=8)
def dft_matrix(n: int) -> np.ndarray:
    """Unitary n x n DFT matrix. Cached per size; the array is read-only."""
    if n < 1:
        raise ValueError("n must be at least 1")
    k = np.arange(n)
    # Reduce k*n mod n before exponentiating; keeps phases in [0, 2 pi) so the
    # matrix is unitary to ~1e-15 even for large n.
    phase = np.mod(np.outer(k, k), n)
    mat = np.exp((-2j * np.pi / n) * phase) / np.sqrt(n)
    mat.setflags(write=False)
    return mat


def dft_forward(x) -> np.ndarray:
    """Unitary DFT coefficients of a length-N vector."""
    x = np.asarray(x)
    return dft_matrix(len(x)) @ x


def dft_adjoint(coeffs) -> np.ndarray:
    """Inverse of :func:`dft_forward`; maps coefficients back to samples."""
    coeffs = np.asarray(coeffs)
    return dft_matrix(len(coeffs)).conj() @ coeffs


def sensing_matrix(m0) -> np.ndarray:
    """Compose an observation matrix with the adjoint DFT.

    Column j of the result is the observation matrix applied to the j-th
    inverse-transform basis vector, so (result @ dft_forward(x)) equals
    (m0.entries @ x) for any x.
    """
    return m0.entries @ dft_matrix(m0.n_grid).conj()
