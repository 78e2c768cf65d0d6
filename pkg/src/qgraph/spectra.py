"""Dense complex matrix kernel.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic Jacobi iteration (compiled when the extension is available); numpy's
LAPACK wrappers are used only as test oracles.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DimensionMismatch, NotHermitian
from .graph_model import principal_sqrt

__all__ = [
    "HermitianEigen",
    "ZERO_EIG_TOL",
    "as_matrix",
    "frobenius",
    "hermitian_eigen",
    "is_hermitian",
    "is_psd",
    "kron",
    "numerical_rank",
    "partial_transpose_b",
    "principal_sqrt",
    "zero_eigen_count",
]

#: relative threshold below which an eigenvalue counts as zero
ZERO_EIG_TOL = 1e-8
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class HermitianEigen:
    """Ascending eigenvalues, orthonormal eigenvector columns, max residual."""

    values: np.ndarray
    vectors: np.ndarray
    residual: float

    def __iter__(self):
        return iter((self.values, self.vectors))


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def frobenius(m) -> float:
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def is_hermitian(m, tol=HERMITIAN_TOL) -> bool:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    if a.size == 0:
        return True
    return float(np.max(np.abs(a - a.conj().T))) <= tol * (1.0 + frobenius(a))


def _require_hermitian(a, tol):
    if a.shape[0] != a.shape[1]:
        raise NotHermitian(f"matrix is not square: {a.shape}")
    if a.size and float(np.max(np.abs(a - a.conj().T))) > tol * (1.0 + frobenius(a)):
        raise NotHermitian("matrix differs from its conjugate transpose")


def _canonical_phase(vecs):
    # first entry of (numerically) largest modulus becomes real and >= 0
    mags = np.abs(vecs)
    top = mags.max(axis=0)
    idx = np.argmax(mags >= top * (1.0 - 1e-9), axis=0)
    cols = np.arange(vecs.shape[1])
    pick = vecs[idx, cols]
    size = mags[idx, cols]
    phase = np.ones(vecs.shape[1], dtype=np.complex128)
    nz = size > 0.0
    phase[nz] = pick[nz].conjugate() / size[nz]
    return vecs * phase


def hermitian_eigen(m, tol=HERMITIAN_TOL) -> HermitianEigen:
    """Full eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : array_like
        Square complex matrix with ``max|M - M^H| <= tol * (1 + ||M||_F)``.
    tol : float
        Hermiticity tolerance.

    Returns
    -------
    HermitianEigen
        Eigenvalues ascending; each eigenvector's first entry of largest
        modulus is real and nonnegative.

    Raises
    ------
    NotHermitian
    ConvergenceError
        If Jacobi sweeps do not reduce the off-diagonal mass to
        ``1e-12 * ||M||_F`` within 100 sweeps.
    """
    a = as_matrix(m)
    _require_hermitian(a, tol)
    n = a.shape[0]
    if n == 0:
        return HermitianEigen(np.zeros(0), np.zeros((0, 0), dtype=np.complex128), 0.0)
    herm = 0.5 * (a + a.conj().T)
    values, vectors, sweeps = _kernels.jacobi_eigh(herm, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError("Jacobi iteration did not converge")
    order = np.argsort(values, kind="stable")
    values = np.asarray(values)[order]
    vectors = _canonical_phase(np.asarray(vectors)[:, order])
    residual = float(np.max(np.linalg.norm(a @ vectors - vectors * values, axis=0)))
    return HermitianEigen(values, vectors, residual)


def kron(a, b) -> np.ndarray:
    """Kronecker product; the row index of ``a`` is the slow one."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_transpose_b(m) -> np.ndarray:
    """Transpose the second qubit of a 4x4 two-qubit operator.

    ``out[(i,j),(k,l)] = in[(i,l),(k,j)]`` with composite index ``2*i + j``.
    """
    a = as_matrix(m)
    if a.shape != (4, 4):
        raise DimensionMismatch(f"partial transpose needs a 4x4 matrix, got {a.shape}")
    return a.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def numerical_rank(m, tol=ZERO_EIG_TOL) -> int:
    """Number of eigenvalues above ``tol * max(1, lambda_max)``."""
    values = hermitian_eigen(m).values
    if values.size == 0:
        return 0
    cut = tol * max(1.0, float(values[-1]))
    return int(np.sum(values > cut))


def zero_eigen_count(m, tol=ZERO_EIG_TOL) -> int:
    """Multiplicity of the eigenvalue zero at the relative threshold."""
    values = hermitian_eigen(m).values
    if values.size == 0:
        return 0
    cut = tol * max(1.0, float(values[-1]))
    return int(np.sum(values <= cut))


def is_psd(m, tol=PSD_TOL) -> bool:
    a = as_matrix(m)
    values = hermitian_eigen(a).values
    if values.size == 0:
        return True
    return bool(values[0] >= -tol * (1.0 + frobenius(a)))
