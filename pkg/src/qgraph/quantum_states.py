"""Density matrices of graphs, purity, spectral mixtures and the PPT test."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegreeZero, DimensionMismatch, NotDensityMatrix, NotPure, NotUnitary
from .graph_model import WeightedDigraph
from .laplacians import MatrixFlavor, laplacian
from .spectra import (
    PSD_TOL,
    ZERO_EIG_TOL,
    as_matrix,
    frobenius,
    hermitian_eigen,
    partial_transpose_b,
)

PURE_TOL = 1e-9
TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10


class StateKind(enum.Enum):
    PURE = "Pure"
    MIXED = "Mixed"


@dataclass(frozen=True)
class StateClass:
    kind: StateKind
    purity: float

    @property
    def is_pure(self) -> bool:
        return self.kind is StateKind.PURE


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semi-definite, unit-trace matrix.

    The constructor validates all three properties and raises
    :class:`NotDensityMatrix` otherwise.
    """

    mat: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.mat)
        if a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise NotDensityMatrix(f"density matrix must be square and nonempty, got {a.shape}")
        scale = 1.0 + frobenius(a)
        if float(np.max(np.abs(a - a.conj().T))) > HERMITIAN_TOL * scale:
            raise NotDensityMatrix("matrix is not Hermitian")
        if abs(np.trace(a) - 1.0) > TRACE_TOL:
            raise NotDensityMatrix(f"trace is {np.trace(a)}, not 1")
        a = 0.5 * (a + a.conj().T)
        if hermitian_eigen(a).values[0] < -PSD_TOL * scale:
            raise NotDensityMatrix("matrix is not positive semi-definite")
        a.setflags(write=False)
        object.__setattr__(self, "mat", a)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.mat.shape == other.mat.shape and bool(np.array_equal(self.mat, other.mat))

    def __hash__(self):
        return hash(self.mat.tobytes())


@dataclass(frozen=True)
class SpectralMixture:
    """``rho = sum p_k |psi_k><psi_k|`` with orthonormal ``psi_k``."""

    terms: tuple[tuple[float, np.ndarray], ...]

    def weights(self) -> np.ndarray:
        return np.array([p for p, _ in self.terms])

    def reconstruct(self) -> np.ndarray:
        if not self.terms:
            return np.zeros((0, 0), dtype=np.complex128)
        dim = self.terms[0][1].shape[0]
        out = np.zeros((dim, dim), dtype=np.complex128)
        for p, psi in self.terms:
            out += p * np.outer(psi, psi.conj())
        return out


def normalize_by_trace(k) -> DensityMatrix:
    k = as_matrix(k)
    tr = float(np.trace(k).real)
    if tr <= 0.0:
        raise DegreeZero("matrix has zero trace; no density matrix")
    return DensityMatrix(k / tr)


def density_from_graph(g: WeightedDigraph, flavor=MatrixFlavor.COMBINATORIAL) -> DensityMatrix:
    """``K(G) / Tr K(G)`` for ``K`` in ``{L, Q}``.

    For loop-free graphs the trace is the total degree. With loops the trace
    differs from the total degree (loops cancel in ``L`` and double in
    ``Q``), and dividing by the trace is what keeps the result unit-trace.

    Raises
    ------
    DegreeZero
        When the graph has no edges (and, for ``Q``, no loops).
    """
    return normalize_by_trace(laplacian(g, flavor))


def purity(rho: DensityMatrix) -> float:
    """``Tr(rho^2)``, computed as the squared Frobenius norm."""
    return float(np.sum(np.abs(rho.mat) ** 2))


def classify(rho: DensityMatrix) -> StateClass:
    p = purity(rho)
    kind = StateKind.PURE if abs(p - 1.0) <= PURE_TOL else StateKind.MIXED
    return StateClass(kind, p)


def spectral_mixture(rho: DensityMatrix) -> SpectralMixture:
    """Eigen-decomposition of ``rho`` keeping only non-negligible weights.

    Terms come in descending weight order.
    """
    eig = hermitian_eigen(rho.mat)
    values = eig.values
    cut = ZERO_EIG_TOL * max(1.0, float(values[-1]))
    terms = []
    for k in range(values.size - 1, -1, -1):
        if values[k] > cut:
            terms.append((float(values[k]), eig.vectors[:, k].copy()))
    return SpectralMixture(tuple(terms))


def pure_state_vector(rho: DensityMatrix) -> np.ndarray:
    """The unit vector ``psi`` with ``rho = |psi><psi|``.

    The global phase makes the first entry of largest modulus real and
    nonnegative.

    Raises
    ------
    NotPure
    """
    cls = classify(rho)
    if not cls.is_pure:
        raise NotPure(f"state has purity {cls.purity:.12g}")
    eig = hermitian_eigen(rho.mat)
    return eig.vectors[:, -1].copy()


def conjugate_by_unitary(rho: DensityMatrix, u) -> DensityMatrix:
    """``U rho U^H``.

    Raises
    ------
    DimensionMismatch
    NotUnitary
        If ``max|U^H U - I| > 1e-10``.
    """
    u = as_matrix(u)
    if u.shape != rho.mat.shape:
        raise DimensionMismatch(f"unitary {u.shape} does not match state {rho.mat.shape}")
    if float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) > UNITARY_TOL:
        raise NotUnitary("matrix is not unitary")
    out = u @ rho.mat @ u.conj().T
    return DensityMatrix(0.5 * (out + out.conj().T))


@dataclass(frozen=True)
class PPTVerdict:
    separable: bool
    min_eigenvalue: float
    borderline: bool


def ppt_verdict(rho: DensityMatrix, tol=PSD_TOL) -> PPTVerdict:
    """Peres-Horodecki test for a two-qubit state.

    ``borderline`` flags a smallest partial-transpose eigenvalue that is
    negative beyond roundoff (``1e-13`` relative) but within ``tol``.
    """
    if rho.dim != 4:
        raise DimensionMismatch(f"PPT test is for two qubits (4x4), got {rho.dim}x{rho.dim}")
    pt = partial_transpose_b(rho.mat)
    lam = float(hermitian_eigen(pt).values[0])
    scale = 1.0 + frobenius(pt)
    bound = -tol * scale
    return PPTVerdict(lam >= bound, lam, bound <= lam < -1e-13 * scale)


def ppt_separable_2q(rho: DensityMatrix) -> bool:
    return ppt_verdict(rho).separable
