"""Physical readings of graph matrices.

Heat-style diffusion on the skeleton, the stationary distribution of a
weighted random walk, the Coates determinant and the permanent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    DegreeZero,
    DimensionMismatch,
    DisconnectedGraph,
    GraphError,
    SizeLimitExceeded,
    StabilityError,
)
from .graph_model import GraphKind, WeightedDigraph, is_connected
from .spectra import as_matrix

COATES_MAX_N = 10
PERMANENT_MAX_N = 12
_REAL_TOL = 1e-12


@dataclass(frozen=True)
class DiffusionState:
    """Amount of the diffusing quantity per vertex after time ``t``."""

    psi: np.ndarray
    t: float


def _real_weights(g: WeightedDigraph) -> list[float]:
    if g.kind is GraphKind.VERTEX_WEIGHTED:
        raise GraphError("expected an edge-weighted graph")
    if g.loops:
        raise GraphError("loops are not supported here")
    out = []
    for e in g.edges:
        if abs(e.w.imag) > _REAL_TOL or e.w.real <= 0.0:
            raise GraphError(f"edge ({e.i}, {e.j}) weight {e.w} is not real and positive")
        out.append(e.w.real)
    return out


def skeleton_laplacian(g: WeightedDigraph) -> np.ndarray:
    """Real ``D - A`` of an undirected unit-weight graph."""
    weights = _real_weights(g)
    if any(abs(w - 1.0) > _REAL_TOL for w in weights):
        raise GraphError("diffusion needs unit edge weights")
    lap = np.zeros((g.n, g.n))
    for e in g.edges:
        i, j = e.i - 1, e.j - 1
        lap[i, j] -= 1.0
        lap[j, i] -= 1.0
        lap[i, i] += 1.0
        lap[j, j] += 1.0
    return lap


def diffuse(g: WeightedDigraph, psi0, alpha: float, dt: float, steps: int) -> DiffusionState:
    """Integrate ``dpsi/dt = alpha (A - D) psi`` with explicit Euler.

    Parameters
    ----------
    g : WeightedDigraph
        Unit real edge weights, no loops.
    psi0 : array_like
        Initial amounts, one per vertex.
    alpha : float
        Nonnegative diffusion constant.
    dt : float
        Step size; ``dt * alpha * max_degree`` must stay below 1.
    steps : int

    Raises
    ------
    DimensionMismatch
    StabilityError
    """
    lap = skeleton_laplacian(g)
    psi = np.asarray(psi0, dtype=np.float64).ravel()
    if psi.shape[0] != g.n:
        raise DimensionMismatch(f"psi0 has length {psi.shape[0]}, graph has {g.n} vertices")
    if not np.all(np.isfinite(psi)):
        raise ValueError("psi0 has non-finite entries")
    if not (np.isfinite(alpha) and alpha >= 0.0):
        raise StabilityError(f"alpha must be finite and nonnegative, got {alpha}")
    if not (np.isfinite(dt) and dt > 0.0):
        raise StabilityError(f"dt must be positive, got {dt}")
    if int(steps) != steps or steps < 0:
        raise ValueError("steps must be a nonnegative integer")
    dmax = float(np.max(np.diag(lap))) if g.n else 0.0
    if dt * alpha * dmax >= 1.0:
        raise StabilityError(f"dt*alpha*max_degree = {dt * alpha * dmax:.6g} must be < 1")
    step = np.eye(g.n) - (dt * alpha) * lap
    for _ in range(int(steps)):
        psi = step @ psi
    return DiffusionState(psi, float(steps) * dt)


def _strengths(g):
    weights = _real_weights(g)
    s = np.zeros(g.n)
    for e, w in zip(g.edges, weights):
        s[e.i - 1] += w
        s[e.j - 1] += w
    return s, float(sum(weights))


def transition_matrix(g: WeightedDigraph) -> np.ndarray:
    """``p_ij = w_ij / sum_k w_ik`` for the walk on the weighted skeleton."""
    s, _ = _strengths(g)
    if np.any(s <= 0.0):
        raise DegreeZero("a vertex has zero strength")
    p = np.zeros((g.n, g.n))
    for e, w in zip(g.edges, _real_weights(g)):
        p[e.i - 1, e.j - 1] = w
        p[e.j - 1, e.i - 1] = w
    return p / s[:, None]


def stationary_distribution(g: WeightedDigraph) -> np.ndarray:
    """``gamma_j = w_j / (2 w)`` with vertex strengths ``w_j``.

    ``w`` is the total edge weight, so ``sum_j w_j = 2 w`` and ``gamma``
    sums to one.

    Raises
    ------
    DisconnectedGraph
    DegreeZero
        When some vertex has no incident weight.
    GraphError
        For complex, nonpositive or looped weights.
    """
    s, total = _strengths(g)
    if not is_connected(g):
        raise DisconnectedGraph("random walk needs a connected graph")
    if np.any(s <= 0.0):
        raise DegreeZero("a vertex has zero strength")
    return s / (2.0 * total)


def _square(a, limit, what):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{what} needs a square matrix, got {a.shape}")
    if a.shape[0] > limit:
        raise SizeLimitExceeded(f"{what} is limited to n <= {limit}")
    return np.ascontiguousarray(a)


def coates_determinant(a) -> complex:
    """Determinant as a signed sum over linear subgraphs of the Coates digraph.

    ``det A = (-1)^n sum_L (-1)^{c(L)} w(L)`` where ``L`` ranges over the
    spanning cycle covers supported on nonzero entries and ``c(L)`` counts
    their cycles.
    """
    return complex(_kernels.coates_sum(_square(a, COATES_MAX_N, "Coates determinant")))


def permanent(a) -> complex:
    """``sum_sigma prod_i a[i, sigma(i)]`` via Ryser's formula."""
    return complex(_kernels.permanent_ryser(_square(a, PERMANENT_MAX_N, "permanent")))
