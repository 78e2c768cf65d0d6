"""Adjacency, Laplacian, signless Laplacian and incidence matrices.

All matrices are built from the graph record directly; the Hermitian
structure ``a_ji = conj(a_ij)`` holds by construction for every kind.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import DimensionMismatch, DisconnectedGraph, GraphError, SizeLimitExceeded
from .graph_model import (
    GraphKind,
    WeightedDigraph,
    enumerate_simple_paths,
    is_connected,
    principal_sqrt,
)

PATH_PREDICATE_MAX_N = 10
PATH_WEIGHT_TOL = 1e-9


class MatrixFlavor(enum.Enum):
    COMBINATORIAL = "L"
    SIGNLESS = "Q"

    @property
    def sign(self) -> int:
        """+1 for Q = D + A, -1 for L = D - A."""
        return 1 if self is MatrixFlavor.SIGNLESS else -1

    @classmethod
    def parse(cls, value) -> MatrixFlavor:
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        if key in ("L", "COMBINATORIAL"):
            return cls.COMBINATORIAL
        if key in ("Q", "SIGNLESS"):
            return cls.SIGNLESS
        raise ValueError(f"unknown matrix flavor {value!r}")


def _vertex_roots(g: WeightedDigraph) -> list[complex]:
    return [principal_sqrt(w) for w in g.vertex_weights]


def adjacency(g: WeightedDigraph) -> np.ndarray:
    """Hermitian adjacency matrix.

    For vertex-weighted graphs the entry of edge ``(i, j)`` is
    ``conj(s_i) * s_j`` with ``s = principal_sqrt(w)``, which squares to
    ``conj(w_i) * w_j`` and coincides with its principal root whenever
    ``|arg w_j - arg w_i| < pi``.
    """
    n = g.n
    a = np.zeros((n, n), dtype=np.complex128)
    if g.kind is GraphKind.VERTEX_WEIGHTED:
        s = _vertex_roots(g)
        for e in g.edges:
            val = s[e.i - 1].conjugate() * s[e.j - 1]
            a[e.i - 1, e.j - 1] = val
            a[e.j - 1, e.i - 1] = val.conjugate()
    else:
        for e in g.edges:
            a[e.i - 1, e.j - 1] = e.w
            a[e.j - 1, e.i - 1] = e.w.conjugate()
        for lp in g.loops:
            a[lp.i - 1, lp.i - 1] = lp.r
    return a


def degree_matrix(g: WeightedDigraph) -> np.ndarray:
    return np.diag(np.asarray(g.degrees, dtype=np.float64)).astype(np.complex128)


def laplacian(g: WeightedDigraph, flavor=MatrixFlavor.COMBINATORIAL) -> np.ndarray:
    """``D - A`` or ``D + A``.

    Loops count once in the degree and once in ``A``, so they cancel on the
    diagonal of ``L`` and contribute ``2r`` to the diagonal of ``Q``.
    """
    flavor = MatrixFlavor.parse(flavor)
    return degree_matrix(g) + flavor.sign * adjacency(g)


def incidence(g: WeightedDigraph, flavor=MatrixFlavor.COMBINATORIAL) -> np.ndarray:
    """Vertex-by-edge matrix ``M`` with ``M M^H`` equal to the Laplacian.

    Columns follow the sorted edge list; signless matrices of looped graphs
    get one extra column per loop, holding ``sqrt(2r)`` at the looped vertex.
    """
    flavor = MatrixFlavor.parse(flavor)
    sign = flavor.sign
    n = g.n
    with_loops = g.kind is GraphKind.EDGE_LOOP and flavor is MatrixFlavor.SIGNLESS
    m = len(g.edges) + (len(g.loops) if with_loops else 0)
    inc = np.zeros((n, m), dtype=np.complex128)
    if g.kind is GraphKind.EDGE_UNIT:
        for col, e in enumerate(g.edges):
            inc[e.i - 1, col] = 1.0
            inc[e.j - 1, col] = sign * e.w.conjugate()
    elif g.kind is GraphKind.VERTEX_WEIGHTED:
        s = _vertex_roots(g)
        for col, e in enumerate(g.edges):
            inc[e.i - 1, col] = s[e.j - 1]
            inc[e.j - 1, col] = sign * s[e.i - 1]
    else:
        for col, e in enumerate(g.edges):
            root = principal_sqrt(e.w)
            inc[e.i - 1, col] = root
            inc[e.j - 1, col] = sign * root.conjugate()
        if with_loops:
            base = len(g.edges)
            for k, lp in enumerate(g.loops):
                inc[lp.i - 1, base + k] = np.sqrt(2.0 * lp.r)
    return inc


def quad_form(g: WeightedDigraph, flavor, x) -> float:
    """Edge-sum form of ``x^H K x``, evaluated term by term.

    Vertex-weighted graphs use ``|x_i conj(s_j) -+ x_j conj(s_i)|^2``.
    Looped graphs use normalized weights ``w / |w|`` and, for ``Q``, add
    ``2 r |x_i|^2`` per loop; this equals ``x^H (D' +- A') x`` where ``A'``
    is the adjacency with normalized edge weights.
    """
    flavor = MatrixFlavor.parse(flavor)
    sign = flavor.sign
    x = np.asarray(x, dtype=np.complex128).ravel()
    if x.shape[0] != g.n:
        raise DimensionMismatch(f"vector has length {x.shape[0]}, graph has {g.n} vertices")
    total = 0.0
    if g.kind is GraphKind.VERTEX_WEIGHTED:
        s = _vertex_roots(g)
        for e in g.edges:
            xi, xj = x[e.i - 1], x[e.j - 1]
            total += abs(xi * s[e.j - 1].conjugate() + sign * xj * s[e.i - 1].conjugate()) ** 2
    else:
        for e in g.edges:
            w = e.w if g.kind is GraphKind.EDGE_UNIT else e.w / abs(e.w)
            total += abs(x[e.i - 1] + sign * w * x[e.j - 1]) ** 2
        if flavor is MatrixFlavor.SIGNLESS:
            for lp in g.loops:
                total += 2.0 * lp.r * abs(x[lp.i - 1]) ** 2
    return float(total)


def normalized_weight_graph(g: WeightedDigraph) -> WeightedDigraph:
    """Copy of a looped graph with every edge weight scaled to unit modulus."""
    if g.kind is not GraphKind.EDGE_LOOP:
        return g
    edges = tuple((e.i, e.j, e.w / abs(e.w)) for e in g.edges)
    return WeightedDigraph.edge_loop(g.n, edges, g.loops)


def _signed_path_value(path, flavor, normalize, literal):
    val = 1 + 0j
    for w in path.weights:
        val *= w / abs(w) if normalize else w
    if flavor is MatrixFlavor.SIGNLESS or literal:
        if path.length % 2:
            val = -val
    return val


def zero_eig_path_predicate(g: WeightedDigraph, flavor=MatrixFlavor.COMBINATORIAL, literal=False) -> bool:
    """Path-weight test for a zero eigenvalue of ``L`` or ``Q``.

    For every pair of vertices all simple skeleton paths must agree on
    ``W(P)`` (for ``L``) or on ``(-1)^len(P) W(P)`` (for ``Q``). Looped graphs
    use normalized weights, and a loop rules out a zero eigenvalue of ``Q``.

    ``literal=True`` applies the parity rule to ``L`` as well; that reading
    disagrees with the spectrum (an unweighted triangle has ``0`` in its
    Laplacian spectrum but fails the parity rule) and is kept for comparison.

    Raises
    ------
    DisconnectedGraph
    SizeLimitExceeded
        For more than 10 vertices.
    GraphError
        For vertex-weighted graphs.
    """
    flavor = MatrixFlavor.parse(flavor)
    if g.kind is GraphKind.VERTEX_WEIGHTED:
        raise GraphError("path predicate applies to edge-weighted graphs only")
    if g.n > PATH_PREDICATE_MAX_N:
        raise SizeLimitExceeded(f"path predicate is limited to n <= {PATH_PREDICATE_MAX_N}")
    if not is_connected(g):
        raise DisconnectedGraph("path predicate needs a connected graph")
    if flavor is MatrixFlavor.SIGNLESS and g.loops:
        return False
    normalize = g.kind is GraphKind.EDGE_LOOP
    for u in range(1, g.n + 1):
        for v in range(u + 1, g.n + 1):
            paths = enumerate_simple_paths(g, u, v, g.n - 1)
            ref = _signed_path_value(paths[0], flavor, normalize, literal)
            for p in paths[1:]:
                if abs(_signed_path_value(p, flavor, normalize, literal) - ref) > PATH_WEIGHT_TOL:
                    return False
    return True


def vertex_weighted_kernel_vector(g: WeightedDigraph) -> np.ndarray:
    """Null vector ``(conj(sqrt w_1), ..., conj(sqrt w_n))`` of ``L``.

    For real positive weights this is ``W^{1/2} 1``; for complex weights the
    conjugate roots are what ``L`` annihilates.
    """
    if g.kind is not GraphKind.VERTEX_WEIGHTED:
        raise GraphError("kernel vector is defined for vertex-weighted graphs")
    return np.array([s.conjugate() for s in _vertex_roots(g)], dtype=np.complex128)
