"""Complex-weighted digraphs in three flavors.

* ``EDGE_UNIT``: edges carry complex weights of modulus one.
* ``VERTEX_WEIGHTED``: vertices carry nonzero complex weights; edges only
  record a direction.
* ``EDGE_LOOP``: edges carry arbitrary nonzero complex weights and vertices
  may carry a loop with a positive real weight.

Vertices are numbered ``1..n`` everywhere in the public interface.
"""
from __future__ import annotations

import cmath
import enum
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .errors import GraphError

UNIT_MODULUS_TOL = 1e-12


class GraphKind(enum.Enum):
    EDGE_UNIT = "edge-unit"
    VERTEX_WEIGHTED = "vertex"
    EDGE_LOOP = "edge-loop"


class Edge(NamedTuple):
    i: int
    j: int
    w: complex = 1 + 0j


class Loop(NamedTuple):
    i: int
    r: float


class Path(NamedTuple):
    """A simple path in the undirected skeleton.

    ``weights[k]`` is the traversal weight of the step
    ``vertices[k] -> vertices[k + 1]``: the edge weight when the step follows
    the edge direction and its conjugate when it runs against it.
    """

    vertices: tuple[int, ...]
    weights: tuple[complex, ...]

    @property
    def length(self) -> int:
        return len(self.weights)

    @property
    def weight(self) -> complex:
        out = 1 + 0j
        for w in self.weights:
            out *= w
        return out


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class WeightedDigraph:
    """Immutable weighted digraph.

    Edges are stored sorted by ``(i, j)`` and loops by vertex, so two graphs
    with the same content compare equal regardless of construction order.
    Use the ``edge_unit``, ``vertex_weighted`` and ``edge_loop`` constructors
    rather than calling the class directly.
    """

    kind: GraphKind
    n: int
    edges: tuple[Edge, ...] = ()
    loops: tuple[Loop, ...] = ()
    vertex_weights: tuple[complex, ...] | None = field(default=None)

    def __post_init__(self):
        if not isinstance(self.kind, GraphKind):
            raise GraphError(f"unknown graph kind {self.kind!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        edges = tuple(sorted(Edge(int(e[0]), int(e[1]), complex(e[2]) if len(e) > 2 else 1 + 0j)
                             for e in self.edges))
        loops = tuple(sorted(Loop(int(lp[0]), float(lp[1])) for lp in self.loops))
        vw = None if self.vertex_weights is None else tuple(complex(w) for w in self.vertex_weights)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "loops", loops)
        object.__setattr__(self, "vertex_weights", vw)
        self._validate()

    def _validate(self):
        n = self.n
        seen = set()
        for e in self.edges:
            if not (1 <= e.i <= n and 1 <= e.j <= n):
                raise GraphError(f"edge ({e.i}, {e.j}) has a vertex outside 1..{n}")
            if e.i == e.j:
                raise GraphError(f"edge ({e.i}, {e.j}) is a loop; loops are separate records")
            key = frozenset((e.i, e.j))
            if key in seen:
                raise GraphError(f"more than one edge between {e.i} and {e.j}")
            seen.add(key)
            if not _finite(e.w):
                raise GraphError(f"edge ({e.i}, {e.j}) has a non-finite weight")

        if self.kind is GraphKind.EDGE_UNIT:
            for e in self.edges:
                if abs(abs(e.w) - 1.0) > UNIT_MODULUS_TOL:
                    raise GraphError(f"edge ({e.i}, {e.j}) weight {e.w} is not of unit modulus")
            if self.loops:
                raise GraphError("edge-unit graphs have no loops")
            if self.vertex_weights is not None:
                raise GraphError("edge-unit graphs have no vertex weights")

        elif self.kind is GraphKind.VERTEX_WEIGHTED:
            if self.loops:
                raise GraphError("vertex-weighted graphs have no loops")
            if self.vertex_weights is None or len(self.vertex_weights) != n:
                raise GraphError("vertex-weighted graphs need one weight per vertex")
            for v, w in enumerate(self.vertex_weights, start=1):
                if w == 0 or not _finite(w):
                    raise GraphError(f"vertex {v} weight must be finite and nonzero")

        else:
            for e in self.edges:
                if e.w == 0:
                    raise GraphError(f"edge ({e.i}, {e.j}) has zero weight")
            if self.vertex_weights is not None:
                raise GraphError("edge-loop graphs have no vertex weights")
            looped = set()
            for lp in self.loops:
                if not 1 <= lp.i <= n:
                    raise GraphError(f"loop at {lp.i} is outside 1..{n}")
                if lp.i in looped:
                    raise GraphError(f"more than one loop at vertex {lp.i}")
                looped.add(lp.i)
                if not (lp.r > 0 and math.isfinite(lp.r)):
                    raise GraphError(f"loop weight at {lp.i} must be positive, got {lp.r}")

    # constructors -------------------------------------------------------

    @classmethod
    def edge_unit(cls, n, edges=()):
        return cls(GraphKind.EDGE_UNIT, n, tuple(edges))

    @classmethod
    def vertex_weighted(cls, weights, edges=()):
        """``edges`` are ``(i, j)`` direction pairs."""
        weights = tuple(weights)
        return cls(GraphKind.VERTEX_WEIGHTED, len(weights),
                   tuple(Edge(e[0], e[1]) for e in edges), (), weights)

    @classmethod
    def edge_loop(cls, n, edges=(), loops=()):
        return cls(GraphKind.EDGE_LOOP, n, tuple(edges), tuple(loops))

    # structure ----------------------------------------------------------

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Skeleton neighbors; index 0 is unused so ``neighbors[v]`` works."""
        nb = [[] for _ in range(self.n + 1)]
        for e in self.edges:
            nb[e.i].append(e.j)
            nb[e.j].append(e.i)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def degrees(self) -> tuple[float, ...]:
        """Degrees of vertices ``1..n`` (position 0 holds vertex 1)."""
        d = [0.0] * self.n
        if self.kind is GraphKind.VERTEX_WEIGHTED:
            vw = self.vertex_weights
            for e in self.edges:
                d[e.i - 1] += abs(vw[e.j - 1])
                d[e.j - 1] += abs(vw[e.i - 1])
        else:
            for e in self.edges:
                m = abs(e.w)
                d[e.i - 1] += m
                d[e.j - 1] += m
            for lp in self.loops:
                d[lp.i - 1] += lp.r
        return tuple(d)

    @property
    def loop_weights(self) -> dict[int, float]:
        return {lp.i: lp.r for lp in self.loops}

    def traversal_weight(self, a: int, b: int) -> complex:
        """Weight picked up when walking from ``a`` to adjacent ``b``."""
        for e in self.edges:
            if e.i == a and e.j == b:
                return self._edge_value(e)
            if e.i == b and e.j == a:
                return self._edge_value(e).conjugate()
        raise GraphError(f"vertices {a} and {b} are not adjacent")

    def _edge_value(self, e: Edge) -> complex:
        if self.kind is GraphKind.VERTEX_WEIGHTED:
            si = principal_sqrt(self.vertex_weights[e.i - 1])
            sj = principal_sqrt(self.vertex_weights[e.j - 1])
            return si.conjugate() * sj
        return e.w


def principal_sqrt(z: complex) -> complex:
    """Square root with argument in (-pi/2, pi/2].

    On the negative real axis the root is ``+i*sqrt(|z|)`` regardless of the
    sign of the zero imaginary part.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real < 0.0:
        return complex(0.0, math.sqrt(-z.real))
    return cmath.sqrt(z)


def _check_vertex(g: WeightedDigraph, v: int):
    if not isinstance(v, int) or not 1 <= v <= g.n:
        raise GraphError(f"vertex {v!r} outside 1..{g.n}")


def underlying_components(g: WeightedDigraph) -> list[tuple[int, ...]]:
    """Connected components of the undirected skeleton, loops ignored.

    Components are returned as sorted tuples ordered by their smallest vertex.
    """
    seen = [False] * (g.n + 1)
    comps = []
    for s in range(1, g.n + 1):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.neighbors[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(tuple(sorted(comp)))
    return comps


def is_connected(g: WeightedDigraph) -> bool:
    return len(underlying_components(g)) == 1


def degree(g: WeightedDigraph, v: int) -> float:
    _check_vertex(g, v)
    return g.degrees[v - 1]


def enumerate_simple_paths(g: WeightedDigraph, u: int, v: int, max_len: int | None = None) -> list[Path]:
    """All simple skeleton paths from ``u`` to ``v`` with at most ``max_len`` edges."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        raise GraphError("path endpoints must differ")
    if max_len is None:
        max_len = g.n - 1
    if max_len > g.n:
        raise GraphError(f"max_len {max_len} exceeds vertex count {g.n}")

    out: list[Path] = []
    stack_v = [u]
    stack_w: list[complex] = []
    on_path = {u}

    def dfs(a):
        if len(stack_w) >= max_len:
            return
        for b in g.neighbors[a]:
            if b in on_path:
                continue
            stack_v.append(b)
            stack_w.append(g.traversal_weight(a, b))
            if b == v:
                out.append(Path(tuple(stack_v), tuple(stack_w)))
            else:
                on_path.add(b)
                dfs(b)
                on_path.discard(b)
            stack_v.pop()
            stack_w.pop()

    dfs(u)
    return out


def has_odd_cycle(g: WeightedDigraph) -> bool:
    """True iff the skeleton is not bipartite."""
    color = [-1] * (g.n + 1)
    for s in range(1, g.n + 1):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in g.neighbors[a]:
                if color[b] < 0:
                    color[b] = 1 - color[a]
                    queue.append(b)
                elif color[b] == color[a]:
                    return True
    return False


def induced_subgraph(g: WeightedDigraph, vertices) -> WeightedDigraph:
    """Restriction of ``g`` to ``vertices``, relabelled ``1..k`` in sorted order."""
    vertices = sorted(vertices)
    index = {v: k for k, v in enumerate(vertices, start=1)}
    edges = [Edge(index[e.i], index[e.j], e.w) for e in g.edges if e.i in index and e.j in index]
    loops = [Loop(index[lp.i], lp.r) for lp in g.loops if lp.i in index]
    vw = None
    if g.vertex_weights is not None:
        vw = tuple(g.vertex_weights[v - 1] for v in vertices)
    return WeightedDigraph(g.kind, len(vertices), tuple(edges), tuple(loops), vw)
