"""The ``.qg`` text format.

One directive per line; ``#`` starts a comment; blank lines are ignored::

    graph edge-unit n=4
    edge 1 2 1
    edge 1 4 0+1i
    edge 2 3 1@1.5707963267948966

Directives: ``graph KIND n=INT`` (first), ``edge I J [COMPLEX]``,
``loop I POSREAL`` (edge-loop only) and ``vw I COMPLEX`` (vertex kind only,
one per vertex). Complex literals are ``a``, ``bi``, ``a+bi``, ``a-bi`` or
polar ``r@theta`` with theta in radians.
"""
from __future__ import annotations

import math
import re

from .errors import GraphError, ParseError
from .graph_model import Edge, GraphKind, Loop, WeightedDigraph

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_UNUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_RE_REAL = re.compile(rf"^({_NUM})$")
_RE_IMAG = re.compile(rf"^([+-]?)({_UNUM})?i$")
_RE_RECT = re.compile(rf"^({_NUM})([+-])({_UNUM})?i$")
_RE_POLAR = re.compile(rf"^({_NUM})@({_NUM})$")
_RE_INT = re.compile(r"^[+]?\d+$")

_KINDS = {k.value: k for k in GraphKind}


def parse_complex(token: str) -> tuple[complex, bool]:
    """Parse a complex literal.

    Returns ``(value, exact_unit)`` where ``exact_unit`` is true for polar
    literals with modulus exactly 1.

    Raises
    ------
    ValueError
    """
    m = _RE_REAL.match(token)
    if m:
        return complex(float(m.group(1)), 0.0), False
    m = _RE_IMAG.match(token)
    if m:
        mag = float(m.group(2)) if m.group(2) else 1.0
        return complex(0.0, -mag if m.group(1) == "-" else mag), False
    m = _RE_RECT.match(token)
    if m:
        mag = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), -mag if m.group(2) == "-" else mag), False
    m = _RE_POLAR.match(token)
    if m:
        r, theta = float(m.group(1)), float(m.group(2))
        if not (math.isfinite(r) and math.isfinite(theta)):
            raise ValueError(f"non-finite polar literal {token!r}")
        return complex(r * math.cos(theta), r * math.sin(theta)), r == 1.0
    raise ValueError(f"not a complex literal: {token!r}")


def format_real(x: float) -> str:
    return f"{x:.17g}"


def format_complex(z: complex) -> str:
    """Rectangular literal with 17 significant digits, e.g. ``0+1i``."""
    z = complex(z)
    re_s = format_real(z.real + 0.0)
    if z.imag == 0.0:
        return re_s
    im = z.imag
    sign = "-" if im < 0 else "+"
    return f"{re_s}{sign}{format_real(abs(im))}i"


class _Line:
    def __init__(self, lineno, raw):
        self.lineno = lineno
        self.raw = raw
        body = raw.split("#", 1)[0]
        self.tokens = []
        for m in re.finditer(r"\S+", body):
            self.tokens.append((m.group(0), m.start() + 1))

    def error(self, idx, message, kind="Syntax"):
        col = self.tokens[idx][1] if idx < len(self.tokens) else len(self.raw.rstrip()) + 1
        return ParseError(self.lineno, col, message, kind)


def _vertex(line, idx, n):
    tok = line.tokens[idx][0]
    if not _RE_INT.match(tok):
        raise line.error(idx, f"expected a vertex number, got {tok!r}")
    v = int(tok)
    if not 1 <= v <= n:
        raise line.error(idx, f"vertex {v} outside 1..{n}", "Semantic")
    return v


def _complex(line, idx):
    tok = line.tokens[idx][0]
    try:
        value, exact = parse_complex(tok)
    except ValueError:
        raise line.error(idx, f"bad complex literal {tok!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise line.error(idx, f"complex literal {tok!r} overflows", "Semantic")
    return value, exact


def parse_graph(text) -> WeightedDigraph:
    """Parse ``.qg`` text (``str`` or UTF-8 ``bytes``).

    Raises
    ------
    ParseError
        ``kind="Syntax"`` for malformed lines, ``"Semantic"`` for invariant
        violations. Never raises anything else.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(1, 1, f"input is not valid UTF-8: {exc.reason}") from None
    try:
        return _parse(text)
    except ParseError:
        raise
    except (ValueError, OverflowError, TypeError) as exc:  # pragma: no cover - defensive
        raise ParseError(1, 1, str(exc), "Semantic") from None


def _parse(text: str) -> WeightedDigraph:
    lines = [_Line(k, raw) for k, raw in enumerate(text.splitlines(), start=1)]
    lines = [ln for ln in lines if ln.tokens]
    if not lines:
        raise ParseError(1, 1, "empty input: expected 'graph KIND n=INT'")

    head = lines[0]
    if head.tokens[0][0] != "graph":
        raise head.error(0, "first directive must be 'graph'")
    if len(head.tokens) != 3:
        raise head.error(min(len(head.tokens), 3), "expected 'graph KIND n=INT'")
    kind_tok = head.tokens[1][0]
    if kind_tok not in _KINDS:
        raise head.error(1, f"unknown graph kind {kind_tok!r}")
    kind = _KINDS[kind_tok]
    n_tok = head.tokens[2][0]
    if not (n_tok.startswith("n=") and _RE_INT.match(n_tok[2:])):
        raise head.error(2, f"expected n=INT, got {n_tok!r}")
    n = int(n_tok[2:])
    if n < 1:
        raise head.error(2, "vertex count must be at least 1", "Semantic")
    if n > 100_000:
        raise head.error(2, "vertex count is unreasonably large", "Semantic")

    edges, loops, vweights = [], {}, {}
    pairs = {}
    unit_exact = {}
    for line in lines[1:]:
        op = line.tokens[0][0]
        nt = len(line.tokens)
        if op == "edge":
            if kind is GraphKind.VERTEX_WEIGHTED:
                if nt != 3:
                    if nt == 4:
                        raise line.error(3, "vertex-weighted edges take no weight", "Semantic")
                    raise line.error(min(nt, 3), "expected 'edge I J'")
            elif nt != 4:
                if nt == 3:
                    raise line.error(3, "edge weight is required for this graph kind", "Semantic")
                raise line.error(min(nt, 4), "expected 'edge I J WEIGHT'")
            i, j = _vertex(line, 1, n), _vertex(line, 2, n)
            if i == j:
                raise line.error(2, "use 'loop' for self-loops", "Semantic")
            key = frozenset((i, j))
            if key in pairs:
                raise line.error(0, f"duplicate edge between {i} and {j} (line {pairs[key]})", "Semantic")
            pairs[key] = line.lineno
            if kind is GraphKind.VERTEX_WEIGHTED:
                edges.append(Edge(i, j))
                continue
            w, exact = _complex(line, 3)
            if kind is GraphKind.EDGE_UNIT and not exact and abs(abs(w) - 1.0) > 1e-12:
                raise line.error(3, f"edge-unit weight {w} does not have modulus 1", "Semantic")
            if kind is GraphKind.EDGE_LOOP and w == 0:
                raise line.error(3, "edge weight must be nonzero", "Semantic")
            edges.append(Edge(i, j, w))
            unit_exact[len(edges) - 1] = exact
        elif op == "loop":
            if kind is not GraphKind.EDGE_LOOP:
                raise line.error(0, "loops are only allowed in edge-loop graphs", "Semantic")
            if nt != 3:
                raise line.error(min(nt, 3), "expected 'loop I R'")
            i = _vertex(line, 1, n)
            tok = line.tokens[2][0]
            if not _RE_REAL.match(tok):
                raise line.error(2, f"expected a positive real, got {tok!r}")
            r = float(tok)
            if not (r > 0 and math.isfinite(r)):
                raise line.error(2, f"loop weight must be positive, got {tok}", "Semantic")
            if i in loops:
                raise line.error(0, f"second loop at vertex {i}", "Semantic")
            loops[i] = r
        elif op == "vw":
            if kind is not GraphKind.VERTEX_WEIGHTED:
                raise line.error(0, "vertex weights are only allowed in vertex graphs", "Semantic")
            if nt != 3:
                raise line.error(min(nt, 3), "expected 'vw I COMPLEX'")
            i = _vertex(line, 1, n)
            w, _ = _complex(line, 2)
            if w == 0:
                raise line.error(2, "vertex weight must be nonzero", "Semantic")
            if i in vweights:
                raise line.error(0, f"second weight for vertex {i}", "Semantic")
            vweights[i] = w
        elif op == "graph":
            raise line.error(0, "only one 'graph' header is allowed")
        else:
            raise line.error(0, f"unknown directive {op!r}")

    if kind is GraphKind.VERTEX_WEIGHTED:
        missing = [v for v in range(1, n + 1) if v not in vweights]
        if missing:
            shown = ", ".join(map(str, missing[:10]))
            raise ParseError(head.lineno, head.tokens[2][1], f"missing vertex weights for {shown}", "Semantic")
        vw = tuple(vweights[v] for v in range(1, n + 1))
    else:
        vw = None

    if kind is GraphKind.EDGE_UNIT:
        # exact polar unit weights may be a few ulps off modulus 1; renormalize them
        edges = [Edge(e.i, e.j, e.w / abs(e.w)) if unit_exact.get(k) else e for k, e in enumerate(edges)]
    try:
        return WeightedDigraph(kind, n, tuple(edges), tuple(Loop(i, r) for i, r in loops.items()), vw)
    except GraphError as exc:
        raise ParseError(head.lineno, 1, str(exc), "Semantic") from None


def serialize_graph(g: WeightedDigraph) -> str:
    """Canonical text: header, ``vw`` lines, edges by ``(i, j)``, loops."""
    out = [f"graph {g.kind.value} n={g.n}"]
    if g.vertex_weights is not None:
        for v, w in enumerate(g.vertex_weights, start=1):
            out.append(f"vw {v} {format_complex(w)}")
    for e in g.edges:
        if g.kind is GraphKind.VERTEX_WEIGHTED:
            out.append(f"edge {e.i} {e.j}")
        else:
            out.append(f"edge {e.i} {e.j} {format_complex(e.w)}")
    for lp in g.loops:
        out.append(f"loop {lp.i} {format_real(lp.r)}")
    return "\n".join(out) + "\n"
