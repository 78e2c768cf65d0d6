"""Property suites run by ``qgraph check``.

Each suite evaluates named properties over a list of graphs and aggregates
them into :class:`PropertyResult` records, keeping the first failing input
as a counterexample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeZero
from .graph_dsl import serialize_graph
from .graph_model import (
    Edge,
    GraphKind,
    Loop,
    WeightedDigraph,
    has_odd_cycle,
    induced_subgraph,
    underlying_components,
)
from .laplacians import (
    PATH_PREDICATE_MAX_N,
    MatrixFlavor,
    adjacency,
    incidence,
    laplacian,
    quad_form,
    zero_eig_path_predicate,
)
from .quantum_states import (
    DensityMatrix,
    classify,
    density_from_graph,
    ppt_verdict,
    purity,
    spectral_mixture,
)
from .spectra import ZERO_EIG_TOL, frobenius, hermitian_eigen, is_psd

SUITES = ("laplacian", "purity", "separability")
FACTOR_TOL = 1e-11
RESIDUAL_TOL = 1e-10
MIXTURE_TOL = 1e-10
# eigenvalues between these relative bounds are neither clearly zero nor clearly not
AMBIGUOUS_LOW = 1e-11
AMBIGUOUS_HIGH = 1e-6

_DISCRETE = (1 + 0j, -1 + 0j, 1j, -1j)
FLAVORS = (MatrixFlavor.COMBINATORIAL, MatrixFlavor.SIGNLESS)


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    failures: int = 0
    skipped: int = 0
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, detail=None):
        """Count one evaluation; ``ok=None`` marks it as not applicable."""
        if ok is None:
            self.skipped += 1
            return
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = detail() if callable(detail) else detail

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "skipped": self.skipped,
            "counterexample": self.counterexample,
        }


@dataclass
class SuiteReport:
    properties: dict[str, PropertyResult] = field(default_factory=dict)

    def prop(self, name) -> PropertyResult:
        if name not in self.properties:
            self.properties[name] = PropertyResult(name)
        return self.properties[name]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties.values())

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "properties": [p.to_json() for p in self.properties.values()],
        }


# random graphs ----------------------------------------------------------------

def _unit(rng) -> complex:
    if rng.random() < 0.5:
        return _DISCRETE[int(rng.integers(4))]
    return complex(np.exp(1j * rng.uniform(0.0, 2 * np.pi)))


def _nonzero(rng) -> complex:
    return _unit(rng) * float(rng.uniform(0.25, 3.0))


def random_graph(rng, kind: GraphKind, n: int, p_edge: float = 0.5,
                 p_loop: float = 0.3, connected: bool = False) -> WeightedDigraph:
    """Random graph of the given kind on ``n`` vertices.

    Weights mix the discrete set ``{1, -1, i, -i}`` with uniform phases;
    non-unit moduli are drawn from ``[0.25, 3]``. Edge directions are random.
    With ``connected=True`` a random spanning tree is laid down first.
    """
    pairs = set()
    if connected:
        order = [int(v) + 1 for v in rng.permutation(n)]
        for k in range(1, n):
            pairs.add(frozenset((order[k], order[int(rng.integers(k))])))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < p_edge:
                pairs.add(frozenset((i, j)))
    edges = []
    for pair in sorted(tuple(sorted(p)) for p in pairs):
        i, j = pair if rng.random() < 0.5 else pair[::-1]
        if kind is GraphKind.EDGE_UNIT:
            edges.append(Edge(i, j, _unit(rng)))
        elif kind is GraphKind.EDGE_LOOP:
            edges.append(Edge(i, j, _nonzero(rng)))
        else:
            edges.append(Edge(i, j))
    if kind is GraphKind.VERTEX_WEIGHTED:
        weights = [_nonzero(rng) for _ in range(n)]
        return WeightedDigraph(kind, n, tuple(edges), (), tuple(weights))
    loops = ()
    if kind is GraphKind.EDGE_LOOP:
        loops = tuple(Loop(v, float(rng.uniform(0.1, 3.0)))
                      for v in range(1, n + 1) if rng.random() < p_loop)
    return WeightedDigraph(kind, n, tuple(edges), loops)


def fuzz_graphs(n_max: int, trials: int, seed: int) -> list[WeightedDigraph]:
    """``trials`` random graphs cycling through the three kinds."""
    if n_max < 1:
        raise ValueError("n must be at least 1")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    kinds = list(GraphKind)
    out = []
    for t in range(trials):
        n = int(rng.integers(1, n_max + 1))
        out.append(random_graph(rng, kinds[t % 3], n, p_edge=float(rng.uniform(0.2, 0.8))))
    return out


# expected values ------------------------------------------------------------

def expected_kernel_dim(g: WeightedDigraph, flavor) -> int | None:
    """Zero-eigenvalue multiplicity predicted from the graph structure.

    ``None`` when a component is too large for the path predicate.
    """
    flavor = MatrixFlavor.parse(flavor)
    total = 0
    for comp in underlying_components(g):
        sub = induced_subgraph(g, comp)
        if g.kind is GraphKind.VERTEX_WEIGHTED:
            if flavor is MatrixFlavor.COMBINATORIAL or not has_odd_cycle(sub):
                total += 1
        else:
            if sub.n > PATH_PREDICATE_MAX_N:
                return None
            if zero_eig_path_predicate(sub, flavor):
                total += 1
    return total


def expected_pure(g: WeightedDigraph, flavor) -> bool:
    """Rank one iff exactly one skeleton edge (and, for ``Q``, no loops).

    Under ``Q`` a graph with no edges and a single loop is also rank one.
    """
    flavor = MatrixFlavor.parse(flavor)
    if flavor is MatrixFlavor.SIGNLESS and not g.edges:
        return len(g.loops) == 1
    if len(g.edges) != 1:
        return False
    return flavor is MatrixFlavor.COMBINATORIAL or not g.loops


def _zero_count(values) -> int:
    cut = ZERO_EIG_TOL * max(1.0, float(values[-1]))
    return int(np.sum(values <= cut))


def _ambiguous(values) -> bool:
    """Some eigenvalue sits too close to the zero threshold to call."""
    scale = max(1.0, float(values[-1]))
    return bool(np.any((np.abs(values) > AMBIGUOUS_LOW * scale) & (np.abs(values) < AMBIGUOUS_HIGH * scale)))


def _graph_detail(g, **extra):
    out = {"graph": serialize_graph(g)}
    out.update(extra)
    return out


# suites ------------------------------------------------------------------------

def laplacian_suite(graphs, report: SuiteReport | None = None, seed: int = 0) -> SuiteReport:
    report = report or SuiteReport()
    rng = np.random.default_rng(seed)
    for g in graphs:
        for flavor in FLAVORS:
            tag = flavor.value
            k = laplacian(g, flavor)
            m = incidence(g, flavor)
            err = float(np.max(np.abs(k - m @ m.conj().T))) if k.size else 0.0
            report.prop(f"factorization_{tag}").record(
                err <= FACTOR_TOL, lambda: _graph_detail(g, max_error=err))
            report.prop(f"hermitian_{tag}").record(
                bool(np.array_equal(k, k.conj().T)), lambda: _graph_detail(g))
            eig = hermitian_eigen(k)
            report.prop(f"psd_{tag}").record(
                is_psd(k), lambda: _graph_detail(g, min_eigenvalue=float(eig.values[0])))
            res_ok = eig.residual <= RESIDUAL_TOL * (1.0 + frobenius(k))
            report.prop("eigen_residual").record(res_ok, lambda: _graph_detail(g, residual=eig.residual))
            expect = expected_kernel_dim(g, flavor)
            got = _zero_count(eig.values)
            report.prop(f"kernel_multiplicity_{tag}").record(
                None if expect is None or _ambiguous(eig.values) else got == expect,
                lambda: _graph_detail(g, expected=expect, observed=got,
                                      eigenvalues=[float(v) for v in eig.values]))
            x = rng.normal(size=g.n) + 1j * rng.normal(size=g.n)
            if g.kind is GraphKind.EDGE_LOOP:
                kn = _normalized_matrix(g, flavor)
            else:
                kn = k
            direct = float((x.conj() @ kn @ x).real)
            form = quad_form(g, flavor, x)
            report.prop(f"quadratic_form_{tag}").record(
                abs(direct - form) <= 1e-9 * (1.0 + abs(direct)),
                lambda: _graph_detail(g, matrix_form=direct, edge_sum=form))
        dsum = float(sum(g.degrees))
        if g.kind is GraphKind.VERTEX_WEIGHTED:
            vw = g.vertex_weights
            ref = sum(abs(vw[e.i - 1]) + abs(vw[e.j - 1]) for e in g.edges)
        else:
            ref = 2.0 * sum(abs(e.w) for e in g.edges) + sum(lp.r for lp in g.loops)
        report.prop("degree_sum").record(
            abs(dsum - ref) <= 1e-12 * (1.0 + ref), lambda: _graph_detail(g, degree_sum=dsum, expected=ref))
        if g.kind is GraphKind.EDGE_LOOP:
            bare = WeightedDigraph(g.kind, g.n, g.edges, ())
            same = bool(np.allclose(laplacian(g), laplacian(bare), rtol=0.0, atol=1e-14))
            report.prop("loop_invariance_L").record(same, lambda: _graph_detail(g))
            if g.loops:
                for comp in underlying_components(g):
                    sub = induced_subgraph(g, comp)
                    if not sub.loops:
                        continue
                    vals = hermitian_eigen(laplacian(sub, MatrixFlavor.SIGNLESS)).values
                    ok = None if _ambiguous(vals) else _zero_count(vals) == 0
                    report.prop("looped_full_rank_Q").record(
                        ok, lambda: _graph_detail(sub, min_eigenvalue=float(vals[0])))
    return report


def _normalized_matrix(g, flavor):
    sign = MatrixFlavor.parse(flavor).sign
    n = g.n
    a = np.zeros((n, n), dtype=np.complex128)
    d = np.zeros(n)
    for e in g.edges:
        w = e.w / abs(e.w)
        a[e.i - 1, e.j - 1] = w
        a[e.j - 1, e.i - 1] = w.conjugate()
        d[e.i - 1] += 1.0
        d[e.j - 1] += 1.0
    if sign > 0:
        for lp in g.loops:
            d[lp.i - 1] += 2.0 * lp.r
    return np.diag(d) + sign * a


def purity_suite(graphs, report: SuiteReport | None = None) -> SuiteReport:
    report = report or SuiteReport()
    for g in graphs:
        for flavor in FLAVORS:
            tag = flavor.value
            try:
                rho = density_from_graph(g, flavor)
            except DegreeZero:
                # no edge mass: only legitimate when L (or Q) is the zero matrix
                zero = not np.any(laplacian(g, flavor))
                report.prop(f"density_defined_{tag}").record(zero, lambda: _graph_detail(g))
                continue
            report.prop(f"density_defined_{tag}").record(True)
            cls = classify(rho)
            want = expected_pure(g, flavor)
            report.prop(f"pure_iff_single_edge_{tag}").record(
                cls.is_pure == want,
                lambda: _graph_detail(g, purity=cls.purity, expected_pure=want))
            mix = spectral_mixture(rho)
            values = hermitian_eigen(rho.mat).values
            dropped = float(np.sum(np.abs(values[: values.size - len(mix.terms)])))
            err = float(np.max(np.abs(mix.reconstruct() - rho.mat)))
            wsum = float(np.sum(mix.weights()))
            report.prop("mixture_reconstructs").record(
                err <= MIXTURE_TOL + dropped and abs(wsum - 1.0) <= MIXTURE_TOL + dropped,
                lambda: _graph_detail(g, max_error=err, weight_sum=wsum))
            p_eig = float(np.sum(values ** 2))
            report.prop("purity_matches_spectrum").record(
                abs(p_eig - cls.purity) <= 1e-10, lambda: _graph_detail(g, frobenius=cls.purity, spectral=p_eig))
            if g.n >= 3 and len(g.edges) >= 2 and len(underlying_components(g)) == 1:
                report.prop("connected_is_mixed").record(
                    cls.purity < 1.0 - 1e-9, lambda: _graph_detail(g, purity=cls.purity))
    return report


def separability_suite(trials: int, seed: int, report: SuiteReport | None = None) -> SuiteReport:
    from .entanglers import separability_experiment

    report = report or SuiteReport()
    rng = np.random.default_rng(seed)
    for t in range(trials):
        ga = random_graph(rng, list(GraphKind)[t % 3], 2, p_edge=1.0)
        gb = random_graph(rng, list(GraphKind)[(t + 1) % 3], 2, p_edge=1.0)
        fa, fb = FLAVORS[t % 2], FLAVORS[(t // 2) % 2]
        rho = DensityMatrix(np.kron(density_from_graph(ga, fa).mat, density_from_graph(gb, fb).mat))
        v = ppt_verdict(rho)
        report.prop("product_states_ppt").record(
            v.separable, lambda: {"graphs": [serialize_graph(ga), serialize_graph(gb)],
                                  "min_pt_eigenvalue": v.min_eigenvalue})
    for flavor in FLAVORS:
        exp = separability_experiment(trials, seed, flavor)
        prop = report.prop(f"product_separability_{flavor.value}")
        prop.checked += exp.trials
        prop.failures += exp.npt_count
        if exp.npt_count and prop.counterexample is None:
            prop.counterexample = {"seed": seed, "examples": exp.counterexamples}
        sub = report.prop(f"product_separability_subcases_{flavor.value}")
        sub.record(all(v in ("separable", "undefined") for v in exp.subcases.values()),
                   {"subcases": exp.subcases})
    return report


def run_suites(graphs, suite: str = "all", trials: int = 100, seed: int = 0) -> SuiteReport:
    """Run one suite or ``"all"`` of them."""
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {suite!r}")
    report = SuiteReport()
    if "laplacian" in names:
        laplacian_suite(graphs, report, seed)
    if "purity" in names:
        purity_suite(graphs, report)
    if "separability" in names:
        separability_suite(trials, seed, report)
    return report


# golden files -----------------------------------------------------------------

def graph_summary(g: WeightedDigraph, flavor) -> dict:
    """Eigenvalues, purity and class for ``g`` under one flavor."""
    flavor = MatrixFlavor.parse(flavor)
    values = hermitian_eigen(laplacian(g, flavor)).values
    out = {"matrix": flavor.value, "eigenvalues": [float(v) for v in values]}
    try:
        rho = density_from_graph(g, flavor)
    except DegreeZero:
        out["purity"] = None
        out["class"] = None
    else:
        cls = classify(rho)
        out["purity"] = cls.purity
        out["class"] = cls.kind.value
    return out


def golden_check(g: WeightedDigraph, golden: dict, report: SuiteReport | None = None) -> SuiteReport:
    """Compare ``g`` against recorded eigenvalues, purity and class.

    ``golden`` holds ``matrix`` (``"L"`` or ``"Q"``) and any of
    ``eigenvalues``, ``purity``, ``class``; ``tol`` defaults to ``1e-9``.
    """
    report = report or SuiteReport()
    tol = float(golden.get("tol", 1e-9))
    got = graph_summary(g, golden.get("matrix", "L"))
    if "eigenvalues" in golden:
        want = [float(v) for v in golden["eigenvalues"]]
        ok = len(want) == len(got["eigenvalues"]) and all(
            abs(a - b) <= tol for a, b in zip(want, got["eigenvalues"]))
        report.prop("golden_eigenvalues").record(
            ok, {"expected": want, "observed": got["eigenvalues"]})
    if "purity" in golden:
        want = golden["purity"]
        p = got["purity"]
        ok = (want is None and p is None) or (
            want is not None and p is not None and math.isclose(p, float(want), rel_tol=0.0, abs_tol=tol))
        report.prop("golden_purity").record(ok, {"expected": want, "observed": p})
    if "class" in golden:
        report.prop("golden_class").record(
            golden["class"] == got["class"], {"expected": golden["class"], "observed": got["class"]})
    return report


__all__ = [
    "PropertyResult",
    "SuiteReport",
    "SUITES",
    "adjacency",
    "expected_kernel_dim",
    "expected_pure",
    "fuzz_graphs",
    "golden_check",
    "graph_summary",
    "laplacian_suite",
    "purity_suite",
    "random_graph",
    "run_suites",
    "separability_suite",
]
