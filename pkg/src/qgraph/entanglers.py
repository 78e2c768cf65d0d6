"""Generalized graph products of single-qubit graphs and the states they give.

A product is ``sum_k f_k(A(G)) (x) g_k(A(H))`` where each ``f_k``/``g_k`` is a
:class:`MatrixFunctionSpec`: a short chain of multiplications by constant
2x2 matrices, optionally followed by a conjugate transpose of the result.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegreeZero,
    DimensionMismatch,
    NonzeroDiagonal,
    NotHermitianResult,
    RecipeError,
)
from .graph_model import GraphKind, WeightedDigraph, principal_sqrt
from .laplacians import MatrixFlavor, adjacency
from .quantum_states import DensityMatrix, normalize_by_trace
from .spectra import as_matrix, is_hermitian

PRODUCT_HERMITIAN_TOL = 1e-12

I2 = np.eye(2, dtype=np.complex128)
J = np.array([[0, 0], [0, 1]], dtype=np.complex128)
P = np.array([[0, 1], [0, 0]], dtype=np.complex128)
Z = np.array([[0, -1], [1, 0]], dtype=np.complex128)
ZERO2 = np.zeros((2, 2), dtype=np.complex128)

CONSTANTS = {"I": I2, "J": J, "P": P, "Z": Z, "0": ZERO2}


def k_matrix(w) -> np.ndarray:
    """``[[0, conj(w)], [0, 0]]``, parameterized by a graph's edge weight."""
    return np.array([[0, complex(w).conjugate()], [0, 0]], dtype=np.complex128)


def dagger(x) -> np.ndarray:
    return np.asarray(x).conj().T


# matrix functions -------------------------------------------------------

OPS = ("identity", "right", "left", "add", "hollow")


@dataclass(frozen=True)
class Step:
    op: str
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.op not in OPS:
            raise RecipeError(f"unknown step {self.op!r}")
        if self.op in ("right", "left", "add"):
            if self.matrix is None:
                raise RecipeError(f"step {self.op!r} needs a matrix")
            m = as_matrix(self.matrix)
            if m.shape != (2, 2):
                raise RecipeError(f"step matrices are 2x2, got {m.shape}")
            object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class MatrixFunctionSpec:
    """Left-to-right chain of steps, then ``(.)^H`` if ``dagger`` is set.

    Steps: ``identity`` (no-op), ``right`` (``X C``), ``left`` (``C X``),
    ``add`` (``X + C``) and ``hollow`` (zero the diagonal).
    """

    steps: tuple[Step, ...] = ()
    dagger: bool = False

    def __call__(self, x):
        return apply_fn(self, x)

    @classmethod
    def identity(cls):
        return cls((Step("identity"),))

    @classmethod
    def right(cls, c, dagger=False):
        return cls((Step("right", c),), dagger)

    @classmethod
    def left(cls, c, dagger=False):
        return cls((Step("left", c),), dagger)

    @classmethod
    def zero(cls):
        return cls.right(ZERO2)

    def then(self, op, c=None) -> MatrixFunctionSpec:
        if self.dagger:
            raise RecipeError("the conjugate transpose must come last")
        return MatrixFunctionSpec(self.steps + (Step(op, c),), False)

    def adjoint(self) -> MatrixFunctionSpec:
        return MatrixFunctionSpec(self.steps, not self.dagger)


def apply_fn(spec: MatrixFunctionSpec, x) -> np.ndarray:
    x = as_matrix(x)
    if x.shape != (2, 2):
        raise DimensionMismatch(f"matrix functions act on 2x2 matrices, got {x.shape}")
    out = x.copy()
    for step in spec.steps:
        if step.op == "right":
            out = out @ step.matrix
        elif step.op == "left":
            out = step.matrix @ out
        elif step.op == "add":
            out = out + step.matrix
        elif step.op == "hollow":
            out = out.copy()
            np.fill_diagonal(out, 0)
    return out.conj().T if spec.dagger else out


@dataclass(frozen=True)
class ProductRecipe:
    pairs: tuple[tuple[MatrixFunctionSpec, MatrixFunctionSpec], ...]
    require_zero_diagonal: bool | None = None

    def __post_init__(self):
        if not self.pairs:
            raise RecipeError("a recipe needs at least one (f, g) pair")


def _check_2x2(*mats):
    for m in mats:
        if m.shape != (2, 2):
            raise DimensionMismatch(f"expected 2x2 adjacency, got {m.shape}")


def product_fg(ag, ah, f: MatrixFunctionSpec, g: MatrixFunctionSpec) -> np.ndarray:
    """``A(G) (x) f(A(H)) + I (x) g(A(H))``."""
    ag, ah = as_matrix(ag), as_matrix(ah)
    _check_2x2(ag, ah)
    return np.kron(ag, apply_fn(f, ah)) + np.kron(I2, apply_fn(g, ah))


def product_multi(ag, ah, recipe: ProductRecipe) -> np.ndarray:
    """``sum_k f_k(A(G)) (x) g_k(A(H))``.

    The zero-diagonal check defaults to on when neither input has a nonzero
    diagonal (no loops) and off otherwise.

    Raises
    ------
    NotHermitianResult
    NonzeroDiagonal
    """
    ag, ah = as_matrix(ag), as_matrix(ah)
    _check_2x2(ag, ah)
    out = np.zeros((4, 4), dtype=np.complex128)
    for f, g in recipe.pairs:
        out += np.kron(apply_fn(f, ag), apply_fn(g, ah))
    if not is_hermitian(out, PRODUCT_HERMITIAN_TOL):
        raise NotHermitianResult("product adjacency is not Hermitian")
    require = recipe.require_zero_diagonal
    if require is None:
        require = not (np.any(np.diag(ag) != 0) or np.any(np.diag(ah) != 0))
    if require and np.any(np.abs(np.diag(out)) > PRODUCT_HERMITIAN_TOL):
        raise NonzeroDiagonal("product adjacency has a nonzero diagonal")
    return out


def product_degrees(aprod, vertex_weights=None) -> np.ndarray:
    """Row degrees of a product adjacency.

    Without ``vertex_weights`` the degree is the row sum of moduli (the
    diagonal counts once, as a loop). With per-vertex weights it is the sum
    of ``|w_j|`` over the neighbors ``j`` of each vertex.
    """
    a = as_matrix(aprod)
    if vertex_weights is None:
        return np.sum(np.abs(a), axis=1)
    vw = np.abs(np.asarray(vertex_weights, dtype=np.complex128))
    if vw.shape != (a.shape[0],):
        raise DimensionMismatch("one vertex weight per row is required")
    mask = np.abs(a) > 0
    np.fill_diagonal(mask, False)
    return mask.astype(float) @ vw


def density_from_product(aprod, flavor=MatrixFlavor.COMBINATORIAL, vertex_weights=None) -> DensityMatrix:
    """``(D -+ A) / Tr(D -+ A)`` for a product adjacency ``A``.

    Raises
    ------
    DegreeZero
    NotHermitianResult
    """
    flavor = MatrixFlavor.parse(flavor)
    a = as_matrix(aprod)
    if not is_hermitian(a, PRODUCT_HERMITIAN_TOL):
        raise NotHermitianResult("product adjacency is not Hermitian")
    d = product_degrees(a, vertex_weights)
    if float(np.sum(d)) <= 0.0:
        raise DegreeZero("product graph has no edges")
    return normalize_by_trace(np.diag(d) + flavor.sign * a)


# single-qubit graphs and named recipes ----------------------------------

def vertex_k2(w1, w2) -> WeightedDigraph:
    return WeightedDigraph.vertex_weighted((w1, w2), [(1, 2)])


def _vroot(w):
    return principal_sqrt(complex(w))


def recipe_bell(kind: str) -> ProductRecipe:
    """The two-term recipes built from ``f_1(X) = XJ`` and ``f_2(X) = (XJ)^H``.

    ``phi`` pairs ``(f_1, f_1), (f_2, f_2)``; ``psi`` pairs
    ``(f_1, f_2), (f_2, f_1)``.
    """
    f1 = MatrixFunctionSpec.right(J)
    f2 = MatrixFunctionSpec.right(J, dagger=True)
    if kind == "phi":
        return ProductRecipe(((f1, f1), (f2, f2)), True)
    if kind == "psi":
        return ProductRecipe(((f1, f2), (f2, f1)), True)
    raise RecipeError(f"unknown Bell recipe {kind!r}")


def recipe_antidiagonal_bell() -> ProductRecipe:
    """``A(G1) J (x) A(G2) P + (A(G1) J)^H (x) (A(G2) + I) P^H``."""
    f1 = MatrixFunctionSpec.right(J)
    g1 = MatrixFunctionSpec.right(P)
    f2 = MatrixFunctionSpec.right(J, dagger=True)
    g2 = MatrixFunctionSpec((Step("add", I2), Step("right", dagger(P))))
    return ProductRecipe(((f1, g1), (f2, g2)), False)


BELL_KINDS = {
    "PhiMinus": ("phi", MatrixFlavor.COMBINATORIAL),
    "PhiPlus": ("phi", MatrixFlavor.SIGNLESS),
    "PsiMinus": ("psi", MatrixFlavor.COMBINATORIAL),
    "PsiPlus": ("psi", MatrixFlavor.SIGNLESS),
}


def bell_pair(kind: str, w1=1, w2=1, w1p=1, w2p=1) -> DensityMatrix:
    """Closed-form two-qubit states from vertex-weighted ``K_2`` pairs.

    ``kind`` is one of ``PhiMinus``, ``PhiPlus``, ``PsiMinus``, ``PsiPlus``.
    ``w1, w2`` weight the first graph, ``w1p, w2p`` the second. The coupling
    entry is the product of principal roots, e.g.
    ``conj(s1) s2 conj(s1') s2'`` for the ``Phi`` family. With all weights 1
    the results are the four Bell projectors.
    """
    if kind not in BELL_KINDS:
        raise RecipeError(f"unknown Bell kind {kind!r}")
    ws = [complex(w) for w in (w1, w2, w1p, w2p)]
    if any(w == 0 for w in ws):
        raise RecipeError("vertex weights must be nonzero")
    w1, w2, w1p, w2p = ws
    s1, s2, s1p, s2p = (_vroot(w) for w in ws)
    family, flavor = BELL_KINDS[kind]
    sign = flavor.sign
    m = np.zeros((4, 4), dtype=np.complex128)
    if family == "phi":
        c = s1.conjugate() * s1p.conjugate() * s2 * s2p
        a, b = abs(w2 * w2p), abs(w1 * w1p)
        m[0, 0], m[3, 3] = a, b
        m[0, 3], m[3, 0] = sign * c, sign * c.conjugate()
    else:
        c = s1.conjugate() * s2 * s2p.conjugate() * s1p
        a, b = abs(w2 * w1p), abs(w2p * w1)
        m[1, 1], m[2, 2] = a, b
        m[1, 2], m[2, 1] = sign * c, sign * c.conjugate()
    return DensityMatrix(m / (a + b))


def bell_pair_from_recipe(kind: str, w1=1, w2=1, w1p=1, w2p=1) -> DensityMatrix:
    """Same states as :func:`bell_pair`, assembled from graphs and a recipe.

    The product graph carries vertex weights ``w_k w'_l``, so degrees are
    neighbor-weight sums rather than row moduli.
    """
    family, flavor = BELL_KINDS[kind]
    g, h = vertex_k2(w1, w2), vertex_k2(w1p, w2p)
    aprod = product_multi(adjacency(g), adjacency(h), recipe_bell(family))
    weights = np.kron(np.asarray(g.vertex_weights), np.asarray(h.vertex_weights))
    return density_from_product(aprod, flavor, vertex_weights=weights)


def werner_product_adjacency(w, wp, r1, r2) -> np.ndarray:
    """``diag(r1, 0, 0, r2)`` plus the ``w conj(w')`` coupling of |01>, |10>."""
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = r1
    m[3, 3] = r2
    c = complex(w) * complex(wp).conjugate()
    m[1, 2] = c
    m[2, 1] = c.conjugate()
    return m


def werner_from_loops(w, wp, r1, r2) -> tuple[DensityMatrix, DensityMatrix]:
    """States of the looped single-qubit product.

    Returns ``(L-state, Q-state)``; the first is a ``Psi`` projector, the
    second a Werner-type mixture normalized by ``2 (1 + r1 + r2)``.
    """
    w, wp = complex(w), complex(wp)
    if abs(abs(w) - 1.0) > 1e-12 or abs(abs(wp) - 1.0) > 1e-12:
        raise RecipeError("edge weights must have unit modulus")
    if not (r1 > 0 and r2 > 0):
        raise RecipeError("loop weights must be positive")
    a = werner_product_adjacency(w, wp, r1, r2)
    return (
        density_from_product(a, MatrixFlavor.COMBINATORIAL),
        density_from_product(a, MatrixFlavor.SIGNLESS),
    )


def looped_k2_adjacencies(w, wp, r1, r2) -> tuple[np.ndarray, np.ndarray]:
    """``A(G) = [[r1, w], [w*, 0]]`` and ``A(H) = [[0, w'], [w'*, r2]]``."""
    w, wp = complex(w), complex(wp)
    ag = np.array([[r1, w], [w.conjugate(), 0]], dtype=np.complex128)
    ah = np.array([[0, wp], [wp.conjugate(), r2]], dtype=np.complex128)
    return ag, ah


def recipe_looped_four_term(w, wp) -> ProductRecipe:
    """The four-term looped recipe exactly as stated.

    ``f = (XJ, JX, X K^H, (Z X^H Z) J)``, ``g = (JX, XJ, X K'^H, (Z X^H Z) J)``.
    The last function is encoded as ``(J Z^H X Z^H)^H``. Note this recipe
    does not reduce to :func:`werner_product_adjacency` for general inputs.
    """
    k, kp = k_matrix(w), k_matrix(wp)
    zh = dagger(Z)
    f1 = MatrixFunctionSpec.right(J)
    f2 = MatrixFunctionSpec.left(J)
    f3 = MatrixFunctionSpec.right(dagger(k))
    g3 = MatrixFunctionSpec.right(dagger(kp))
    f4 = MatrixFunctionSpec((Step("right", zh), Step("left", zh), Step("left", J)), True)
    return ProductRecipe(((f1, f2), (f2, f1), (f3, g3), (f4, f4)), False)


# recipe files -------------------------------------------------------------

def _matrix_from_json(obj):
    if isinstance(obj, str):
        if obj not in CONSTANTS:
            raise RecipeError(f"unknown constant matrix {obj!r}")
        return CONSTANTS[obj]
    try:
        rows = []
        for row in obj:
            rows.append([complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in row])
        return as_matrix(rows)
    except (TypeError, ValueError, IndexError) as exc:
        raise RecipeError(f"bad matrix {obj!r}") from exc


def _matrix_to_json(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def spec_from_json(obj) -> MatrixFunctionSpec:
    if not isinstance(obj, dict):
        raise RecipeError("a matrix function is an object with 'steps'")
    steps = []
    for st in obj.get("steps", []):
        if not isinstance(st, dict) or "op" not in st:
            raise RecipeError(f"bad step {st!r}")
        mat = _matrix_from_json(st["matrix"]) if "matrix" in st else None
        steps.append(Step(st["op"], mat))
    return MatrixFunctionSpec(tuple(steps), bool(obj.get("dagger", False)))


def spec_to_json(spec: MatrixFunctionSpec) -> dict:
    steps = []
    for st in spec.steps:
        d = {"op": st.op}
        if st.matrix is not None:
            d["matrix"] = _matrix_to_json(st.matrix)
        steps.append(d)
    return {"steps": steps, "dagger": spec.dagger}


def recipe_from_json(obj) -> ProductRecipe:
    if not isinstance(obj, dict) or not isinstance(obj.get("pairs"), list):
        raise RecipeError("a recipe is an object with a 'pairs' list")
    pairs = []
    for pair in obj["pairs"]:
        if not isinstance(pair, dict) or "f" not in pair or "g" not in pair:
            raise RecipeError("each pair needs 'f' and 'g'")
        pairs.append((spec_from_json(pair["f"]), spec_from_json(pair["g"])))
    req = obj.get("require_zero_diagonal")
    return ProductRecipe(tuple(pairs), None if req is None else bool(req))


def recipe_to_json(recipe: ProductRecipe) -> dict:
    return {
        "pairs": [{"f": spec_to_json(f), "g": spec_to_json(g)} for f, g in recipe.pairs],
        "require_zero_diagonal": recipe.require_zero_diagonal,
    }


@dataclass(frozen=True)
class RecipeFile:
    """A recipe plus its two 2x2 input adjacencies and the matrix flavor."""

    recipe: ProductRecipe
    ag: np.ndarray
    ah: np.ndarray
    flavor: MatrixFlavor = MatrixFlavor.COMBINATORIAL
    vertex_weights: np.ndarray | None = field(default=None)


def load_recipe_file(text: str) -> RecipeFile:
    """Parse a JSON recipe file.

    Inputs are given either as ``"AG"``/``"AH"`` matrices or as ``"G"``/``"H"``
    graph texts in the ``.qg`` format (two vertices each). When both graphs
    are vertex-weighted the product uses their weight products as degrees.
    """
    from .graph_dsl import parse_graph

    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecipeError(f"recipe file is not JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise RecipeError("recipe file must hold a JSON object")
    recipe = recipe_from_json(obj)
    flavor = MatrixFlavor.parse(obj.get("flavor", "L"))
    weights = None
    if "G" in obj and "H" in obj:
        g, h = parse_graph(obj["G"]), parse_graph(obj["H"])
        if g.n != 2 or h.n != 2:
            raise RecipeError("product inputs must be single-qubit (2-vertex) graphs")
        ag, ah = adjacency(g), adjacency(h)
        if g.kind is GraphKind.VERTEX_WEIGHTED and h.kind is GraphKind.VERTEX_WEIGHTED:
            weights = np.kron(np.asarray(g.vertex_weights), np.asarray(h.vertex_weights))
    elif "AG" in obj and "AH" in obj:
        ag, ah = _matrix_from_json(obj["AG"]), _matrix_from_json(obj["AH"])
    else:
        raise RecipeError("recipe file needs 'G'/'H' graphs or 'AG'/'AH' matrices")
    _check_2x2(ag, ah)
    return RecipeFile(recipe, ag, ah, flavor, weights)


# separability experiment ----------------------------------------------------

@dataclass
class ExperimentReport:
    trials: int
    seed: int
    flavor: str
    npt_count: int = 0
    min_pt_eigenvalue: float = float("inf")
    undefined: int = 0
    counterexamples: list = field(default_factory=list)
    subcases: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.npt_count == 0 and all(v in ("separable", "undefined") for v in self.subcases.values())


def _random_bounded(rng, bound=2.0):
    mag = rng.uniform(0.0, bound, size=(2, 2))
    ph = rng.uniform(0.0, 2 * np.pi, size=(2, 2))
    return mag * np.exp(1j * ph)


def _random_hermitian(rng, bound=2.0):
    c = _random_bounded(rng, bound)
    h = 0.5 * (c + dagger(c))
    return h


def random_separable_fg(rng) -> tuple[MatrixFunctionSpec, MatrixFunctionSpec]:
    """Random ``f`` with Hermitian output and ``g`` with hollow Hermitian output.

    ``f(X) = C X C^H + H0``; ``g(X) = hollow(C' X C'^H + H1)``. Entries of the
    constants are bounded by 2 in modulus.
    """
    c, c2 = _random_bounded(rng), _random_bounded(rng)
    f = MatrixFunctionSpec((Step("left", c), Step("right", dagger(c)), Step("add", _random_hermitian(rng))))
    g = MatrixFunctionSpec((Step("left", c2), Step("right", dagger(c2)),
                            Step("add", _random_hermitian(rng)), Step("hollow")))
    return f, g


def _qubit_adjacency(theta):
    w = np.exp(1j * theta)
    return np.array([[0, w], [np.conj(w), 0]], dtype=np.complex128)


def _subcase_fg(name, rng):
    zero = MatrixFunctionSpec.zero()
    mag = rng.uniform(0.1, 2.0)
    if name == "I":
        g12 = mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
        const = np.array([[0, g12], [np.conj(g12), 0]])
        return zero, MatrixFunctionSpec((Step("right", ZERO2), Step("add", const)))
    if name == "II":
        return zero, zero
    if name == "III":
        return MatrixFunctionSpec((Step("right", ZERO2), Step("add", np.diag([mag, 0])))), zero
    if name == "IV":
        return MatrixFunctionSpec((Step("right", ZERO2), Step("add", np.diag([0, mag])))), zero
    raise ValueError(name)


def _verdict(ag, ah, f, g, flavor):
    from .quantum_states import ppt_verdict

    aprod = product_fg(ag, ah, f, g)
    try:
        rho = density_from_product(aprod, flavor)
    except DegreeZero:
        return None
    return ppt_verdict(rho)


def separability_experiment(trials: int, seed: int, flavor=MatrixFlavor.COMBINATORIAL) -> ExperimentReport:
    """PPT-test random ``A(G) (x) f(A(H)) + I (x) g(A(H))`` products.

    ``G`` and ``H`` are unit-weight ``K_2`` graphs with uniform random phase.
    The degenerate subcases (only ``g`` nonzero; everything zero; only
    ``f_11``; only ``f_22``) are injected once each and recorded under
    ``subcases``. A zero product has no density matrix and is reported as
    ``"undefined"``.
    """
    if not isinstance(trials, int) or trials <= 0:
        raise ValueError("trials must be a positive integer")
    flavor = MatrixFlavor.parse(flavor)
    rng = np.random.default_rng(seed)
    report = ExperimentReport(trials, seed, flavor.value)
    for t in range(trials):
        ag = _qubit_adjacency(rng.uniform(0, 2 * np.pi))
        ah = _qubit_adjacency(rng.uniform(0, 2 * np.pi))
        f, g = random_separable_fg(rng)
        v = _verdict(ag, ah, f, g, flavor)
        if v is None:
            report.undefined += 1
            continue
        report.min_pt_eigenvalue = min(report.min_pt_eigenvalue, v.min_eigenvalue)
        if not v.separable:
            report.npt_count += 1
            if len(report.counterexamples) < 5:
                report.counterexamples.append({"trial": t, "min_pt_eigenvalue": v.min_eigenvalue})
    for name in ("I", "II", "III", "IV"):
        ag = _qubit_adjacency(rng.uniform(0, 2 * np.pi))
        ah = _qubit_adjacency(rng.uniform(0, 2 * np.pi))
        f, g = _subcase_fg(name, rng)
        v = _verdict(ag, ah, f, g, flavor)
        if v is None:
            report.subcases[name] = "undefined"
        else:
            report.subcases[name] = "separable" if v.separable else "entangled"
    return report
