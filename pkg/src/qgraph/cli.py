"""``qgraph`` command-line interface.

Every command prints one JSON report on stdout::

    {"command": ..., "inputs": {...}, "result": {...}, "warnings": [...]}

Floats carry 17 significant digits and complex numbers are ``[re, im]``
pairs, so identical inputs give byte-identical output.

Exit codes: 0 success, 1 parse error, 2 compute or precondition error,
3 property failure. Errors go to stderr as a single JSON line.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analogies, checks, entanglers
from .errors import ParseError, QGraphError, RecipeError
from .graph_dsl import parse_complex, parse_graph
from .laplacians import MatrixFlavor, adjacency, laplacian
from .quantum_states import classify, density_from_graph, ppt_verdict, spectral_mixture
from .spectra import ZERO_EIG_TOL, as_matrix, hermitian_eigen

EXIT_OK, EXIT_PARSE, EXIT_COMPUTE, EXIT_PROPERTY = 0, 1, 2, 3

RECIPES = {
    "bell-phi-": "PhiMinus",
    "bell-phi+": "PhiPlus",
    "bell-psi-": "PsiMinus",
    "bell-psi+": "PsiPlus",
}


# JSON rendering -----------------------------------------------------------

def _float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return json.dumps(str(x))
    if x == 0.0:
        return "0.0"
    s = f"{x:.17g}"
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def to_json(obj) -> str:
    """Deterministic JSON text: dict order kept, floats at 17 digits."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_float(obj.real)}, {_float(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return to_json(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")


def _matrix(m) -> list:
    return [[complex(z) for z in row] for row in np.asarray(m)]


def _report(command, inputs, result, warnings=()):
    return {"command": command, "inputs": inputs, "result": result, "warnings": list(warnings)}


# helpers --------------------------------------------------------------------

def _read(path) -> str:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise QGraphError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(1, 1, f"{path} is not valid UTF-8: {exc.reason}") from None


def _load_graph(path):
    return parse_graph(_read(path))


def _complex_arg(text):
    try:
        value, _ = parse_complex(text.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise argparse.ArgumentTypeError(f"complex literal {text!r} overflows")
    return value


def _state_result(rho, warnings):
    cls = classify(rho)
    mix = spectral_mixture(rho)
    out = {
        "density": _matrix(rho.mat),
        "purity": cls.purity,
        "class": cls.kind.value,
        "mixture": [{"weight": p, "vector": [complex(z) for z in v]} for p, v in mix.terms],
    }
    if rho.dim == 4:
        v = ppt_verdict(rho)
        out["ppt_separable"] = v.separable
        out["pt_min_eigenvalue"] = v.min_eigenvalue
        if v.borderline:
            out["ppt_borderline"] = True
            warnings.append("partial transpose is negative within tolerance; reported separable")
    return out


def _matrix_input(path):
    """A square matrix from a JSON file or the adjacency of a ``.qg`` graph."""
    text = _read(path)
    if text.lstrip()[:1] in ("[", "{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, exc.colno, f"bad JSON: {exc.msg}") from None
        if isinstance(obj, dict):
            obj = obj.get("matrix")
        try:
            rows = [[complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in row] for row in obj]
            a = as_matrix(rows)
        except (TypeError, ValueError, IndexError):
            raise ParseError(1, 1, "matrix must be a list of rows of numbers or [re, im] pairs",
                             "Semantic") from None
        return a, "json"
    return adjacency(parse_graph(text)), "graph"


# commands -------------------------------------------------------------------

def cmd_spectrum(args):
    g = _load_graph(args.file)
    flavor = MatrixFlavor.parse(args.matrix)
    k = laplacian(g, flavor)
    eig = hermitian_eigen(k)
    values = eig.values
    cut = ZERO_EIG_TOL * max(1.0, float(values[-1]))
    result = {
        "matrix": _matrix(k),
        "eigenvalues": [float(v) for v in values],
        "kernel_multiplicity": int(np.sum(values <= cut)),
        "residual": eig.residual,
    }
    return EXIT_OK, _report("spectrum", {"file": args.file, "matrix": flavor.value}, result)


def cmd_state(args):
    g = _load_graph(args.file)
    flavor = MatrixFlavor.parse(args.matrix)
    warnings = []
    rho = density_from_graph(g, flavor)
    return EXIT_OK, _report("state", {"file": args.file, "matrix": flavor.value},
                            _state_result(rho, warnings), warnings)


def cmd_entangle(args):
    warnings = []
    if args.recipe_file:
        rf = entanglers.load_recipe_file(_read(args.recipe_file))
        aprod = entanglers.product_multi(rf.ag, rf.ah, rf.recipe)
        rho = entanglers.density_from_product(aprod, rf.flavor, rf.vertex_weights)
        inputs = {"recipe_file": args.recipe_file, "matrix": rf.flavor.value}
        result = {"product_adjacency": _matrix(aprod)}
    elif args.recipe in RECIPES:
        kind = RECIPES[args.recipe]
        ws = (args.w1, args.w2, args.w1p, args.w2p)
        rho = entanglers.bell_pair(kind, *ws)
        inputs = {"recipe": args.recipe, "w1": args.w1, "w2": args.w2, "w1p": args.w1p, "w2p": args.w2p}
        result = {"state": kind}
    elif args.recipe == "werner":
        flavor = MatrixFlavor.parse(args.matrix or "Q")
        l_state, q_state = entanglers.werner_from_loops(args.w, args.wp, args.r1, args.r2)
        rho = q_state if flavor is MatrixFlavor.SIGNLESS else l_state
        inputs = {"recipe": "werner", "w": args.w, "wp": args.wp, "r1": args.r1, "r2": args.r2,
                  "matrix": flavor.value}
        result = {"product_adjacency": _matrix(entanglers.werner_product_adjacency(args.w, args.wp, args.r1, args.r2))}
    else:
        raise RecipeError("give --recipe or --recipe-file")
    result.update(_state_result(rho, warnings))
    return EXIT_OK, _report("entangle", inputs, result, warnings)


def cmd_check(args):
    if args.fuzz:
        if args.file:
            raise ValueError("give either FILE or --fuzz, not both")
        graphs = checks.fuzz_graphs(args.n, args.trials, args.seed)
        inputs = {"fuzz": True, "n": args.n, "trials": args.trials, "seed": args.seed, "suite": args.suite}
    elif args.file:
        graphs = [_load_graph(args.file)]
        inputs = {"file": args.file, "trials": args.trials, "seed": args.seed, "suite": args.suite}
    else:
        raise ValueError("give FILE or --fuzz")
    if args.trials < 1:
        raise ValueError("trials must be positive")
    report = checks.run_suites(graphs, args.suite, args.trials, args.seed)
    if args.golden:
        if not args.file:
            raise ValueError("--golden needs a FILE")
        try:
            golden = json.loads(_read(args.golden))
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, exc.colno, f"bad golden JSON: {exc.msg}") from None
        if not isinstance(golden, dict):
            raise ParseError(1, 1, "golden file must hold a JSON object", "Semantic")
        checks.golden_check(graphs[0], golden, report)
        inputs["golden"] = args.golden
    code = EXIT_OK if report.passed else EXIT_PROPERTY
    return code, _report("check", inputs, report.to_json())


def cmd_analogy(args):
    inputs = {"kind": args.kind, "file": args.file}
    if args.kind in ("det", "perm"):
        a, source = _matrix_input(args.file)
        inputs["source"] = source
        value = analogies.coates_determinant(a) if args.kind == "det" else analogies.permanent(a)
        return EXIT_OK, _report("analogy", inputs, {"value": value})
    g = _load_graph(args.file)
    if args.kind == "walk":
        gamma = analogies.stationary_distribution(g)
        return EXIT_OK, _report("analogy", inputs, {"stationary": [float(x) for x in gamma]})
    psi0 = np.full(g.n, 1.0 / g.n) if args.psi0 is None else _psi0(args.psi0)
    state = analogies.diffuse(g, psi0, args.alpha, args.dt, args.steps)
    inputs.update({"psi0": [float(x) for x in psi0], "alpha": args.alpha, "dt": args.dt, "steps": args.steps})
    return EXIT_OK, _report("analogy", inputs, {"psi": [float(x) for x in state.psi], "t": state.t,
                                                "total": float(np.sum(state.psi))})


def _psi0(text):
    try:
        vals = json.loads(text) if text.lstrip().startswith("[") else [float(x) for x in text.split(",")]
        return np.asarray(vals, dtype=np.float64)
    except (ValueError, TypeError):
        raise ParseError(1, 1, f"bad --psi0 value {text!r}") from None


# entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgraph", description="Spectra and quantum states of complex-weighted graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="matrix and eigenvalues of L or Q")
    sp.add_argument("file")
    sp.add_argument("--matrix", choices=("L", "Q"), default="L")
    sp.set_defaults(func=cmd_spectrum)

    st = sub.add_parser("state", help="density matrix, purity and mixture")
    st.add_argument("file")
    st.add_argument("--matrix", choices=("L", "Q"), default="L")
    st.set_defaults(func=cmd_state)

    en = sub.add_parser("entangle", help="two-qubit states from graph products")
    grp = en.add_mutually_exclusive_group(required=True)
    grp.add_argument("--recipe", choices=sorted(RECIPES) + ["werner"])
    grp.add_argument("--recipe-file")
    for name in ("w1", "w2", "w1p", "w2p", "w", "wp"):
        en.add_argument(f"--{name}", type=_complex_arg, default=1 + 0j)
    en.add_argument("--r1", type=float, default=1.0)
    en.add_argument("--r2", type=float, default=1.0)
    en.add_argument("--matrix", choices=("L", "Q"), default=None, help="werner only; default Q")
    en.set_defaults(func=cmd_entangle)

    ck = sub.add_parser("check", help="run property suites")
    ck.add_argument("file", nargs="?")
    ck.add_argument("--fuzz", action="store_true")
    ck.add_argument("--n", type=int, default=6)
    ck.add_argument("--trials", type=int, default=100)
    ck.add_argument("--seed", type=int, default=0)
    ck.add_argument("--suite", choices=("all",) + checks.SUITES, default="all")
    ck.add_argument("--golden")
    ck.set_defaults(func=cmd_check)

    an = sub.add_parser("analogy", help="random walk, diffusion, determinant, permanent")
    an.add_argument("kind", choices=("walk", "diffuse", "det", "perm"))
    an.add_argument("file")
    an.add_argument("--psi0", help="initial amounts, JSON list or comma separated")
    an.add_argument("--alpha", type=float, default=1.0)
    an.add_argument("--dt", type=float, default=0.01)
    an.add_argument("--steps", type=int, default=1000)
    an.set_defaults(func=cmd_analogy)
    return p


def _error_line(exc) -> str:
    out = {"error": type(exc).__name__, "message": getattr(exc, "message", None) or str(exc)}
    if isinstance(exc, ParseError):
        out.update({"line": exc.line, "column": exc.column, "kind": exc.kind})
    return json.dumps(out, sort_keys=False)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report = args.func(args)
    except ParseError as exc:
        print(_error_line(exc), file=sys.stderr)
        return EXIT_PARSE
    except (QGraphError, ValueError) as exc:
        print(_error_line(exc), file=sys.stderr)
        return EXIT_COMPUTE
    sys.stdout.write(to_json(report) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
