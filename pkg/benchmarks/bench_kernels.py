"""Compare the compiled kernels with the pure-Python fallback.

Run from the repository root after an editable install::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]

Times are the best of ``--repeat`` runs. Each row also checks that the two
backends agree.
"""
from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from qgraph import _pykernels

try:
    from qgraph import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def _hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def _complex(rng, n):
    return np.ascontiguousarray(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))


def cases(rng):
    for n in (4, 8, 16, 32):
        m = _hermitian(rng, n)
        yield "jacobi_eigh", n, (lambda k, m=m: k.jacobi_eigh(m.copy(), 1e-12, 100)), \
            (lambda out: np.sort(np.asarray(out[0])))
    for n in (6, 9, 12):
        a = _complex(rng, n)
        yield "permanent_ryser", n, (lambda k, a=a: k.permanent_ryser(a)), (lambda out: out)
    for n in (5, 7, 9):
        a = _complex(rng, n)
        yield "coates_sum", n, (lambda k, a=a: k.coates_sum(a)), (lambda out: out)


def bench(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print rows as JSON")
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; reinstall without QGRAPH_NO_EXT=1", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    rows = []
    for name, n, call, key in cases(rng):
        agree = bool(np.allclose(key(call(_pykernels)), key(call(_ckernels)), rtol=1e-9, atol=1e-9))
        t_py = bench(lambda: call(_pykernels), args.repeat)
        t_c = bench(lambda: call(_ckernels), args.repeat)
        rows.append({"kernel": name, "n": n, "python_s": t_py, "cython_s": t_c,
                     "speedup": t_py / t_c, "agree": agree})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'kernel':<16}{'n':>4}{'python':>14}{'cython':>14}{'speedup':>10}  agree")
        for r in rows:
            print(f"{r['kernel']:<16}{r['n']:>4}{r['python_s'] * 1e3:>12.3f}ms"
                  f"{r['cython_s'] * 1e3:>12.3f}ms{r['speedup']:>9.1f}x  {r['agree']}")
    return 0 if all(r["agree"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
