"""Reference kernels in numpy/pure Python.

Same signatures as the compiled ``_ckernels`` module. Used when the
extension is not built or when ``QGRAPH_PURE_PYTHON=1``.
"""
import math

import numpy as np


def jacobi_eigh(m, tol, max_sweeps):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Returns ``(values, vectors, sweeps)``; values are unsorted, ``sweeps`` is
    ``-1`` when the iteration did not converge.
    """
    a = np.array(m, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = tol * math.sqrt(float(np.sum(np.abs(a) ** 2)))
    for sweep in range(max_sweeps + 1):
        off = math.sqrt(float(np.sum(np.abs(a[~np.eye(n, dtype=bool)]) ** 2)))
        if off <= target:
            return np.real(np.diag(a)).copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(tau) + math.sqrt(1.0 + tau * tau))
                if tau < 0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # G = [[c, s], [-s*conj(phase), c*conj(phase)]] on (p, q)
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * phase.conjugate() * cq
                a[:, q] = s * cp + c * phase.conjugate() * cq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * phase * rq
                a[q, :] = s * rp + c * phase * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * phase.conjugate() * vq
                v[:, q] = s * vp + c * phase.conjugate() * vq
    return np.real(np.diag(a)).copy(), v, -1


def permanent_ryser(a):
    """Ryser's inclusion-exclusion formula with Gray-code column updates."""
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    rowsum = np.zeros(n, dtype=np.complex128)
    total = 0j
    sign = 1.0  # (-1)^{|S|}
    gray = 0
    for k in range(1, 1 << n):
        bit = (k & -k).bit_length() - 1
        gray ^= 1 << bit
        if gray >> bit & 1:
            rowsum += a[:, bit]
        else:
            rowsum -= a[:, bit]
        sign = -sign
        total += sign * complex(np.prod(rowsum))
    return complex((-1) ** n * total)


def coates_sum(a):
    """Determinant as a signed sum over linear subgraphs of the Coates digraph.

    Every permutation whose arcs ``i -> sigma(i)`` all carry nonzero weight is
    a linear subgraph; its sign is ``(-1)^(n + cycles)``.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    support = [[j for j in range(n) if a[i, j] != 0] for i in range(n)]
    sigma = [0] * n
    used = [False] * n
    total = [0j]

    def cycles():
        seen = [False] * n
        c = 0
        for s in range(n):
            if not seen[s]:
                c += 1
                k = s
                while not seen[k]:
                    seen[k] = True
                    k = sigma[k]
        return c

    def rec(i, w):
        if i == n:
            total[0] += (-1) ** cycles() * w
            return
        for j in support[i]:
            if not used[j]:
                used[j] = True
                sigma[i] = j
                rec(i + 1, w * a[i, j])
                used[j] = False

    rec(0, 1 + 0j)
    return complex((-1) ** n * total[0])
