# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Hermitian Jacobi sweeps, Ryser permanent, Coates sum.

Signatures and semantics mirror ``qgraph._pykernels``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

cdef extern from "complex.h":
    double cabs(double complex) nogil
    double complex conj(double complex) nogil
    double creal(double complex) nogil


def jacobi_eigh(m, double tol, int max_sweeps):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(m, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] varr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = arr
    cdef double complex[:, ::1] v = varr
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double total = 0.0, diag, off, target, mag, app, aqq, tau, t, c, s
    cdef double complex apq, phase, phc, x, y
    for p in range(n):
        for q in range(n):
            total += cabs(a[p, q]) ** 2
    target = tol * sqrt(total)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += cabs(a[p, q]) ** 2
        if sqrt(off) <= target:
            return np.array([creal(a[k, k]) for k in range(n)], dtype=np.float64), varr, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = cabs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                phc = conj(phase)
                app = creal(a[p, p])
                aqq = creal(a[q, q])
                tau = (aqq - app) / (2.0 * mag)
                t = 1.0 / (fabs(tau) + sqrt(1.0 + tau * tau))
                if tau < 0:
                    t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - s * phc * y
                    a[k, q] = s * x + c * phc * y
                for k in range(n):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * phase * y
                    a[q, k] = s * x + c * phase * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = creal(a[p, p])
                a[q, q] = creal(a[q, q])
                for k in range(n):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - s * phc * y
                    v[k, q] = s * x + c * phc * y
    return np.array([creal(a[k, k]) for k in range(n)], dtype=np.float64), varr, -1


def permanent_ryser(m):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.ascontiguousarray(m, dtype=np.complex128)
    cdef double complex[:, ::1] a = arr
    cdef Py_ssize_t n = arr.shape[0]
    if n == 0:
        return 1 + 0j
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] rsarr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] rowsum = rsarr
    cdef double complex total = 0.0, prod
    cdef double sign = 1.0
    cdef long long k, gray = 0, limit = (<long long>1) << n
    cdef Py_ssize_t i, bit
    for k in range(1, limit):
        bit = 0
        while not ((k >> bit) & 1):
            bit += 1
        gray ^= (<long long>1) << bit
        if (gray >> bit) & 1:
            for i in range(n):
                rowsum[i] += a[i, bit]
        else:
            for i in range(n):
                rowsum[i] -= a[i, bit]
        sign = -sign
        prod = 1.0
        for i in range(n):
            prod = prod * rowsum[i]
        total += sign * prod
    if n % 2:
        total = -total
    return complex(total.real, total.imag)


cdef int _cycles(int* sigma, int* seen, int n) nogil:
    cdef int s, k, c = 0
    for s in range(n):
        seen[s] = 0
    for s in range(n):
        if not seen[s]:
            c += 1
            k = s
            while not seen[k]:
                seen[k] = 1
                k = sigma[k]
    return c


def coates_sum(m):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.ascontiguousarray(m, dtype=np.complex128)
    cdef double complex[:, ::1] a = arr
    cdef int n = arr.shape[0]
    if n == 0:
        return 1 + 0j
    cdef cnp.ndarray[cnp.int32_t, ndim=1] sig_arr = np.full(n, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] used_arr = np.zeros(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] seen_arr = np.zeros(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] w_arr = np.zeros(n + 1, dtype=np.complex128)
    cdef int* sigma = <int*> sig_arr.data
    cdef int* used = <int*> used_arr.data
    cdef int* seen = <int*> seen_arr.data
    cdef double complex[::1] w = w_arr
    cdef double complex total = 0.0
    cdef int i = 0, j, c
    w[0] = 1.0
    # iterative depth-first search over rows; sigma[i] is the current column
    while i >= 0:
        j = sigma[i] + 1
        if sigma[i] >= 0:
            used[sigma[i]] = 0
        while j < n and (used[j] or a[i, j] == 0):
            j += 1
        if j == n:
            sigma[i] = -1
            i -= 1
            continue
        sigma[i] = j
        used[j] = 1
        w[i + 1] = w[i] * a[i, j]
        if i == n - 1:
            c = _cycles(sigma, seen, n)
            if c % 2:
                total -= w[n]
            else:
                total += w[n]
        else:
            i += 1
    if n % 2:
        total = -total
    return complex(total.real, total.imag)
