# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same signatures and semantics as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot, copysign, INFINITY
from libc.float cimport DBL_EPSILON

from . import _dpstates

cnp.import_array()


cdef extern from "complex.h" nogil:
    double creal(double complex)
    double cimag(double complex)
    double cabs(double complex)
    double complex conj(double complex)


# ---------------------------------------------------------------- eigensolver

cdef int _tridiagonal(double complex[:, ::1] a, double[::1] d, double[::1] e,
                      double complex[::1] v, double complex[::1] tmp, int n) nogil:
    cdef int i, j, r, c
    cdef double alpha, tail, vn, ax0
    cdef double complex phase, s, sub
    for j in range(n - 2):
        alpha = 0.0
        tail = 0.0
        for i in range(j + 1, n):
            alpha += creal(a[i, j]) * creal(a[i, j]) + cimag(a[i, j]) * cimag(a[i, j])
        tail = alpha - (creal(a[j + 1, j]) * creal(a[j + 1, j]) + cimag(a[j + 1, j]) * cimag(a[j + 1, j]))
        if tail <= 0.0:
            continue
        alpha = sqrt(alpha)
        ax0 = cabs(a[j + 1, j])
        if ax0 > 0.0:
            phase = a[j + 1, j] / ax0
        else:
            phase = 1.0
        vn = 0.0
        for i in range(j + 1, n):
            v[i] = a[i, j]
        v[j + 1] = v[j + 1] + phase * alpha
        for i in range(j + 1, n):
            vn += creal(v[i]) * creal(v[i]) + cimag(v[i]) * cimag(v[i])
        vn = sqrt(vn)
        for i in range(j + 1, n):
            v[i] = v[i] / vn
        # rows: a[j+1:, :] -= 2 v (v^* a[j+1:, :])
        for c in range(n):
            s = 0.0
            for r in range(j + 1, n):
                s = s + conj(v[r]) * a[r, c]
            tmp[c] = s
        for r in range(j + 1, n):
            for c in range(n):
                a[r, c] = a[r, c] - 2.0 * v[r] * tmp[c]
        # columns: a[:, j+1:] -= 2 (a[:, j+1:] v) v^*
        for r in range(n):
            s = 0.0
            for c in range(j + 1, n):
                s = s + a[r, c] * v[c]
            tmp[r] = s
        for r in range(n):
            for c in range(j + 1, n):
                a[r, c] = a[r, c] - 2.0 * tmp[r] * conj(v[c])
    for i in range(n):
        d[i] = creal(a[i, i])
    for i in range(n - 1):
        e[i] = cabs(a[i + 1, i])
    e[n - 1] = 0.0
    return 0


cdef int _tql(double[::1] d, double[::1] e, int n) nogil:
    cdef int l, m, i, it
    cdef double dd, g, r, s, c, p, f, b
    cdef bint deflated
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= DBL_EPSILON * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                return -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


cdef void _sort_desc(double[::1] d, int n) nogil:
    cdef int i, j
    cdef double x
    for i in range(1, n):
        x = d[i]
        j = i - 1
        while j >= 0 and d[j] < x:
            d[j + 1] = d[j]
            j -= 1
        d[j + 1] = x


cdef int _eigvals_into(const double complex[:, :, ::1] h, Py_ssize_t s, int k,
                       double complex[:, ::1] a, double[::1] d, double[::1] e,
                       double complex[::1] v, double complex[::1] tmp) nogil:
    cdef int i, j
    for i in range(k):
        for j in range(k):
            a[i, j] = h[s, i, j]
    _tridiagonal(a, d, e, v, tmp, k)
    if _tql(d, e, k) != 0:
        return -1
    _sort_desc(d, k)
    return 0


def eigvalsh_batch(h):
    cdef const double complex[:, :, ::1] hv = np.ascontiguousarray(h, dtype=np.complex128)
    cdef Py_ssize_t size = hv.shape[0], s
    cdef int m = hv.shape[1], i
    out = np.empty((size, m), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double complex[:, ::1] a = np.empty((m, m), dtype=np.complex128)
    cdef double[::1] d = np.empty(m), e = np.empty(m)
    cdef double complex[::1] v = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] tmp = np.empty(m, dtype=np.complex128)
    cdef int bad = 0
    with nogil:
        for s in range(size):
            if _eigvals_into(hv, s, m, a, d, e, v, tmp) != 0:
                bad = 1
                break
            for i in range(m):
                ov[s, i] = d[i]
    if bad:
        raise ArithmeticError("QL iteration failed to converge")
    return out


def minor_spectra_batch(h):
    cdef const double complex[:, :, ::1] hv = np.ascontiguousarray(h, dtype=np.complex128)
    cdef Py_ssize_t size = hv.shape[0], s
    cdef int m = hv.shape[1], i, k
    out = np.zeros((size, m, m), dtype=np.float64)
    cdef double[:, :, ::1] ov = out
    cdef double complex[:, ::1] a = np.empty((m, m), dtype=np.complex128)
    cdef double[::1] d = np.empty(m), e = np.empty(m)
    cdef double complex[::1] v = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] tmp = np.empty(m, dtype=np.complex128)
    cdef int bad = 0
    with nogil:
        for s in range(size):
            for k in range(1, m + 1):
                if _eigvals_into(hv, s, k, a, d, e, v, tmp) != 0:
                    bad = 1
                    break
                for i in range(k):
                    ov[s, k - 1, i] = d[i]
            if bad:
                break
    if bad:
        raise ArithmeticError("QL iteration failed to converge")
    return out


# ------------------------------------------------------------ multi-path LPP

def lpp_batch(w, int ell, int k, str mode):
    cdef const double[:, :, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] st = _dpstates.states(k, ell)
    cdef const cnp.int64_t[:, ::1] pairs = _dpstates.transitions(k, ell, mode)
    cdef Py_ssize_t size = wv.shape[0], n = wv.shape[1], s, col, p
    cdef int n_states = st.shape[0], n_pairs = pairs.shape[0], q, r
    cdef bint lattice = mode == "lattice"
    out = np.empty(size, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double[::1] value = np.empty(n_states), new = np.empty(n_states)
    cdef double[::1] top = np.empty(n_states), bottom = np.empty(n_states)
    cdef double[::1] cum = np.empty(k + 1)
    cdef double cand, best, acc
    cdef int src, dst
    if k > wv.shape[2]:
        raise ValueError("k exceeds the number of columns")
    with nogil:
        for s in range(size):
            for q in range(n_states):
                value[q] = 0.0
            for col in range(n):
                if lattice:
                    cum[0] = 0.0
                    for r in range(k):
                        cum[r + 1] = cum[r] + wv[s, col, r]
                    for q in range(n_states):
                        acc = 0.0
                        best = 0.0
                        for r in range(ell):
                            acc += cum[st[q, r] + 1]
                            best += cum[st[q, r]]
                        top[q] = acc
                        bottom[q] = best
                else:
                    for q in range(n_states):
                        acc = 0.0
                        for r in range(ell):
                            acc += wv[s, col, st[q, r]]
                        top[q] = acc
                        bottom[q] = 0.0
                for q in range(n_states):
                    new[q] = -INFINITY
                for p in range(n_pairs):
                    src = pairs[p, 0]
                    dst = pairs[p, 1]
                    cand = value[src] - bottom[src] + top[dst]
                    if cand > new[dst]:
                        new[dst] = cand
                for q in range(n_states):
                    value[q] = new[q]
            best = -INFINITY
            for q in range(n_states):
                if value[q] > best:
                    best = value[q]
            ov[s] = best
    return out


# ----------------------------------------------------------------------- RSK

cdef void _insert(cnp.int64_t[:, ::1] counts, cnp.int64_t[:, ::1] groups,
                  cnp.int64_t[:, ::1] bumped, int n_groups, int k) nogil:
    cdef int r = 0, g, nb, x, y, i
    cdef cnp.int64_t m, t
    while n_groups > 0 and r < k:
        nb = 0
        for g in range(n_groups):
            x = <int>groups[g, 0]
            m = groups[g, 1]
            y = x + 1
            while m > 0 and y < k:
                t = counts[r, y]
                if t > m:
                    t = m
                if t > 0:
                    counts[r, y] -= t
                    counts[r, x] += t
                    m -= t
                    if nb > 0 and bumped[nb - 1, 0] == y:
                        bumped[nb - 1, 1] += t
                    else:
                        bumped[nb, 0] = y
                        bumped[nb, 1] = t
                        nb += 1
                y += 1
            counts[r, x] += m
        for i in range(nb):
            groups[i, 0] = bumped[i, 0]
            groups[i, 1] = bumped[i, 1]
        n_groups = nb
        r += 1


def rsk_word_shape_batch(words, int k):
    cdef const cnp.int64_t[:, ::1] wv = np.ascontiguousarray(words, dtype=np.int64)
    cdef Py_ssize_t size = wv.shape[0], n = wv.shape[1], s, i
    cdef int r, a
    out = np.zeros((size, k), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] ov = out
    cdef cnp.int64_t[:, ::1] counts = np.zeros((k, k), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] groups = np.zeros((k, 2), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] bumped = np.zeros((k, 2), dtype=np.int64)
    with nogil:
        for s in range(size):
            for r in range(k):
                for a in range(k):
                    counts[r, a] = 0
            for i in range(n):
                groups[0, 0] = wv[s, i] - 1
                groups[0, 1] = 1
                _insert(counts, groups, bumped, 1, k)
            for r in range(k):
                for a in range(k):
                    ov[s, r] += counts[r, a]
    return out


def lis_weak_batch(words, int k):
    cdef const cnp.int64_t[:, ::1] wv = np.ascontiguousarray(words, dtype=np.int64)
    cdef Py_ssize_t size = wv.shape[0], n = wv.shape[1], s, i, lo, hi, mid, length
    cdef cnp.int64_t x
    out = np.zeros(size, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef cnp.int64_t[::1] tails = np.zeros(max(n, 1), dtype=np.int64)
    with nogil:
        for s in range(size):
            length = 0
            for i in range(n):
                x = wv[s, i]
                lo = 0
                hi = length
                while lo < hi:
                    mid = (lo + hi) // 2
                    if tails[mid] <= x:
                        lo = mid + 1
                    else:
                        hi = mid
                tails[lo] = x
                if lo == length:
                    length += 1
            ov[s] = length
    return out


def rsk_array_pattern_batch(w):
    cdef const cnp.int64_t[:, :, ::1] wv = np.ascontiguousarray(w, dtype=np.int64)
    cdef Py_ssize_t size = wv.shape[0], n = wv.shape[1], s, i
    cdef int m = wv.shape[2], r, a, j, ng, kk
    cdef cnp.int64_t acc
    out = np.zeros((size, m, m), dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] ov = out
    cdef cnp.int64_t[:, ::1] counts = np.zeros((m, m), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] groups = np.zeros((m, 2), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] bumped = np.zeros((m, 2), dtype=np.int64)
    with nogil:
        for s in range(size):
            for r in range(m):
                for a in range(m):
                    counts[r, a] = 0
            for i in range(n):
                ng = 0
                for j in range(m):
                    if wv[s, i, j] > 0:
                        groups[ng, 0] = j
                        groups[ng, 1] = wv[s, i, j]
                        ng += 1
                _insert(counts, groups, bumped, ng, m)
            for r in range(m):
                acc = 0
                for kk in range(m):
                    acc += counts[r, kk]
                    if kk >= r:
                        ov[s, kk, r] = acc
    return out
