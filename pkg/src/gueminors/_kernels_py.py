"""Pure-Python reference kernels.

Every function here has a twin with the same signature in the compiled
``_kernels`` extension.  These versions are the readable reference and the
fallback when the extension is not built; they are orders of magnitude slower
on Monte Carlo sized batches.
"""

from __future__ import annotations

import math
from bisect import bisect_right

import numpy as np

from . import _dpstates

_EPS = np.finfo(np.float64).eps


# --------------------------------------------------------------------------
# Hermitian eigensolver: Householder tridiagonalization + implicit-shift QL
# --------------------------------------------------------------------------

def householder_tridiagonal(a, want_q=False):
    """Reduce a Hermitian matrix to real symmetric tridiagonal form.

    Returns ``(d, e, q)`` with ``d`` the diagonal, ``e[i]`` the coupling between
    ``i`` and ``i+1`` (``e[-1] == 0``) and, if requested, the unitary ``q``
    such that ``a = q @ T @ q^*``.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    q = np.eye(n, dtype=np.complex128) if want_q else None
    for j in range(n - 2):
        x = a[j + 1:, j]
        alpha = math.sqrt(float(np.vdot(x, x).real))
        tail = math.sqrt(float(np.vdot(x[1:], x[1:]).real))
        if tail == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if abs(x0) > 0.0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= math.sqrt(float(np.vdot(v, v).real))
        # H = I - 2 v v^*, applied from both sides to the trailing block
        blk = a[j + 1:, :]
        blk -= 2.0 * np.outer(v, v.conj() @ blk)
        blk = a[:, j + 1:]
        blk -= 2.0 * np.outer(blk @ v, v.conj())
        if q is not None:
            qb = q[:, j + 1:]
            qb -= 2.0 * np.outer(qb @ v, v.conj())
    d = a.diagonal().real.copy()
    e = np.zeros(n)
    phase = 1.0 + 0.0j
    phases = np.ones(n, dtype=np.complex128)
    for i in range(n - 1):
        sub = a[i + 1, i]
        e[i] = abs(sub)
        if e[i] > 0.0:
            phase = phase * sub / e[i]
        phases[i + 1] = phase
    if q is not None:
        q = q * phases[None, :]
    return d, e, q


def tql_implicit(d, e, z=None, max_iter=60):
    """Implicit-shift QL on a real symmetric tridiagonal matrix, in place.

    ``d`` holds the diagonal, ``e[i]`` the coupling between ``i`` and ``i+1``.
    If ``z`` is given its columns are rotated alongside (eigenvector
    accumulation).
    """
    n = len(d)
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ArithmeticError("QL iteration failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
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
                if z is not None:
                    zi = z[:, i].copy()
                    zi1 = z[:, i + 1]
                    z[:, i] = c * zi - s * zi1
                    z[:, i + 1] = s * zi + c * zi1
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d


def eigh(a, want_vectors=False):
    """Eigenvalues (descending) and optionally eigenvectors of a Hermitian matrix."""
    d, e, q = householder_tridiagonal(a, want_q=want_vectors)
    if not want_vectors:
        d = tql_implicit(d, e)
        return np.sort(d)[::-1].copy(), None
    z = np.eye(len(d))
    d = tql_implicit(d, e, z)
    order = np.argsort(-d, kind="stable")
    return d[order], (q @ z)[:, order]


def eigvalsh_batch(h):
    h = np.asarray(h, dtype=np.complex128)
    out = np.empty(h.shape[:2], dtype=np.float64)
    for s in range(h.shape[0]):
        out[s] = eigh(h[s])[0]
    return out


def minor_spectra_batch(h):
    h = np.asarray(h, dtype=np.complex128)
    size, m = h.shape[:2]
    out = np.zeros((size, m, m), dtype=np.float64)
    for s in range(size):
        for k in range(1, m + 1):
            out[s, k - 1, :k] = eigh(h[s, :k, :k])[0]
    return out


# --------------------------------------------------------------------------
# Multi-path last passage percolation
# --------------------------------------------------------------------------

def _lpp_one(w, ell, k, mode, st, pairs):
    n = w.shape[0]
    value = np.zeros(len(st))
    for col in range(n):
        row = w[col, :k]
        new = np.full(len(st), -np.inf)
        if mode == "grid":
            gain_dst = row[st].sum(axis=1)
            for src, dst in pairs:
                cand = value[src] + gain_dst[dst]
                if cand > new[dst]:
                    new[dst] = cand
        else:
            cum = np.concatenate(([0.0], np.cumsum(row)))
            top = cum[st + 1].sum(axis=1)
            bottom = cum[st].sum(axis=1)
            for src, dst in pairs:
                cand = value[src] - bottom[src] + top[dst]
                if cand > new[dst]:
                    new[dst] = cand
        value = new
    return float(value.max())


def lpp_batch(w, ell, k, mode):
    """Maximal total weight of ``ell`` ordered paths over the first ``k`` columns.

    ``w`` has shape ``(S, N, K)``: ``S`` independent arrays with abscissa along
    axis 1 and ordinate along axis 2.
    """
    w = np.asarray(w, dtype=np.float64)
    st = _dpstates.states(k, ell)
    pairs = _dpstates.transitions(k, ell, mode)
    return np.array([_lpp_one(w[s], ell, k, mode, st, pairs) for s in range(w.shape[0])])


# --------------------------------------------------------------------------
# RSK on words and arrays
# --------------------------------------------------------------------------

def _insert_counts(counts, groups):
    """Row-insert weakly increasing letter groups into a count-encoded tableau.

    ``counts[r, a]`` is the multiplicity of letter ``a`` in row ``r``.
    ``groups`` is a list of ``(letter, multiplicity)`` with increasing letters.
    """
    r = 0
    while groups:
        row = counts[r]
        bumped = []
        for x, m in groups:
            y = x + 1
            while m > 0 and y < row.shape[0]:
                t = min(m, row[y])
                if t > 0:
                    row[y] -= t
                    row[x] += t
                    m -= t
                    if bumped and bumped[-1][0] == y:
                        bumped[-1][1] += t
                    else:
                        bumped.append([y, t])
                y += 1
            row[x] += m
        groups = bumped
        r += 1


def rsk_word_shape_batch(words, k):
    words = np.asarray(words)
    out = np.zeros((words.shape[0], k), dtype=np.int64)
    for s in range(words.shape[0]):
        counts = np.zeros((k, k), dtype=np.int64)
        for letter in words[s]:
            _insert_counts(counts, [[int(letter) - 1, 1]])
        out[s] = counts.sum(axis=1)
    return out


def lis_weak_batch(words, k):
    words = np.asarray(words)
    out = np.zeros(words.shape[0], dtype=np.int64)
    for s in range(words.shape[0]):
        tails = []
        for letter in words[s]:
            pos = bisect_right(tails, int(letter))
            if pos == len(tails):
                tails.append(int(letter))
            else:
                tails[pos] = int(letter)
        out[s] = len(tails)
    return out


def rsk_array_pattern_batch(w):
    w = np.asarray(w, dtype=np.int64)
    size, n, m = w.shape
    out = np.zeros((size, m, m), dtype=np.int64)
    for s in range(size):
        counts = np.zeros((m, m), dtype=np.int64)
        for i in range(n):
            groups = [[j, int(w[s, i, j])] for j in range(m) if w[s, i, j] > 0]
            _insert_counts(counts, groups)
        cum = np.cumsum(counts, axis=1)
        for k in range(m):
            out[s, k, :k + 1] = cum[:k + 1, k]
    return out
