"""Two-sample comparisons used to test equalities in law."""

from __future__ import annotations

import numpy as np
from scipy.special import kolmogorov

from .sampling import _gen


def _sample(a) -> np.ndarray:
    a = np.sort(np.asarray(a, dtype=float).ravel())
    if a.size == 0:
        raise ValueError("empty sample")
    return a


def ks_two_sample(a, b) -> tuple[float, float]:
    """Kolmogorov-Smirnov statistic and asymptotic p-value.

    The p-value is the Kolmogorov survival function at ``sqrt(n_a n_b / (n_a + n_b)) * D``.
    """
    a, b = _sample(a), _sample(b)
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    d = float(np.abs(fa - fb).max())
    en = np.sqrt(a.size * b.size / (a.size + b.size))
    return d, float(kolmogorov(en * d))


def wasserstein1(a, b) -> float:
    """L1 distance between the empirical CDFs (equivalently between quantile functions)."""
    a, b = _sample(a), _sample(b)
    pooled = np.sort(np.concatenate([a, b]))
    widths = np.diff(pooled)
    fa = np.searchsorted(a, pooled[:-1], side="right") / a.size
    fb = np.searchsorted(b, pooled[:-1], side="right") / b.size
    return float(np.sum(np.abs(fa - fb) * widths))


def _rows(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if v.ndim != 2 or v.shape[0] == 0:
        raise ValueError("vector sample must be a nonempty (n, d) array")
    return v


def _pairwise(x: np.ndarray) -> np.ndarray:
    sq = np.einsum("ij,ij->i", x, x)
    d2 = sq[:, None] + sq[None, :] - 2.0 * x @ x.T
    return np.sqrt(np.clip(d2, 0.0, None))


def energy_distance(a, b, n_permutations: int = 999, rng=0, max_points: int | None = 2000):
    """Energy statistic ``2 E|X-Y| - E|X-X'| - E|Y-Y'|`` with a permutation p-value.

    The statistic reported is the scaled form ``n m / (n + m) * E``.  With
    ``max_points`` set, each sample is first subsampled (without replacement)
    to at most that many rows so the pooled distance matrix fits in memory;
    the subsample comes from ``rng`` and is reproducible.
    """
    a, b = _rows(a), _rows(b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    g = _gen(rng) if not isinstance(rng, (int, np.integer)) else np.random.default_rng(int(rng))
    if max_points is not None:
        if a.shape[0] > max_points:
            a = a[g.choice(a.shape[0], max_points, replace=False)]
        if b.shape[0] > max_points:
            b = b[g.choice(b.shape[0], max_points, replace=False)]
    n, m = a.shape[0], b.shape[0]
    pooled = np.vstack([a, b])
    dist = _pairwise(pooled)
    total = dist.sum()

    def stat(labels: np.ndarray) -> np.ndarray:
        # labels: (N, P) indicator of membership in the first sample
        da = dist @ labels
        saa = np.einsum("ip,ip->p", labels, da)
        row = dist.sum(axis=1)
        sab = labels.T @ row - saa
        sbb = total - 2 * sab - saa
        e = 2 * sab / (n * m) - saa / n**2 - sbb / m**2
        return n * m / (n + m) * e

    base = np.zeros((n + m, 1))
    base[:n] = 1.0
    observed = float(stat(base)[0])
    if n_permutations <= 0:
        return observed, float("nan")
    exceed = 0
    chunk = 128
    done = 0
    while done < n_permutations:
        p = min(chunk, n_permutations - done)
        lab = np.zeros((n + m, p))
        for c in range(p):
            lab[g.permutation(n + m)[:n], c] = 1.0
        exceed += int(np.sum(stat(lab) >= observed - 1e-12 * abs(observed)))
        done += p
    return observed, (exceed + 1) / (n_permutations + 1)


def empirical_covariance(v) -> np.ndarray:
    v = _rows(v)
    if v.shape[0] < 2:
        raise ValueError("need at least two rows")
    return np.atleast_2d(np.cov(v, rowvar=False, ddof=1))
