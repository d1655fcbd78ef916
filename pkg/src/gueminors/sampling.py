"""Seeded generation of GUE matrices, geometric arrays, random words and Brownian grids.

Every sampler takes either an :class:`RngStream` or a ready
``numpy.random.Generator``.  Streams are counter based (Philox keyed by a
``SeedSequence`` spawn key), so replicate ``i`` of an experiment draws the
same numbers regardless of which worker runs it or in which order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hermitian import eigenvalues_hermitian


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    stream_index: int = 0
    domain: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.master_seed < 0 or self.stream_index < 0:
            raise ValueError("seed and stream index must be nonnegative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(*self.domain, self.stream_index))
        return np.random.Generator(np.random.Philox(seq))

    def child(self, index: int) -> "RngStream":
        """Independent stream nested under this one."""
        return RngStream(self.master_seed, index, (*self.domain, self.stream_index))


def _gen(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


# ----------------------------------------------------------------------- GUE

def sample_gue_batch(m: int, size: int, rng) -> np.ndarray:
    """``size`` independent ``m x m`` GUE matrices, density proportional to exp(-Tr H^2 / 2)."""
    if m < 1:
        raise ValueError("matrix size must be >= 1")
    g = _gen(rng)
    diag = g.standard_normal((size, m))
    iu = np.triu_indices(m, 1)
    n_off = len(iu[0])
    off = g.standard_normal((size, n_off, 2)) * np.sqrt(0.5)
    h = np.zeros((size, m, m), dtype=np.complex128)
    h[:, np.arange(m), np.arange(m)] = diag
    vals = off[..., 0] + 1j * off[..., 1]
    h[:, iu[0], iu[1]] = vals
    h[:, iu[1], iu[0]] = vals.conj()
    return h


def sample_gue(m: int, rng) -> np.ndarray:
    return sample_gue_batch(m, 1, rng)[0]


# ---------------------------------------------------------- geometric arrays

def geometric_moments(q: float) -> tuple[float, float]:
    """Mean and variance of the law sum_k q^k (1-q) delta_k."""
    return q / (1 - q), q / (1 - q) ** 2


def sample_geometric_array_batch(size: int, n: int, m: int, q: float, rng) -> np.ndarray:
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    g = _gen(rng)
    # numpy's geometric lives on {1, 2, ...}
    return g.geometric(1.0 - q, size=(size, n, m)).astype(np.int64) - 1


def sample_geometric_array(n: int, m: int, q: float, rng) -> np.ndarray:
    return sample_geometric_array_batch(1, n, m, q, rng)[0]


# -------------------------------------------------------------------- words

def validate_probability_vector(p, tol: float = 1e-12, sorted_desc: bool = True) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or len(p) == 0:
        raise ValueError("probability vector must be a nonempty 1-d sequence")
    if np.any(p < 0):
        raise ValueError("probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    if sorted_desc and np.any(np.diff(p) > tol):
        raise ValueError("letter probabilities must be sorted nonincreasing")
    return p


def sample_words_iid(size: int, n: int, p, rng) -> np.ndarray:
    """``size`` words of length ``n``; letter ``i`` (1-based) has probability ``p[i-1]``."""
    p = validate_probability_vector(p)
    g = _gen(rng)
    cdf = np.cumsum(p)[:-1]
    u = g.random((size, n))
    return np.searchsorted(cdf, u, side="right").astype(np.int64) + 1


def sample_word_iid(n: int, p, rng) -> np.ndarray:
    return sample_words_iid(1, n, p, rng)[0]


def sample_words_markov(size: int, n: int, spec, rng) -> np.ndarray:
    """Words from the cyclic chain ``X_{t+1} = X_t + R_t mod k`` with ``R_t ~ p(.)`` i.i.d.

    The first letter is uniform, which is stationary for a doubly stochastic
    cyclic transition matrix.
    """
    g = _gen(rng)
    k = spec.k
    start = g.integers(0, k, size=(size, 1))
    steps = np.searchsorted(np.cumsum(spec.p)[:-1], g.random((size, max(n - 1, 0))), side="right")
    walk = np.concatenate([start, start + np.cumsum(steps, axis=1)], axis=1)
    return (walk % k).astype(np.int64) + 1


def sample_word_markov(n: int, spec, rng) -> np.ndarray:
    return sample_words_markov(1, n, spec, rng)[0]


# ---------------------------------------------------------- Brownian grids

@dataclass(frozen=True)
class BrownianGrid:
    """Values ``B_j(s / n)`` for ``s = 0..n``, stored with shape ``(n + 1, n_dims)``."""

    values: np.ndarray
    covariance_tag: str = "standard"
    cov: np.ndarray | None = None

    @property
    def n_steps(self) -> int:
        return self.values.shape[0] - 1

    @property
    def n_dims(self) -> int:
        return self.values.shape[1]

    def increments(self) -> np.ndarray:
        return np.diff(self.values, axis=0)

    @classmethod
    def from_increments(cls, incr: np.ndarray, **kw) -> "BrownianGrid":
        incr = np.asarray(incr, dtype=float)
        vals = np.vstack([np.zeros((1, incr.shape[1])), np.cumsum(incr, axis=0)])
        return cls(vals, **kw)


def brownian_increments(size: int, n_steps: int, n_dims: int, rng) -> np.ndarray:
    """Standard Brownian increments, shape ``(size, n_steps, n_dims)``, variance ``1/n_steps``."""
    if n_steps < 1 or n_dims < 1:
        raise ValueError("n_steps and n_dims must be >= 1")
    g = _gen(rng)
    return g.standard_normal((size, n_steps, n_dims)) * np.sqrt(1.0 / n_steps)


def sample_brownian_grid(n_dims: int, n_steps: int, rng) -> BrownianGrid:
    return BrownianGrid.from_increments(brownian_increments(1, n_steps, n_dims, rng)[0])


def covariance_root(cov, tol: float = 1e-10) -> np.ndarray:
    """``A`` with ``A @ A.T == cov`` for a symmetric PSD ``cov`` (eigendecomposition root)."""
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be square")
    if np.abs(cov - cov.T).max() > tol:
        raise ValueError("covariance must be symmetric")
    vals, vecs = eigenvalues_hermitian(cov, vectors=True)
    if vals.min() < -tol:
        raise ValueError(f"covariance is not PSD (min eigenvalue {vals.min():.3e})")
    # round-off eigenvalues of a singular cov would leak ~1e-8 into the null direction
    vals = np.where(vals <= tol * max(1.0, vals.max()), 0.0, vals)
    return vecs.real * np.sqrt(vals)


def correlated_increments(cov, size: int, n_steps: int, rng) -> np.ndarray:
    root = covariance_root(cov)
    std = brownian_increments(size, n_steps, root.shape[0], rng)
    return std @ root.T


def sample_correlated_brownian(cov, n_steps: int, rng) -> BrownianGrid:
    cov = np.asarray(cov, dtype=float)
    incr = correlated_increments(cov, 1, n_steps, rng)[0]
    return BrownianGrid.from_increments(incr, covariance_tag="correlated", cov=cov)
