"""Cyclic symmetric Markov chains: spectrum, eigenbasis, limiting covariance.

The step law is stored as ``p[r] = p(r)`` for ``r = 0..k-1`` (the chain moves
from letter ``i`` to ``i + r mod k`` with probability ``p(r)``).  The matrix
display labels ``p_1..p_k`` of a transition row correspond to ``p(0)..p(k-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np

from .sampling import BrownianGrid

TOL = 1e-12


class SingularSpecError(ValueError):
    """Some nontrivial eigenvalue of the transition matrix has modulus one."""


@dataclass(frozen=True)
class CyclicMarkovSpec:
    p: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        object.__setattr__(self, "p", p)
        k = len(p)
        if k < 1:
            raise ValueError("alphabet must be nonempty")
        if any(x < 0 for x in p):
            raise ValueError("step probabilities must be nonnegative")
        if abs(sum(p) - 1.0) > TOL:
            raise ValueError(f"step probabilities sum to {sum(p)!r}, not 1")
        for r in range(k):
            if abs(p[r] - p[(k - r) % k]) > TOL:
                raise ValueError(f"p is not symmetric: p({r}) != p({k - r})")
        if k > 1:
            _check_primitive(p)

    @classmethod
    def from_row_labels(cls, labels) -> "CyclicMarkovSpec":
        """From the first transition row ``(p_1, ..., p_k)``."""
        return cls(tuple(labels))

    @property
    def k(self) -> int:
        return len(self.p)

    @property
    def row_labels(self) -> tuple[float, ...]:
        return self.p

    def transition_matrix(self) -> np.ndarray:
        k = self.k
        idx = (np.arange(k)[None, :] - np.arange(k)[:, None]) % k
        return np.asarray(self.p)[idx]

    @cached_property
    def spectral(self) -> "MarkovSpectralData":
        return build_eigenbasis(self)


def _check_primitive(p) -> None:
    """Irreducible and aperiodic, from BFS levels on the support graph of the walk."""
    k = len(p)
    support = [r for r in range(k) if p[r] > 0]
    level = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for r in support:
                j = (i + r) % k
                if j not in level:
                    level[j] = level[i] + 1
                    nxt.append(j)
        frontier = nxt
    if len(level) < k:
        raise ValueError("chain is not irreducible")
    period = 0
    for i in range(k):
        for r in support:
            period = gcd(period, level[i] + 1 - level[(i + r) % k])
    if period != 1:
        raise ValueError(f"chain is periodic with period {period}")


def markov_eigenvalues(spec: CyclicMarkovSpec) -> np.ndarray:
    """``lambda_l = sum_{r=1}^k p(r) cos(2 pi (l-1) r / k)`` for ``l = 1..k``."""
    k = spec.k
    r = np.arange(1, k + 1)
    pr = np.asarray(spec.p)[r % k]
    ell = np.arange(k)[:, None]
    return (pr[None, :] * np.cos(2 * np.pi * ell * r[None, :] / k)).sum(axis=1)


@dataclass(frozen=True)
class MarkovSpectralData:
    lambdas: np.ndarray        # lambda_1..lambda_k
    S: np.ndarray              # orthogonal, columns (v1, v2, w2, v3, w3, ..., [v_{k/2+1}])
    column_lambdas: np.ndarray  # eigenvalue of P carried by each column of S
    lambda_sigma: np.ndarray   # (0, (1+l)/(1-l), ...) matched to the columns
    sigma: np.ndarray          # S diag(lambda_sigma) S^T


def build_eigenbasis(spec: CyclicMarkovSpec) -> MarkovSpectralData:
    k = spec.k
    lam = markov_eigenvalues(spec)
    if k > 1 and np.any(np.abs(np.abs(lam[1:]) - 1.0) <= 1e-12):
        raise SingularSpecError("a nontrivial eigenvalue has modulus one")
    j = np.arange(1, k + 1)
    cols = [np.full(k, 1 / np.sqrt(k))]
    col_index = [0]
    for r in range(1, (k - 1) // 2 + 1):
        cols.append(np.sqrt(2.0 / k) * np.cos(2 * np.pi * r * j / k))
        cols.append(np.sqrt(2.0 / k) * np.sin(2 * np.pi * r * j / k))
        col_index += [r, r]
    if k % 2 == 0 and k > 1:
        cols.append((-1.0) ** (j + 1) / np.sqrt(k))
        col_index.append(k // 2)
    S = np.column_stack(cols)
    col_lam = lam[col_index]
    ls = np.zeros(k)
    ls[1:] = (1 + col_lam[1:]) / (1 - col_lam[1:])
    sigma = (S * ls) @ S.T
    return MarkovSpectralData(lam, S, col_lam, ls, sigma)


def markov_sigma(spec: CyclicMarkovSpec) -> np.ndarray:
    return spec.spectral.sigma


def normalized_sigma(spec: CyclicMarkovSpec) -> np.ndarray:
    sigma = markov_sigma(spec)
    return sigma / sigma[0, 0]


def sigma_u(k: int) -> np.ndarray:
    """Unit diagonal, off-diagonal ``-1/(k-1)``."""
    return np.eye(k) * (1 + 1 / (k - 1)) - 1 / (k - 1)


def eta(spec: CyclicMarkovSpec, ell: int) -> float:
    lam = markov_eigenvalues(spec)[ell - 1]
    return (1 + lam) / (1 - lam)


def check_sigma_u(spec: CyclicMarkovSpec, tol: float = 1e-10) -> tuple[bool, float]:
    """Whether the normalized covariance is the permutation-symmetric one.

    Returns ``(verdict, max entrywise deviation)``.
    """
    dev = float(np.abs(normalized_sigma(spec) - sigma_u(spec.k)).max())
    return dev <= tol, dev


def sigma_u_criterion_k4(spec: CyclicMarkovSpec, tol: float = 1e-10) -> bool:
    """Algebraic test ``p_3^2 = p_2 p_4`` on the transition-row labels (k = 4)."""
    if spec.k != 4:
        raise ValueError("criterion is specific to k = 4")
    _, p2, p3, p4 = spec.row_labels
    return abs(p3 * p3 - p2 * p4) <= tol


def k4_sigma_template(spec: CyclicMarkovSpec) -> np.ndarray:
    """The k = 4 covariance in terms of eta_2, eta_3 (proportional to markov_sigma)."""
    if spec.k != 4:
        raise ValueError("template is specific to k = 4")
    e2, e3 = eta(spec, 2), eta(spec, 3)
    a, b, c = 2 * e2 + e3, -e3, -2 * e2 + e3
    return np.array([[a, b, c, b], [b, a, b, c], [c, b, a, b], [b, c, b, a]])


def two_eta_family(p2: float) -> CyclicMarkovSpec:
    """k = 4 chain with ``2 eta_2 = eta_3``.

    Solving ``2 eta_2 = eta_3`` with ``p_1 = 1 - 2 p_2 - p_3`` gives
    ``p_3 = p_2 (3 - 2 p_2) / (1 + 2 p_2)``; valid while ``p_1 >= 0``.
    """
    p3 = p2 * (3 - 2 * p2) / (1 + 2 * p2)
    return CyclicMarkovSpec((1 - 2 * p2 - p3, p2, p3, p2))


def random_spec(k: int, rng, force_equal_12: bool = False) -> CyclicMarkovSpec:
    """Random valid symmetric step law (Dirichlet weights on p(0..k//2))."""
    half = k // 2
    mult = np.array([1] + [2] * half)
    if k % 2 == 0:
        mult[-1] = 1
    while True:
        u = rng.dirichlet(np.ones(half + 1))
        if force_equal_12 and half >= 2:
            u[2] = u[1]
        u = u / (u * mult).sum()
        p = [u[min(r, k - r)] for r in range(k)]
        p[0] = 1.0 - sum(p[1:])
        try:
            spec = CyclicMarkovSpec(tuple(p))
            spec.spectral
        except ValueError:
            continue
        return spec


# -------------------------------------------------- correlated constructions

def _standard_coords(grid: BrownianGrid | np.ndarray, k: int) -> np.ndarray:
    vals = grid.values if isinstance(grid, BrownianGrid) else np.asarray(grid, dtype=float)
    if vals.shape[-1] != k - 1:
        raise ValueError(f"expected {k - 1} standard coordinates B_2..B_k, got {vals.shape[-1]}")
    return vals


def correlated_from_standard(grid, spec: CyclicMarkovSpec):
    """``B~ = S sqrt(Lambda_Sigma) B`` with ``B_1`` dropped (its weight is zero).

    Accepts a :class:`BrownianGrid` of ``k-1`` dims (``B_2..B_k``) or a raw
    array whose last axis holds those coordinates (values or increments; the
    map is linear).
    """
    k = spec.k
    data = spec.spectral
    vals = _standard_coords(grid, k)
    mix = (data.S * np.sqrt(data.lambda_sigma))[:, 1:]
    out = vals @ mix.T
    if isinstance(grid, BrownianGrid):
        return BrownianGrid(out, covariance_tag="correlated", cov=data.sigma)
    return out


def correlated_from_standard_explicit(vals: np.ndarray, spec: CyclicMarkovSpec) -> np.ndarray:
    """Coordinate-wise cos/sin formula for the same map (independent transcription)."""
    k = spec.k
    lam = markov_eigenvalues(spec)
    vals = _standard_coords(vals, k)
    out = np.zeros(vals.shape[:-1] + (k,))
    for j in range(1, k + 1):
        acc = 0.0
        for r in range(1, (k - 1) // 2 + 1):
            amp = np.sqrt((1 + lam[r]) / (1 - lam[r]))
            b_cos = vals[..., 2 * r - 2]      # B_{2r}
            b_sin = vals[..., 2 * r - 1]      # B_{2r+1}
            acc = acc + np.sqrt(2.0 / k) * amp * (
                np.cos(2 * np.pi * r * j / k) * b_cos + np.sin(2 * np.pi * r * j / k) * b_sin
            )
        if k % 2 == 0:
            amp = np.sqrt((1 + lam[k // 2]) / (1 - lam[k // 2]))
            acc = acc + (-1.0) ** (j + 1) / np.sqrt(k) * amp * vals[..., k - 2]
        out[..., j - 1] = acc
    return out


def uniform_k3_alternative(vals: np.ndarray, spec: CyclicMarkovSpec) -> np.ndarray:
    """k = 3 construction from a standard 3-dim BM with the same law as the Markov one."""
    if spec.k != 3:
        raise ValueError("the alternative construction is specific to k = 3")
    lam2 = markov_eigenvalues(spec)[1]
    scale = np.sqrt(2 * (1 + lam2) / (3 * (1 - lam2)))
    total = vals.sum(axis=-1, keepdims=True)
    return scale * (np.sqrt(2 / 3) * vals - np.sqrt(1 / 6) * (total - vals))
