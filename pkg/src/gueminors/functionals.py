"""Maximal Brownian functionals evaluated on discretized grids.

The supremum over nondecreasing level maps is restricted to grid-aligned
breakpoints.  On a grid of ``n`` steps a path then sits on one level during
each step and may jump up between steps, so the functional is the ``grid``
mode of the multi-path DP applied to the Brownian increments.  Grid
restriction can only lower the supremum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .markov import CyclicMarkovSpec, correlated_from_standard, markov_eigenvalues
from .sampling import BrownianGrid, _gen, sample_gue_batch

DEFAULT_STEPS = 4096


@dataclass(frozen=True)
class StepTimePath:
    """Level ``j`` is held on ``[t_{j-1}, t_j)``; ``breakpoints = (t_0=0, ..., t_M=1)``."""

    breakpoints: tuple[float, ...]

    def __post_init__(self):
        t = tuple(float(x) for x in self.breakpoints)
        if len(t) < 2 or t[0] != 0.0 or t[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a > b for a, b in zip(t, t[1:])):
            raise ValueError("breakpoints must be nondecreasing")
        object.__setattr__(self, "breakpoints", t)

    @property
    def levels(self) -> int:
        return len(self.breakpoints) - 1

    def grid_indices(self, n_steps: int) -> np.ndarray:
        s = np.asarray(self.breakpoints) * n_steps
        idx = np.rint(s).astype(int)
        if np.abs(s - idx).max() > 1e-9:
            raise ValueError(f"breakpoints are not aligned to a grid of {n_steps} steps")
        return idx


def delta_functional(grid: BrownianGrid, path: StepTimePath) -> float:
    if path.levels > grid.n_dims:
        raise ValueError(f"path uses {path.levels} levels, grid has {grid.n_dims}")
    idx = path.grid_indices(grid.n_steps)
    vals = grid.values
    return float(sum(vals[idx[j + 1], j] - vals[idx[j], j] for j in range(path.levels)))


def _check_lk(ell: int, k: int, dims: int) -> None:
    if not 1 <= ell <= k <= dims:
        raise ValueError(f"need 1 <= ell <= k <= {dims}, got ell={ell}, k={k}")


def max_functional_batch(incr: np.ndarray, ell: int, k: int) -> np.ndarray:
    """Grid-restricted supremum for a stack of increment arrays ``(S, n, dims)``."""
    incr = np.asarray(incr, dtype=float)
    _check_lk(ell, k, incr.shape[2])
    return _backend.lpp_batch(incr, ell, k, "grid")


def max_functional(grid: BrownianGrid, ell: int, k: int) -> float:
    """sup of ``sum_i Delta_{pi_i}(B)`` over ordered ``pi_1 < ... < pi_ell <= k``."""
    _check_lk(ell, k, grid.n_dims)
    return float(max_functional_batch(grid.increments()[None], ell, k)[0])


def max_functional_bruteforce(grid: BrownianGrid, k: int) -> float:
    """Single path (``ell = 1``) by enumerating every grid-aligned breakpoint tuple."""
    _check_lk(1, k, grid.n_dims)
    n = grid.n_steps
    best = -np.inf

    def walk(j, prev, acc):
        nonlocal best
        if j == k:
            best = max(best, acc + grid.values[n, k - 1] - grid.values[prev, k - 1])
            return
        for t in range(prev, n + 1):
            walk(j + 1, t, acc + grid.values[t, j - 1] - grid.values[prev, j - 1])

    walk(1, 0, 0.0)
    return float(best)


def _hl1_coefficient(p_max: float, k1: int) -> float:
    if k1 < 1:
        raise ValueError("k_1 must be >= 1")
    rad = 1.0 - k1 * p_max
    if p_max <= 0 or rad < -1e-12:
        raise ValueError(f"need 0 < p_max <= 1/k_1, got p_max={p_max}, k_1={k1}")
    return (np.sqrt(max(rad, 0.0)) - 1.0) / k1


def hl1_limit_functional(grid: BrownianGrid, p_max: float, k1: int) -> float:
    coef = _hl1_coefficient(p_max, k1)
    _check_lk(1, k1, grid.n_dims)
    return float(coef * grid.values[-1, :k1].sum() + max_functional(grid, 1, k1))


def gue_limit_sample(k1: int, p_max: float, rng, variant: str = "b", size: int | None = None):
    """Samples of the i.i.d.-word limit law of the rescaled longest increasing subsequence.

    ``variant="a"``: ``coef * Tr H + lambda_max(H)``.
    ``variant="b"``: ``lambda_max(H) - p Tr H - sqrt(p (1 - k_1 p)) Z`` with ``Z`` independent.
    """
    coef = _hl1_coefficient(p_max, k1)
    g = _gen(rng)
    n = 1 if size is None else size
    h = sample_gue_batch(k1, n, g)
    top = _backend.eigvalsh_batch(h)[:, 0]
    trace = np.einsum("sii->s", h).real
    if variant == "a":
        out = coef * trace + top
    elif variant == "b":
        noise = np.sqrt(max(p_max * (1.0 - k1 * p_max), 0.0))
        z = g.standard_normal(n)
        out = top - p_max * trace - noise * z
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return float(out[0]) if size is None else out


def markov_limit_functional(grid: BrownianGrid, k: int) -> float:
    """Single-path supremum on a (correlated) grid of dimension ``k``."""
    if grid.n_dims != k:
        raise ValueError(f"grid has {grid.n_dims} dims, expected {k}")
    return max_functional(grid, 1, k)


def proposition_functional(grid: BrownianGrid, spec: CyclicMarkovSpec, method: str = "conv") -> float:
    """Markov limit functional driven by ``k - 1`` standard coordinates ``B_2..B_k``.

    ``method="conv"`` maps to the correlated motion and reuses the DP kernel;
    ``method="direct"`` maximizes the cos/sin expansion in the standard
    coordinates with an independent level-by-level recursion.
    """
    if method == "conv":
        return markov_limit_functional(correlated_from_standard(grid, spec), spec.k)
    if method == "direct":
        return proposition_functional_direct(grid.values, spec)
    raise ValueError(f"unknown method {method!r}")


def proposition_functional_batch(incr: np.ndarray, spec: CyclicMarkovSpec) -> np.ndarray:
    """Batched ``conv`` route on standard increments of shape ``(S, n, k-1)``."""
    return max_functional_batch(correlated_from_standard(incr, spec), 1, spec.k)


def level_processes(vals: np.ndarray, spec: CyclicMarkovSpec) -> np.ndarray:
    """``F_j(t)`` such that the objective is ``sum_j F_j(t_j) - F_j(t_{j-1})``.

    Written term by term from the cos/sin expansion; for even ``k`` the last
    coordinate enters with the alternating sign ``(-1)^{j+1}``.
    """
    k = spec.k
    lam = markov_eigenvalues(spec)
    n1 = vals.shape[0]
    f = np.zeros((n1, k))
    for j in range(1, k + 1):
        for r in range(1, (k - 1) // 2 + 1):
            c = np.sqrt(2.0 / k) * np.sqrt((1 + lam[r]) / (1 - lam[r]))
            f[:, j - 1] += c * np.cos(2 * np.pi * j * r / k) * vals[:, 2 * r - 2]
            f[:, j - 1] += c * np.sin(2 * np.pi * j * r / k) * vals[:, 2 * r - 1]
        if k % 2 == 0:
            c = np.sqrt((1 + lam[k // 2]) / (1 - lam[k // 2])) / np.sqrt(k)
            f[:, j - 1] += c * (-1.0) ** (j + 1) * vals[:, k - 2]
    return f


def proposition_functional_direct(vals: np.ndarray, spec: CyclicMarkovSpec) -> float:
    """max over ``0 = t_0 <= ... <= t_k = 1`` on the grid, by running prefix maxima."""
    vals = np.asarray(vals, dtype=float)
    f = level_processes(vals, spec)
    # best[t] = max value of the first j levels with t_j = t
    best = f[:, 0] - f[0, 0]
    for j in range(1, spec.k):
        best = np.maximum.accumulate(best - f[:, j]) + f[:, j]
    return float(best[-1])


def traceless_top_eigenvalues(k: int, size: int, rng) -> np.ndarray:
    """Top eigenvalue of ``H - (Tr H / k) I`` for GUE ``H``."""
    h = sample_gue_batch(k, size, rng)
    top = _backend.eigvalsh_batch(h)[:, 0]
    return top - np.einsum("sii->s", h).real / k


def block_limit_spectra(p, size: int, rng) -> np.ndarray:
    """Ordered spectra of the projected blocks, concatenated; shape ``(size, k)``.

    Blocks group equal entries of ``p`` (sorted nonincreasing).
    """
    p = np.asarray(p, dtype=float)
    sizes = block_sizes(p)
    g = _gen(rng)
    blocks = [sample_gue_batch(m, size, g) for m in sizes]
    roots = np.sqrt(p[np.cumsum([0] + sizes[:-1])])
    traces = np.stack([np.einsum("sii->s", b).real for b in blocks], axis=1)
    weight = traces @ roots
    out = []
    for b, r in zip(blocks, roots):
        out.append(_backend.eigvalsh_batch(b) - (r * weight)[:, None])
    return np.concatenate(out, axis=1)


def block_sizes(p, tol: float = 1e-12) -> list[int]:
    p = np.asarray(p, dtype=float)
    sizes = [1]
    for a, b in zip(p, p[1:]):
        if abs(a - b) <= tol:
            sizes[-1] += 1
        else:
            sizes.append(1)
    return sizes


__all__ = [
    "StepTimePath",
    "delta_functional",
    "max_functional",
    "max_functional_batch",
    "max_functional_bruteforce",
    "hl1_limit_functional",
    "gue_limit_sample",
    "markov_limit_functional",
    "proposition_functional",
    "proposition_functional_batch",
    "proposition_functional_direct",
    "traceless_top_eigenvalues",
    "block_limit_spectra",
    "block_sizes",
]
