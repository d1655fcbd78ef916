"""Hermitian matrices, principal-minor spectra and Gelfand-Tsetlin patterns."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend, _kernels_py

HERMITIAN_TOL = 1e-12
INTERLACING_TOL = 1e-9


def as_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``a`` as a square Hermitian matrix and return it as complex128."""
    h = np.asarray(a, dtype=np.complex128)
    if h.ndim == 0:
        h = h.reshape(1, 1)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {h.shape}")
    asym = np.abs(h - h.conj().T).max()
    if asym > tol * max(1.0, np.abs(h).max()):
        raise ValueError(f"matrix is not Hermitian (max |H - H^*| = {asym:.3e})")
    return h


@dataclass(frozen=True)
class GelfandTsetlinPattern:
    """Triangular array; ``rows[k-1]`` holds the ``k`` values of row ``k``, nonincreasing."""

    rows: tuple[np.ndarray, ...]

    def __post_init__(self):
        for k, row in enumerate(self.rows, start=1):
            if len(row) != k:
                raise ValueError(f"row {k} has {len(row)} entries, expected {k}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "GelfandTsetlinPattern":
        return cls(tuple(np.asarray(r, dtype=float) for r in rows))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "GelfandTsetlinPattern":
        """Build from the padded ``(M, M)`` layout used by the batch kernels."""
        arr = np.asarray(arr)
        return cls(tuple(arr[k, : k + 1].copy() for k in range(arr.shape[0])))

    @property
    def depth(self) -> int:
        return len(self.rows)

    def row(self, k: int) -> np.ndarray:
        return self.rows[k - 1]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.depth, self.depth), dtype=self.rows[-1].dtype)
        for k, row in enumerate(self.rows):
            out[k, : k + 1] = row
        return out

    def interlacing_violation(self) -> float:
        """Largest amount by which ordering or interlacing fails (0 if it holds)."""
        worst = 0.0
        for k in range(1, self.depth + 1):
            row = self.row(k)
            if k > 1:
                worst = max(worst, float(np.max(row[1:] - row[:-1], initial=0.0)))
                prev = self.row(k - 1)
                worst = max(worst, float(np.max(prev - row[:-1])), float(np.max(row[1:] - prev)))
        return worst

    def is_interlacing(self, tol: float = 0.0) -> bool:
        return self.interlacing_violation() <= tol


def eigenvalues_hermitian(h, vectors: bool = False):
    """Spectrum of a Hermitian matrix in descending order.

    With ``vectors=True`` returns ``(values, V)`` where the columns of ``V`` are
    orthonormal eigenvectors, ``H = V diag(values) V^*``.
    """
    h = as_hermitian(h)
    if vectors:
        return _kernels_py.eigh(h, want_vectors=True)
    return _backend.eigvalsh_batch(h[None])[0]


def principal_minor(h, k: int) -> np.ndarray:
    h = as_hermitian(h)
    if not 1 <= k <= h.shape[0]:
        raise ValueError(f"minor size k={k} outside 1..{h.shape[0]}")
    return h[:k, :k].copy()


def minor_spectra(h) -> GelfandTsetlinPattern:
    h = as_hermitian(h)
    return GelfandTsetlinPattern.from_array(_backend.minor_spectra_batch(h[None])[0])


def minor_spectra_batch(h: np.ndarray) -> np.ndarray:
    """Padded ``(S, M, M)`` minor spectra of a stack of Hermitian matrices."""
    return _backend.minor_spectra_batch(np.asarray(h, dtype=np.complex128))


def partial_sum_top(pattern: GelfandTsetlinPattern, ell: int, k: int) -> float:
    if not 1 <= ell <= k <= pattern.depth:
        raise ValueError(f"need 1 <= ell <= k <= {pattern.depth}, got ell={ell}, k={k}")
    return float(np.sum(pattern.row(k)[:ell]))


def diagonal_from_pattern(pattern: GelfandTsetlinPattern) -> np.ndarray:
    """Recover ``diag(H)`` by telescoping row sums of its minor spectra."""
    sums = np.array([np.sum(r) for r in pattern.rows], dtype=float)
    return np.diff(sums, prepend=0.0)


def traceless_block_projection(blocks: Sequence, p, tol: float = HERMITIAN_TOL) -> list[np.ndarray]:
    """Project a block-diagonal Hermitian matrix onto ``Tr(H J) = 0``.

    ``J = diag(sqrt(p))`` is a unit vector for the trace inner product when
    ``sum(p) = 1``, so ``H - Tr(H J) J`` is the orthogonal projection. Each
    block must carry a constant value of ``p``.
    """
    blocks = [as_hermitian(b) for b in blocks]
    p = np.asarray(p, dtype=float)
    sizes = [b.shape[0] for b in blocks]
    if p.ndim != 1 or len(p) != sum(sizes):
        raise ValueError(f"p has length {len(p)}, blocks have total size {sum(sizes)}")
    if np.any(p <= 0):
        raise ValueError("probabilities must be positive")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
    roots = []
    start = 0
    for size in sizes:
        chunk = p[start:start + size]
        if np.ptp(chunk) > tol:
            raise ValueError("p must be constant within each block")
        roots.append(np.sqrt(chunk[0]))
        start += size
    weight = sum(r * np.trace(b).real for r, b in zip(roots, blocks))
    return [b - r * weight * np.eye(b.shape[0]) for r, b in zip(roots, blocks)]
