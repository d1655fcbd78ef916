"""RSK correspondence for words and integer arrays, Greene brute force, rescaled shapes."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _backend
from .hermitian import GelfandTsetlinPattern

GREENE_MAX_LETTERS = 8
GREENE_MAX_ARRAY_TOTAL = 10


@dataclass(frozen=True)
class YoungShape:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 0 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    def __len__(self):
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(max(length, len(self.parts)), dtype=np.int64)
        out[: len(self.parts)] = self.parts
        return out[:length]

    def partial_sum(self, ell: int) -> int:
        return sum(self.parts[:ell])


@dataclass
class Tableau:
    """Rows of a (semi)standard tableau; row ``i`` is a weakly increasing list."""

    rows: list[list[int]]

    @property
    def shape(self) -> YoungShape:
        return YoungShape(tuple(len(r) for r in self.rows))

    def is_semistandard(self) -> bool:
        for r in self.rows:
            if any(a > b for a, b in zip(r, r[1:])):
                return False
        for upper, lower in zip(self.rows, self.rows[1:]):
            if len(lower) > len(upper) or any(lower[j] <= upper[j] for j in range(len(lower))):
                return False
        return True

    def restricted(self, max_letter: int) -> "Tableau":
        """Remove every box holding a letter larger than ``max_letter``."""
        rows = [[x for x in r if x <= max_letter] for r in self.rows]
        return Tableau([r for r in rows if r])


def _rsk_biword(top, bottom) -> tuple[Tableau, Tableau]:
    p: list[list[int]] = []
    q: list[list[int]] = []
    for t, x in zip(top, bottom):
        r = 0
        while True:
            if r == len(p):
                p.append([x])
                q.append([t])
                break
            row = p[r]
            pos = bisect_right(row, x)
            if pos == len(row):
                row.append(x)
                q[r].append(t)
                break
            row[pos], x = x, row[pos]
            r += 1
    return Tableau(p), Tableau(q)


def rsk_word(word) -> tuple[Tableau, Tableau]:
    """Row insertion with weakly increasing rows; ``Q`` records positions 1..N."""
    word = [int(x) for x in word]
    return _rsk_biword(range(1, len(word) + 1), word)


def array_to_biword(w) -> tuple[list[int], list[int]]:
    """Knuth biword: row ``i`` emits letter ``j`` with multiplicity ``w[i, j]`` (1-based)."""
    w = np.asarray(w, dtype=np.int64)
    if np.any(w < 0):
        raise ValueError("array entries must be nonnegative")
    top, bottom = [], []
    for i in range(w.shape[0]):
        for j in range(w.shape[1]):
            top.extend([i + 1] * int(w[i, j]))
            bottom.extend([j + 1] * int(w[i, j]))
    return top, bottom


def rsk_array_tableaux(w) -> tuple[Tableau, Tableau]:
    return _rsk_biword(*array_to_biword(w))


def rsk_array(w) -> YoungShape:
    w = np.asarray(w, dtype=np.int64)
    if np.any(w < 0):
        raise ValueError("array entries must be nonnegative")
    pattern = _backend.rsk_array_pattern_batch(w[None])[0]
    return YoungShape(tuple(pattern[-1]))


def shape_pattern_from_array(w) -> GelfandTsetlinPattern:
    """Row ``k`` is the RSK shape of the first ``k`` columns of ``w``."""
    w = np.asarray(w, dtype=np.int64)
    if np.any(w < 0):
        raise ValueError("array entries must be nonnegative")
    return GelfandTsetlinPattern.from_array(_backend.rsk_array_pattern_batch(w[None])[0])


def shape_pattern_batch(w: np.ndarray) -> np.ndarray:
    return _backend.rsk_array_pattern_batch(np.asarray(w, dtype=np.int64))


def word_shape_batch(words: np.ndarray, k: int) -> np.ndarray:
    return _backend.rsk_word_shape_batch(np.asarray(words, dtype=np.int64), k)


def longest_nondecreasing_subsequence(word) -> int:
    word = np.asarray(word, dtype=np.int64)
    k = int(word.max()) if word.size else 1
    return int(_backend.lis_weak_batch(word[None], k)[0])


def lis_batch(words: np.ndarray, k: int) -> np.ndarray:
    return _backend.lis_weak_batch(np.asarray(words, dtype=np.int64), k)


# ----------------------------------------------------------- Greene oracle

def _is_nondecreasing(seq) -> bool:
    return all(a <= b for a, b in zip(seq, seq[1:]))


def _greene_items(word_or_array):
    """Return a list of (top, bottom) pairs; a word gets positions as top letters."""
    arr = np.asarray(word_or_array)
    if arr.ndim == 2:
        if arr.sum() > GREENE_MAX_ARRAY_TOTAL:
            raise ValueError(
                f"array total {int(arr.sum())} exceeds brute-force bound {GREENE_MAX_ARRAY_TOTAL}"
            )
        return list(zip(*array_to_biword(arr)))
    if len(arr) > GREENE_MAX_LETTERS:
        raise ValueError(f"word length {len(arr)} exceeds brute-force bound {GREENE_MAX_LETTERS}")
    return [(i + 1, int(x)) for i, x in enumerate(arr)]


def greene_bruteforce(word_or_array, ell: int) -> int:
    """Largest total size of ``ell`` disjoint weakly increasing subsequences.

    Items are the biword pairs in emission order (for a word, positions with
    letters), so a subsequence is increasing when its bottom letters are
    weakly increasing.  Exhaustive search over every way of sending each item
    to no subsequence, to an open one it extends, or to a new one.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    items = _greene_items(word_or_array)
    bottoms = [b for _, b in items]
    n = len(bottoms)
    best = 0

    def walk(i, lasts, used):
        nonlocal best
        if used + (n - i) <= best:
            return
        if i == n:
            best = used
            return
        x = bottoms[i]
        for c, last in enumerate(lasts):
            if last <= x:
                lasts[c] = x
                walk(i + 1, lasts, used + 1)
                lasts[c] = last
        if len(lasts) < ell:
            lasts.append(x)
            walk(i + 1, lasts, used + 1)
            lasts.pop()
        walk(i + 1, lasts, used)

    walk(0, [], 0)
    return best


def lis_bruteforce(word) -> int:
    """Exhaustive longest weakly increasing subsequence (tiny words only)."""
    word = list(word)
    for size in range(len(word), 0, -1):
        if any(_is_nondecreasing(sub) for sub in combinations(word, size)):
            return size
    return 0


# --------------------------------------------------------------- rescaling

def rescale_shape(shape, centers, scales) -> np.ndarray:
    """``(lambda_i - centers_i) / scales_i`` with ``lambda`` padded by zeros."""
    centers = np.asarray(centers, dtype=float)
    scales = np.asarray(scales, dtype=float)
    if centers.shape != scales.shape:
        raise ValueError("centers and scales must have the same length")
    if np.any(scales <= 0):
        raise ValueError("scales must be positive")
    parts = shape.padded(len(centers)) if isinstance(shape, YoungShape) else np.asarray(shape)
    return (np.asarray(parts, dtype=float) - centers) / scales
