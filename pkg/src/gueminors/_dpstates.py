"""State spaces shared by the compiled and pure-Python multi-path DP kernels.

A DP state is the strictly increasing tuple of (0-based) ordinates occupied by
the ``ell`` ordered paths at one abscissa.  Two transition rules exist:

``lattice``
    up-right lattice paths.  The state is the ordinate at which each path
    leaves a column; in the next column path ``r`` sweeps the vertical segment
    ``[c_r, c'_r]`` and must stay strictly below the entry point ``c_{r+1}`` of
    the path above it.
``grid``
    one cell per path per time step, levels nondecreasing in time.  This is
    the grid restriction of the Brownian supremum: a path may jump several
    levels between two steps without collecting the skipped cells.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

MODES = ("lattice", "grid")


@lru_cache(maxsize=None)
def states(k: int, ell: int) -> np.ndarray:
    if not 1 <= ell <= k:
        raise ValueError(f"need 1 <= ell <= k, got ell={ell}, k={k}")
    out = np.array(list(combinations(range(k), ell)), dtype=np.int64)
    out.setflags(write=False)
    return out


def _allowed(src: tuple[int, ...], dst: tuple[int, ...], mode: str) -> bool:
    ell = len(src)
    for r in range(ell):
        if dst[r] < src[r]:
            return False
        if mode == "lattice" and r + 1 < ell and dst[r] >= src[r + 1]:
            return False
    return True


@lru_cache(maxsize=None)
def transitions(k: int, ell: int, mode: str) -> np.ndarray:
    """All admissible ``(src, dst)`` state-index pairs, sorted by ``dst``."""
    if mode not in MODES:
        raise ValueError(f"unknown transition mode {mode!r}")
    st = [tuple(s) for s in states(k, ell)]
    pairs = [
        (i, j)
        for j, dst in enumerate(st)
        for i, src in enumerate(st)
        if _allowed(src, dst, mode)
    ]
    out = np.array(pairs, dtype=np.int64)
    out.setflags(write=False)
    return out
