"""Up-right lattice paths on {1..N} x {1..k} and multi-path last passage percolation.

Points are ``(x, y)`` pairs, ``x`` the abscissa in ``1..N`` and ``y`` the
ordinate in ``1..k``.  A weight array ``w`` has shape ``(N, k)`` and the cell
``(x, y)`` carries ``w[x - 1, y - 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _backend

Point = tuple[int, int]
Path = tuple[Point, ...]

BRUTEFORCE_MAX_CELLS = 16


def check_path(path, n: int, k: int) -> Path:
    path = tuple((int(x), int(y)) for x, y in path)
    if not path:
        raise ValueError("a path has at least one point")
    for x, y in path:
        if not (1 <= x <= n and 1 <= y <= k):
            raise ValueError(f"point {(x, y)} outside {{1..{n}}} x {{1..{k}}}")
    for (x0, y0), (x1, y1) in zip(path, path[1:]):
        if (x1 - x0, y1 - y0) not in ((1, 0), (0, 1)):
            raise ValueError(f"step {(x0, y0)} -> {(x1, y1)} is not up or right")
    return path


@dataclass(frozen=True)
class PathCollection:
    paths: tuple[Path, ...]
    n: int
    k: int
    ordered: bool = False

    def __post_init__(self):
        paths = tuple(check_path(p, self.n, self.k) for p in self.paths)
        object.__setattr__(self, "paths", paths)
        seen: set[Point] = set()
        for p in paths:
            cells = set(p)
            if cells & seen:
                raise ValueError("path supports are not pairwise disjoint")
            seen |= cells

    def __len__(self):
        return len(self.paths)

    def support(self) -> set[Point]:
        return {pt for p in self.paths for pt in p}

    def starts(self) -> list[int]:
        return [p[0][0] for p in self.paths]

    def ends(self) -> list[int]:
        return [p[-1][0] for p in self.paths]


def column_cells(path: Path, x: int) -> list[int]:
    return [y for px, y in path if px == x]


def precedes(lower: Path, upper: Path, n: int) -> bool:
    """``lower < upper``: in every column the cells of ``lower`` sit strictly below."""
    for x in range(1, n + 1):
        a, b = column_cells(lower, x), column_cells(upper, x)
        if a and b and max(a) >= min(b):
            return False
    return True


def is_ordered(c: PathCollection) -> bool:
    return all(precedes(p, q, c.n) for p, q in zip(c.paths, c.paths[1:]))


def collection_weight(w, c: PathCollection) -> float:
    w = np.asarray(w)
    if w.shape != (c.n, c.k):
        raise ValueError(f"weight array shape {w.shape} does not match grid {(c.n, c.k)}")
    return float(sum(w[x - 1, y - 1] for x, y in c.support()))


# ------------------------------------------------------------ normalizations

def _owner(paths: list[list[Point]]) -> dict[Point, int]:
    return {pt: i for i, p in enumerate(paths) for pt in p}


def normalize_starts(c: PathCollection) -> PathCollection:
    """Extend/splice paths until every path starts at abscissa 1.

    Follows the constructive induction on (largest starting abscissa, number of
    paths attaining it); the union of supports can only grow.
    """
    ell, n, k = len(c), c.n, c.k
    if ell > k:
        raise ValueError(f"cannot normalize {ell} paths in a grid of height {k}")
    if ell == 0:
        return c
    if all(s == 1 for s in c.starts()):
        return c
    if ell == k:
        lines = tuple(tuple((x, y) for x in range(1, n + 1)) for y in range(1, k + 1))
        return PathCollection(lines, n, k)

    paths = [list(p) for p in c.paths]
    for _ in range(4 * n * k * ell + 8):
        starts = [p[0][0] for p in paths]
        sa_max = max(starts)
        if sa_max == 1:
            return PathCollection(tuple(map(tuple, paths)), n, k)
        i0 = starts.index(sa_max)
        x0, y0 = paths[i0][0]
        target = (x0 - 1, y0)
        owner = _owner(paths)
        i1 = owner.get(target)
        if i1 is None:
            paths[i0].insert(0, target)
            continue
        pi1 = paths[i1]
        pos = pi1.index(target)
        if pos < len(pi1) - 1:
            # the successor of target on pi1 is the cell just above it
            paths[i0] = pi1[: pos + 1] + paths[i0]
            paths[i1] = pi1[pos + 1:]
            continue
        paths[i0] = pi1 + paths[i0]
        del paths[i1]
        owner = _owner(paths)
        free = [(1, y) for y in range(1, k + 1) if (1, y) not in owner]
        if free:
            spot = free[0]
        else:
            donors = [
                i for i, p in enumerate(paths)
                if p[0][0] == 1 and len(p) > 1 and p[1] == (1, p[0][1] + 1)
            ]
            if not donors:
                raise RuntimeError("no free cell in the first column")
            spot = paths[donors[0]].pop(0)
        paths.insert(i1, [spot])
    raise RuntimeError("start normalization did not terminate")


def normalize_ends(c: PathCollection) -> PathCollection:
    """Extend/splice paths (all starting at abscissa 1) until every path ends at N."""
    ell, n, k = len(c), c.n, c.k
    if any(s != 1 for s in c.starts()):
        raise ValueError("every path must start at abscissa 1")
    if ell == 0:
        return c
    paths = [list(p) for p in c.paths]
    for _ in range(4 * n * k * ell + 8):
        ends = [p[-1][0] for p in paths]
        ea_min = min(ends)
        if ea_min == n:
            return PathCollection(tuple(map(tuple, paths)), n, k)
        i0 = ends.index(ea_min)
        x0, y0 = paths[i0][-1]
        target = (x0 + 1, y0)
        i1 = _owner(paths).get(target)
        if i1 is None:
            paths[i0].append(target)
            continue
        pi1 = paths[i1]
        pos = pi1.index(target)
        if pos == 0:
            raise RuntimeError("a path starts away from abscissa 1")
        # the predecessor of target on pi1 is the cell just below it
        paths[i0] = paths[i0] + pi1[pos:]
        paths[i1] = pi1[:pos]
    raise RuntimeError("end normalization did not terminate")


def order_paths(c: PathCollection) -> PathCollection:
    """Re-index full-span paths bottom to top so that ``pi_1 < ... < pi_ell``."""
    if any(s != 1 for s in c.starts()) or any(e != c.n for e in c.ends()):
        raise ValueError("ordering needs every path to start at 1 and end at N")
    out = replace(c, paths=tuple(sorted(c.paths, key=lambda p: p[0][1])), ordered=True)
    if not is_ordered(out):
        raise RuntimeError("re-indexed collection is not strictly ordered")
    return out


def normalize(c: PathCollection) -> PathCollection:
    return order_paths(normalize_ends(normalize_starts(c)))


# -------------------------------------------------------------- brute force

def full_span_paths(n: int, k: int) -> list[Path]:
    """Every up-right path starting at abscissa 1 and ending at abscissa ``n``."""
    out: list[Path] = []

    def extend(path: list[Point]):
        x, y = path[-1]
        if x == n:
            out.append(tuple(path))
        if x < n:
            path.append((x + 1, y))
            extend(path)
            path.pop()
        if y < k:
            path.append((x, y + 1))
            extend(path)
            path.pop()

    for y in range(1, k + 1):
        extend([(1, y)])
    return out


def multipath_lpp_bruteforce(w, ell: int) -> float:
    """Exact maximum over ordered full-span collections of ``ell`` paths (tiny grids)."""
    w = np.asarray(w, dtype=float)
    n, k = w.shape
    if n * k > BRUTEFORCE_MAX_CELLS:
        raise ValueError(f"grid {n}x{k} exceeds brute-force bound of {BRUTEFORCE_MAX_CELLS} cells")
    if not 1 <= ell <= k:
        raise ValueError(f"need 1 <= ell <= k, got ell={ell}, k={k}")
    paths = full_span_paths(n, k)
    weight = [sum(w[x - 1, y - 1] for x, y in p) for p in paths]
    above = [[j for j, q in enumerate(paths) if precedes(p, q, n)] for p in paths]
    best = -np.inf

    def chain(last: int, depth: int, acc: float):
        nonlocal best
        if depth == ell:
            best = max(best, acc)
            return
        for j in above[last]:
            chain(j, depth + 1, acc + weight[j])

    for i in range(len(paths)):
        chain(i, 1, weight[i])
    return float(best)


def multipath_lpp_dp(w, ell: int) -> float:
    """Same maximum via a DP over the ordinates where the paths leave each column."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 2:
        raise ValueError("weight array must be 2-d")
    k = w.shape[1]
    if not 1 <= ell <= k:
        raise ValueError(f"need 1 <= ell <= k, got ell={ell}, k={k}")
    return float(_backend.lpp_batch(w[None], ell, k, "lattice")[0])


def multipath_lpp_dp_batch(w: np.ndarray, ell: int, k: int | None = None) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    return _backend.lpp_batch(w, ell, w.shape[2] if k is None else k, "lattice")


# ------------------------------------------------------- random collections

def random_disjoint_collection(n: int, k: int, ell: int, rng, max_len: int | None = None) -> PathCollection:
    """Random pairwise disjoint up-right paths built by self-avoiding growth."""
    taken: set[Point] = set()
    paths = []
    max_len = max_len or n + k
    for _ in range(ell):
        free = [(x, y) for x in range(1, n + 1) for y in range(1, k + 1) if (x, y) not in taken]
        if not free:
            break
        start = free[rng.integers(len(free))]
        path = [start]
        taken.add(start)
        target_len = int(rng.integers(1, max_len + 1))
        while len(path) < target_len:
            x, y = path[-1]
            moves = [(x + 1, y), (x, y + 1)]
            moves = [m for m in moves if m[0] <= n and m[1] <= k and m not in taken]
            if not moves:
                break
            nxt = moves[rng.integers(len(moves))]
            path.append(nxt)
            taken.add(nxt)
        paths.append(tuple(path))
    return PathCollection(tuple(paths), n, k)
