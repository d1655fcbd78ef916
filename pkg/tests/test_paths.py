import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gueminors.paths import (
    PathCollection,
    collection_weight,
    full_span_paths,
    is_ordered,
    multipath_lpp_bruteforce,
    multipath_lpp_dp,
    multipath_lpp_dp_batch,
    normalize,
    normalize_ends,
    normalize_starts,
    order_paths,
    random_disjoint_collection,
)
from gueminors.rsk import rsk_array

W = np.array([[1, 2], [2, 1], [0, 3]])


def row(y, n):
    return tuple((x, y) for x in range(1, n + 1))


def test_collection_weight():
    assert collection_weight(W, PathCollection((), 3, 2)) == 0
    assert collection_weight(W, PathCollection((row(2, 3),), 3, 2)) == 6
    assert collection_weight(W, PathCollection((row(1, 3), row(2, 3)), 3, 2)) == 9


def test_collection_validation():
    with pytest.raises(ValueError):
        PathCollection((((1, 1), (2, 2)),), 3, 2)
    with pytest.raises(ValueError):
        PathCollection((((1, 1),), ((1, 1), (2, 1))), 3, 2)
    with pytest.raises(ValueError):
        PathCollection((((4, 1),),), 3, 2)


def test_full_span_count():
    # 3 x 2 grid: a path starting in row 1 may climb before column 1, 2 or 3 or not at all
    assert len(full_span_paths(3, 2)) == 5
    assert len(full_span_paths(1, 3)) == 6


def test_starts_unchanged_when_already_normal():
    c = PathCollection((((1, 1), (2, 1)),), 3, 2)
    assert normalize_starts(c) == c


def test_starts_full_height_gives_lines():
    c = PathCollection((((2, 1),), ((3, 2),)), 3, 2)
    out = normalize_starts(c)
    assert set(out.paths) == {row(1, 3), row(2, 3)}


def test_ends_trace_3x2():
    # the early path is blocked at (2, 2) and takes over the tail of the other path
    a = ((1, 2),)
    b = ((1, 1), (2, 1), (2, 2), (3, 2))
    out = normalize_ends(PathCollection((a, b), 3, 2))
    assert out.paths == (row(2, 3), row(1, 3))
    single = normalize_ends(PathCollection((((1, 1),),), 3, 2))
    assert single.paths == (row(1, 3),)
    assert normalize_ends(single) == single


def test_order_paths():
    c = PathCollection((row(2, 3), row(1, 3)), 3, 2)
    out = order_paths(c)
    assert out.paths == (row(1, 3), row(2, 3)) and out.ordered
    one = PathCollection((row(1, 3),), 3, 2)
    assert order_paths(one).paths == one.paths


@given(st.integers(0, 10_000))
def test_normalization_postconditions(seed):
    rng = np.random.default_rng(seed)
    n, k = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    ell = int(rng.integers(1, k + 1))
    c = random_disjoint_collection(n, k, ell, rng)
    w = rng.integers(0, 5, size=(n, k))
    out = normalize(c)
    assert len(out) == len(c)
    assert all(s == 1 for s in out.starts()) and all(e == n for e in out.ends())
    assert is_ordered(out)
    assert c.support() <= out.support()
    assert collection_weight(w, out) >= collection_weight(w, c)


def test_too_many_paths_rejected():
    c = PathCollection(tuple(((1, y),) for y in range(1, 3)), 1, 2)
    assert len(normalize(c)) == 2
    with pytest.raises(ValueError):
        multipath_lpp_bruteforce(W, 3)


def test_lpp_examples():
    assert multipath_lpp_bruteforce(W, 1) == 7 == multipath_lpp_dp(W, 1)
    assert multipath_lpp_bruteforce(W, 2) == 9 == multipath_lpp_dp(W, 2)
    big = np.random.default_rng(0).integers(0, 9, size=(40, 5))
    assert multipath_lpp_dp(big, 5) == big.sum()


@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**31))
def test_dp_matches_bruteforce_real(n, k, seed):
    w = np.random.default_rng(seed).standard_normal((n, k))
    for ell in range(1, k + 1):
        assert abs(multipath_lpp_dp(w, ell) - multipath_lpp_bruteforce(w, ell)) < 1e-12


def test_dp_gaussian_4x3():
    w = np.random.default_rng(1).standard_normal((4, 3))
    for ell in (1, 2, 3):
        assert multipath_lpp_dp(w, ell) == pytest.approx(multipath_lpp_bruteforce(w, ell), abs=1e-12)


@given(st.integers(1, 8), st.integers(1, 5), st.integers(0, 2**31))
def test_dp_equals_rsk_partial_sums(n, k, seed):
    w = np.random.default_rng(seed).geometric(0.5, size=(n, k)) - 1
    shape = rsk_array(w)
    vals = [multipath_lpp_dp_batch(w[None], ell)[0] for ell in range(1, k + 1)]
    assert vals == [shape.partial_sum(ell) for ell in range(1, k + 1)]


def test_dp_monotone_in_ell_for_nonnegative_weights():
    w = np.random.default_rng(2).integers(0, 5, size=(30, 4)).astype(float)
    vals = [multipath_lpp_dp(w, ell) for ell in range(1, 5)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
