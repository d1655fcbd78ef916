import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gueminors.sampling import RngStream
from gueminors.stats import empirical_covariance, energy_distance, ks_two_sample, wasserstein1

samples = st.lists(st.floats(-100, 100), min_size=1, max_size=50)


def test_ks_identical():
    a = np.random.default_rng(0).standard_normal(500)
    assert ks_two_sample(a, a) == (0.0, 1.0)
    b = RngStream(1).generator().standard_normal(10_000)
    c = RngStream(1).generator().standard_normal(10_000)
    assert ks_two_sample(b, c)[0] == 0.0


def test_ks_power():
    g = RngStream(2).generator()
    assert ks_two_sample(g.standard_normal(10_000), g.standard_normal(10_000) + 0.5)[1] < 1e-6


def test_ks_against_scipy():
    from scipy.stats import ks_2samp

    g = RngStream(3).generator()
    a, b = g.standard_normal(3000), g.standard_normal(2000) * 1.1
    d, p = ks_two_sample(a, b)
    ref = ks_2samp(a, b, method="asymp")
    assert d == pytest.approx(ref.statistic)
    assert p == pytest.approx(ref.pvalue, rel=0.05)


@given(samples, samples)
def test_statistics_are_order_invariant(a, b):
    ra, rb = a[::-1], b[::-1]
    assert ks_two_sample(a, b) == ks_two_sample(ra, rb)
    assert wasserstein1(a, b) == pytest.approx(wasserstein1(ra, rb))


@given(samples, st.floats(-10, 10))
def test_w1_shift(a, c):
    a = np.array(a)
    assert wasserstein1(a, a) == 0
    assert wasserstein1(a, a + c) == pytest.approx(abs(c), abs=1e-9 * (1 + np.abs(a).max()))


def test_w1_against_scipy():
    from scipy.stats import wasserstein_distance

    g = RngStream(4).generator()
    a, b = g.standard_normal(700), g.exponential(size=300)
    assert wasserstein1(a, b) == pytest.approx(wasserstein_distance(a, b))


def test_w1_null_scale():
    g = RngStream(5).generator()
    assert wasserstein1(g.standard_normal(10_000), g.standard_normal(10_000)) <= 0.03


def test_energy_identical_and_power():
    g = RngStream(6).generator()
    a = g.standard_normal((300, 2))
    e, p = energy_distance(a, a, n_permutations=199, rng=0)
    assert abs(e) < 1e-9 and p == 1.0
    b = g.standard_normal((5000, 2))
    c = g.standard_normal((5000, 2)) + [0.5, 0.0]
    assert energy_distance(b, c, n_permutations=199, rng=1)[1] < 0.01


def test_energy_null_not_rejected_often():
    small = 0
    for s in range(20):
        g = RngStream(7, s).generator()
        small += energy_distance(g.standard_normal((200, 2)), g.standard_normal((200, 2)), 199, rng=s)[1] < 0.01
    assert small <= 2


def test_energy_deterministic():
    g = RngStream(8).generator()
    a, b = g.standard_normal((400, 3)), g.standard_normal((500, 3))
    assert energy_distance(a, b, 99, rng=RngStream(3), max_points=300) == energy_distance(
        a, b, 99, rng=RngStream(3), max_points=300)
    with pytest.raises(ValueError):
        energy_distance(a, b[:, :2])


def test_empirical_covariance():
    np.testing.assert_array_equal(empirical_covariance(np.ones((10, 3))), np.zeros((3, 3)))
    g = RngStream(9).generator()
    assert np.abs(empirical_covariance(g.standard_normal((100_000, 2))) - np.eye(2)).max() < 0.02
    with pytest.raises(ValueError):
        empirical_covariance(np.ones((1, 2)))
