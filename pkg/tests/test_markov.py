import numpy as np
import pytest

from gueminors.hermitian import eigenvalues_hermitian
from gueminors.markov import (
    CyclicMarkovSpec,
    SingularSpecError,
    build_eigenbasis,
    check_sigma_u,
    correlated_from_standard,
    correlated_from_standard_explicit,
    eta,
    markov_eigenvalues,
    markov_sigma,
    normalized_sigma,
    random_spec,
    k4_sigma_template,
    sigma_u,
    sigma_u_criterion_k4,
    two_eta_family,
    uniform_k3_alternative,
)
from gueminors.sampling import BrownianGrid, RngStream, brownian_increments


def test_spec_validation():
    with pytest.raises(ValueError):
        CyclicMarkovSpec((0.5, 0.3, 0.1))
    with pytest.raises(ValueError):
        CyclicMarkovSpec((0.5, 0.4, 0.1))
    with pytest.raises(ValueError):
        CyclicMarkovSpec((0.0, 0.5, 0.0, 0.5))  # period 2
    with pytest.raises(ValueError):
        CyclicMarkovSpec((0.5, 0.0, 0.5, 0.0))  # reducible
    np.testing.assert_allclose(CyclicMarkovSpec((0.5, 0.25, 0.25)).transition_matrix().sum(axis=1), 1)


def test_singular_spec_rejected():
    # p(1) = 1 on k = 2 is periodic; every primitive chain has |lambda| < 1
    with pytest.raises(ValueError):
        CyclicMarkovSpec((0.0, 1.0))
    assert issubclass(SingularSpecError, ValueError)


def test_uniform_eigenvalues():
    for k in (2, 3, 5, 6):
        lam = markov_eigenvalues(CyclicMarkovSpec(tuple([1 / k] * k)))
        np.testing.assert_allclose(lam, [1] + [0] * (k - 1), atol=1e-14)


def test_k4_eigenvalue_formulas():
    p1, p2, p3 = 0.4, 0.2, 0.2
    spec = CyclicMarkovSpec.from_row_labels((p1, p2, p3, p2))
    lam = markov_eigenvalues(spec)
    assert lam[1] == pytest.approx(p1 - p3)
    assert lam[2] == pytest.approx(p1 - 2 * p2 + p3)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_eigenvalues_match_dense_solver(k):
    spec = random_spec(k, np.random.default_rng(k))
    dense = eigenvalues_hermitian(spec.transition_matrix())
    np.testing.assert_allclose(np.sort(dense), np.sort(markov_eigenvalues(spec)), atol=1e-12)


def test_basis_k2():
    s = build_eigenbasis(CyclicMarkovSpec((0.6, 0.4))).S
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(s, [[r, r], [r, -r]], atol=1e-15)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 7])
def test_basis_orthogonal_and_diagonalizes(k):
    spec = random_spec(k, np.random.default_rng(10 + k))
    data = build_eigenbasis(spec)
    np.testing.assert_allclose(data.S.T @ data.S, np.eye(k), atol=1e-12)
    p = spec.transition_matrix()
    np.testing.assert_allclose(p @ data.S, data.S * data.column_lambdas, atol=1e-12)
    # v_l and w_l are paired with the same eigenvalue
    for r in range(1, (k - 1) // 2 + 1):
        assert data.column_lambdas[2 * r - 1] == data.column_lambdas[2 * r]


def test_basis_k4_alternating_column():
    s = build_eigenbasis(CyclicMarkovSpec((0.4, 0.2, 0.2, 0.2))).S
    np.testing.assert_allclose(s[:, 3], np.array([1, -1, 1, -1]) / 2)


@pytest.mark.parametrize("k", [2, 3])
def test_sigma_u_for_small_k(k):
    rng = np.random.default_rng(20 + k)
    for _ in range(50):
        ok, dev = check_sigma_u(random_spec(k, rng))
        assert ok, dev
    np.testing.assert_allclose(normalized_sigma(CyclicMarkovSpec((1 / 3,) * 3)), sigma_u(3), atol=1e-12)


def test_two_eta_family():
    spec = two_eta_family(0.15)
    assert 2 * eta(spec, 2) == pytest.approx(eta(spec, 3))
    np.testing.assert_allclose(normalized_sigma(spec)[0], [1, -0.5, 0, -0.5], atol=1e-12)
    assert not check_sigma_u(spec)[0]
    assert not sigma_u_criterion_k4(spec)


def test_two_eta_family_literal_display():
    # the transition row as displayed with p_3 = p_2 (1 - 2 p_2) / (1 + 2 p_2):
    # still not permutation-symmetric, but it does not satisfy 2 eta_2 = eta_3
    p2 = 0.15
    p3 = p2 * (1 - 2 * p2) / (1 + 2 * p2)
    spec = CyclicMarkovSpec.from_row_labels((1 - 2 * p2 - p3, p2, p3, p2))
    assert not check_sigma_u(spec)[0]
    assert 2 * eta(spec, 2) != pytest.approx(eta(spec, 3))


def test_k4_equal_off_diagonal_weights():
    spec = CyclicMarkovSpec.from_row_labels((0.4, 0.2, 0.2, 0.2))
    assert sigma_u_criterion_k4(spec) and check_sigma_u(spec)[0]


def test_k4_template_proportional():
    rng = np.random.default_rng(30)
    for _ in range(20):
        spec = random_spec(4, rng)
        a, b = markov_sigma(spec), k4_sigma_template(spec)
        np.testing.assert_allclose(a / a[0, 0], b / b[0, 0], atol=1e-12)


def test_k4_criterion_agrees():
    rng = np.random.default_rng(31)
    for i in range(300):
        spec = random_spec(4, rng, force_equal_12=(i % 3 == 0))
        assert check_sigma_u(spec)[0] == sigma_u_criterion_k4(spec)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_correlated_construction(k):
    spec = random_spec(k, np.random.default_rng(40 + k))
    incr = brownian_increments(1, 50, k - 1, RngStream(k))[0]
    grid = BrownianGrid.from_increments(incr)
    tilde = correlated_from_standard(grid, spec)
    assert tilde.covariance_tag == "correlated"
    np.testing.assert_allclose(tilde.values, correlated_from_standard_explicit(grid.values, spec), atol=1e-12)
    assert np.abs(tilde.values.sum(axis=1)).max() < 1e-12


def test_correlated_k2_antipodal():
    spec = CyclicMarkovSpec((0.7, 0.3))
    lam2 = markov_eigenvalues(spec)[1]
    b = np.array([[0.0], [0.3], [-1.2]])
    out = correlated_from_standard(b, spec)
    c = np.sqrt((1 + lam2) / (1 - lam2)) / np.sqrt(2)
    np.testing.assert_allclose(out, np.hstack([c * b, -c * b]), atol=1e-15)


def test_correlated_covariance_monte_carlo():
    rng = np.random.default_rng(50)
    for k in (3, 4, 5):
        spec = random_spec(k, rng)
        end = brownian_increments(100_000, 1, k - 1, RngStream(50 + k))[:, 0, :]
        emp = np.cov(correlated_from_standard(end, spec), rowvar=False)
        sigma = markov_sigma(spec)
        assert np.abs(emp - sigma).max() / sigma[0, 0] < 0.02


def test_k3_alternative_same_covariance():
    for p in [(1 / 3,) * 3, (0.5, 0.25, 0.25), (0.2, 0.4, 0.4)]:
        spec = CyclicMarkovSpec(p)
        # linear maps applied to a standard motion: covariance is M M^T
        alt = uniform_k3_alternative(np.eye(3), spec)
        np.testing.assert_allclose(alt.T @ alt, markov_sigma(spec), atol=1e-12)


def test_random_specs_valid():
    rng = np.random.default_rng(60)
    for k in range(2, 8):
        for _ in range(10):
            spec = random_spec(k, rng)
            assert np.all(np.abs(markov_eigenvalues(spec)[1:]) < 1)
