import math

import numpy as np
import pytest
import scipy.linalg
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

import oracles
from corrscreen.uscore import (
    HelmertBasis,
    UScoreMatrix,
    compute_uscores,
    correlation,
    helmert_basis,
    write_uscores_csv,
)


def test_basis_matches_scipy_helmert():
    for n in range(2, 12):
        expected = scipy.linalg.helmert(n, full=False).T
        assert np.allclose(helmert_basis(n).basis, expected, atol=1e-14)


def test_basis_two_samples_column():
    b = helmert_basis(2).basis
    assert b.shape == (2, 1)
    assert b[:, 0] == pytest.approx([1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)])


def test_basis_projects_onto_centering_complement():
    # H H^T must equal I - 11^T/n, the projector every orthonormal basis
    # of the complement of the ones vector shares.
    for n in (2, 3, 4, 7, 30):
        b = helmert_basis(n).basis
        projector = np.eye(n) - np.full((n, n), 1.0 / n)
        assert np.max(np.abs(b @ b.T - projector)) < 1e-12
        assert np.max(np.abs(b.T @ b - np.eye(n - 1))) < 1e-12
        assert np.max(np.abs(b.sum(axis=0))) < 1e-12


def test_basis_validation_rejects_bad_matrices():
    with pytest.raises(ValueError):
        HelmertBasis(np.eye(3))
    with pytest.raises(ValueError):
        HelmertBasis(np.ones((4, 3)))


def test_uscores_reproduce_pearson():
    rng = np.random.default_rng(42)
    X = rng.standard_normal((10, 6))
    U = compute_uscores(oracles.as_matrix(X))
    assert U.scores.shape == (9, 6)
    R = U.scores.T @ U.scores
    assert np.max(np.abs(R - np.corrcoef(X, rowvar=False))) < 1e-10


def test_correlation_accessor_clamps_and_checks():
    rng = np.random.default_rng(0)
    U = compute_uscores(oracles.as_matrix(rng.standard_normal((6, 4))))
    for i in range(4):
        assert correlation(U, i, i) == pytest.approx(1.0, abs=1e-12)
        for j in range(4):
            assert -1.0 <= correlation(U, i, j) <= 1.0
    with pytest.raises(IndexError):
        correlation(U, 0, 4)


def test_distance_identity():
    # r_ij = 1 - |U_i - U_j|^2 / 2 exactly on the sphere.
    rng = np.random.default_rng(7)
    U = compute_uscores(oracles.as_matrix(rng.standard_normal((12, 8))))
    for i in range(8):
        for j in range(8):
            gap = U.scores[:, i] - U.scores[:, j]
            expected = 1.0 - float(gap @ gap) / 2.0
            assert correlation(U, i, j) == pytest.approx(expected, abs=1e-12)


@given(
    seed=st.integers(0, 2**32 - 1),
    scale=st.floats(0.1, 10.0),
    shift=st.floats(-100.0, 100.0),
)
def test_positive_affine_invariance(seed, scale, shift):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((8, 5))
    base = compute_uscores(oracles.as_matrix(X)).scores
    moved = compute_uscores(oracles.as_matrix(scale * X + shift)).scores
    assert np.max(np.abs(base - moved)) < 1e-9


def test_negative_scaling_flips_scores():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((9, 4))
    base = compute_uscores(oracles.as_matrix(X)).scores
    flipped = compute_uscores(oracles.as_matrix(-2.5 * X)).scores
    assert np.max(np.abs(base + flipped)) < 1e-9


def test_per_column_scaling():
    rng = np.random.default_rng(11)
    X = rng.standard_normal((7, 5))
    scales = np.array([0.2, 3.0, 1.0, 7.5, 0.9])
    shifts = np.array([-5.0, 0.0, 2.0, 100.0, -0.1])
    base = compute_uscores(oracles.as_matrix(X)).scores
    moved = compute_uscores(oracles.as_matrix(X * scales + shifts)).scores
    assert np.max(np.abs(base - moved)) < 1e-9


def test_constant_column_rejected_at_ingest():
    X = np.ones((6, 3))
    X[:, 0] = np.arange(6)
    X[:, 2] = np.arange(6) ** 2
    with pytest.raises(ValueError, match="constant"):
        oracles.as_matrix(X)


def test_underflowing_variance_rejected_at_scoring():
    # Distinct values whose centered norm underflows to exactly zero
    # pass the ingest max > min check but cannot be projected.
    tiny = 5e-324
    X = np.column_stack([np.arange(3.0), np.array([-tiny, 0.0, tiny])])
    with pytest.raises(ValueError, match="zero-variance"):
        compute_uscores(oracles.as_matrix(X))


def test_null_correlations_match_cap_distribution():
    # 1e5 disjoint column pairs at n = 10 against the closed-form CDF.
    n, pairs = 10, 100_000
    rng = np.random.default_rng(987654321)
    X = rng.standard_normal((n, 2 * pairs))
    U = compute_uscores(oracles.as_matrix(X)).scores
    r = np.einsum("ij,ij->j", U[:, 0::2], U[:, 1::2])
    result = scipy.stats.kstest(r, lambda t: oracles.null_correlation_cdf(t, n))
    assert result.pvalue > 0.01


def test_uscores_csv_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    U = compute_uscores(oracles.as_matrix(rng.standard_normal((6, 3))))
    path = tmp_path / "u.csv"
    write_uscores_csv(U, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "v1,v2,v3"
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape == (5, 3)
    assert np.array_equal(data, U.scores)
