import math

import numpy as np
import pytest
from scipy.linalg import eigh, eigh_tridiagonal

from raman_nath import ModelParams, bound_state_count, build_even_matrix, choose_truncation, eigensolve_even
from raman_nath.errors import ConvergenceError
from raman_nath.rn_oracle import dense_matrix, eigenvalues_even, sturm_count, tridiag_eigvals, tridiag_eigvecs, truncation_shift


def test_choose_truncation():
    assert choose_truncation(12500, 1.0) == 169
    assert choose_truncation(0.5, 1.0) == 11
    assert choose_truncation(12500) == 216
    with pytest.raises(ValueError):
        choose_truncation(10, 0.5)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(-1.0, 10, 1.3)
    with pytest.raises(ValueError):
        ModelParams(12500.0, 100, 1.3)
    p = ModelParams.from_lambda(50.0)
    assert p.truncation_n == choose_truncation(50.0)


def test_small_matrix_by_hand():
    d, e = build_even_matrix(ModelParams(2.0, 2, 1.0))
    assert np.allclose(d, [0, 1, 4])
    assert np.allclose(e, [-math.sqrt(2), -1])


def _full_matrix(lam, n):
    k = np.arange(-n, n + 1)
    return np.diag(k.astype(float) ** 2) - 0.5 * lam * (np.eye(k.size, k=1) + np.eye(k.size, k=-1))


def test_even_odd_spectra_union():
    lam, n = 3.0, 8
    full = np.linalg.eigvalsh(_full_matrix(lam, n))
    d, e = build_even_matrix(ModelParams(lam, n, 1.0))
    even = np.linalg.eigvalsh(dense_matrix(d, e))
    odd = np.linalg.eigvalsh(dense_matrix(np.arange(1, n + 1, dtype=float) ** 2, np.full(n - 1, -0.5 * lam)))
    assert np.allclose(np.sort(np.concatenate([even, odd])), full, atol=1e-12)


def test_weak_coupling_limit():
    sol = eigensolve_even(ModelParams(1e-6, 12, 1.0), check_truncation=False)
    assert np.allclose(sol.betas * 1e-6, np.arange(13) ** 2, atol=1e-9)


def test_bisection_matches_lapack():
    p = ModelParams.from_lambda(12500.0)
    d, e = build_even_matrix(p)
    ours = tridiag_eigvals(d, e)
    ref = eigh_tridiagonal(d, e, eigvals_only=True)
    assert np.max(np.abs(ours - ref)) <= 1e-12 * np.max(np.abs(ref))


def test_sturm_count_monotone():
    d, e = build_even_matrix(ModelParams.from_lambda(200.0))
    ev = eigh_tridiagonal(d, e, eigvals_only=True)
    counts = sturm_count(d, e, ev + 1e-6)
    assert np.array_equal(counts, np.arange(1, ev.size + 1))


def test_eigenvectors_against_dense():
    p = ModelParams.from_lambda(3.0)
    d, e = build_even_matrix(p)
    w, v = eigh(dense_matrix(d, e))
    ours = tridiag_eigvecs(d, e, w)
    for k in range(w.size):
        assert abs(abs(np.dot(ours[:, k], v[:, k])) - 1.0) < 1e-12


def test_eigensolution_invariants(sol12500):
    betas = sol12500.betas
    assert np.all(np.diff(betas) > 0)
    b = sol12500.basis
    full_gram = b.T @ b + b[1:].T @ b[1:]  # n and -n both counted
    assert np.max(np.abs(full_gram - np.eye(b.shape[1]))) < 1e-10
    assert np.all(b[0] >= 0) or np.all(b[0][np.abs(b[0]) >= 1e-12] >= 0)
    # residual of the unfolded recursion at every interior beam
    lam = sol12500.params.lam
    for j in (0, 100, 200, 202):
        bn = sol12500.wave(j).amplitudes
        full = np.concatenate([bn[:0:-1], bn])
        n = np.arange(-(bn.size - 1), bn.size)
        res = n[1:-1] ** 2 * full[1:-1] - 0.5 * lam * (full[2:] + full[:-2]) - lam * sol12500.state(j).beta * full[1:-1]
        assert np.max(np.abs(res)) <= 1e-9 * lam


def test_published_oracle_values(sol12500):
    assert sol12500.state(200).beta == pytest.approx(0.996129, abs=1e-6)
    assert sol12500.state(0).beta == pytest.approx(-0.9937, abs=1e-4)
    assert sol12500.state(202).beta == pytest.approx(1.003356, abs=1e-6)
    assert sol12500.state(204).beta == pytest.approx(1.012155, abs=1e-6)


def test_bound_counts(sol12500):
    assert bound_state_count(sol12500) == 101
    assert bound_state_count(eigensolve_even(ModelParams.from_lambda(0.01))) == 1


def test_truncation_doubling(sol12500):
    assert truncation_shift(sol12500.params, bound_state_count(sol12500) + 4) <= 1e-10


def test_truncation_failure_is_reported():
    # a matrix cut inside the bound spectrum cannot pass the doubling check
    with pytest.raises(ConvergenceError):
        eigensolve_even(ModelParams(400.0, 29, 1.0))


def test_index_errors(sol12500):
    with pytest.raises(IndexError):
        sol12500.state(3)
    with pytest.raises(IndexError):
        sol12500.state(10_000)


def test_eigenvalues_only():
    p = ModelParams.from_lambda(50.0)
    assert np.allclose(eigenvalues_even(p, 5), eigensolve_even(p).betas[:5], atol=1e-14)
