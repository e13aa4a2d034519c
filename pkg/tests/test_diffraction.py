import math

import numpy as np
import pytest
from scipy.linalg import eigh

from raman_nath import (
    ModelParams,
    build_even_matrix,
    classical_depth,
    eigensolve_even,
    equation_depth,
    integrate_rn,
    phase_grating,
    propagate_solution,
    propagate_spectral,
    superposition_coefficients,
    uniform_eigenvector,
)
from raman_nath.diffraction import classical_fold_edge
from raman_nath.rn_oracle import dense_matrix

LAM = 12500.0


def test_zero_depth_is_delta(sol12500):
    pat = propagate_solution(sol12500, 0.0, bound_only=False)
    expect = (pat.n == 0).astype(float)
    assert np.max(np.abs(pat.amplitudes - expect)) < 1e-12
    bound = propagate_solution(sol12500, 0.0, bound_only=True)
    assert bound.total() == pytest.approx(1.0 - bound.completeness_deficit, abs=1e-12)


@pytest.mark.parametrize("tau", [0.3, 2.0, 40.5 * math.pi])
def test_spectral_unitarity(sol12500, tau):
    pat = propagate_solution(sol12500, equation_depth(LAM, tau), bound_only=False)
    assert pat.total() == pytest.approx(1.0, abs=1e-9)
    assert np.array_equal(pat.amplitudes, pat.amplitudes[::-1])


def test_completeness_deficit(sol12500):
    c, eps = superposition_coefficients(sol12500)
    assert eps == pytest.approx(0.0, abs=1e-12)
    bound = c[sol12500.betas < 1]
    deficit = 1.0 - np.sum(bound**2)
    # free states carry about 1% of the weight at this lambda
    assert 0.005 < deficit < 0.02
    assert propagate_solution(sol12500, 0.1).completeness_deficit == pytest.approx(deficit, abs=1e-14)


def test_coefficients_small_case():
    p = ModelParams.from_lambda(3.0)
    sol = eigensolve_even(p, check_truncation=False)
    d, e = build_even_matrix(p)
    _, v = eigh(dense_matrix(d, e))
    c, _ = superposition_coefficients(sol)
    assert np.allclose(np.abs(c), np.abs(v[0]), atol=1e-12)


def test_single_state_basis():
    w = uniform_eigenvector(LAM, 0, renormalize=True)
    c, eps = superposition_coefficients([w])
    assert c[0] == w.amplitudes[0]
    assert eps == pytest.approx(1 - w.amplitudes[0] ** 2)


def test_decoupled_limit():
    pats = integrate_rn(0.0, [0.0, 1.0, 2.0], n_half=5)
    for p in pats:
        assert abs(p.amplitudes[5]) == pytest.approx(1.0, abs=1e-9)
        assert np.max(np.abs(np.delete(p.amplitudes, 5))) == 0.0


def test_phase_grating_basics():
    p0 = phase_grating(50.0, 0.0)
    assert p0.intensity_at(0) == 1.0 and p0.total() == pytest.approx(1.0, abs=1e-15)
    p = phase_grating(50.0, 0.3)
    assert p.total() == pytest.approx(1.0, abs=1e-12)


def test_phase_grating_against_ode():
    lam = 50.0
    short = integrate_rn(lam, [0.002, 0.2], n_half=40)
    pg = phase_grating(lam, 0.002, n_half=40)
    assert np.max(np.abs(pg.intensities - short[0].intensities)) < 1e-4
    pg2 = phase_grating(lam, 0.2, n_half=40)
    assert np.max(np.abs(pg2.intensities - short[1].intensities)) > 1e-3


def test_ode_long_depth_drift_and_parity():
    lam = 50.0
    zetas = [equation_depth(lam, tau) for tau in np.linspace(0, 130, 6)]
    pats = integrate_rn(lam, zetas)
    for p in pats:
        assert abs(p.total() - 1.0) <= 1e-9
        assert np.max(np.abs(p.amplitudes - p.amplitudes[::-1])) <= 1e-10


def test_ode_matches_spectral_small_lambda():
    lam = 50.0
    sol = eigensolve_even(ModelParams.from_lambda(lam))
    zetas = [0.1, 1.0, 7.3]
    for p in integrate_rn(lam, zetas, sol.params.truncation_n):
        s = propagate_solution(sol, p.zeta, bound_only=False)
        assert np.max(np.abs(s.intensities - p.intensities)) < 1e-8


def test_spectral_is_reproducible(sol12500):
    z = equation_depth(LAM, 1.0)
    a = propagate_solution(sol12500, z).amplitudes
    b = propagate_solution(sol12500, z).amplitudes
    assert a.tobytes() == b.tobytes()


def test_explicit_betas_override(sol12500):
    c, _ = superposition_coefficients(sol12500)
    z = 0.01
    a = propagate_spectral(sol12500, c, z)
    b = propagate_spectral(sol12500, c, z, betas=sol12500.betas + 0.5)
    # a uniform shift only changes the global phase
    assert np.allclose(a.intensities, b.intensities, atol=1e-14)


def test_depth_units():
    assert classical_depth(LAM, equation_depth(LAM, 1.7)) == pytest.approx(1.7)
    assert classical_fold_edge(0.01) == pytest.approx(0.01 / math.sqrt(2), rel=1e-4)
    edge = classical_fold_edge(0.5 * math.pi)
    assert 1.0 < edge < math.sqrt(2)
