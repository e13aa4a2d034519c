import math

import mpmath
import numpy as np
import pytest

from raman_nath import auto_eigenvector, free_eigenvector, separatrix_eigenvector
from raman_nath.errors import DomainError, RegimeError
from raman_nath.separatrix import (
    airy_transitional,
    barred_action_underdense,
    barrier_context,
    barrier_wave_underdense,
    classify_regime,
    eigenvalue_near_separatrix_underdense,
    eigenvalue_overdense,
    join_plan,
    map_sigma_underdense,
    match_phase,
    mu_overdense,
    mu_underdense,
    overdense_condition,
    overdense_condition_roots,
    regime_for_index,
    t_overdense,
    t_underdense,
    underdense_condition,
)
from raman_nath.specialfn import gamma_quarter_line
from raman_nath.states import BOUND, FREE, SEPARATRIX
from raman_nath.validation import max_peak_deviation
from raman_nath.wkb_core import normalization_constant

LAM = 12500.0


def test_barred_action():
    assert barred_action_underdense(0.0, 0.9961) == 0.0
    beta = 0.9961
    assert barred_action_underdense(0.5, beta, "closed") == pytest.approx(barred_action_underdense(0.5, beta), abs=1e-10)
    ref = mpmath.quad(lambda u: mpmath.acos(beta - u * u), [0, 0.5])
    assert barred_action_underdense(0.5, beta) == pytest.approx(float(ref), abs=1e-12)
    h = 1e-6
    d = (barred_action_underdense(0.8 + h, beta) - barred_action_underdense(0.8 - h, beta)) / (2 * h)
    assert d == pytest.approx(math.acos(beta - 0.64), rel=1e-6)
    with pytest.raises(RegimeError):
        barred_action_underdense(0.2, 1.01)


@pytest.mark.parametrize("beta", [0.5, 0.9, 0.9961, 0.99999])
def test_t_underdense_routes(beta):
    assert t_underdense(LAM, beta, "closed") == pytest.approx(t_underdense(LAM, beta), rel=1e-10)


def test_t_underdense_limits():
    assert t_underdense(LAM, 1 - 1e-12) < 1e-5
    assert t_underdense(4 * LAM, 0.95) == pytest.approx(2 * t_underdense(LAM, 0.95), rel=1e-13)


@pytest.mark.parametrize("beta", [1.0001, 1.003356, 1.05, 1.5])
def test_t_overdense_routes(beta):
    assert t_overdense(LAM, beta, "closed") == pytest.approx(t_overdense(LAM, beta), rel=1e-10)
    yi = mpmath.sqrt(mpmath.mpf(beta) - 1)
    ref = 4 / math.pi * math.sqrt(LAM) * mpmath.quad(lambda u: mpmath.acosh(beta - u * u), [0, yi])
    assert t_overdense(LAM, beta) == pytest.approx(float(mpmath.re(ref)), rel=1e-10)


def test_t_overdense_regime():
    assert t_overdense(LAM, 1 + 1e-12) < 1e-5
    with pytest.raises(RegimeError):
        t_overdense(LAM, 0.99)


def test_mu_values():
    assert mu_underdense(0.0) == pytest.approx(-math.pi / 8, abs=1e-15)
    t, h = 4.0, 1e-5
    d = (mu_underdense(t + h) - mu_underdense(t - h)) / (2 * h)
    # d/dt Arg Gamma(1/4 + it/4) = Re psi(1/4 + it/4) / 4
    darg = float(mpmath.re(mpmath.digamma(mpmath.mpc(0.25, t / 4)))) / 4
    assert d == pytest.approx(0.25 * math.log(t) - 0.5 * math.log(2) - darg, rel=1e-6)


@pytest.mark.parametrize("t", [0.3, 4.0, 25.0, 130.0])
def test_mu_over_under_identity(t):
    assert mu_overdense(t) == pytest.approx(-mu_underdense(t) - math.pi / 4, abs=1e-12)
    g = gamma_quarter_line(t)
    assert mu_underdense(t) == pytest.approx(
        0.25 * t * math.log(t) - 0.5 * t * math.log(2) - 0.25 * t - g.argument - math.pi / 8, abs=1e-13
    )


def test_match_phase_alternates():
    assert [match_phase(j) for j in (196, 198, 200, 202)] == [math.pi / 4, 1.25 * math.pi] * 2


@pytest.mark.parametrize(
    "j,ref", [(200, 0.996131), (198, 0.987199), (196, 0.976713), (194, 0.965432), (192, 0.953578), (190, 0.941247), (188, 0.928499), (186, 0.915381)]
)
def test_underdense_eigenvalues(j, ref):
    assert eigenvalue_near_separatrix_underdense(LAM, j) == pytest.approx(ref, abs=2e-6)


def test_underdense_root_is_negative_gradient_zero():
    beta = eigenvalue_near_separatrix_underdense(LAM, 200)
    phase = match_phase(200)
    assert abs(underdense_condition(LAM, beta, phase)) < 1e-10
    h = 1e-7
    assert underdense_condition(LAM, beta + h, phase) < underdense_condition(LAM, beta - h, phase)


def test_gradient_selection_stays_near_oracle(sol12500):
    betas = sol12500.betas
    for j in range(186, 206, 2):
        k = j // 2
        spacing = min(betas[k + 1] - betas[k], betas[k] - betas[k - 1])
        from raman_nath.separatrix import modified_eigenvalue

        assert abs(modified_eigenvalue(LAM, j) - betas[k]) < 0.5 * spacing


def test_gradient_selection_other_lambdas():
    from raman_nath import ModelParams, eigensolve_even
    from raman_nath.separatrix import modified_eigenvalue

    for lam in (500.0, 2000.0):
        sol = eigensolve_even(ModelParams.from_lambda(lam))
        betas = sol.betas
        nb = int(np.sum(betas < 1))
        for k in range(nb - 3, nb + 2):
            spacing = min(betas[k + 1] - betas[k], betas[k] - betas[k - 1])
            assert abs(modified_eigenvalue(lam, 2 * k) - betas[k]) < 0.5 * spacing


def test_overdense_match_beam_independence():
    base = eigenvalue_overdense(LAM, 202)
    for m in (60, 82, 100, 120):
        assert eigenvalue_overdense(LAM, 202, m=m) == pytest.approx(base, abs=1e-12)
        assert abs(overdense_condition(LAM, base, m, match_phase(202))) < 1e-8


def test_overdense_condition_gradient_depends_on_beam():
    # the zero is shared by every beam, its gradient sign is not
    base = eigenvalue_overdense(LAM, 202)
    signs = {}
    for m in (60, 82):
        roots = overdense_condition_roots(LAM, m, match_phase(202), base - 5e-4, base + 5e-4, samples=50)
        close = [s for r, s in roots if abs(r - base) < 1e-9]
        assert close
        signs[m] = close[0]
    assert signs[60] != signs[82]


def test_overdense_bad_beam():
    with pytest.raises(DomainError):
        overdense_condition(LAM, 1.003356, 2, match_phase(202))


def test_regimes():
    assert classify_regime(LAM, 0.2, j=110) == BOUND
    assert classify_regime(LAM, 0.996, j=200) == SEPARATRIX
    assert classify_regime(LAM, 1.003) == FREE
    assert regime_for_index(LAM, 150) == BOUND
    assert regime_for_index(LAM, 200) == SEPARATRIX
    assert regime_for_index(LAM, 202) == FREE
    with pytest.raises(RegimeError):
        barrier_context(LAM, 1.0)


def test_mapping_underdense_residual():
    beta = 0.9961307883
    ctx = barrier_context(LAM, beta)
    for y in (0.0, 0.2, 0.6, 1.2):
        sig = map_sigma_underdense(y, LAM, beta, ctx.t)
        s = sig / math.sqrt(ctx.t)
        rhs = 0.5 * ctx.t * (math.asinh(s) + s * math.sqrt(1 + s * s))
        assert math.sqrt(LAM) * barred_action_underdense(y, beta) == pytest.approx(rhs, abs=1e-10)


def test_barrier_wave_at_origin():
    beta = eigenvalue_near_separatrix_underdense(LAM, 200)
    ctx = barrier_context(LAM, beta)
    b0 = barrier_wave_underdense(LAM, beta, ctx, np.array([0]))[0]
    g = gamma_quarter_line(ctx.t)
    ref = normalization_constant(LAM, beta) * g.modulus * math.exp(math.pi * ctx.t / 8) / (2 * math.sqrt(math.pi))
    assert b0 == pytest.approx(ref * (ctx.t / (1 - beta * beta)) ** 0.25, rel=1e-12)


def test_transformation_consistency(sol12500):
    # C_n = (-1)^n B_n solves the recursion with the coupling sign flipped, and back
    lam = LAM
    b = sol12500.wave(200).amplitudes
    e = lam * sol12500.state(200).beta
    n = np.arange(b.size)
    c = np.where(n % 2, -1.0, 1.0) * b
    full_c = np.concatenate([c[:0:-1], c])
    k = np.arange(-(b.size - 1), b.size)
    res_c = k[1:-1] ** 2 * full_c[1:-1] + 0.5 * lam * (full_c[2:] + full_c[:-2]) - e * full_c[1:-1]
    assert np.max(np.abs(res_c)) <= 1e-9 * lam
    back = np.where(np.abs(k) % 2, -1.0, 1.0) * full_c
    res_b = k[1:-1] ** 2 * back[1:-1] - 0.5 * lam * (back[2:] + back[:-2]) - e * back[1:-1]
    assert np.max(np.abs(res_b)) <= 1e-9 * lam


def test_wkb_with_mu_zero_crossings(sol12500):
    sl = math.sqrt(LAM)
    beta = sol12500.state(200).beta
    mu = mu_underdense(t_underdense(LAM, beta))
    ns = np.arange(int(math.sqrt(1 + beta) * sl) - 2)
    y = ns / sl
    v = np.array([math.cos(sl * barred_action_underdense(yy, beta) + mu + math.pi * n) for yy, n in zip(y, ns)])
    o = sol12500.wave(200).amplitudes[ns]
    zv = np.flatnonzero(np.sign(v[1:]) != np.sign(v[:-1]))
    zo = np.flatnonzero(np.sign(o[1:]) != np.sign(o[:-1]))
    assert zv.size == zo.size
    assert np.max(np.abs(zv - zo)) <= 1


def test_separatrix_eigenvector(sol12500):
    w = separatrix_eigenvector(LAM, 200, n_max=sol12500.params.truncation_n)
    assert w.discrete_norm() == pytest.approx(1.0, abs=1e-12)
    assert max_peak_deviation(w, sol12500.wave(200).amplitudes) <= 0.02
    # stitching scale agreement is good; the pointwise test below is stricter
    assert w.extras["join_mismatch"] < 5e-3


def test_analytic_constant_overestimates_near_separatrix(sol12500):
    beta = eigenvalue_near_separatrix_underdense(LAM, 200)
    m = join_plan(LAM, beta).join_beam
    raw = barrier_wave_underdense(LAM, beta, beams=np.arange(m + 1))
    ref = sol12500.wave(200).amplitudes[: m + 1]
    scale = np.dot(raw, ref) / np.dot(raw, raw)
    assert 0.8 < scale < 0.97


@pytest.mark.xfail(strict=True, reason="pieces differ by up to 1.7e-3 of the local amplitude at the join")
def test_join_pointwise_1e3():
    worst = max(auto_eigenvector(LAM, j).extras["join_mismatch"] for j in range(170, 206, 2))
    assert worst <= 1e-3


def test_join_pointwise_2e3():
    worst = max(auto_eigenvector(LAM, j).extras["join_mismatch"] for j in range(170, 206, 2))
    assert worst <= 2e-3


@pytest.mark.parametrize("j", [196, 200, 202])
def test_join_scale_agreement(j):
    # least-squares scale between the two pieces over the overlap window
    w = auto_eigenvector(LAM, j)
    beta, m = w.beta, w.extras["join_beam"]
    ctx = barrier_context(LAM, beta)
    beams = np.arange(m - 3, m + 4)
    from raman_nath.separatrix import barrier_wave_overdense

    inner = (barrier_wave_underdense if beta < 1 else barrier_wave_overdense)(LAM, beta, ctx, beams)
    outer = airy_transitional(LAM, beta, beams)
    scale = abs(np.dot(inner, outer) / np.dot(outer, outer))
    assert scale == pytest.approx(1.0, abs=1e-3)


def test_free_eigenvector(sol12500):
    w = free_eigenvector(LAM, j=202, n_max=sol12500.params.truncation_n)
    assert w.extras["regime"] == FREE
    assert max_peak_deviation(w, sol12500.wave(202).amplitudes) <= 0.03
    n, amps = w.full_range()
    assert np.array_equal(n, -n[::-1])
    assert np.array_equal(amps, amps[::-1])
    with pytest.raises(RegimeError):
        free_eigenvector(LAM, beta=0.99)


def test_airy_piece_finite_at_turning_point():
    # beta chosen so that y+ falls exactly on beam 150
    lam = 10000.0
    beta = (150.0 / math.sqrt(lam)) ** 2 - 1.0
    v = airy_transitional(lam, beta, np.array([149, 150, 151]))
    assert np.all(np.isfinite(v))
    assert abs(v[1] - 0.5 * (v[0] + v[2])) < 0.05 * abs(v[1])
