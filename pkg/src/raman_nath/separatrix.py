"""States near and above the separatrix beta = 1.

Substituting ``B_n = (-1)^n C_n`` swaps the sign of the coupling, turning the
top of the cosine band into a parabolic barrier centred on y = 0.  Near the
barrier top the comparison equation is ``w'' + (t + sigma^2) w = 0``
(underdense, beta < 1) or ``w'' + (sigma^2 - t) w = 0`` (overdense,
beta > 1); both are solved by Kummer functions and the barrier parameter t is
fixed by the action under/through the barrier.  The outer turning point
y+ = sqrt(1 + beta) is handled by an Airy transitional piece, and the two are
stitched at a join beam between the turning points.

Eigenvalues come from matching the barrier wave's asymptotic phase (which
carries the angle mu(t)) to the WKB phase from the outer turning point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError, DomainError, NoRootError, RegimeError
from .specialfn import airy_ai, gamma_quarter_line, kummer_1F1
from .states import BOUND, FREE, SEPARATRIX, BlochWave
from .uniform_bound import f_outside, h_inside, _solve_w
from .wkb_core import (
    action_S0_quad,
    bohr_sommerfeld_eigenvalue,
    normalization_constant,
    outer_turning_point,
    phase_momentum,
    well_action,
    _sqrt_sub_integral,
    _sqrt_sub_integral_left,
)

T_SWITCH = 40.0
IMAG_TOL = 1e-9
JOIN_TOL = 1e-3
UNDERDENSE = "underdense"
OVERDENSE = "overdense"


# ---------------------------------------------------------------------------
# Barrier actions and parameters
# ---------------------------------------------------------------------------


def _barrier_momentum(u, beta):
    """arccos(beta - u^2) = pi - arccos(u^2 - beta)."""
    return math.pi - phase_momentum(u, beta)


def barred_action_underdense(y, beta, method="quad"):
    """S0bar(0, y, beta) = int_0^y arccos(beta - u^2) du for beta < 1."""
    if beta >= 1.0:
        raise RegimeError("underdense barred action needs beta < 1")
    if y < 0:
        raise DomainError("y must be >= 0")
    if y == 0.0:
        return 0.0
    yp = outer_turning_point(beta)
    if y > yp:
        raise DomainError("barred action defined inside the outer turning point")
    if method == "closed":
        from .wkb_core import action_S0_closed

        return math.pi * y - (action_S0_closed(y, beta) - action_S0_closed(0.0, beta))
    val, _ = integrate.quad(lambda u: _barrier_momentum(u, beta), 0.0, y, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def t_underdense(lam, beta, method="quad"):
    """Barrier parameter below the separatrix.

    ``t = (4/pi) sqrt(lam) int_0^{sqrt(1-beta)} arccos(beta + v^2) dv``; the
    ``closed`` route evaluates ``(8/pi) sqrt(lam) sqrt(1-beta) E(arccos(beta)/2 | 2/(1-beta))``.
    """
    if beta >= 1.0:
        raise RegimeError("t_underdense needs beta < 1")
    if beta <= -1.0:
        raise DomainError("beta must exceed -1")
    sl = math.sqrt(lam)
    vmax = math.sqrt(1.0 - beta)
    if method == "closed":
        from .specialfn import ellip_E_inc

        e = complex(ellip_E_inc(0.5 * math.acos(beta), 2.0 / (1.0 - beta)))
        return 8.0 / math.pi * sl * vmax * e.real

    def p(v):
        # arccos(beta + v^2) with an accurate square-root endpoint at v = vmax
        eps = (vmax - v) * (vmax + v)
        return 2.0 * math.asin(min(math.sqrt(0.5 * max(eps, 0.0)), 1.0))

    return 4.0 / math.pi * sl * _sqrt_sub_integral(p, 0.0, vmax)


def inner_turning_point(beta):
    """sqrt(beta - 1), real only above the separatrix."""
    if beta <= 1.0:
        raise RegimeError("inner turning point is real only for beta > 1")
    return math.sqrt(beta - 1.0)


def barrier_integral_overdense(beta):
    """int_0^{y_in} arccosh(beta - u^2) du."""
    yi = inner_turning_point(beta)

    def q(u):
        eps = max((yi - u) * (yi + u), 0.0)
        return math.log1p(eps + math.sqrt(eps * (2.0 + eps)))

    return _sqrt_sub_integral(q, 0.0, yi)


def t_overdense(lam, beta, method="quad"):
    """Barrier parameter above the separatrix: (4/pi) sqrt(lam) int_0^{y_in} arccosh(beta - u^2) du."""
    if beta <= 1.0:
        raise RegimeError("t_overdense needs beta > 1")
    if method == "closed":
        from .specialfn import ellip_E_inc

        c = 2j * math.sqrt(lam) * math.sqrt(beta - 1.0) * ellip_E_inc(0.5j * math.acosh(beta), 2.0 / (1.0 - beta))
        return float((-4.0 / math.pi * c).real)
    return 4.0 / math.pi * math.sqrt(lam) * barrier_integral_overdense(beta)


def outer_action_overdense(beta):
    """int_{y_in}^{y+} arccos(u^2 - beta) du, the allowed-region action for beta > 1."""
    return -action_S0_quad(inner_turning_point(beta), beta)


def barred_action_overdense_outside(y, beta):
    """S0bar(y_in, y, beta) = int_{y_in}^y arccos(beta - u^2) du for y_in <= y <= y+."""
    yi = inner_turning_point(beta)
    if y < yi:
        raise DomainError("outside-barrier action needs y >= y_in")
    return _sqrt_sub_integral_left(lambda u: _barrier_momentum(u, beta), yi, y)


def barred_action_overdense_inside(y, beta):
    """int_y^{y_in} arccosh(beta - u^2) du for 0 <= y <= y_in."""
    yi = inner_turning_point(beta)
    if y > yi:
        raise DomainError("inside-barrier action needs y <= y_in")

    def q(u):
        eps = max((yi - u) * (yi + u), 0.0)
        return math.log1p(eps + math.sqrt(eps * (2.0 + eps)))

    return _sqrt_sub_integral(q, y, yi)


def barred_actions_overdense(y, beta):
    """Barrier-side action at y: (inside value, None) within the barrier, (None, outside value) beyond."""
    yi = inner_turning_point(beta)
    if y <= yi:
        return barred_action_overdense_inside(y, beta), None
    return None, barred_action_overdense_outside(y, beta)


def mu_underdense(t):
    """(t/4) ln t - (t/2) ln 2 - t/4 - Arg Gamma(1/4 + i t/4) - pi/8."""
    if t < 0:
        raise DomainError("t must be >= 0")
    arg = gamma_quarter_line(t).argument
    lt = 0.25 * t * math.log(t) if t > 0 else 0.0
    return lt - 0.5 * t * math.log(2.0) - 0.25 * t - arg - 0.125 * math.pi


def mu_overdense(t):
    """-(t/4) ln t + (t/2) ln 2 + t/4 + Arg Gamma(1/4 + i t/4) - pi/8."""
    if t < 0:
        raise DomainError("t must be >= 0")
    arg = gamma_quarter_line(t).argument
    lt = 0.25 * t * math.log(t) if t > 0 else 0.0
    return -lt + 0.5 * t * math.log(2.0) + 0.25 * t + arg - 0.125 * math.pi


@dataclass(frozen=True)
class BarrierContext:
    """Barrier data for one (lam, beta)."""

    lam: float
    beta: float
    regime: str
    t: float
    mu: float
    inner_tp: complex
    outer_tp: float


def barrier_context(lam, beta):
    if beta < 1.0:
        t = t_underdense(lam, beta)
        return BarrierContext(lam, beta, UNDERDENSE, t, mu_underdense(t), 1j * math.sqrt(1.0 - beta), outer_turning_point(beta))
    if beta > 1.0:
        t = t_overdense(lam, beta)
        return BarrierContext(lam, beta, OVERDENSE, t, mu_overdense(t), inner_turning_point(beta), outer_turning_point(beta))
    raise RegimeError("beta = 1 sits exactly on the separatrix")


# ---------------------------------------------------------------------------
# Regime switch
# ---------------------------------------------------------------------------


def classify_regime(lam, beta, j=None, t_switch=T_SWITCH):
    """Regime tag for a state.

    Above the separatrix the state is free.  Below it, the barrier parameter
    evaluated at the single-well estimate (the Bohr-Sommerfeld root when j
    is given and has one, otherwise ``beta`` itself) decides: t <= t_switch
    goes to the barrier treatment.
    """
    if beta > 1.0:
        return FREE
    if beta <= 0.0 and t_underdense(lam, 0.0) > t_switch:
        return BOUND
    est = beta
    if j is not None:
        try:
            est = bohr_sommerfeld_eigenvalue(lam, j)
        except NoRootError:
            return SEPARATRIX
    if est >= 1.0:
        return SEPARATRIX
    return SEPARATRIX if t_underdense(lam, est) <= t_switch else BOUND


# ---------------------------------------------------------------------------
# Eigenvalue conditions
# ---------------------------------------------------------------------------


def _target_phase(j):
    return (0.5 * j + 0.25) * math.pi


def match_phase(j):
    """pi/4 when j = 0 mod 4, 5pi/4 when j = 2 mod 4."""
    return 0.25 * math.pi if j % 4 == 0 else 1.25 * math.pi


def underdense_phase_function(lam, beta):
    """sqrt(lam) A(beta) - mu(t(beta)); equals (j/2 + 1/4) pi at eigenvalues."""
    return math.sqrt(lam) * well_action(beta) - mu_underdense(t_underdense(lam, beta))


def underdense_condition(lam, beta, phase):
    """cos(mu) - cos(sqrt(lam) S0(y+, 0, beta) + phase), matched at y = 0."""
    mu = mu_underdense(t_underdense(lam, beta))
    return math.cos(mu) - math.cos(math.sqrt(lam) * action_S0_quad(0.0, beta) + phase)


def _gradient(fun, x, h):
    return (fun(x + h) - fun(x - h)) / (2.0 * h)


def eigenvalue_near_separatrix_underdense(lam, j, xtol=1e-14, check=True):
    """Modified eigenvalue for even j just below the separatrix.

    Solves ``sqrt(lam) A(beta) - mu(t(beta)) = (j/2 + 1/4) pi``.  This is the
    phase form of the matching condition ``cos mu = cos(sqrt(lam) S0 + phase)``
    at y = 0 on its negative-gradient branch; with ``check`` the returned root
    is verified to be a negative-gradient zero of that cosine condition.
    """
    if j < 0 or j % 2:
        raise DomainError("even j >= 0 required")
    target = _target_phase(j)
    g = lambda b: underdense_phase_function(lam, b) - target
    hi = 1.0 - 1e-15
    if g(hi) < 0:
        raise NoRootError("no underdense root below the separatrix", lam=lam, j=j)
    step = 1e-3
    lo = max(hi - step, -1.0 + 1e-12)
    while g(lo) > 0:
        if lo <= -1.0 + 1e-12:
            raise NoRootError("could not bracket the underdense root", lam=lam, j=j)
        step *= 4.0
        lo = max(hi - step, -1.0 + 1e-12)
    beta = optimize.brentq(g, lo, hi, xtol=xtol, rtol=1e-15)
    if check:
        phase = match_phase(j)
        res = underdense_condition(lam, beta, phase)
        h = min(1e-7, 0.5 * (1.0 - beta))
        grad = _gradient(lambda b: underdense_condition(lam, b, phase), beta, h)
        if abs(res) > 1e-8 or grad >= 0:
            raise ConvergenceError("underdense root fails the cosine matching check", residual=res, gradient=grad)
    return beta


def overdense_phase_function(lam, beta):
    """sqrt(lam) (A_out + pi y_in) - mu_over(t(beta)); equals (j/2 + 1/4) pi at eigenvalues."""
    sl = math.sqrt(lam)
    return sl * (outer_action_overdense(beta) + math.pi * inner_turning_point(beta)) - mu_overdense(t_overdense(lam, beta))


def overdense_condition(lam, beta, m, phase):
    """Cosine matching condition at beam m for a free state.

    cos(sqrt(lam) S0bar(y_in, y_m) + mu + pi m) - cos(sqrt(lam) S0(y+, y_m) + phase)
    """
    sl = math.sqrt(lam)
    y = m / sl
    yi = inner_turning_point(beta)
    yp = outer_turning_point(beta)
    if not yi < y < yp:
        raise DomainError(f"match beam {m} not strictly between the turning points")
    mu = mu_overdense(t_overdense(lam, beta))
    left = math.cos(sl * barred_action_overdense_outside(y, beta) + mu + math.pi * m)
    right = math.cos(sl * action_S0_quad(y, beta) + phase)
    return left - right


def overdense_condition_roots(lam, m, phase, lo, hi, samples=400):
    """All zeros of the beam-m condition in (lo, hi) with their gradient signs (+1 / -1)."""
    bb = np.linspace(lo, hi, samples)
    vals = np.array([overdense_condition(lam, b, m, phase) for b in bb])
    out = []
    for k in range(samples - 1):
        if vals[k] == 0.0 or vals[k] * vals[k + 1] < 0:
            r = optimize.brentq(lambda b: overdense_condition(lam, b, m, phase), bb[k], bb[k + 1], xtol=1e-15)
            out.append((r, 1 if vals[k + 1] > vals[k] else -1))
    return out


def eigenvalue_overdense(lam, j, m=None, xtol=1e-14, check=True):
    """Free-state eigenvalue for even j above the separatrix.

    Solves ``sqrt(lam)(A_out + pi y_in) - mu_over(t) = (j/2 + 1/4) pi``,
    which is the beam-independent phase form of the cosine condition at any
    match beam between the turning points.  With ``check`` the root is
    verified to zero the cosine condition at beam ``m`` (default: the join
    beam) and at a second beam.
    """
    if j < 0 or j % 2:
        raise DomainError("even j >= 0 required")
    target = _target_phase(j)
    g = lambda b: overdense_phase_function(lam, b) - target
    lo = 1.0 + 1e-12
    if g(lo) > 0:
        raise NoRootError("state lies below the separatrix", lam=lam, j=j)
    step = 1e-3
    hi = lo + step
    while g(hi) < 0:
        step *= 2.0
        hi = lo + step
        if step > 10:
            raise NoRootError("could not bracket the overdense root", lam=lam, j=j)
    beta = optimize.brentq(g, max(lo, hi - step), hi, xtol=xtol, rtol=1e-15)
    if check:
        phase = match_phase(j)
        m0 = join_plan(lam, beta).join_beam if m is None else m
        yi, yp = inner_turning_point(beta), outer_turning_point(beta)
        sl = math.sqrt(lam)
        beams = [m0] + [k for k in (m0 - 7, m0 + 7) if yi < k / sl < yp][:1]
        for mb in beams:
            res = overdense_condition(lam, beta, mb, phase)
            if abs(res) > 1e-8:
                raise ConvergenceError("overdense root fails the cosine matching check", beam=mb, residual=res)
    return beta


def modified_eigenvalue(lam, j):
    """Eigenvalue from the barrier matching: underdense when a root exists below beta = 1, overdense otherwise."""
    try:
        return eigenvalue_near_separatrix_underdense(lam, j)
    except NoRootError:
        return eigenvalue_overdense(lam, j)


# ---------------------------------------------------------------------------
# Mappings
# ---------------------------------------------------------------------------


def _asinh_form(s):
    # arcsinh(s) + s sqrt(1 + s^2)
    return math.asinh(s) + s * math.sqrt(1.0 + s * s)


def map_sigma_underdense(y, lam, beta, t):
    """sigma solving sqrt(lam) S0bar(0, y) = (t/2)(arcsinh(s) + s sqrt(1 + s^2)), s = sigma/sqrt t."""
    target = 2.0 * math.sqrt(lam) * barred_action_underdense(y, beta) / t
    if target == 0.0:
        return 0.0
    hi = max(target, 1e-300)
    while _asinh_form(hi) < target:
        hi *= 2.0
    s = optimize.brentq(lambda s: _asinh_form(s) - target, 0.0, hi, xtol=1e-300, rtol=4e-15)
    return math.sqrt(t) * s


def map_sigma_overdense(y, lam, beta, t):
    """sigma for the overdense barrier mapping; returns (sigma, w, outside) with w = |1 - sigma/sqrt t|."""
    sl = math.sqrt(lam)
    rt = math.sqrt(t)
    yi = inner_turning_point(beta)
    if y == yi:
        return rt, 0.0, False
    if y < yi:
        target = 2.0 * sl * barred_action_overdense_inside(y, beta) / t
        w = _solve_w(h_inside, target, wmax=1.0)
        return rt * (1.0 - w), w, False
    target = 2.0 * sl * barred_action_overdense_outside(y, beta) / t
    w = _solve_w(f_outside, target)
    return rt * (1.0 + w), w, True


def map_sigma_airy(y, lam, beta):
    """Airy mapping: sqrt(lam) S0 = -(2/3)(-sigma)^{3/2} inside y+, sqrt(lam) Im S0 = (2/3) sigma^{3/2} beyond."""
    s0 = action_S0_quad(y, beta)
    sl = math.sqrt(lam)
    if isinstance(s0, complex):
        return (1.5 * sl * s0.imag) ** (2.0 / 3.0)
    return -((-1.5 * sl * s0) ** (2.0 / 3.0))


def turning_ratio_limit(lam, t, y_tp):
    """Limit of (t - sigma^2)/p1^2 at a square-root turning point y_tp."""
    return (math.sqrt(lam * t) / (2.0 * y_tp)) ** (2.0 / 3.0)


# ---------------------------------------------------------------------------
# Wave pieces
# ---------------------------------------------------------------------------


def _real_part_checked(z, what):
    z = np.asarray(z, dtype=complex)
    bad = np.abs(z.imag) > IMAG_TOL * np.maximum(np.abs(z), 1e-300)
    if np.any(bad):
        worst = float(np.max(np.abs(z.imag) / np.maximum(np.abs(z), 1e-300)))
        raise ConvergenceError(f"{what}: discarded imaginary part too large", relative_imag=worst)
    return z.real


def _norm_or_one(lam, beta):
    return normalization_constant(lam, beta) if beta < 1.0 else 1.0


def barrier_wave_underdense(lam, beta, ctx=None, beams=None):
    """Underdense barrier piece on the given beams (default 0..join beam).

    B_n = (-1)^n N (|Gamma(1/4 + it/4)| e^{pi t/8} / (2 sqrt pi))
          ((t + sigma^2)/p1^2)^{1/4} e^{i sigma^2/2} 1F1(1/4 - it/4; 1/2; -i sigma^2)
    """
    ctx = barrier_context(lam, beta) if ctx is None else ctx
    if ctx.regime != UNDERDENSE:
        raise RegimeError("underdense barrier wave needs beta < 1")
    if beams is None:
        beams = np.arange(join_plan(lam, beta).join_beam + 1)
    beams = np.asarray(beams)
    sl = math.sqrt(lam)
    t = ctx.t
    g = gamma_quarter_line(t)
    pref = _norm_or_one(lam, beta) * math.exp(g.log_modulus + math.pi * t / 8.0) / (2.0 * math.sqrt(math.pi))
    y = beams / sl
    if np.any(y >= ctx.outer_tp):
        raise DomainError("barrier piece evaluated at or beyond the outer turning point")
    sig = np.array([map_sigma_underdense(float(v), lam, beta, t) for v in y])
    x = y * y - beta
    p1sq = (1.0 - x) * (1.0 + x)
    z = -1j * sig * sig
    f = np.exp(1j * sig * sig / 2.0) * kummer_1F1(0.25 - 0.25j * t, 0.5, z)
    core = _real_part_checked(f, "underdense barrier wave")
    sign = np.where(beams % 2, -1.0, 1.0)
    return sign * pref * ((t + sig * sig) / p1sq) ** 0.25 * core


def barrier_wave_overdense(lam, beta, ctx=None, beams=None):
    """Overdense barrier piece on the given beams (default 0..join beam).

    B_n = (-1)^n N (|Gamma(1/4 + it/4)| e^{-pi t/8} / (2 sqrt pi))
          ((sigma^2 - t)/p1^2)^{1/4} e^{-i sigma^2/2} 1F1(1/4 - it/4; 1/2; i sigma^2)
    with N = 1 (the analytic constant does not exist above the separatrix).
    """
    ctx = barrier_context(lam, beta) if ctx is None else ctx
    if ctx.regime != OVERDENSE:
        raise RegimeError("overdense barrier wave needs beta > 1")
    if beams is None:
        beams = np.arange(join_plan(lam, beta).join_beam + 1)
    beams = np.asarray(beams)
    sl = math.sqrt(lam)
    t = ctx.t
    yi = ctx.inner_tp
    g = gamma_quarter_line(t)
    pref = math.exp(g.log_modulus - math.pi * t / 8.0) / (2.0 * math.sqrt(math.pi))
    y = beams / sl
    if np.any(y >= ctx.outer_tp):
        raise DomainError("barrier piece evaluated at or beyond the outer turning point")
    sig = np.empty(y.size)
    ratio = np.empty(y.size)
    for k, v in enumerate(y):
        s, w, outside = map_sigma_overdense(float(v), lam, beta, t)
        sig[k] = s
        if w < 1e-7:
            ratio[k] = turning_ratio_limit(lam, t, yi)
            continue
        # (sigma^2 - t) / p1^2 from accurate factors; p1^2 = (1 - x)(y - y_in)(y + y_in)
        num = t * w * (2.0 + w) if outside else -t * w * (2.0 - w)
        den = (1.0 - (v * v - beta)) * (v - yi) * (v + yi)
        ratio[k] = num / den
    z = 1j * sig * sig
    f = np.exp(-1j * sig * sig / 2.0) * kummer_1F1(0.25 - 0.25j * t, 0.5, z)
    core = _real_part_checked(f, "overdense barrier wave")
    sign = np.where(beams % 2, -1.0, 1.0)
    return sign * pref * ratio**0.25 * core


def airy_transitional(lam, beta, beams):
    """Airy piece around the outer turning point: sqrt(pi) N (-sigma/p1^2)^{1/4} Ai(sigma)."""
    beams = np.asarray(beams)
    sl = math.sqrt(lam)
    yp = outer_turning_point(beta)
    lim = lam ** (1.0 / 3.0) * (4.0 * yp) ** (-2.0 / 3.0)
    out = np.empty(beams.size)
    norm = _norm_or_one(lam, beta)
    for k, n in enumerate(beams):
        y = n / sl
        x = y * y - beta
        if abs(y - yp) < 1e-9:
            sig, ratio = 0.0, lim
        else:
            sig = map_sigma_airy(y, lam, beta)
            p1sq = (yp - y) * (yp + y) * (1.0 + x)
            # sigma and p1^2 change sign together at y+
            ratio = -sig / p1sq
        out[k] = math.sqrt(math.pi) * norm * ratio**0.25 * float(airy_ai(sig))
    return out


# ---------------------------------------------------------------------------
# Join and full eigenvectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JoinPlan:
    join_beam: int
    barrier_range: tuple
    airy_range: tuple
    y_join: float


def join_plan(lam, beta, n_max=None):
    """Nearest beam to the midpoint between the inner and outer turning points.

    Below the separatrix the inner turning point is imaginary and the
    barrier centre y = 0 stands in for it.
    """
    from .rn_oracle import choose_truncation

    if n_max is None:
        n_max = choose_truncation(lam)
    sl = math.sqrt(lam)
    yi = math.sqrt(beta - 1.0) if beta > 1.0 else 0.0
    yp = outer_turning_point(beta)
    m = int(round(0.5 * (yi + yp) * sl))
    m = min(max(m, int(math.floor(yi * sl)) + 1), int(math.ceil(yp * sl)) - 1)
    return JoinPlan(m, (0, m), (m, n_max), m / sl)


def _stitch(lam, beta, j, barrier, n_max, method, regime):
    from .rn_oracle import choose_truncation

    if n_max is None:
        n_max = choose_truncation(lam)
    plan = join_plan(lam, beta, n_max)
    m = plan.join_beam
    # overlap window m-w..m+w, kept inside the outer turning point on coarse grids
    last = int(math.ceil(outer_turning_point(beta) * math.sqrt(lam))) - 1
    w = max(min(3, m, last - m), 0)
    inner = barrier(np.arange(m + w + 1))
    outer = airy_transitional(lam, beta, np.arange(m - w, n_max + 1))
    # align the pieces over the overlap, then measure their mismatch at m
    a, b = inner[m - w :], outer[: 2 * w + 1]
    sign = 1.0 if np.dot(a, b) >= 0 else -1.0
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)))
    mismatch = abs(a[w] - sign * b[w]) / scale
    amp = np.concatenate([inner[:m], sign * outer[w:]])
    n = np.arange(n_max + 1)
    extras = {"join_beam": m, "join_mismatch": float(mismatch), "regime": regime}
    wave = BlochWave(n, amp, np.ones(n.size, bool), lam, beta, j, method, False, extras)
    return wave.renormalized()


def separatrix_eigenvector(lam, j, beta=None, *, n_max=None):
    """Stitched barrier + Airy Bloch wave for an even state just below the separatrix, renormalised."""
    if beta is None:
        beta = eigenvalue_near_separatrix_underdense(lam, j)
    if beta >= 1.0:
        raise RegimeError("separatrix_eigenvector handles beta < 1; use free_eigenvector")
    ctx = barrier_context(lam, beta)
    return _stitch(lam, beta, j, lambda nb: barrier_wave_underdense(lam, beta, ctx, nb), n_max, "separatrix", SEPARATRIX)


def free_eigenvector(lam, beta=None, *, j=None, n_max=None):
    """Stitched overdense barrier + Airy Bloch wave for a free even state, renormalised."""
    if beta is None:
        if j is None:
            raise ValueError("give beta or j")
        beta = eigenvalue_overdense(lam, j)
    if beta <= 1.0:
        raise RegimeError("free_eigenvector needs beta > 1")
    ctx = barrier_context(lam, beta)
    return _stitch(lam, beta, j, lambda nb: barrier_wave_overdense(lam, beta, ctx, nb), n_max, "separatrix", FREE)


def regime_for_index(lam, j, t_switch=T_SWITCH):
    """Regime of even state j from the single-well estimate and the barrier rules."""
    try:
        beta_bs = bohr_sommerfeld_eigenvalue(lam, j)
        return BOUND if t_underdense(lam, beta_bs) > t_switch else SEPARATRIX
    except NoRootError:
        pass
    try:
        eigenvalue_near_separatrix_underdense(lam, j, check=False)
        return SEPARATRIX
    except NoRootError:
        return FREE


def state_eigenvalue(lam, j):
    """Semiclassical eigenvalue by the regime rule: Bohr-Sommerfeld, underdense or overdense matching."""
    if regime_for_index(lam, j) == BOUND:
        return bohr_sommerfeld_eigenvalue(lam, j)
    return modified_eigenvalue(lam, j)


def auto_eigenvector(lam, j, *, n_max=None):
    """Best available semiclassical Bloch wave for even j, chosen by regime."""
    from .uniform_bound import uniform_eigenvector

    if regime_for_index(lam, j) == BOUND:
        return uniform_eigenvector(lam, j, n_max=n_max, renormalize=True)
    beta = modified_eigenvalue(lam, j)
    if beta < 1.0:
        return separatrix_eigenvector(lam, j, beta, n_max=n_max)
    return free_eigenvector(lam, beta, j=j, n_max=n_max)
