"""Single-well uniform approximation built on parabolic-cylinder functions.

The well is mapped onto the comparison equation ``w'' + (t - sigma^2) w = 0``
whose bounded solutions are ``D_j(sigma sqrt 2)`` with ``t = 2j + 1``.  The
mapping sigma(y) equates actions measured from the outer turning point:

    sqrt(lam) S0(y+, y, beta) = -(t/2) h(1 - sigma/sqrt t)          (y <= y+)
    sqrt(lam) Im S0(y+, y, beta) = (t/2) f(sigma/sqrt t - 1)         (y > y+)

with ``h(w) = int_0^w 2 sqrt(v (2 - v)) dv`` and
``f(w) = int_0^w 2 sqrt(v (2 + v)) dv``.  Writing both through ``w`` keeps
full relative accuracy right up to the turning point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import ConvergenceError, DomainError
from .specialfn import pcf_scaled
from .states import BlochWave
from .wkb_core import (
    action_S0_quad,
    bohr_sommerfeld_eigenvalue,
    normalization_constant,
    outer_turning_point,
    well_action,
)

TAIL_CUTOFF = 1e-14

# (1 - v/2)^{1/2} and (1 + v/2)^{1/2} Taylor coefficients, integrated against v^{1/2}
_BINOM = (1.0, 0.25, -1.0 / 32.0, 1.0 / 128.0, -5.0 / 2048.0, 7.0 / 8192.0)


def _series(w, sign):
    # 2 sqrt 2 int_0^w v^{1/2} (1 + sign v/2)^{1/2} dv
    total = 0.0
    for k, c in enumerate(_BINOM):
        total += c * sign**k * w ** (1.5 + k) / (1.5 + k)
    return 2.0 * math.sqrt(2.0) * total


def h_inside(w):
    """int_0^w 2 sqrt(v(2 - v)) dv = arccos(1 - w) - (1 - w) sqrt(w(2 - w)), 0 <= w <= 2."""
    if w < 1e-3:
        return _series(w, -1.0)
    return 2.0 * math.asin(math.sqrt(0.5 * w)) - (1.0 - w) * math.sqrt(w * (2.0 - w))


def f_outside(w):
    """int_0^w 2 sqrt(v(2 + v)) dv = (1 + w) sqrt(w(2 + w)) - arccosh(1 + w), w >= 0."""
    if w < 1e-3:
        return _series(w, 1.0)
    r = math.sqrt(w * (2.0 + w))
    return (1.0 + w) * r - math.log1p(w + r)


def t_of_beta(lam, beta):
    """Comparison parameter t = (4/pi) sqrt(lam) A(beta); equals 2j+1 at Bohr-Sommerfeld roots."""
    if beta <= -1.0:
        return 0.0
    if beta >= 1.0:
        raise DomainError("t_of_beta needs beta < 1")
    return 4.0 * math.sqrt(lam) * well_action(beta) / math.pi


def _solve_w(fun, target, wmax=None):
    if target == 0.0:
        return 0.0
    # leading behaviour fun ~ (4 sqrt 2 / 3) w^{3/2}
    w0 = (3.0 * target / (4.0 * math.sqrt(2.0))) ** (2.0 / 3.0)
    hi = w0 if wmax is None else min(w0, wmax)
    hi = max(hi, 1e-300)
    while fun(hi) < target:
        if wmax is not None and hi >= wmax:
            raise ConvergenceError("mapping target outside the comparison range", target=target)
        hi = 2.0 * hi if wmax is None else min(2.0 * hi, wmax)
    lo = 0.5 * hi
    while fun(lo) > target:
        lo *= 0.5
    return optimize.brentq(lambda w: fun(w) - target, lo, hi, xtol=1e-300, rtol=4e-15)


@dataclass(frozen=True)
class WellPoint:
    """Mapping data at one position: sigma, the offset w = |1 - sigma/sqrt t|, side of y+."""

    y: float
    sigma: float
    w: float
    outside: bool


def map_sigma(y, lam, beta, t):
    """sigma(y) solving the action-matching relation for the single-well mapping."""
    return _map_point(y, lam, beta, t).sigma


def _map_point(y, lam, beta, t):
    yp = outer_turning_point(beta)
    sl = math.sqrt(lam)
    rt = math.sqrt(t)
    if y == yp:
        return WellPoint(y, rt, 0.0, False)
    if y < yp:
        target = -2.0 * sl * action_S0_quad(y, beta) / t
        w = _solve_w(h_inside, target, wmax=2.0)
        return WellPoint(y, rt * (1.0 - w), w, False)
    target = 2.0 * sl * action_S0_quad(y, beta).imag / t
    w = _solve_w(f_outside, target)
    return WellPoint(y, rt * (1.0 + w), w, True)


def mapping_residual(y, lam, beta, t, sigma):
    """Left minus right side of the action-matching relation at (y, sigma)."""
    sl = math.sqrt(lam)
    s = sigma / math.sqrt(t)
    yp = outer_turning_point(beta)
    if y <= yp:
        rhs = 0.5 * t * (math.asin(min(s, 1.0)) + s * math.sqrt(max(1.0 - s * s, 0.0)) - 0.5 * math.pi)
        return sl * action_S0_quad(y, beta) - rhs
    rhs = 0.5 * t * (s * math.sqrt(s * s - 1.0) - math.acosh(s))
    return sl * action_S0_quad(y, beta).imag - rhs


def turning_point_ratio(lam, beta, t):
    """Limit of (t - sigma^2) / (1 - (y^2 - beta)^2) as y -> y+."""
    return (math.sqrt(lam * t) / (2.0 * math.sqrt(1.0 + beta))) ** (2.0 / 3.0)


def _amplitude_ratio(pt, lam, beta, t):
    """(t - sigma^2) / (1 - (y^2 - beta)^2), formed from accurate differences."""
    yp = outer_turning_point(beta)
    y = pt.y
    if pt.w < 1e-7:
        return turning_point_ratio(lam, beta, t)
    x = y * y - beta
    if not pt.outside:
        num = t * pt.w * (2.0 - pt.w)
        den = (yp - y) * (yp + y) * (1.0 + x)
    else:
        num = t * pt.w * (2.0 + pt.w)
        den = (y - yp) * (y + yp) * (1.0 + x)
    return num / den


def uniform_eigenvector(lam, j, beta=None, *, n_max=None, renormalize=False):
    """Uniform single-well Bloch wave for even index j.

    ``B_n = (N/2) 2^{1/4} (2e/t)^{t/4} ((t - sigma^2)/p1^2)^{1/4} D_j(-sigma sqrt 2)``
    with ``t = 2j + 1``.  ``beta`` defaults to the Bohr-Sommerfeld root, where
    the mapping puts sigma(0) = 0 exactly.  Finite at every beam including the
    turning point; the decaying tail is cut to zero once it drops below
    1e-14 of the peak.
    """
    from .rn_oracle import choose_truncation

    if j < 0 or j % 2:
        raise DomainError("uniform_eigenvector handles even j >= 0")
    if beta is None:
        beta = bohr_sommerfeld_eigenvalue(lam, j)
    if n_max is None:
        n_max = choose_truncation(lam)
    t = 2.0 * j + 1.0
    norm = normalization_constant(lam, beta)
    pref = 0.5 * norm * 2.0**0.25
    n = np.arange(n_max + 1)
    y = n / math.sqrt(lam)
    yp = outer_turning_point(beta)
    amp = np.zeros(n.size)
    sig = np.full(n.size, np.nan)
    peak = 0.0
    for k in range(n.size):
        pt = _map_point(float(y[k]), lam, beta, t)
        sig[k] = pt.sigma
        ratio = _amplitude_ratio(pt, lam, beta, t)
        amp[k] = pref * ratio**0.25 * pcf_scaled(j, -pt.sigma)
        peak = max(peak, abs(amp[k]))
        if y[k] > yp and abs(amp[k]) < TAIL_CUTOFF * peak:
            amp[k:] = 0.0
            break
    wave = BlochWave(n, amp, np.ones(n.size, bool), lam, beta, j, "uniform", False, {"t": t, "sigma": sig})
    return wave.renormalized() if renormalize else wave
