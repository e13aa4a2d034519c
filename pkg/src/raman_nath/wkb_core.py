"""Momentum functions, actions, Bohr-Sommerfeld quantisation and WKB vectors.

Conventions
-----------
y is the scaled beam coordinate n / sqrt(lam).  The amplitude momentum is
``p1 = sqrt(1 - (y^2 - beta)^2)`` and the phase momentum
``p2 = arccos(y^2 - beta)``.  ``S0(y+, y, beta)`` is the integral of p2 from
the outer turning point ``y+ = sqrt(1 + beta)`` to y: negative inside the
well, positive-imaginary beyond y+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, NoRootError
from .specialfn import ellip_E_inc, ellip_K
from .states import BlochWave

_QUAD = dict(epsabs=1e-14, epsrel=1e-13, limit=200)

DEFAULT_GUARD = 3


@dataclass(frozen=True)
class Momenta:
    p1: float
    p2: float


def momenta(y, beta):
    """(p1, p2) on the classically allowed region |y^2 - beta| <= 1."""
    x = y * y - beta
    if abs(x) > 1.0:
        raise DomainError(f"y={y} outside the allowed region for beta={beta}")
    return Momenta(math.sqrt((1.0 - x) * (1.0 + x)), phase_momentum(y, beta))


def phase_momentum(u, beta):
    """arccos(u^2 - beta), accurate near both ends of [-1, 1]."""
    x = u * u - beta
    if x >= 0.0:
        eps = max((1.0 + beta) - u * u, 0.0)
        return 2.0 * math.asin(min(math.sqrt(0.5 * eps), 1.0))
    eps = max(u * u - beta + 1.0, 0.0)
    return math.pi - 2.0 * math.asin(min(math.sqrt(0.5 * eps), 1.0))


def decay_momentum(u, beta):
    """arccosh(u^2 - beta) for u beyond the outer turning point."""
    eps = max(u * u - beta - 1.0, 0.0)
    return math.log1p(eps + math.sqrt(eps * (2.0 + eps)))


def amplitude_momentum(y, beta):
    """p1 = sqrt(1 - (y^2 - beta)^2), NaN outside the allowed region."""
    y = np.asarray(y, dtype=float)
    x = y * y - beta
    with np.errstate(invalid="ignore"):
        return np.sqrt((1.0 - x) * (1.0 + x))


def outer_turning_point(beta):
    if beta <= -1.0:
        raise DomainError("beta must exceed -1")
    return math.sqrt(1.0 + beta)


def _sqrt_sub_integral(f, a, b):
    """int_a^b f(u) du with u = b - v^2, which tames a square-root endpoint at b."""
    if b <= a:
        return 0.0
    val, _ = integrate.quad(lambda v: 2.0 * v * f(b - v * v), 0.0, math.sqrt(b - a), **_QUAD)
    return val


def _sqrt_sub_integral_left(f, a, b):
    """int_a^b f(u) du with u = a + v^2 (square-root endpoint at a)."""
    if b <= a:
        return 0.0
    val, _ = integrate.quad(lambda v: 2.0 * v * f(a + v * v), 0.0, math.sqrt(b - a), **_QUAD)
    return val


def well_action(beta):
    """A(beta) = int_0^{y+} arccos(u^2 - beta) du = -S0(y+, 0, beta), for beta in (-1, 1]."""
    if beta <= -1.0:
        return 0.0
    if beta > 1.0:
        raise DomainError("well_action needs beta <= 1")
    yp = outer_turning_point(beta)
    return _sqrt_sub_integral(lambda u: phase_momentum(u, beta), 0.0, yp)


def _check_action_domain(y, beta):
    if not math.isfinite(y) or y < 0:
        raise DomainError(f"action_S0 needs finite y >= 0, got {y}")
    if beta <= -1.0:
        raise DomainError(f"action_S0 needs beta > -1, got {beta}")
    if beta > 1.0 and y * y < (beta - 1.0) * (1.0 - 1e-13):
        raise DomainError("for beta > 1 the action is defined only outside the central barrier")


def action_S0_quad(y, beta):
    """S0(y+, y, beta) by adaptive quadrature of the phase momentum."""
    _check_action_domain(y, beta)
    yp = outer_turning_point(beta)
    if y <= yp:
        if beta > 1.0:
            yi = math.sqrt(beta - 1.0)
            mid = 0.5 * (max(y, yi) + yp)
            head = _sqrt_sub_integral_left(lambda u: phase_momentum(u, beta), y, mid) if y < mid else 0.0
            tail = _sqrt_sub_integral(lambda u: phase_momentum(u, beta), max(y, mid), yp)
            return -(head + tail)
        return -_sqrt_sub_integral(lambda u: phase_momentum(u, beta), y, yp)
    return 1j * _sqrt_sub_integral_left(lambda u: decay_momentum(u, beta), yp, y)


def action_S0_closed(y, beta):
    """S0(y+, y, beta) = y arccos(y^2 - beta) - 2 sqrt(1+beta) E(arccos(y^2 - beta)/2 | 2/(1+beta))."""
    _check_action_domain(y, beta)
    x = y * y - beta
    m = 2.0 / (1.0 + beta)
    if x <= 1.0:
        a = math.acos(max(x, -1.0))
        return y * a - 2.0 * math.sqrt(1.0 + beta) * ellip_E_inc(0.5 * a, m)
    a = math.acosh(x)
    val = y * 1j * a - 2.0 * math.sqrt(1.0 + beta) * ellip_E_inc(0.5j * a, m)
    return complex(val)


def action_S0(y, beta, method="quad"):
    """Phase action S0(y+, y, beta).

    Real and non-positive for ``0 <= y <= y+``, positive-imaginary beyond.
    ``method`` selects adaptive quadrature (default, the reference) or the
    elliptic closed form; the two agree to 1e-10.
    """
    if method == "quad":
        return action_S0_quad(y, beta)
    if method == "closed":
        return action_S0_closed(y, beta)
    raise ValueError(f"unknown method {method!r}")


def bohr_sommerfeld_lhs(lam, beta):
    return 2.0 * math.sqrt(lam) * well_action(beta)


def j_max(lam):
    """Largest j whose Bohr-Sommerfeld root lies below beta = 1."""
    top = 2.0 * math.sqrt(lam) * 2.0 * math.sqrt(2.0) / math.pi - 0.5
    return max(int(math.floor(top)), 0)


def bohr_sommerfeld_eigenvalue(lam, j, xtol=1e-13):
    """Root of ``2 sqrt(lam) A(beta) = (j + 1/2) pi`` on (-1, 1)."""
    if j < 0:
        raise DomainError("j must be >= 0")
    target = (j + 0.5) * math.pi
    if bohr_sommerfeld_lhs(lam, 1.0) < target:
        raise NoRootError("no Bohr-Sommerfeld root below the separatrix", lam=lam, j=j, j_max=j_max(lam))
    # harmonic estimate: A ~ pi (1 + beta) / (2 sqrt 2) near the bottom
    guess = -1.0 + 2.0 * math.sqrt(2.0) * target / (2.0 * math.pi * math.sqrt(lam))
    lo, hi = -1.0, 1.0
    if -1.0 < guess < 1.0:
        # bracket around the harmonic estimate, expanding upwards if needed
        lo = guess if bohr_sommerfeld_lhs(lam, guess) < target else -1.0
        step = max(1e-3, 0.1 * (guess + 1.0))
        hi = min(guess + step, 1.0)
        while hi < 1.0 and bohr_sommerfeld_lhs(lam, hi) < target:
            lo, hi = hi, min(hi + 2 * (hi - lo), 1.0)
    return optimize.brentq(lambda b: bohr_sommerfeld_lhs(lam, b) - target, lo, hi, xtol=xtol, rtol=1e-15)


def normalization_constant(lam, beta):
    """(sqrt 2 / (sqrt(lam) K((1 + beta)/2)))^{1/2}; diverges at beta = 1."""
    if beta >= 1.0:
        raise DomainError("normalization constant undefined for beta >= 1")
    return math.sqrt(math.sqrt(2.0) / (math.sqrt(lam) * ellip_K(0.5 * (1.0 + beta))))


def wkb_eigenvector(lam, beta, *, j=None, n_max=None, guard=DEFAULT_GUARD):
    """Real WKB Bloch wave on beams n = 0..n_max.

    ``B_n = N p1^{-1/2} cos(sqrt(lam) S0 + pi/4)`` inside the well and the
    connected decaying exponential ``(N/2) |p1|^{-1/2} exp(-sqrt(lam) Im S0)``
    beyond it.  Beams within ``guard`` spacings of the turning point are
    returned as NaN with ``valid = False``.
    """
    from .rn_oracle import choose_truncation

    if n_max is None:
        n_max = choose_truncation(lam)
    norm = normalization_constant(lam, beta)
    sl = math.sqrt(lam)
    yp = outer_turning_point(beta)
    n = np.arange(n_max + 1)
    y = n / sl
    amp = np.full(n.size, np.nan)
    valid = np.abs(y - yp) > guard / sl
    for k in np.flatnonzero(valid):
        yk = y[k]
        x = yk * yk - beta
        p1 = math.sqrt(abs((1.0 - x) * (1.0 + x)))
        if yk < yp:
            s0 = action_S0_quad(yk, beta)
            amp[k] = norm * math.cos(sl * s0 + 0.25 * math.pi) / math.sqrt(p1)
        else:
            s0 = action_S0_quad(yk, beta).imag
            amp[k] = 0.5 * norm * math.exp(-sl * s0) / math.sqrt(p1)
    return BlochWave(n, amp, valid, lam, beta, j, "wkb", False, {"guard": guard})
