"""Diffracted-beam amplitudes behind a sinusoidal grating.

Three routes to A_n(zeta) for a normally incident plane wave, A_n(0) = delta_n0:

* spectral: expand in even Bloch waves, ``A_n = sum_j c_j B_n^j exp(-i lam beta_j zeta)``
  with ``c_j = B_0^j``;
* direct integration of ``i dA_n/dzeta = n^2 A_n - (lam/2)(A_{n+1} + A_{n-1})``;
* the phase-grating limit (n^2 term dropped), ``A_n = i^n J_n(lam zeta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConvergenceError
from .rn_oracle import choose_truncation
from .specialfn import bessel_J_orders
from .states import EigenSolution


@dataclass(frozen=True)
class FarfieldPattern:
    """Beam amplitudes A_n on n = -N..N at depth zeta."""

    zeta: float
    lam: float
    n: np.ndarray
    amplitudes: np.ndarray
    method: str = ""
    completeness_deficit: float = 0.0

    @property
    def intensities(self):
        return np.abs(self.amplitudes) ** 2

    @property
    def y(self):
        return self.n / math.sqrt(self.lam)

    def total(self):
        return float(np.sum(self.intensities))

    def intensity_at(self, n):
        return float(self.intensities[self.n == n][0])


def superposition_coefficients(basis):
    """c_j = B^j(0) for each wave in ``basis``; also returns 1 - sum c_j^2.

    ``basis`` is a sequence of BlochWave or an EigenSolution.
    """
    if isinstance(basis, EigenSolution):
        c = basis.basis[0].copy()
    else:
        c = np.array([w.amplitudes[0] for w in basis])
    return c, float(1.0 - np.sum(c * c))


def _pairwise_sum(x, axis=1):
    # fixed-order pairwise reduction so results do not depend on BLAS threading
    x = np.moveaxis(x, axis, -1)
    while x.shape[-1] > 1:
        if x.shape[-1] % 2:
            x = np.concatenate([x, np.zeros(x.shape[:-1] + (1,), x.dtype)], axis=-1)
        x = x[..., 0::2] + x[..., 1::2]
    return x[..., 0]


def propagate_spectral(basis, coefficients, zeta, *, betas=None, lam=None, bound_only=False):
    """Farfield amplitudes at depth zeta from a Bloch-wave expansion.

    Parameters
    ----------
    basis : EigenSolution or sequence of BlochWave
    coefficients : array
        Expansion coefficients c_j (see :func:`superposition_coefficients`).
    zeta : float
    betas : array, optional
        Eigenvalues to use in the phases; defaults to the waves' own beta.
    bound_only : bool
        Drop states with beta >= 1.
    """
    if isinstance(basis, EigenSolution):
        mat = basis.basis
        lam = basis.params.lam
        b = basis.betas if betas is None else np.asarray(betas)
    else:
        lam = basis[0].lam if lam is None else lam
        size = max(w.amplitudes.size for w in basis)
        mat = np.column_stack([np.nan_to_num(w.padded(size)) for w in basis])
        b = np.array([w.beta for w in basis]) if betas is None else np.asarray(betas)
    c = np.asarray(coefficients, dtype=float)
    keep = b < 1.0 if bound_only else np.ones(b.size, bool)
    deficit = float(1.0 - np.sum(c[keep] ** 2))
    phase = np.exp(-1j * lam * b[keep] * zeta) * c[keep]
    half = _pairwise_sum(mat[:, keep] * phase[None, :], axis=1)
    n = np.arange(-(half.size - 1), half.size)
    amps = np.concatenate([half[:0:-1], half])
    return FarfieldPattern(float(zeta), float(lam), n, amps, "spectral", deficit)


def propagate_solution(solution, zeta, bound_only=True):
    """Spectral propagation on the exact eigenbasis."""
    c, _ = superposition_coefficients(solution)
    return propagate_spectral(solution, c, zeta, bound_only=bound_only)


def integrate_rn(lam, zetas, n_half=None, *, rtol=1e-12, atol=1e-14, method="DOP853"):
    """Integrate the coupled amplitude equations from A_n(0) = delta_n0.

    The full n = -N..N system is integrated with an adaptive explicit
    Runge-Kutta scheme.  A constant diagonal shift (the centre of the
    Gershgorin interval) is removed from the generator to slow the phase
    rotation and restored analytically afterwards.

    Returns one FarfieldPattern per requested zeta.
    """
    zetas = np.atleast_1d(np.asarray(zetas, dtype=float))
    if n_half is None:
        n_half = choose_truncation(lam) if lam > 0 else 10
    n = np.arange(-n_half, n_half + 1)
    diag = n.astype(float) ** 2
    shift = 0.5 * (diag.max() + diag.min())
    d = diag - shift
    c = 0.5 * lam

    def rhs(_z, a):
        out = d * a
        out[:-1] -= c * a[1:]
        out[1:] -= c * a[:-1]
        return -1j * out

    a0 = np.zeros(n.size, complex)
    a0[n_half] = 1.0
    zmax = float(zetas.max()) if zetas.size else 0.0
    if zmax == 0.0:
        sol_y = np.repeat(a0[:, None], zetas.size, axis=1)
    else:
        order = np.argsort(zetas)
        sol = integrate.solve_ivp(rhs, (0.0, zmax), a0, method=method, t_eval=zetas[order], rtol=rtol, atol=atol)
        if not sol.success:
            raise ConvergenceError("amplitude integration failed", message=sol.message, lam=lam)
        sol_y = np.empty((n.size, zetas.size), complex)
        sol_y[:, order] = sol.y
    out = []
    for k, z in enumerate(zetas):
        amps = sol_y[:, k] * np.exp(-1j * shift * z)
        out.append(FarfieldPattern(float(z), float(lam), n, amps, "ode", 0.0))
    return out


def phase_grating(lam, zeta, n_half=None):
    """Phase-grating limit A_n = i^n J_n(lam zeta) on n = -N..N.

    The default N also covers the Bessel spread, about lam*zeta orders.
    """
    if n_half is None:
        x = lam * zeta
        n_half = max(choose_truncation(lam), int(math.ceil(x + 10.0 * x ** (1.0 / 3.0))) + 20)
    j = bessel_J_orders(n_half, lam * zeta)
    k = np.arange(n_half + 1)
    pos = (1j) ** (k % 4) * j
    # J_{-n} = (-1)^n J_n and i^{-n} = (-i)^n, so A_{-n} = A_n
    amps = np.concatenate([pos[:0:-1], pos])
    n = np.arange(-n_half, n_half + 1)
    return FarfieldPattern(float(zeta), float(lam), n, amps, "phase-grating", 0.0)


def semiclassical_basis(lam, n_max=None, include_free=0):
    """Even semiclassical Bloch waves for all bound j (plus ``include_free`` free states)."""
    from .separatrix import auto_eigenvector, modified_eigenvalue
    from .wkb_core import j_max

    waves = []
    j = 0
    top = j_max(lam)
    while True:
        if j > top:
            beta = modified_eigenvalue(lam, j)
            if beta >= 1.0:
                break
        waves.append(auto_eigenvector(lam, j, n_max=n_max))
        j += 2
    for _ in range(include_free):
        waves.append(auto_eigenvector(lam, j, n_max=n_max))
        j += 2
    return waves


def classical_depth(lam, zeta):
    """Depth in classical oscillation units, where a harmonic well refocuses at multiples of pi."""
    return math.sqrt(2.0 * lam) * zeta


def equation_depth(lam, tau):
    """Inverse of :func:`classical_depth`."""
    return tau / math.sqrt(2.0 * lam)


def classical_fold_edge(tau, rays=4000):
    """Outermost momentum reached at classical depth tau by rays launched with y = 0.

    Rays obey d theta/d tau = sqrt(2) y, dy/d tau = -sin(theta)/sqrt(2); the
    envelope of their end points is the fold caustic of the farfield pattern.
    """
    th = np.linspace(1e-3, math.pi - 1e-6, rays)
    k = th.size

    def f(_t, u):
        return np.concatenate([math.sqrt(2.0) * u[k:], -np.sin(u[:k]) / math.sqrt(2.0)])

    sol = integrate.solve_ivp(f, (0.0, tau), np.concatenate([th, np.zeros(k)]), rtol=1e-10, atol=1e-12)
    return float(np.max(np.abs(sol.y[k:, -1])))
