"""Diffraction patterns behind a thick standing-wave grating, lambda = 12500.

Depths are in classical units, where a harmonic well would refocus every
pi.  The exact spectral sum, direct integration of the amplitude equations
and the semiclassical Bloch-wave sum are compared, then a few features of
the patterns: the fold edge traced by classical rays and the partial
refocusing at depth pi.
"""
import math

import numpy as np

from raman_nath import (
    ModelParams,
    eigensolve_even,
    equation_depth,
    integrate_rn,
    phase_grating,
    propagate_solution,
    propagate_spectral,
    semiclassical_basis,
    superposition_coefficients,
)
from raman_nath.diffraction import classical_fold_edge

lam = 12500.0
sol = eigensolve_even(ModelParams.from_lambda(lam))
basis = semiclassical_basis(lam, n_max=sol.params.truncation_n)
c, eps = superposition_coefficients(basis)
print(f"{len(basis)} bound semiclassical states, weight outside them {eps:.4f}")

taus = [0.5 * math.pi, math.pi, 1.5 * math.pi]
odes = integrate_rn(lam, [equation_depth(lam, t) for t in taus], sol.params.truncation_n)
for tau, ode in zip(taus, odes):
    exact = propagate_solution(sol, ode.zeta, bound_only=False)
    bound = propagate_solution(sol, ode.zeta, bound_only=True)
    semi = propagate_spectral(basis, c, ode.zeta, bound_only=True)
    print(f"\ndepth {tau / math.pi:.1f} pi")
    print(f"  exact vs ODE          {np.max(np.abs(exact.intensities - ode.intensities)):.1e}")
    print(f"  semiclassical vs exact {np.max(np.abs(semi.intensities - bound.intensities)):.1e}  (bound states only)")
    i = exact.intensities[exact.n >= 0]
    y = exact.y[exact.n >= 0]
    peaks = [k for k in range(1, i.size - 1) if i[k] >= i[k - 1] and i[k] >= i[k + 1] and i[k] > 0.1 * i.max()]
    print(f"  outermost strong maximum at y = {y[peaks[-1]]:.3f}, ray envelope at y = {classical_fold_edge(tau):.3f}")
    print(f"  central intensity {exact.intensity_at(0):.4f}")

# at shallow depth the n^2 term hardly matters and the Bessel pattern holds
z = equation_depth(lam, 0.05)
thin = propagate_solution(sol, z, bound_only=False)
pg = phase_grating(lam, z, sol.params.truncation_n)
print(f"\nshallow depth: exact vs phase grating {np.max(np.abs(thin.intensities - pg.intensities)):.1e}")
