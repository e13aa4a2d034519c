"""Quick self-consistency checks behind ``raman-nath validate``."""

from __future__ import annotations

import math

import numpy as np

from .diffraction import equation_depth, propagate_solution
from .errors import NoRootError
from .rn_oracle import bound_state_count, eigensolve_even, truncation_shift
from .separatrix import auto_eigenvector, modified_eigenvalue
from .states import ModelParams
from .uniform_bound import t_of_beta
from .wkb_core import bohr_sommerfeld_eigenvalue, j_max


def _row(check, value, target, tol, passed=None):
    if passed is None:
        passed = abs(value - target) <= tol
    return {"check": check, "value": value, "target": target, "tolerance": tol, "passed": bool(passed)}


def max_peak_deviation(wave, oracle_amplitudes):
    """Largest |B - B_oracle| over valid beams, relative to the oracle peak, after sign alignment."""
    a = np.asarray(oracle_amplitudes)
    b = wave.padded(a.size)
    ok = np.isfinite(b)
    sign = 1.0 if np.sum(a[ok] * b[ok]) >= 0 else -1.0
    return float(np.max(np.abs(sign * b[ok] - a[ok])) / np.max(np.abs(a)))


def run_checks(lam, margin=1.3):
    params = ModelParams.from_lambda(lam, margin)
    sol = eigensolve_even(params, check_truncation=False)
    rows = []
    nb = bound_state_count(sol)
    rows.append(_row("truncation_doubling_shift", truncation_shift(params, nb), 0.0, 1e-10))
    top = j_max(lam)
    for j in sorted({0, (top // 4) * 2}):
        beta = bohr_sommerfeld_eigenvalue(lam, j)
        rows.append(_row(f"t_equals_2j+1[j={j}]", t_of_beta(lam, beta), 2 * j + 1, 1e-8))
    for j in sorted({0, (top // 4) * 2, 2 * (nb - 1)}):
        dev = max_peak_deviation(auto_eigenvector(lam, j, n_max=params.truncation_n), sol.wave(j).amplitudes)
        rows.append(_row(f"eigenvector_peak_deviation[j={j}]", dev, 0.0, 0.02))
    jf = 2 * nb
    # the matching error falls off like 1/lam: 3e-6 at lam = 12500
    tol = max(3e-6, 0.04 / lam)
    if jf // 2 < len(sol.states):
        try:
            rows.append(_row(f"first_free_eigenvalue[j={jf}]", modified_eigenvalue(lam, jf), sol.state(jf).beta, tol))
        except NoRootError:
            rows.append(_row(f"first_free_eigenvalue[j={jf}]", math.nan, sol.state(jf).beta, tol, False))
    pat = propagate_solution(sol, equation_depth(lam, 0.5 * math.pi), bound_only=False)
    rows.append(_row("spectral_unitarity", pat.total(), 1.0, 1e-9))
    return rows
