"""Exact reference: the truncated stationary Raman-Nath matrix.

The stationary recursion ``E B_n = n^2 B_n - (lam/2)(B_{n+1} + B_{n-1})`` is
a symmetric tridiagonal eigenproblem.  Even states satisfy ``B_{-n} = B_n``;
folding onto n = 0..N with ``b_0 = B_0`` and ``b_n = sqrt(2) B_n`` keeps the
matrix symmetric and puts a factor sqrt(2) on the (0, 1) coupling.

The tridiagonal eigensolver is Sturm-sequence bisection for the eigenvalues
followed by a twisted factorisation for each eigenvector, both vectorised
over all requested eigenvalues at once.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError
from .states import BOUND, FREE, EigenSolution, Eigenstate, ModelParams

_TINY = 1e-300


def choose_truncation(lam, margin=1.3):
    """Half-width N = ceil(margin*sqrt(2 lam)) + 10."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if margin < 1:
        raise ValueError("margin must be >= 1")
    return int(math.ceil(margin * math.sqrt(2.0 * lam))) + 10


def build_even_matrix(params):
    """Diagonal and off-diagonal of the even-sector matrix on n = 0..N.

    Returns
    -------
    d : (N+1,) array
        ``n^2``.
    e : (N,) array
        ``-lam/2``, with the first entry multiplied by sqrt(2).
    """
    n = params.truncation_n
    d = np.arange(n + 1, dtype=float) ** 2
    e = np.full(n, -0.5 * params.lam)
    if n:
        e[0] *= math.sqrt(2.0)
    return d, e


def dense_matrix(d, e):
    return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


def sturm_count(d, e, x):
    """Number of eigenvalues of T(d, e) strictly below each entry of x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e2 = e * e
    q = d[0] - x
    q = np.where(q == 0.0, -_TINY, q)
    count = (q < 0).astype(int)
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        q = np.where(q == 0.0, -_TINY, q)
        count += q < 0
    return count


def gershgorin(d, e):
    r = np.zeros_like(d)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    return float(np.min(d - r)), float(np.max(d + r))


def tridiag_eigvals(d, e, select=None, maxiter=200):
    """Eigenvalues by bisection, ascending.

    select : (lo, hi) index range (inclusive, 0-based) or None for all.
    """
    n = d.size
    lo_i, hi_i = (0, n - 1) if select is None else select
    k = np.arange(lo_i, hi_i + 1)
    glo, ghi = gershgorin(d, e)
    pad = 1e-12 * max(abs(glo), abs(ghi), 1.0)
    a = np.full(k.size, glo - pad)
    b = np.full(k.size, ghi + pad)
    for _ in range(maxiter):
        mid = 0.5 * (a + b)
        below = sturm_count(d, e, mid) > k
        b = np.where(below, mid, b)
        a = np.where(below, a, mid)
        width = b - a
        if np.all(width <= 4e-16 * np.maximum(np.abs(a), np.abs(b)) + 1e-300):
            break
    return 0.5 * (a + b)


def tridiag_eigvecs(d, e, lams):
    """Unit eigenvectors for accurate eigenvalues ``lams`` via twisted factorisation.

    For each shift the forward and backward pivots D+ and D- are formed, the
    twist index r minimising |D+_r + D-_r - (d_r - lam)| is picked and the
    vector is grown outwards from x_r = 1.
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    n = d.size
    k = lams.size
    if n == 1:
        return np.ones((1, k))
    e2 = e * e
    dp = np.empty((n, k))
    dm = np.empty((n, k))
    q = d[0] - lams
    dp[0] = np.where(q == 0.0, _TINY, q)
    for i in range(1, n):
        q = d[i] - lams - e2[i - 1] / dp[i - 1]
        dp[i] = np.where(q == 0.0, _TINY, q)
    q = d[-1] - lams
    dm[-1] = np.where(q == 0.0, _TINY, q)
    for i in range(n - 2, -1, -1):
        q = d[i] - lams - e2[i] / dm[i + 1]
        dm[i] = np.where(q == 0.0, _TINY, q)
    gamma = dp + dm - (d[:, None] - lams[None, :])
    r = np.argmin(np.abs(gamma), axis=0)
    x = np.zeros((n, k))
    cols = np.arange(k)
    x[r, cols] = 1.0
    # downward from the twist: x_i = -e_i x_{i+1} / D+_i
    for i in range(n - 2, -1, -1):
        m = i < r
        x[i] = np.where(m, -e[i] * x[i + 1] / dp[i], x[i])
    # upward from the twist: x_{i+1} = -e_i x_i / D-_{i+1}
    for i in range(0, n - 1):
        m = i >= r
        x[i + 1] = np.where(m, -e[i] * x[i] / dm[i + 1], x[i + 1])
    x /= np.linalg.norm(x, axis=0)
    return x


def _fix_signs(b):
    """B_0 >= 0; when |B_0| < 1e-12 the largest component is made positive."""
    col = np.arange(b.shape[1])
    ref = b[0].copy()
    weak = np.abs(ref) < 1e-12
    if np.any(weak):
        big = np.argmax(np.abs(b), axis=0)
        ref = np.where(weak, b[big, col], ref)
    return b * np.where(ref < 0, -1.0, 1.0)


def _unfold(b):
    out = b.copy()
    out[1:] /= math.sqrt(2.0)
    return out


def truncation_shift(params, count):
    """Largest |beta(N) - beta(2N)| over the lowest ``count`` eigenvalues."""
    d, e = build_even_matrix(params)
    doubled = ModelParams(params.lam, 2 * params.truncation_n, params.margin)
    d2, e2 = build_even_matrix(doubled)
    a = tridiag_eigvals(d, e, (0, count - 1))
    b = tridiag_eigvals(d2, e2, (0, count - 1))
    return float(np.max(np.abs(a - b)) / params.lam)


def eigensolve_even(params, *, check_truncation=True, tol=1e-10, regime_tags=True):
    """All even eigenpairs of the truncated matrix.

    Eigenvalues are returned as beta = E / lam with j = 0, 2, 4, ... in
    ascending order; eigenvectors hold the physical amplitudes B_n with unit
    norm over n = -N..N.

    Raises
    ------
    ConvergenceError
        If doubling N moves any bound eigenvalue by more than ``tol``.
    """
    d, e = build_even_matrix(params)
    energies = tridiag_eigvals(d, e)
    vecs = tridiag_eigvecs(d, e, energies)
    basis = _fix_signs(_unfold(vecs))
    betas = energies / params.lam
    nbound = int(np.sum(betas < 1.0))
    if check_truncation and nbound:
        shift = truncation_shift(params, nbound)
        if shift > tol:
            raise ConvergenceError(
                "bound eigenvalues not converged in N", lam=params.lam, N=params.truncation_n, shift=shift
            )
    if regime_tags:
        from .separatrix import classify_regime

        tags = [classify_regime(params.lam, b, j=2 * k) for k, b in enumerate(betas)]
    else:
        tags = [BOUND if b < 1 else FREE for b in betas]
    states = tuple(
        Eigenstate(2 * k, float(b), float(params.lam), tag, "numerical") for k, (b, tag) in enumerate(zip(betas, tags))
    )
    return EigenSolution(params, states, basis)


def eigenvalues_even(params, count=None):
    """Lowest ``count`` even eigenvalues as beta (all when None), no vectors."""
    d, e = build_even_matrix(params)
    sel = None if count is None else (0, min(count, d.size) - 1)
    return tridiag_eigvals(d, e, sel) / params.lam


def bound_state_count(solution):
    """Number of even states with beta < 1."""
    return int(np.sum(solution.betas < 1.0))
