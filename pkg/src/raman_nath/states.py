"""Containers passed between the solvers.

All of them are frozen; arrays inside are marked read-only on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

BOUND = "bound-well"
SEPARATRIX = "near-separatrix-underdense"
FREE = "free-overdense"
REGIMES = (BOUND, SEPARATRIX, FREE)


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ModelParams:
    """Problem scale: semiclassical parameter, matrix half-width, padding factor."""

    lam: float
    truncation_n: int
    margin: float = 1.3

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"lambda must be positive and finite, got {self.lam}")
        if self.margin < 1:
            raise ValueError(f"margin must be >= 1, got {self.margin}")
        if self.truncation_n < math.ceil(self.margin * math.sqrt(2.0 * self.lam)):
            raise ValueError("truncation_n below ceil(margin*sqrt(2*lambda))")

    @classmethod
    def from_lambda(cls, lam, margin=1.3):
        from .rn_oracle import choose_truncation

        return cls(float(lam), choose_truncation(lam, margin), float(margin))

    @property
    def beams(self):
        return np.arange(self.truncation_n + 1)

    @property
    def y(self):
        return self.beams / math.sqrt(self.lam)


@dataclass(frozen=True)
class Eigenstate:
    """One even eigenstate: index j (0, 2, 4, ...), eigenvalue beta = E / lambda."""

    j: int
    beta: float
    lam: float
    regime: str
    method: str

    @property
    def energy(self):
        return self.lam * self.beta


@dataclass(frozen=True)
class BlochWave:
    """Amplitudes B_n on n = 0..N for an even state.

    ``amplitudes`` holds NaN where ``valid`` is False (points a construction
    refuses to evaluate).  The negative-n half is implied by parity.
    """

    n: np.ndarray
    amplitudes: np.ndarray
    valid: np.ndarray
    lam: float
    beta: float
    j: int | None = None
    method: str = ""
    normalized: bool = False
    extras: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "n", _frozen(self.n, int))
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))
        object.__setattr__(self, "valid", _frozen(self.valid, bool))

    @property
    def y(self):
        return self.n / math.sqrt(self.lam)

    @property
    def parity(self):
        return "even"

    def discrete_norm(self):
        """Sum of B_n^2 over n = -N..N, valid points only."""
        b = np.where(self.valid, self.amplitudes, 0.0)
        w = np.where(self.n == 0, 1.0, 2.0)
        return float(np.sum(w * b * b))

    def renormalized(self):
        s = math.sqrt(self.discrete_norm())
        return BlochWave(
            self.n, self.amplitudes / s, self.valid, self.lam, self.beta, self.j, self.method, True, dict(self.extras)
        )

    def full_range(self):
        """(n, B_n) on -N..N."""
        n = np.concatenate([-self.n[:0:-1], self.n])
        b = np.concatenate([self.amplitudes[:0:-1], self.amplitudes])
        return n, b

    def padded(self, size):
        """Amplitudes on n = 0..size-1, zero beyond the stored range, NaN kept."""
        out = np.zeros(size)
        k = min(size, self.amplitudes.size)
        out[:k] = self.amplitudes[:k]
        return out


@dataclass(frozen=True)
class EigenSolution:
    """All even eigenpairs of one truncated matrix, ascending in beta.

    ``basis[:, k]`` holds physical amplitudes B_n (n = 0..N) of state k with
    unit full-range norm.
    """

    params: ModelParams
    states: tuple
    basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basis", _frozen(self.basis))

    @property
    def betas(self):
        return np.array([s.beta for s in self.states])

    def index_of(self, j):
        if j % 2 or j < 0 or j // 2 >= len(self.states):
            raise IndexError(f"no even state j={j}; valid j are 0, 2, ..., {2 * (len(self.states) - 1)}")
        return j // 2

    def state(self, j):
        return self.states[self.index_of(j)]

    def wave(self, j):
        k = self.index_of(j)
        s = self.states[k]
        n = self.params.beams
        return BlochWave(n, self.basis[:, k], np.ones(n.size, bool), s.lam, s.beta, j, "numerical", True)
