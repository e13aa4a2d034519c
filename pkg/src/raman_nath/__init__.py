"""Semiclassical Mathieu eigenvalues, Bloch waves and Raman-Nath diffraction."""

from .diffraction import (
    FarfieldPattern,
    classical_depth,
    equation_depth,
    integrate_rn,
    phase_grating,
    propagate_solution,
    propagate_spectral,
    semiclassical_basis,
    superposition_coefficients,
)
from .errors import ConvergenceError, DomainError, NoRootError, RegimeError
from .rn_oracle import bound_state_count, build_even_matrix, choose_truncation, eigensolve_even
from .separatrix import (
    auto_eigenvector,
    eigenvalue_near_separatrix_underdense,
    eigenvalue_overdense,
    free_eigenvector,
    modified_eigenvalue,
    separatrix_eigenvector,
)
from .states import BlochWave, EigenSolution, Eigenstate, ModelParams
from .uniform_bound import t_of_beta, uniform_eigenvector
from .wkb_core import bohr_sommerfeld_eigenvalue, j_max, normalization_constant, wkb_eigenvector

__version__ = "0.1.0"
