"""Dissipative Landau-Zener transitions in circuit QED.

A simulator and analysis library for a qubit swept through the avoided
crossings of a qubit-oscillator system, with the oscillator damped by an
Ohmic environment.  The main solver integrates the Bloch-Redfield master
equation in the eigenbasis of the damped-oscillator Liouvillian (efficient
at any temperature); a brute-force Fock-basis solver cross-validates it, and
every closed-form result is available for comparison.
"""

from .analytic import (alpha_effective, b_function, crossing_splitting,
                       jeff_spectral_density, lz_generalized, path_prob_up,
                       pud_finite_t, pud_zero_t_dissipative, standard_lz,
                       sum_ck2, thermal_avg_direct)
from .bath import (DiffusionCoefficients, EigenbasisSpec, diffusion_coefficients,
                   dpp, dsigma, dxp, dxp_matsubara, eigenbasis_spec, ic_is)
from .fock import (FockDensityMatrix, eigenbasis_to_fock, map_to_eigenbasis,
                   redfield_propagate, transition_matrix, unitary_propagate)
from .observables import (ObservableTable, PhasePolynomialGaussian,
                          fock_projector_symbol, left_eigenfunction,
                          observable_table, right_eigenfunction, weyl_weight)
from .params import (DxpPolicy, ParameterError, SystemParams, ValidatedParams,
                     default_n_trunc, default_window, load_config, parse_config,
                     validate)
from .phasespace import (CoefficientState, SolverError, SweepResult,
                         converged_n_trunc, initial_state, integrate, rhs)

__version__ = "0.1.0"

__all__ = [
    "DxpPolicy", "ParameterError", "SystemParams", "ValidatedParams",
    "validate", "parse_config", "load_config", "default_window",
    "default_n_trunc",
    "standard_lz", "lz_generalized", "crossing_splitting", "path_prob_up",
    "thermal_avg_direct", "b_function", "pud_finite_t", "alpha_effective",
    "jeff_spectral_density", "sum_ck2", "pud_zero_t_dissipative",
    "DiffusionCoefficients", "EigenbasisSpec", "diffusion_coefficients",
    "dpp", "dxp", "dxp_matsubara", "dsigma", "ic_is", "eigenbasis_spec",
    "PhasePolynomialGaussian", "right_eigenfunction", "left_eigenfunction",
    "weyl_weight", "fock_projector_symbol", "ObservableTable",
    "observable_table",
    "CoefficientState", "SweepResult", "SolverError", "initial_state", "rhs",
    "integrate", "converged_n_trunc",
    "FockDensityMatrix", "unitary_propagate", "transition_matrix",
    "redfield_propagate", "map_to_eigenbasis", "eigenbasis_to_fock",
    "__version__",
]
