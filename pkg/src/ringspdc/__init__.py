"""Gaussian-state simulation of degenerate down-conversion in a ring of
coupled waveguides, with variance-based entanglement witnesses.

Typical use::

    from ringspdc import ArrayConfig, PumpProfile, covariance_at
    from ringspdc.witness import full_inseparability_check, partition_mode_sets

    config = ArrayConfig(n_modes=8, coupling=0.45, eta_mag=0.015,
                         pump=PumpProfile.uniform())
    cov = covariance_at(config, z=20.0)
    odd, even = partition_mode_sets(config.n_modes)
    report = full_inseparability_check(cov, odd)
"""

from .fourier import (
    EigenvalueSet,
    FourierBasis,
    change_basis,
    dft_matrix,
    eigenvalues,
    quadrature_transform,
    verify_orthonormality,
    zero_mode_indices,
)
from .gaussian import (
    CovarianceMatrix,
    GaussianDiagnostics,
    apply_loss,
    covariance_at,
    covariance_from_csv,
    covariance_r0,
    covariance_rhalf,
    covariance_rquarter,
    covariance_to_csv,
    evolve_covariance,
    purity_and_symplectic_report,
    vacuum_covariance,
)
from .model import (
    ArrayConfig,
    ConfigError,
    Diagnostic,
    PumpProfile,
    build_drift_matrix,
    config_ok,
    regime_classify,
    require_valid,
    symplectic_form,
    validate_config,
)
from .propagate import (
    ModePairBlock,
    Propagator,
    analytic_fourier_blocks_r0,
    analytic_general_r,
    analytic_individual_propagator,
    mode_pair_blocks,
    numerical_propagator,
    pair_combination_rotation,
    propagator_to_individual,
)
from .witness import (
    PairWitness,
    VlfReport,
    angle_scan,
    full_inseparability_check,
    partition_mode_sets,
    vlf_pair,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig",
    "ConfigError",
    "CovarianceMatrix",
    "Diagnostic",
    "EigenvalueSet",
    "FourierBasis",
    "GaussianDiagnostics",
    "ModePairBlock",
    "PairWitness",
    "Propagator",
    "PumpProfile",
    "VlfReport",
    "analytic_fourier_blocks_r0",
    "analytic_general_r",
    "analytic_individual_propagator",
    "angle_scan",
    "apply_loss",
    "build_drift_matrix",
    "change_basis",
    "config_ok",
    "covariance_at",
    "covariance_from_csv",
    "covariance_r0",
    "covariance_rhalf",
    "covariance_rquarter",
    "covariance_to_csv",
    "dft_matrix",
    "eigenvalues",
    "evolve_covariance",
    "full_inseparability_check",
    "mode_pair_blocks",
    "numerical_propagator",
    "pair_combination_rotation",
    "partition_mode_sets",
    "propagator_to_individual",
    "purity_and_symplectic_report",
    "quadrature_transform",
    "regime_classify",
    "require_valid",
    "symplectic_form",
    "vacuum_covariance",
    "validate_config",
    "verify_orthonormality",
    "vlf_pair",
    "zero_mode_indices",
]
