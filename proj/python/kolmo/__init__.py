"""Fourier-Galerkin simulator for Kolmogorov's two-equation turbulence model."""

from ._kolmo import (
    Composition,
    ConstantModel,
    CutoffProfile,
    EnergyOptions,
    EstimateReport,
    InitialBounds,
    KolmoError,
    IntegratorConfig,
    Method,
    ModelParams,
    RandomFieldSpec,
    RunConfig,
    SimState,
    SpectralField,
    StateRate,
    Trajectory,
    VectorField,
    bessel_symbol,
    beta_exponent,
    decode_snapshot,
    encode_snapshot,
    energy_balance,
    existence_time,
    hs_norm,
    integrate,
    load_snapshot,
    parse_config,
    print_config,
    project,
    random_field,
    random_solenoidal,
    rhs,
    save_snapshot,
    triple_norm_sq,
    uniform_bound,
    verify_commutator_estimate,
    verify_composition_estimate,
    verify_interpolation_inequality,
    verify_product_estimate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
