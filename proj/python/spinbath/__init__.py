"""Closed-system relaxation of a central spin coupled to a finite spin bath."""

from ._core import (
    CapacityError,
    ConfigError,
    CouplingKind,
    DetuneScan,
    DomainError,
    DualityMode,
    DualityResult,
    EnsembleResult,
    EnsembleStats,
    Error,
    Histogram,
    InitialStateKind,
    IoError,
    Method,
    ModelConfig,
    PropagationError,
    RingKind,
    RunParams,
    ScanPoint,
    ScenarioResult,
    ScenarioSummary,
    SpectralPoint,
    SweepPoint,
    Trajectory,
    UsageError,
    beta_table,
    binomial,
    config_to_text,
    derive_seed,
    detune_scan,
    duality_run,
    ensemble_histogram,
    enumerate_band,
    expected_inversion,
    gamma_sweep,
    load_config_file,
    parse_config_text,
    run_scenario,
    spectral_beta,
    subspace_dim,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "CouplingKind",
    "DetuneScan",
    "DomainError",
    "DualityMode",
    "DualityResult",
    "EnsembleResult",
    "EnsembleStats",
    "Error",
    "Histogram",
    "InitialStateKind",
    "IoError",
    "Method",
    "ModelConfig",
    "PropagationError",
    "RingKind",
    "RunParams",
    "ScanPoint",
    "ScenarioResult",
    "ScenarioSummary",
    "SpectralPoint",
    "SweepPoint",
    "Trajectory",
    "UsageError",
    "beta_table",
    "binomial",
    "config_to_text",
    "derive_seed",
    "detune_scan",
    "duality_run",
    "ensemble_histogram",
    "enumerate_band",
    "expected_inversion",
    "gamma_sweep",
    "load_config_file",
    "parse_config_text",
    "run_scenario",
    "spectral_beta",
    "subspace_dim",
]
