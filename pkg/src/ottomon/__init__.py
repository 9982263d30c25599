"""Monitored two-level quantum heat-engine simulator.

Computes joint and marginal work/heat statistics of a four-stroke two-level
engine under two readout styles (per-stroke projective pointers and
end-of-run accumulated pointers), their efficiency, reliability and power
metrics, and the asymptotic per-cycle behavior of the monitored dynamics.
"""
from .asymptotics import (
    CycleSuperoperator,
    DegenerateFixedPointError,
    SpectrumReport,
    asymptotic_heat_per_cycle,
    asymptotic_power,
    asymptotic_work_per_cycle,
    build_cycle_superoperator,
    derive_timed_config,
    fit_geometric_ratio,
    initial_state,
    invariant_state,
    spectrum,
    theta_from_thermal_duration,
    thermal_duration_from_theta,
)
from .config import (
    ConfigError,
    KEY_SPECS,
    default_values,
    load_engine_config,
    parse_config_text,
    serialize_values,
    to_engine_config,
)
from .engine import (
    DirectStroke,
    EngineConfig,
    EngineModel,
    LandauZenerStroke,
    LindbladThermo,
    PerfectThermo,
    SCHEMES,
    build_model,
    joint_covariance,
    heat_variance,
    work_variance,
)
from .lattice import (
    joint_via_lattice,
    marginal_via_lattice,
    work_per_cycle_series,
)
from .mixtures import GaussianMixture1D, GaussianMixture2D
from .moments import (
    MomentSet,
    analytic_moments_lindblad,
    analytic_moments_perfect,
    efficiency,
    power_output,
    reliability,
)
from .oracle import (
    enumerate_branches,
    joint_pdf_rc,
    joint_pdf_rm,
    marginal_rc_heat,
    marginal_rc_work,
    marginal_rm_heat,
    marginal_rm_work,
    mixture_moments,
)
from .qubit import (
    StrokeHamiltonian,
    WorkStrokeParams,
    build_forward_unitary,
    build_reverse_unitary,
    gibbs_population,
    landau_zener_params,
)
from .thermal import (
    BathSpec,
    LindbladMap,
    PerfectMap,
    ThermalState,
    generalized_gibbs,
)
from .validation import CheckResult, ValidationReport, run_validation

__version__ = "0.1.0"

__all__ = [
    "BathSpec",
    "CheckResult",
    "ConfigError",
    "CycleSuperoperator",
    "DegenerateFixedPointError",
    "DirectStroke",
    "EngineConfig",
    "EngineModel",
    "GaussianMixture1D",
    "GaussianMixture2D",
    "KEY_SPECS",
    "LandauZenerStroke",
    "LindbladMap",
    "LindbladThermo",
    "MomentSet",
    "PerfectMap",
    "PerfectThermo",
    "SCHEMES",
    "SpectrumReport",
    "StrokeHamiltonian",
    "ThermalState",
    "ValidationReport",
    "WorkStrokeParams",
    "analytic_moments_lindblad",
    "analytic_moments_perfect",
    "asymptotic_heat_per_cycle",
    "asymptotic_power",
    "asymptotic_work_per_cycle",
    "build_cycle_superoperator",
    "build_forward_unitary",
    "build_model",
    "build_reverse_unitary",
    "default_values",
    "derive_timed_config",
    "efficiency",
    "enumerate_branches",
    "fit_geometric_ratio",
    "generalized_gibbs",
    "gibbs_population",
    "heat_variance",
    "initial_state",
    "invariant_state",
    "joint_covariance",
    "joint_pdf_rc",
    "joint_pdf_rm",
    "joint_via_lattice",
    "landau_zener_params",
    "load_engine_config",
    "marginal_rc_heat",
    "marginal_rc_work",
    "marginal_rm_heat",
    "marginal_rm_work",
    "marginal_via_lattice",
    "mixture_moments",
    "parse_config_text",
    "power_output",
    "reliability",
    "run_validation",
    "serialize_values",
    "spectrum",
    "theta_from_thermal_duration",
    "thermal_duration_from_theta",
    "to_engine_config",
    "work_per_cycle_series",
    "work_variance",
]
