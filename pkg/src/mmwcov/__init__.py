"""Coverage probability and average rate of mmWave cellular networks.

Core model: base stations form a homogeneous Poisson point process; each
link is LOS, NLOS or unreachable (outage) with distance-dependent
probabilities; the serving station is the one with the smallest path-loss.
The package evaluates the resulting coverage/rate closed forms by
quadrature and cross-checks them with a full Monte Carlo simulator that
also includes other-cell interference.
"""

__version__ = "0.1.0"

from .params import (
    AntennaPattern,
    BlockageParams,
    ParameterError,
    PathLossParams,
    Scenario,
    ShadowingParams,
    SystemParams,
    kappa_from_alpha,
    noise_power_dbm,
)
from .presets import PRESET_NAMES, load_preset
from .scenario_io import load_scenario_file, save_scenario_file, scenario_from_mapping
from .propagation import (
    GainDistribution,
    LinkState,
    LinkStateProbs,
    intended_link_gain,
    interferer_gain_distribution,
    link_state_probs,
    path_loss,
    sample_shadowing,
    shadowing_natural_params,
)
from .intensity import IntensityMeasure, OutageModelError, oracle_intensity_quadrature
from .coverage import CoverageResult, NoiseLimitedModel, QuadratureError, rate_from_coverage
from .montecarlo import (
    EmpiricalEstimate,
    NetworkRealization,
    estimate_coverage,
    estimate_rate,
    sample_realization,
    simulate_samples,
    sinr,
    truncation_radius,
)
from .validation import validate_scenario

__all__ = [
    "AntennaPattern",
    "BlockageParams",
    "CoverageResult",
    "EmpiricalEstimate",
    "GainDistribution",
    "IntensityMeasure",
    "LinkState",
    "LinkStateProbs",
    "NetworkRealization",
    "NoiseLimitedModel",
    "OutageModelError",
    "ParameterError",
    "PathLossParams",
    "PRESET_NAMES",
    "QuadratureError",
    "Scenario",
    "ShadowingParams",
    "SystemParams",
    "estimate_coverage",
    "estimate_rate",
    "intended_link_gain",
    "interferer_gain_distribution",
    "kappa_from_alpha",
    "link_state_probs",
    "load_preset",
    "load_scenario_file",
    "noise_power_dbm",
    "oracle_intensity_quadrature",
    "path_loss",
    "rate_from_coverage",
    "sample_realization",
    "sample_shadowing",
    "save_scenario_file",
    "scenario_from_mapping",
    "shadowing_natural_params",
    "simulate_samples",
    "sinr",
    "truncation_radius",
    "validate_scenario",
]
