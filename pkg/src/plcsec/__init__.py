"""Secrecy metrics for pinhole-based power-line networks.

The package computes the average secrecy capacity and the probability of
intercept of a network where one source talks to the best of N candidate
destinations through a shared pinhole node, under log-normal link gains and
Bernoulli-Gaussian impulsive noise -- by exact quadrature, by closed-form
asymptotics and by Monte Carlo simulation, so the three routes can
cross-validate each other.
"""

from .channel import (
    LinkParams,
    PinholeTopology,
    best_destination_cdf,
    best_destination_pdf,
    effective_links,
    link_params_from_db,
    lognormal_cdf,
    lognormal_mean,
    lognormal_pdf,
    sample_gain,
)
from .config import dump_config, load_config, loads_config
from .errors import ConfigError, DomainError, EvaluationError, PlcsecError
from .metrics import (
    AsymptoticConstants,
    SecrecyResult,
    SystemConfig,
    asc_asymptotic,
    asc_asymptotic_large_n,
    asc_quadrature,
    asymptotic_constants,
    instantaneous_secrecy_capacity,
    poi_closed_form,
    poi_quadrature,
)
from .montecarlo import McConfig, mc_asc, mc_poi
from .noise import (
    NoiseEvent,
    NoiseParams,
    alpha_factors,
    alpha_factors_tilde,
    noise_events,
    sample_noise_state,
)
from .presets import available_presets, get_preset
from .special_math import (
    DEFAULT_Q_APPROX,
    QApproxParams,
    QuadratureRule,
    expect_standard_normal,
    gauss_hermite_rule,
    gaussian_segment_integrals,
    q_approx,
    q_function,
)
from .sweep import (
    ScenarioParams,
    SweepError,
    SweepRow,
    SweepSpec,
    rows_to_csv,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticConstants",
    "ConfigError",
    "DEFAULT_Q_APPROX",
    "DomainError",
    "EvaluationError",
    "LinkParams",
    "McConfig",
    "NoiseEvent",
    "NoiseParams",
    "PinholeTopology",
    "PlcsecError",
    "QApproxParams",
    "QuadratureRule",
    "ScenarioParams",
    "SecrecyResult",
    "SweepError",
    "SweepRow",
    "SweepSpec",
    "SystemConfig",
    "alpha_factors",
    "alpha_factors_tilde",
    "asc_asymptotic",
    "asc_asymptotic_large_n",
    "asc_quadrature",
    "asymptotic_constants",
    "available_presets",
    "best_destination_cdf",
    "best_destination_pdf",
    "dump_config",
    "effective_links",
    "expect_standard_normal",
    "gauss_hermite_rule",
    "gaussian_segment_integrals",
    "get_preset",
    "instantaneous_secrecy_capacity",
    "link_params_from_db",
    "load_config",
    "loads_config",
    "lognormal_cdf",
    "lognormal_mean",
    "lognormal_pdf",
    "mc_asc",
    "mc_poi",
    "noise_events",
    "poi_closed_form",
    "poi_quadrature",
    "q_approx",
    "q_function",
    "rows_to_csv",
    "run_sweep",
    "sample_gain",
    "sample_noise_state",
    "__version__",
]
