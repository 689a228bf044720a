"""Rate simulator for amplifier-assisted continuous-variable repeater chains.

Covariance matrices are kept in two-mode standard form (a, b, c) in
shot-noise units. The pipeline is: build an effective single-link state
(noiseless-amplifier preparation over a thermal-loss channel), age it in
imperfect memories, collapse a 2^n-link chain through Bell relays, then
score the surviving state with coherent-information rate bounds and
compare against repeaterless benchmarks.
"""
from .errors import (
    ConfigError,
    DomainError,
    InvalidEquivalentError,
    MeasurementDegeneracyError,
    PhysicalityError,
    SingularityError,
)
from .gaussian import (
    GeneralCM4,
    SymplecticPair,
    TwoModeCM,
    coherent_information,
    entropy_h,
    reverse_coherent_information,
    symplectic_eigenvalues,
    tmsv,
)
from .links import (
    EquivalentParams,
    LinkSpec,
    basic_link_cm,
    nla_equivalent,
    transmittance_from_length,
)
from .memory import (
    MemoryParams,
    TimingParams,
    decohere,
    heralding_time,
    nla_success_probability,
)
from .chain import ChainSpec, bell_relay_general, chain_cm, relay_links, swap_once
from .rates import (
    RateRecord,
    achievable_rate,
    plob_lossy,
    repeater_capacity,
)
from .sweep import OptimumPoint, SweepGrid, evaluate_point, optimize_point, run_sweep
from .montecarlo import McConfig, mc_rate, simulate_heralding
from .config import ScenarioConfig, load_config

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "ConfigError",
    "DomainError",
    "EquivalentParams",
    "GeneralCM4",
    "InvalidEquivalentError",
    "LinkSpec",
    "McConfig",
    "MeasurementDegeneracyError",
    "MemoryParams",
    "OptimumPoint",
    "PhysicalityError",
    "RateRecord",
    "ScenarioConfig",
    "SingularityError",
    "SweepGrid",
    "SymplecticPair",
    "TimingParams",
    "TwoModeCM",
    "achievable_rate",
    "basic_link_cm",
    "bell_relay_general",
    "chain_cm",
    "coherent_information",
    "decohere",
    "entropy_h",
    "evaluate_point",
    "heralding_time",
    "load_config",
    "mc_rate",
    "nla_equivalent",
    "nla_success_probability",
    "optimize_point",
    "plob_lossy",
    "relay_links",
    "repeater_capacity",
    "reverse_coherent_information",
    "run_sweep",
    "simulate_heralding",
    "swap_once",
    "symplectic_eigenvalues",
    "tmsv",
    "transmittance_from_length",
    "__version__",
]
