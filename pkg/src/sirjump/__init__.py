"""SIR epidemic dynamics with relapse and compensated jump noise.

The package splits into five layers: ``model`` (parameters, states, vector
field, jump measure), ``analysis`` (equilibria, stability, thresholds,
persistence limits), ``sde`` (fixed-step integrators and seeded streams),
``montecarlo`` (ensembles, classification, sweeps) and ``cli`` (command-line
front end with CSV/TOML interfaces).
"""

from .analysis import (
    EquilibriumReport,
    PersistenceLimits,
    StabilityReport,
    StochasticThresholds,
    classify_dfe_stability,
    equilibria,
    jacobian,
    lyapunov_derivative,
    phi,
    psi,
    psi0,
    thresholds,
)
from .config import ConfigError, ScenarioConfig, SweepSpec, parse_config, serialize_config
from .model import (
    Derivative,
    EpidemicParams,
    JumpMeasure,
    SirState,
    drift,
    jump_delta,
    total_population_closed_form,
)
from .montecarlo import (
    EXTINCTION_FLOOR,
    EnsembleStats,
    SweepRow,
    SweepTable,
    classify,
    lyapunov_estimate,
    run_ensemble,
    sweep,
    time_average,
)
from .sde import (
    SCHEMES,
    IntegratorConfig,
    RandomStream,
    Trajectory,
    simulate,
    step_deterministic,
    step_jump,
)

__version__ = "0.1.0"

__all__ = [
    "Derivative",
    "EpidemicParams",
    "JumpMeasure",
    "SirState",
    "drift",
    "jump_delta",
    "total_population_closed_form",
    "EquilibriumReport",
    "PersistenceLimits",
    "StabilityReport",
    "StochasticThresholds",
    "classify_dfe_stability",
    "equilibria",
    "jacobian",
    "lyapunov_derivative",
    "phi",
    "psi",
    "psi0",
    "thresholds",
    "SCHEMES",
    "IntegratorConfig",
    "RandomStream",
    "Trajectory",
    "simulate",
    "step_deterministic",
    "step_jump",
    "EXTINCTION_FLOOR",
    "EnsembleStats",
    "SweepRow",
    "SweepTable",
    "classify",
    "lyapunov_estimate",
    "run_ensemble",
    "sweep",
    "time_average",
    "ConfigError",
    "ScenarioConfig",
    "SweepSpec",
    "parse_config",
    "serialize_config",
    "__version__",
]
