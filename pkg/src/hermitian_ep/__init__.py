"""Exceptional-point phase transition in two oscillators coupled to finite reservoirs."""

from .model import (
    ConfigError,
    ReservoirSpec,
    SystemConfig,
    build_generator,
    initial_state,
    reservoir_frequencies,
    return_time,
)
from .propagation import (
    PropagationError,
    SpectralPropagator,
    Trajectory,
    diagonalize,
    integrate_rk,
    propagate,
    sample_trajectory,
)
from .ratio import (
    PortraitSpec,
    RatioPoint,
    fixed_points,
    generate_portrait,
    integrate_ratio,
    riccati_rhs,
)
from .reduced import (
    EigenPair2x2,
    ReducedParams,
    decay_rate,
    eigensystem,
    ep_coupling,
    reduced_params,
    solve_reduced,
)
from .transition import (
    EnsembleSpec,
    InsufficientEnsembleError,
    NoTransitionDetected,
    SweepResult,
    detect_transition,
    order_parameter,
    ratio_integral,
    revival_diagnostics,
    sample_initial_states,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ReservoirSpec",
    "SystemConfig",
    "build_generator",
    "initial_state",
    "reservoir_frequencies",
    "return_time",
    "PropagationError",
    "SpectralPropagator",
    "Trajectory",
    "diagonalize",
    "integrate_rk",
    "propagate",
    "sample_trajectory",
    "PortraitSpec",
    "RatioPoint",
    "fixed_points",
    "generate_portrait",
    "integrate_ratio",
    "riccati_rhs",
    "EigenPair2x2",
    "ReducedParams",
    "decay_rate",
    "eigensystem",
    "ep_coupling",
    "reduced_params",
    "solve_reduced",
    "EnsembleSpec",
    "InsufficientEnsembleError",
    "NoTransitionDetected",
    "SweepResult",
    "detect_transition",
    "order_parameter",
    "ratio_integral",
    "revival_diagnostics",
    "sample_initial_states",
    "sweep",
]
