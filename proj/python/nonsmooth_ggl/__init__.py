"""Timestepping schemes for impacting mechanical systems."""

from ._core import (
    BilateralScheme,
    BilateralSliderCrank,
    BouncingBall,
    ConfigError,
    ContractError,
    FitModel,
    MechanicalModel,
    ProxWeighting,
    Scheme,
    SolverConfig,
    State,
    StepOutcome,
    UnilateralSliderCrank,
    bilateral_step,
    decoupled_ggl_step,
    drift_fit,
    impact_residual,
    moreau_step,
    parse_config,
    position_residual,
    predict_active_set,
    preset_names,
    prox,
    reference_step,
    run_config,
    simulate,
    slider_crank_initial_state,
    unified_step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
