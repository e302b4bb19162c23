"""Dynamic and stochastic inventory routing with CO-enriched ML policies."""

from ._core import (
    CapabilityError,
    ContractViolation,
    Episode,
    Instance,
    InvalidInput,
    ModelParams,
    SchemaError,
    State,
    TourCostCache,
    TrainConfig,
    anticipative_baseline,
    decide,
    empirical_quantile,
    generate_instance,
    held_karp,
    init_params,
    initial_state,
    load_checkpoint,
    prize_forward,
    relative_gap,
    rollout,
    rollout_callable,
    routing_cost,
    run_experiment,
    sample_episode,
    sample_history,
    save_checkpoint,
    solve_cpctsp,
    solve_deterministic,
    step_cost,
    train,
    transition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
