"""Agentes de exploração autônoma: DisCo e UcbExplore."""

from .common import (
    EventRecord,
    ExplorationResult,
    MdpEnvironment,
    StepBudgetExceeded,
    StopReason,
)
from .disco import (
    DiscoState,
    allocation_gamma,
    allocation_phi,
    collect_samples,
    disco_run,
    restrict_candidates,
    theoretical_allocation,
    infer_known_states,
    plan_from_counts,
    zero_shot_plan,
)
from .ucb import HorizonPlan, UcbConfig, UcbState, evaluate_round, finite_horizon_plan, ucb_run

__all__ = [
    "EventRecord",
    "ExplorationResult",
    "MdpEnvironment",
    "StepBudgetExceeded",
    "StopReason",
    "DiscoState",
    "allocation_gamma",
    "allocation_phi",
    "collect_samples",
    "disco_run",
    "restrict_candidates",
    "theoretical_allocation",
    "infer_known_states",
    "plan_from_counts",
    "zero_shot_plan",
    "HorizonPlan",
    "UcbConfig",
    "UcbState",
    "evaluate_round",
    "finite_horizon_plan",
    "ucb_run",
]
