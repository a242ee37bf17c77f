"""High-multiplicity scheduling front-end: cycle models over MIMO."""

from .cycles import (
    Cycle,
    CycleModel,
    chi,
    critical_times,
    external_cycle,
    incompatible,
    internal_cycle,
    potential_cycles,
)
from .instance import (
    INF,
    JobType,
    KindParams,
    MachineKind,
    ObjectiveSpec,
    SchedulingInstance,
    SpeedGroup,
    make_instance,
    parse_objective,
    preprocess,
)
from .models import (
    EmittedBlock,
    emit_cmax_block,
    emit_minsum_polytope,
    evaluate_block_objective,
    scale_objective_to_integral,
    smith_order,
)
from .oracle import brute_force_schedule
from .schedule import (
    MachineSchedule,
    Schedule,
    ScheduleViolation,
    reconstruct_schedule,
    starts_are_regular,
    validate_schedule,
)
from .solvers import (
    SchedulingResult,
    solve_cmax,
    solve_cmin,
    solve_lp_norm,
    solve_max_objective,
    solve_minsum,
    solve_objective,
    solve_throughput,
)

__all__ = [
    "Cycle",
    "CycleModel",
    "EmittedBlock",
    "INF",
    "JobType",
    "KindParams",
    "MachineKind",
    "MachineSchedule",
    "ObjectiveSpec",
    "Schedule",
    "ScheduleViolation",
    "SchedulingInstance",
    "SchedulingResult",
    "SpeedGroup",
    "brute_force_schedule",
    "chi",
    "critical_times",
    "emit_cmax_block",
    "emit_minsum_polytope",
    "evaluate_block_objective",
    "external_cycle",
    "incompatible",
    "internal_cycle",
    "make_instance",
    "parse_objective",
    "potential_cycles",
    "preprocess",
    "reconstruct_schedule",
    "scale_objective_to_integral",
    "smith_order",
    "solve_cmax",
    "solve_cmin",
    "solve_lp_norm",
    "solve_max_objective",
    "solve_minsum",
    "solve_objective",
    "solve_throughput",
    "starts_are_regular",
    "validate_schedule",
]
