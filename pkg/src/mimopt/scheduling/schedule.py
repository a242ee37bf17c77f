"""Schedules with exact rational interval endpoints, reconstruction from
brick vectors, and the independent validator."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError, SolverError
from ..rational import Rat, ZERO, is_integral
from .cycles import CycleModel
from .instance import SchedulingInstance
from .models import smith_order

DUE_HARD = {"cmax", "cmin", "lp", "sumwc", "sumwf", "sumwu"}


@dataclass(frozen=True)
class MachineSchedule:
    kind: int
    speed: Rat
    jobs: tuple[tuple[int, Rat, Rat], ...]  # (job type, start, end)

    def load(self) -> Rat:
        return sum((end - start for _, start, end in self.jobs), ZERO)

    def makespan(self) -> Rat:
        return max((end for _, _, end in self.jobs), default=ZERO)


@dataclass(frozen=True)
class Schedule:
    machines: tuple[MachineSchedule, ...]
    late: tuple[tuple[int, int], ...] = ()  # (job type, count), sumwu only


def reconstruct_schedule(model: CycleModel, brick, objective_kind: str,
                         weights=None, dues=None) -> tuple[tuple[int, Rat, Rat], ...]:
    """Left-aligned single-machine schedule from one brick vector.

    Cycles are placed in the canonical order (gap 1, externals entering at 2,
    gap 2, ...).  Makespan-family jobs go as early as possible inside their
    cycle; weighted-sum internals follow the segment's Smith order and the
    external job is pinned around its last interior critical time by the
    left/right split.
    """
    minsum = objective_kind in ("sumwc", "sumwf", "sumwt")
    d = len(model.sizes)
    out: list[tuple[int, Rat, Rat]] = []
    end = ZERO
    one_over_s = Rat(1) / model.speed
    for ci, cycle in enumerate(model.cycles):
        assigned = [(j, brick[model.var_y[(j, ci)]]) for j in range(d)]
        if not any(n for _, n in assigned):
            continue
        if cycle.external and minsum:
            (j,) = [j for j, n in assigned if n]
            p_l = next(
                p for (c2, p), idx in model.var_yl.items() if c2 == ci and brick[idx]
            )
            p_r = next(
                p for (c2, p), idx in model.var_yr.items() if c2 == ci and brick[idx]
            )
            t_b = model.time(cycle.b)
            start = t_b - Rat(p_l)
            finish = t_b + Rat(p_r)
            if start < end:
                raise SolverError("external split overlaps the running schedule")
            out.append((j, start, finish))
            end = finish
            continue
        if minsum and cycle.internal:
            order, _ = smith_order(
                model.sizes, weights, objective_kind, model.time(cycle.a), dues
            )
        else:
            order = tuple(range(d))
        t_left = model.time(cycle.left)
        for j in order:
            n = brick[model.var_y[(j, ci)]]
            for _ in range(int(n)):
                start = end if end > t_left else t_left
                finish = start + model.sizes[j] * one_over_s
                out.append((j, start, finish))
                end = finish
    return tuple(out)


@dataclass(frozen=True)
class ScheduleViolation:
    kind: str
    detail: str


def validate_schedule(
    inst: SchedulingInstance, schedule: Schedule, objective
) -> tuple[Rat | None, list[ScheduleViolation]]:
    """Check a schedule against the instance rules and compute its exact
    objective value from the intervals.

    Due dates are enforced for due-respecting objectives (DUE_HARD); for
    lateness-like objectives they only enter the value.  Returns
    (value, violations); value is None when violations make it meaningless.
    """
    kind_name = objective.kind
    problems: list[ScheduleViolation] = []
    counted = [0] * inst.d
    for mi, mach in enumerate(schedule.machines):
        if mach.kind >= len(inst.kinds):
            problems.append(ScheduleViolation("machine", f"machine {mi}: unknown kind"))
            continue
        jobs = sorted(mach.jobs, key=lambda it: (it[1], it[2]))
        prev_end = None
        for j, start, end in jobs:
            par = inst.jobs[j].per_kind[mach.kind]
            counted[j] += 1
            if par.size is None:
                problems.append(
                    ScheduleViolation("kind", f"machine {mi}: job type {j} cannot run here")
                )
                continue
            if end - start != Rat(par.size) / mach.speed:
                problems.append(
                    ScheduleViolation(
                        "duration",
                        f"machine {mi}: job type {j} runs {end - start}, needs "
                        f"{Rat(par.size) / mach.speed}",
                    )
                )
            if start < par.release:
                problems.append(
                    ScheduleViolation("release", f"machine {mi}: job type {j} starts early")
                )
            if kind_name in DUE_HARD and par.due is not None and end > par.due:
                problems.append(
                    ScheduleViolation("due", f"machine {mi}: job type {j} due violated")
                )
            if prev_end is not None and start < prev_end:
                problems.append(
                    ScheduleViolation("overlap", f"machine {mi}: intervals overlap")
                )
            prev_end = end if prev_end is None or end > prev_end else prev_end
    for j, n in schedule.late:
        if kind_name != "sumwu":
            problems.append(ScheduleViolation("late", "late set outside sumwu"))
        counted[j] += n
    for j, job in enumerate(inst.jobs):
        if counted[j] != job.mult:
            problems.append(
                ScheduleViolation(
                    "multiplicity", f"job type {j}: scheduled {counted[j]} of {job.mult}"
                )
            )
    if problems:
        return None, problems
    return _objective_value(inst, schedule, objective), problems


def _objective_value(inst: SchedulingInstance, schedule: Schedule, objective) -> Rat | None:
    kind = objective.kind
    if kind == "cmax":
        return max((m.makespan() for m in schedule.machines), default=ZERO)
    if kind == "cmin":
        return min((m.load() for m in schedule.machines), default=ZERO)
    if kind == "lp":
        return sum((m.load() ** objective.power for m in schedule.machines), ZERO)
    if kind == "sumwu":
        return sum((Rat(inst.jobs[j].weight * n) for j, n in schedule.late), ZERO)
    total = ZERO
    seen_finite = False
    for mach in schedule.machines:
        for j, start, end in mach.jobs:
            par = inst.jobs[j].per_kind[mach.kind]
            w = Rat(inst.jobs[j].weight)
            if kind == "sumwc":
                total += w * end
            elif kind == "sumwf":
                total += w * (end - par.release)
            elif kind == "sumwt":
                if par.due is not None and end > par.due:
                    total += w * (end - par.due)
            elif kind == "fmax":
                val = end - par.release
                total = val if not seen_finite or val > total else total
                seen_finite = True
            elif kind == "lmax":
                if par.due is not None:
                    val = end - par.due
                    total = val if not seen_finite or val > total else total
                    seen_finite = True
            else:
                raise InputError(f"unknown objective {kind!r}")
    if kind in ("fmax", "lmax") and not seen_finite:
        return None
    return total


def starts_are_regular(schedule: Schedule, model_times=None) -> bool:
    """Unit-speed starts must be integers; with speed s every start must be a
    critical-time anchor plus an integer number of 1/s steps."""
    for mach in schedule.machines:
        for _, start, _ in mach.jobs:
            if mach.speed == 1:
                if not is_integral(start):
                    return False
            else:
                anchors = model_times if model_times is not None else [ZERO]
                ok = any(
                    start >= a and is_integral(Rat(start - a) * mach.speed)
                    for a in anchors
                )
                if not ok:
                    return False
    return True
