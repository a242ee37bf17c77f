"""Objective drivers: binary searches and single-shot reductions to MIMO.

Every driver builds one block per machine type (kind x speed), assembles a
MIMO instance with the job multiplicities as the target, solves it exactly,
and reconstructs a schedule from the returned brick vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError, SolverError
from ..mimo import MimoSolution, make_mimo, solve_mimo
from ..nfold import SolveStatus
from ..rational import Rat, lcm_int, rat_ceil
from ..stats import SolveStats
from .instance import ObjectiveSpec, SchedulingInstance, preprocess
from .models import (
    emit_cmax_block,
    emit_minsum_polytope,
    scale_objective_to_integral,
)
from .schedule import MachineSchedule, Schedule, reconstruct_schedule, validate_schedule


@dataclass(frozen=True)
class SchedulingResult:
    status: SolveStatus
    value: Rat | None
    schedule: Schedule | None
    stats: SolveStats

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


def _kind_arrays(pre: SchedulingInstance, ki: int):
    sizes = [job.per_kind[ki].size for job in pre.jobs]
    releases = [job.per_kind[ki].release for job in pre.jobs]
    dues = [job.per_kind[ki].due for job in pre.jobs]
    return sizes, releases, dues


def _machine_blocks(pre, dues_of_kind, pmax, cmin_lower=None, load_power=None):
    blocks = []
    for ki, speed, mult in pre.machine_types():
        if mult == 0:
            continue
        sizes, releases, _ = _kind_arrays(pre, ki)
        eb = emit_cmax_block(
            sizes,
            releases,
            dues_of_kind(ki),
            [job.mult for job in pre.jobs],
            speed,
            pmax,
            kind_index=ki,
            cmin_lower=cmin_lower,
            load_power=load_power,
        )
        blocks.append(eb.with_multiplicity(mult))
    return blocks


def _solve_blocks(pre, blocks, stats, strategy="auto"):
    blocks, factor = scale_objective_to_integral(blocks)
    inst = make_mimo(
        pre.d, [eb.block for eb in blocks], [job.mult for job in pre.jobs]
    )
    sol = solve_mimo(inst, strategy=strategy, stats=stats)
    return sol, blocks, factor


def _build_schedule(pre, blocks, sol: MimoSolution, objective: ObjectiveSpec) -> Schedule:
    machines = []
    late = []
    weights = [job.weight for job in pre.jobs]
    for ti, vec, count in sol.bricks:
        if ti >= len(blocks):  # the penalty type of sumwu
            late.extend((j, int(vec[j])) for j in range(pre.d) if vec[j])
            continue
        eb = blocks[ti]
        _, _, dues = _kind_arrays(pre, eb.model.kind)
        jobs = reconstruct_schedule(eb.model, vec, objective.kind, weights, dues)
        for _ in range(count):
            machines.append(MachineSchedule(eb.model.kind, eb.model.speed, jobs))
    return Schedule(tuple(machines), tuple(sorted(late)))


def _checked(pre, blocks, sol, objective, stats, expect=None) -> SchedulingResult:
    schedule = _build_schedule(pre, blocks, sol, objective)
    value, problems = validate_schedule(pre, schedule, objective)
    if problems:
        raise SolverError(
            "reconstructed schedule is invalid: "
            + "; ".join(v.detail for v in problems)
        )
    if expect is not None and value != expect:
        raise SolverError(
            f"schedule value {value} disagrees with search value {expect}"
        )
    return SchedulingResult(SolveStatus.OPTIMAL, value, schedule, stats)


def _empty_result(pre, objective, stats) -> SchedulingResult:
    machines = tuple(
        MachineSchedule(ki, speed, ())
        for ki, speed, mult in pre.machine_types()
        for _ in range(mult)
    )
    schedule = Schedule(machines)
    value, _ = validate_schedule(pre, schedule, objective)
    return SchedulingResult(SolveStatus.OPTIMAL, value, schedule, stats)


def _speed_grid(pre) -> int:
    return lcm_int([g.num for k in pre.kinds for g in k.speeds if g.mult] or [1])


def _bisect_min(lo: int, hi: int, feasible) -> int | None:
    """Smallest integer in [lo, hi] with feasible(v), assuming monotonicity."""
    if lo > hi or not feasible(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _bisect_max(lo: int, hi: int, feasible) -> int | None:
    """Largest integer in [lo, hi] with feasible(v), assuming monotonicity."""
    if lo > hi or not feasible(lo):
        return None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def solve_cmax(inst: SchedulingInstance, stats: SolveStats | None = None) -> SchedulingResult:
    """Minimal makespan by binary search over trimmed-due feasibility probes."""
    objective = ObjectiveSpec("cmax")
    stats = stats if stats is not None else SolveStats()
    inst.validate()
    pre = preprocess(inst)
    if pre.total_jobs == 0:
        return _empty_result(pre, objective, stats)
    if pre.total_machines == 0:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    pmax = pre.max_finite_size()
    horizon = pre.horizon()
    cache: dict = {}

    def probe(cbar) -> tuple | None:
        if cbar in cache:
            return cache[cbar]
        stats.probes += 1

        def dues_of_kind(ki):
            _, _, dues = _kind_arrays(pre, ki)
            return [cbar if d is None else min(Rat(d), Rat(cbar)) for d in dues]

        blocks = _machine_blocks(pre, dues_of_kind, pmax)
        sol, blocks, _ = _solve_blocks(pre, blocks, stats)
        result = (sol, blocks) if sol.optimal else None
        cache[cbar] = result
        return result

    best = _bisect_min(1, horizon, lambda v: probe(v) is not None)
    if best is None:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    value = Rat(best)
    grid = _speed_grid(pre)
    if grid > 1:
        for i in range(1, grid):
            candidate = Rat(best - 1) + Rat(i, grid)
            if probe(candidate) is not None:
                value = candidate
                break
    sol, blocks = probe(value)
    return _checked(pre, blocks, sol, objective, stats, expect=value)


def solve_max_objective(
    inst: SchedulingInstance, objective: ObjectiveSpec, stats: SolveStats | None = None
) -> SchedulingResult:
    """Maximum lateness / flow time by binary search over due-date shifts."""
    if objective.kind not in ("lmax", "fmax"):
        raise InputError("objective must be lmax or fmax")
    stats = stats if stats is not None else SolveStats()
    inst.validate()
    pre = preprocess(inst)
    if pre.total_jobs == 0:
        return _empty_result(pre, objective, stats)
    if pre.total_machines == 0:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    if objective.kind == "lmax":
        dues = [p.due for job in pre.jobs if job.mult for p in job.per_kind]
        if any(d is None for d in dues):
            raise InputError("lmax needs finite due dates everywhere")
        lo = -max((int(d) for d in dues), default=0)
    else:
        lo = 0
    pmax = pre.max_finite_size()
    horizon = pre.horizon()
    cache: dict = {}

    def probe(phi) -> tuple | None:
        if phi in cache:
            return cache[phi]
        stats.probes += 1

        def dues_of_kind(ki):
            _, releases, dues = _kind_arrays(pre, ki)
            if objective.kind == "lmax":
                return [Rat(d) + phi for d in dues]
            return [Rat(r) + phi for r in releases]

        blocks = _machine_blocks(pre, dues_of_kind, pmax)
        sol, blocks, _ = _solve_blocks(pre, blocks, stats)
        result = (sol, blocks) if sol.optimal else None
        cache[phi] = result
        return result

    best = _bisect_min(lo, horizon + max(0, -lo), lambda v: probe(Rat(v)) is not None)
    if best is None:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    value = Rat(best)
    grid = _speed_grid(pre)
    if grid > 1:
        for i in range(1, grid):
            candidate = Rat(best - 1) + Rat(i, grid)
            if probe(candidate) is not None:
                value = candidate
                break
    sol, blocks = probe(value)
    return _checked(pre, blocks, sol, objective, stats, expect=value)


def solve_cmin(inst: SchedulingInstance, stats: SolveStats | None = None) -> SchedulingResult:
    """Maximize the minimum machine load (per-block load lower-bound rows)."""
    objective = ObjectiveSpec("cmin")
    stats = stats if stats is not None else SolveStats()
    inst.validate()
    pre = preprocess(inst)
    if pre.total_machines == 0:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    pmax = pre.max_finite_size()
    horizon = pre.horizon()
    cache: dict = {}

    def dues_of_kind(ki):
        _, _, dues = _kind_arrays(pre, ki)
        return [horizon if d is None else min(d, horizon) for d in dues]

    def probe(cbar) -> tuple | None:
        if cbar in cache:
            return cache[cbar]
        stats.probes += 1
        blocks = _machine_blocks(pre, dues_of_kind, pmax, cmin_lower=cbar)
        sol, blocks, _ = _solve_blocks(pre, blocks, stats)
        result = (sol, blocks) if sol.optimal else None
        cache[cbar] = result
        return result

    work = sum(job.mult * max((p.size or 1) for p in job.per_kind) for job in pre.jobs)
    hi = rat_ceil(Rat(work) / pre.min_speed())
    best = _bisect_max(0, hi, lambda v: probe(v) is not None)
    if best is None:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    value = Rat(best)
    grid = _speed_grid(pre)
    if grid > 1:
        i = 1
        while True:
            candidate = Rat(best) + Rat(i, grid)
            if probe(candidate) is None:
                break
            value = candidate
            i += 1
    sol, blocks = probe(value)
    return _checked(pre, blocks, sol, objective, stats, expect=value)


def solve_throughput(inst: SchedulingInstance, stats: SolveStats | None = None) -> SchedulingResult:
    """Minimum weighted late penalty: one auxiliary penalty machine collects
    every late job at unit size."""
    objective = ObjectiveSpec("sumwu")
    stats = stats if stats is not None else SolveStats()
    inst.validate()
    pre = preprocess(inst)
    horizon = pre.horizon()
    pmax = pre.max_finite_size()
    n_total = pre.total_jobs
    weights = [job.weight for job in pre.jobs]

    def dues_of_kind(ki):
        _, _, dues = _kind_arrays(pre, ki)
        return [horizon if d is None else min(d, horizon) for d in dues]

    blocks = _machine_blocks(pre, dues_of_kind, pmax)
    penalty = emit_cmax_block(
        [1] * pre.d,
        [0] * pre.d,
        [max(1, n_total)] * pre.d,
        [job.mult for job in pre.jobs],
        Rat(1),
        pmax,
        kind_index=-1,
        linear_weights=weights,
    ).with_multiplicity(1)
    sol, blocks_scaled, factor = _solve_blocks(pre, blocks + [penalty], stats)
    if not sol.optimal:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    value = sol.objective / factor
    result = _checked(pre, blocks_scaled[:-1], sol, objective, stats, expect=value)
    return result


def solve_lp_norm(
    inst: SchedulingInstance, power: int, stats: SolveStats | None = None
) -> SchedulingResult:
    """Minimize the sum of load^power over machines (power >= 2)."""
    if power < 2:
        raise InputError("lp exponent must be an integer >= 2")
    objective = ObjectiveSpec("lp", power)
    stats = stats if stats is not None else SolveStats()
    inst.validate()
    pre = preprocess(inst)
    if pre.total_jobs == 0:
        return _empty_result(pre, objective, stats)
    if pre.total_machines == 0:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    pmax = pre.max_finite_size()
    horizon = pre.horizon()

    def dues_of_kind(ki):
        _, _, dues = _kind_arrays(pre, ki)
        return [horizon if d is None else min(d, horizon) for d in dues]

    blocks = _machine_blocks(pre, dues_of_kind, pmax, load_power=power)
    sol, blocks, factor = _solve_blocks(pre, blocks, stats)
    if not sol.optimal:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    value = sol.objective / factor
    return _checked(pre, blocks, sol, objective, stats, expect=value)


def solve_minsum(
    inst: SchedulingInstance, objective: ObjectiveSpec, stats: SolveStats | None = None
) -> SchedulingResult:
    """Weighted completion/flow/tardiness sums at unit speeds."""
    if objective.kind not in ("sumwc", "sumwf", "sumwt"):
        raise InputError("objective must be sumwc, sumwf, or sumwt")
    stats = stats if stats is not None else SolveStats()
    inst.validate()
    pre = preprocess(inst)
    if any(g.value != 1 for k in pre.kinds for g in k.speeds if g.mult):
        raise InputError(f"{objective.kind} requires unit speeds")
    if pre.total_jobs == 0:
        return _empty_result(pre, objective, stats)
    if pre.total_machines == 0:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    pmax = pre.max_finite_size()
    horizon = pre.horizon()
    weights = [job.weight for job in pre.jobs]
    blocks = []
    for ki, speed, mult in pre.machine_types():
        if mult == 0:
            continue
        sizes, releases, dues = _kind_arrays(pre, ki)
        eb = emit_minsum_polytope(
            sizes,
            releases,
            dues,
            [job.mult for job in pre.jobs],
            weights,
            objective.kind,
            pmax,
            kind_index=ki,
            horizon=horizon,
        )
        blocks.append(eb.with_multiplicity(mult))
    sol, blocks, factor = _solve_blocks(pre, blocks, stats)
    if not sol.optimal:
        return SchedulingResult(SolveStatus.INFEASIBLE, None, None, stats)
    value = sol.objective / factor
    return _checked(pre, blocks, sol, objective, stats, expect=value)


def solve_objective(
    inst: SchedulingInstance, objective: ObjectiveSpec, stats: SolveStats | None = None
) -> SchedulingResult:
    """Dispatch on the objective kind."""
    kind = objective.kind
    if kind == "cmax":
        return solve_cmax(inst, stats)
    if kind in ("lmax", "fmax"):
        return solve_max_objective(inst, objective, stats)
    if kind == "cmin":
        return solve_cmin(inst, stats)
    if kind == "sumwu":
        return solve_throughput(inst, stats)
    if kind == "lp":
        return solve_lp_norm(inst, objective.power, stats)
    if kind in ("sumwc", "sumwf", "sumwt"):
        return solve_minsum(inst, objective, stats)
    raise InputError(f"unknown objective {kind!r}")
