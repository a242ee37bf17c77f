"""Independent brute-force oracle for tiny scheduling instances.

Enumerates every split of the job multiplicities across machines (plus a
"late" bin for the throughput objective) and, per machine, every distinct
order of its job multiset with as-early-as-possible starts.  Guarded to at
most 8 jobs and 3 machines.  Completely separate from the cycle models: this
is the ground truth the solvers are tested against.
"""

from __future__ import annotations

from ..errors import CapacityError, InputError
from ..rational import Rat, ZERO
from .instance import SchedulingInstance, preprocess

MAX_JOBS = 8
MAX_MACHINES = 3

_NEG_INF = object()


def _splits(total: int, bins: int):
    if bins == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _splits(total - first, bins - 1):
            yield (first,) + rest


def _distinct_orders(counts):
    """Distinct sequences over job types with the given multiset counts."""
    total = sum(counts)
    if total == 0:
        yield ()
        return
    for j, n in enumerate(counts):
        if n:
            reduced = list(counts)
            reduced[j] -= 1
            for rest in _distinct_orders(tuple(reduced)):
                yield (j,) + rest


class _MachineEval:
    """Per-machine optimal metrics for a fixed job multiset (memoized)."""

    def __init__(self, inst: SchedulingInstance, objective):
        self.inst = inst
        self.objective = objective
        self.kind_name = objective.kind
        self.cache: dict = {}

    def best(self, kind: int, speed: Rat, counts: tuple[int, ...]):
        key = (kind, speed, counts)
        if key in self.cache:
            return self.cache[key]
        value = self._compute(kind, speed, counts)
        self.cache[key] = value
        return value

    def _compute(self, kind: int, speed: Rat, counts):
        inst = self.inst
        params = [job.per_kind[kind] for job in inst.jobs]
        if any(n and params[j].size is None for j, n in enumerate(counts)):
            return None  # forbidden kind
        due_hard = self.kind_name in ("cmax", "cmin", "lp", "sumwc", "sumwf", "sumwu")
        best = None
        for order in _distinct_orders(counts):
            end = ZERO
            feasible = True
            metric = ZERO
            seen = False
            for j in order:
                par = params[j]
                start = max(end, Rat(par.release))
                end = start + Rat(par.size) / speed
                if due_hard and par.due is not None and end > par.due:
                    feasible = False
                    break
                w = Rat(inst.jobs[j].weight)
                if self.kind_name == "cmax":
                    metric = end
                elif self.kind_name == "sumwc":
                    metric += w * end
                elif self.kind_name == "sumwf":
                    metric += w * (end - par.release)
                elif self.kind_name == "sumwt":
                    if par.due is not None and end > par.due:
                        metric += w * (end - par.due)
                elif self.kind_name == "lmax":
                    if par.due is not None:
                        val = end - par.due
                        metric = val if not seen or val > metric else metric
                        seen = True
                elif self.kind_name == "fmax":
                    val = end - par.release
                    metric = val if not seen or val > metric else metric
                    seen = True
            if not feasible:
                continue
            if self.kind_name in ("lmax", "fmax") and not seen:
                metric = _NEG_INF
            if self.kind_name in ("cmin", "lp", "sumwu"):
                metric = sum(
                    (Rat(params[j].size) / speed * n for j, n in enumerate(counts)),
                    ZERO,
                )  # load; any feasible order works
                best = metric
                break
            if best is None or _less(metric, best):
                best = metric
        return best


def _less(a, b):
    if a is _NEG_INF:
        return True
    if b is _NEG_INF:
        return False
    return a < b


def brute_force_schedule(inst: SchedulingInstance, objective) -> Rat | None:
    """Exact optimum by exhaustive search, or None when infeasible.

    Raises CapacityError beyond 8 jobs or 3 machines.  For lmax an instance
    without any finite due date is rejected (the objective is unbounded
    below).
    """
    inst.validate()
    if inst.total_jobs > MAX_JOBS or inst.total_machines > MAX_MACHINES:
        raise CapacityError("oracle guard: at most 8 jobs and 3 machines")
    if inst.total_jobs == 0:
        return ZERO
    pre = preprocess(inst)
    machines = [
        (ki, group.value)
        for ki, kindof in enumerate(pre.kinds)
        for group in kindof.speeds
        for _ in range(group.mult)
    ]
    kind_name = objective.kind
    if kind_name == "lmax" and any(
        p.due is None for job in pre.jobs if job.mult for p in job.per_kind
    ):
        raise InputError("lmax needs finite due dates everywhere")
    bins = len(machines) + (1 if kind_name == "sumwu" else 0)
    if bins == 0:
        if kind_name == "sumwu":
            return sum((Rat(j.weight * j.mult) for j in pre.jobs), ZERO)
        return ZERO if pre.total_jobs == 0 else None
    evaluator = _MachineEval(pre, objective)
    per_type_splits = [list(_splits(job.mult, bins)) for job in pre.jobs]
    best = None

    def combine(assignment) -> Rat | None:
        # assignment[b][j] = count of type j in bin b
        values = []
        for b, (ki, speed) in enumerate(machines):
            counts = tuple(assignment[b])
            v = evaluator.best(ki, speed, counts)
            if v is None:
                return None
            values.append(v)
        if kind_name == "sumwu":
            late = assignment[-1]
            return sum(
                (Rat(pre.jobs[j].weight) * late[j] for j in range(pre.d)), ZERO
            )
        if kind_name == "cmax":
            return max([v for v in values], default=ZERO)
        if kind_name in ("lmax", "fmax"):
            finite = [v for v in values if v is not _NEG_INF]
            return max(finite) if finite else _NEG_INF
        if kind_name == "cmin":
            return min(values, default=ZERO)
        if kind_name == "lp":
            return sum((v**objective.power for v in values), ZERO)
        return sum(values, ZERO)

    def rec(j: int, columns):
        nonlocal best
        if j == pre.d:
            assignment = [
                [columns[jj][b] for jj in range(pre.d)] for b in range(bins)
            ]
            value = combine(assignment)
            if value is None:
                return
            if kind_name == "cmin":
                if best is None or value > best:
                    best = value
            else:
                if best is None or _less(value, best):
                    best = value
            return
        for split in per_type_splits[j]:
            columns.append(split)
            rec(j + 1, columns)
            columns.pop()

    rec(0, [])
    if best is _NEG_INF:
        raise InputError("lmax instance admits arbitrarily small lateness")
    return best
