"""Seeded random instance generators for tests and the acceptance suite.

All generators take a ``random.Random`` so corpora are reproducible from a
single seed.  Parameter ranges follow the acceptance criteria; the first job
type always gets the extreme size with a maximal window on kind 0, so the
emitted models exercise the full coefficient range.
"""

from __future__ import annotations

import random

from .mimo import MimoInstance, make_mimo, mimo_row, mimo_type
from .nfold import HugeNfoldInstance, linear_objective, make_brick_type, make_instance as make_nfold
from .scheduling.instance import (
    JobType,
    KindParams,
    MachineKind,
    SchedulingInstance,
    SpeedGroup,
    make_instance as make_sched,
)


def scheduling_cmax_instance(rng: random.Random) -> SchedulingInstance:
    """Makespan corpus: <= 3 machines over <= 2 kinds, speeds from {1, 1/2},
    d <= 3, sizes <= 4, <= 8 jobs, releases/dues in [0, 16]."""
    num_kinds = rng.randint(1, 2)
    d = rng.randint(1, 3)
    p_max = 4
    total_machines = rng.randint(1, 3)
    kinds = []
    remaining = total_machines
    for ki in range(num_kinds):
        if ki == num_kinds - 1:
            take = remaining
        elif ki == 0:
            take = rng.randint(1, remaining)  # kind 0 always has a machine
        else:
            take = rng.randint(0, remaining)
        remaining -= take
        groups = []
        if take:
            speeds = rng.sample([(1, 1), (1, 2)], k=min(take, rng.randint(1, 2)))
            left = take
            for si, (num, den) in enumerate(speeds):
                cnt = left if si == len(speeds) - 1 else rng.randint(0, left)
                left -= cnt
                if cnt:
                    groups.append(SpeedGroup(num, den, cnt))
        kinds.append(MachineKind(tuple(groups)))
    jobs = []
    remaining_jobs = rng.randint(1, 8)
    for j in range(d):
        if j == 0:
            mult = rng.randint(1, remaining_jobs)
        elif j == d - 1:
            mult = remaining_jobs
        else:
            mult = rng.randint(0, remaining_jobs)
        remaining_jobs -= mult
        per_kind = []
        for ki in range(num_kinds):
            if j == 0 and ki == 0:
                size, release, due = p_max, 0, 16  # keep the extreme size usable
            else:
                size = None if rng.random() < 0.15 else rng.randint(1, p_max)
                release = rng.randint(0, 6)
                if size is None or rng.random() < 0.3:
                    due = None
                else:
                    loose = rng.random() < 0.7
                    due = rng.randint(release + (size * 2 if loose else 1), 16)
            per_kind.append(KindParams(size, release, due))
        jobs.append(JobType(mult, rng.randint(1, 4), tuple(per_kind)))
    return make_sched(jobs, kinds)


def scheduling_unit_instance(rng: random.Random, objective_kind: str) -> SchedulingInstance:
    """Unit-speed corpus for the remaining objectives: n <= 6, m <= 2, d <= 3."""
    num_kinds = rng.randint(1, 2)
    d = rng.randint(1, 3)
    total_machines = rng.randint(1, 2)
    kinds = []
    remaining = total_machines
    for ki in range(num_kinds):
        take = remaining if ki == num_kinds - 1 else rng.randint(0, remaining)
        remaining -= take
        speed = (1, 1)
        if objective_kind in ("cmin", "lp", "lmax", "fmax", "sumwu") and rng.random() < 0.4:
            speed = (1, 2)
        kinds.append(MachineKind((SpeedGroup(speed[0], speed[1], take),) if take else ()))
    jobs = []
    remaining_jobs = rng.randint(1, 6)
    for j in range(d):
        mult = remaining_jobs if j == d - 1 else rng.randint(0, remaining_jobs)
        remaining_jobs -= mult
        per_kind = []
        for ki in range(num_kinds):
            size = rng.randint(1, 3)
            release = rng.randint(0, 4)
            horizonish = release + rng.randint(size, size + 8)
            if objective_kind == "lmax":
                due = horizonish
            elif objective_kind in ("sumwc", "sumwf", "cmax", "cmin", "lp"):
                due = None if rng.random() < 0.5 else max(release + size, horizonish)
            else:  # sumwt, sumwu, fmax: soft or measured dues
                due = None if rng.random() < 0.2 else horizonish
            per_kind.append(KindParams(size, release, due))
        jobs.append(JobType(mult, rng.randint(1, 5), tuple(per_kind)))
    return make_sched(jobs, kinds)


def random_nfold_instance(rng: random.Random) -> HugeNfoldInstance:
    """Small huge-N-fold instances with guaranteed-feasible right-hand side."""
    r = rng.randint(1, 2)
    t = rng.randint(r, 3)
    tau = rng.randint(1, 2)
    types = []
    mults = []
    all_configs = []
    for _ in range(tau):
        e1 = [[rng.randint(0, 2) for _ in range(t)] for _ in range(r)]
        s_rows = rng.randint(0, 1)
        e2 = [[rng.randint(-1, 1) for _ in range(t)] for _ in range(s_rows)]
        lower = [0] * t
        upper = [rng.randint(0, 2) for _ in range(t)]
        rhs = []
        for row in e2:
            # pick an achievable rhs from a random box point
            point = [rng.randint(lower[k], upper[k]) for k in range(t)]
            rhs.append(sum(c * v for c, v in zip(row, point)))
        w = [rng.randint(0, 3) for _ in range(t)]
        types.append(make_brick_type(e1, e2, lower, upper, rhs, linear_objective(w)))
        mults.append(rng.randint(1, 3))
    # feasible b0: sum of random configurations
    from .nfold import enumerate_configurations

    b0 = [0] * r
    for bt, mu in zip(types, mults):
        configs = enumerate_configurations(bt, cap=5000)
        if not configs:
            return random_nfold_instance(rng)
        for _ in range(mu):
            cfg = rng.choice(configs)
            for k, v in enumerate(bt.e1_image(cfg)):
                b0[k] += v
    return make_nfold(types, mults, b0)


def random_tiny_mimo(rng: random.Random) -> MimoInstance:
    """d <= 2, tau <= 2, ||mu||_1 <= 4, box radius <= 3, mostly feasible."""
    d = rng.randint(1, 2)
    tau = rng.randint(1, 2)
    types = []
    points_per_type = []
    for _ in range(tau):
        radius = rng.randint(1, 3)
        rows = []
        for j in range(d):
            rows.append(mimo_row([(j, 1)], radius))
            rows.append(mimo_row([(j, -1)], 0))
        if rng.random() < 0.5:
            coeffs = [(j, rng.randint(1, 2)) for j in range(d)]
            rows.append(mimo_row(coeffs, rng.randint(radius, 2 * radius + 2)))
        obj = None
        if rng.random() < 0.5:
            from .mimo import linear_mimo_objective

            obj = linear_mimo_objective([rng.randint(0, 3) for _ in range(d)])
        mult = rng.randint(0, 2)
        types.append(mimo_type(0, rows, obj, mult))
        points_per_type.append(radius)
    total = sum(tb.multiplicity for tb in types)
    if total == 0:
        types[0] = mimo_type(0, types[0].rows, types[0].objective, 1)
    if rng.random() < 0.8:
        # feasible target: sample one integer point per brick
        target = [0] * d
        for tb, radius in zip(types, points_per_type):
            for _ in range(tb.multiplicity):
                for j in range(d):
                    target[j] += rng.randint(0, radius)
    else:
        target = [rng.randint(-2, 10) for _ in range(d)]
    return make_mimo(d, types, target)
