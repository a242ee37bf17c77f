"""High-multiplicity scheduling instances.

Jobs come in d types (multiplicity, weight, and per machine kind a size,
release, and due date; size/due may be infinite).  Machines come in kinds,
each kind carrying a list of speeds with multiplicities; a (kind, speed) pair
is one machine type.  Sizes are integers, speeds rationals in (0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from ..rational import Rat, rat_ceil

INF = None  # infinite size / due date


@dataclass(frozen=True)
class KindParams:
    size: int | None
    release: int
    due: int | None


@dataclass(frozen=True)
class JobType:
    mult: int
    weight: int
    per_kind: tuple[KindParams, ...]


@dataclass(frozen=True)
class SpeedGroup:
    num: int
    den: int
    mult: int

    @property
    def value(self) -> Rat:
        return Rat(self.num, self.den)


@dataclass(frozen=True)
class MachineKind:
    speeds: tuple[SpeedGroup, ...]


@dataclass(frozen=True)
class SchedulingInstance:
    jobs: tuple[JobType, ...]
    kinds: tuple[MachineKind, ...]

    @property
    def d(self) -> int:
        return len(self.jobs)

    @property
    def total_jobs(self) -> int:
        return sum(j.mult for j in self.jobs)

    @property
    def total_machines(self) -> int:
        return sum(s.mult for k in self.kinds for s in k.speeds)

    def machine_types(self) -> list[tuple[int, Rat, int]]:
        """(kind index, speed, multiplicity) per machine type, input order."""
        return [
            (ki, group.value, group.mult)
            for ki, kind in enumerate(self.kinds)
            for group in kind.speeds
        ]

    def validate(self, preprocessed: bool = False) -> None:
        if not self.jobs:
            raise InputError("at least one job type required")
        for j, job in enumerate(self.jobs):
            if job.mult < 0 or job.weight < 0:
                raise InputError(f"job type {j} has negative data")
            if len(job.per_kind) != len(self.kinds):
                raise InputError(f"job type {j} must give parameters for every kind")
            for ki, par in enumerate(job.per_kind):
                if par.release < 0:
                    raise InputError(f"job {j} kind {ki}: negative release")
                if par.size is not None:
                    if par.size < 1:
                        raise InputError(f"job {j} kind {ki}: size must be >= 1")
                    if par.due is not None:
                        ok = par.release <= par.due if preprocessed else par.release < par.due
                        if not ok:
                            raise InputError(
                                f"job {j} kind {ki}: release must precede due date"
                            )
        for ki, kind in enumerate(self.kinds):
            for group in kind.speeds:
                if group.mult < 0:
                    raise InputError(f"kind {ki}: negative machine multiplicity")
                if group.num < 1 or group.den < 1 or Rat(group.num, group.den) > 1:
                    raise InputError(f"kind {ki}: speed must lie in (0, 1]")

    def max_finite_size(self) -> int:
        return max(
            (p.size for job in self.jobs if job.mult for p in job.per_kind if p.size is not None),
            default=1,
        )

    def min_speed(self) -> Rat:
        speeds = [g.value for k in self.kinds for g in k.speeds if g.mult]
        return min(speeds) if speeds else Rat(1)

    def max_release(self) -> int:
        return max(
            (p.release for job in self.jobs if job.mult for p in job.per_kind), default=0
        )

    def horizon(self) -> int:
        """A time by which some optimal left-aligned schedule has finished:
        the largest release plus the total work at the slowest speed."""
        work = sum(
            job.mult * max((p.size for p in job.per_kind if p.size is not None), default=1)
            for job in self.jobs
        )
        return self.max_release() + rat_ceil(Rat(work) / self.min_speed())


def make_instance(jobs, kinds) -> SchedulingInstance:
    inst = SchedulingInstance(tuple(jobs), tuple(kinds))
    inst.validate()
    return inst


def preprocess(inst: SchedulingInstance) -> SchedulingInstance:
    """Eliminate infinite sizes: the job gets a unit surrogate whose window is
    a single point, so it can never be scheduled on that kind (equivalent to
    forbidding the kind).  No-op when every size is finite.
    """
    if all(p.size is not None for job in inst.jobs for p in job.per_kind):
        return inst
    new_jobs = []
    for job in inst.jobs:
        per_kind = []
        for ki, par in enumerate(job.per_kind):
            if par.size is not None:
                per_kind.append(par)
                continue
            anchor = next(
                (other.per_kind[ki].release
                 for other in inst.jobs
                 if other.per_kind[ki].size is not None),
                0,
            )
            per_kind.append(KindParams(size=1, release=anchor, due=anchor))
        new_jobs.append(JobType(job.mult, job.weight, tuple(per_kind)))
    out = SchedulingInstance(tuple(new_jobs), inst.kinds)
    out.validate(preprocessed=True)
    return out


@dataclass(frozen=True)
class ObjectiveSpec:
    """kind in {cmax, cmin, lmax, fmax, sumwu, lp, sumwc, sumwf, sumwt};
    ``power`` is the lp exponent (an integer >= 2)."""

    kind: str
    power: int | None = None


OBJECTIVES = ("cmax", "cmin", "lmax", "fmax", "sumwu", "lp", "sumwc", "sumwf", "sumwt")
MINSUM_OBJECTIVES = ("sumwc", "sumwf", "sumwt")


def parse_objective(text: str) -> ObjectiveSpec:
    text = text.strip().lower()
    if text.startswith("lp:"):
        power = int(text[3:])
        if power < 2:
            raise InputError("lp exponent must be an integer >= 2")
        return ObjectiveSpec("lp", power)
    if text not in OBJECTIVES or text == "lp":
        raise InputError(f"unknown objective {text!r}")
    return ObjectiveSpec(text)
