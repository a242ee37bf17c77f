"""Critical times, potential cycles, eligibility indicators, incompatibility.

A machine's schedule decomposes into cycles (maximal busy blocks).  Potential
cycles are the candidate positions relative to the sorted critical times
t_1 < ... < t_m: one internal cycle per gap [t_k, t_(k+1)], and one external
cycle per index pair 2 <= a <= b <= m-1 strictly containing t_a..t_b (an
external cycle carries exactly one job).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from ..rational import Rat


@dataclass(frozen=True, order=True)
class Cycle:
    external: bool
    a: int  # internal: gap index k (cycle spans [t_k, t_(k+1)]); external: first interior index
    b: int  # external: last interior index; internal: equals a

    @property
    def internal(self) -> bool:
        return not self.external

    @property
    def left(self) -> int:
        """Index of the largest critical time <= any start in the cycle."""
        return self.a if self.internal else self.a - 1

    @property
    def right(self) -> int:
        """Index of the smallest critical time >= any completion in it."""
        return self.a + 1 if self.internal else self.b + 1

    def order_key(self) -> tuple[int, int, int]:
        """Placement order: int_1, ext(2,*), int_2, ext(3,*), ..."""
        if self.internal:
            return (self.a, 0, 0)
        return (self.a - 1, 1, self.b)


def internal_cycle(k: int) -> Cycle:
    return Cycle(False, k, k)


def external_cycle(a: int, b: int) -> Cycle:
    if a > b:
        raise InputError("external cycle needs a <= b")
    return Cycle(True, a, b)


def critical_times(releases, dues, objective_kind: str, horizon=None):
    """Sorted distinct critical times of one machine kind.

    releases/dues are per job type (a due of None is infinite and never
    becomes a critical time).  For sumwt the horizon becomes an extra critical
    time and dues beyond it are ignored.
    """
    times = set()
    for r in releases:
        times.add(Rat(r))
    for d in dues:
        if d is None:
            continue
        d = Rat(d)
        if objective_kind == "sumwt" and horizon is not None and d > horizon:
            continue  # never tardy before the horizon; not a breakpoint
        times.add(d)
    if objective_kind == "sumwt":
        if horizon is None:
            raise InputError("sumwt needs a horizon critical time")
        times.add(Rat(horizon))
    return tuple(sorted(times))


def potential_cycles(num_times: int) -> tuple[Cycle, ...]:
    """All potential cycles for m critical times: m-1 internal and
    (m-2)(m-1)/2 external ones."""
    cycles = [internal_cycle(k) for k in range(1, num_times)]
    for a in range(2, num_times):
        for b in range(a, num_times):
            cycles.append(external_cycle(a, b))
    return tuple(sorted(cycles, key=Cycle.order_key))


def chi(times, cycle: Cycle, size: int, release, due, speed, objective_kind: str) -> int:
    """May a job with these parameters be assigned to this potential cycle?

    Internal: the window [t_k, t_(k+1)] must lie inside [release, due] (for
    sumwt only the release matters).  External: the job must additionally be
    long enough to strictly contain the interior critical times but not so
    long that it could not end within the flanking gaps; at unit speed the
    interior span must be at most size-2, with speed s strictly below size/s.
    """
    release = Rat(release)
    due_inf = due is None
    due = None if due_inf else Rat(due)
    t = times  # 1-based indexing below
    if cycle.internal:
        k = cycle.a
        if release > t[k - 1]:
            return 0
        if objective_kind == "sumwt" or due_inf:
            return 1
        return int(t[k] <= due)
    a, b = cycle.a, cycle.b
    if release > t[a - 2]:
        return 0
    if objective_kind != "sumwt" and not due_inf and t[b] > due:
        return 0
    fit = t[b] - t[a - 2]
    span = t[b - 1] - t[a - 1]
    need = Rat(size) / speed
    if speed == 1:
        return int(fit >= size and span <= size - 2)
    return int(fit >= need and span < need)


def incompatible(c1: Cycle, c2: Cycle) -> bool:
    """No schedule can realize both cycles.

    An external cycle blocks every internal gap it strictly covers and every
    external cycle sharing an interior critical time.
    """
    if c1.internal and c2.internal:
        return False
    if c1.internal:
        c1, c2 = c2, c1
    if c2.internal:
        return c1.a <= c2.a <= c1.b - 1
    return not (c1.b < c2.a or c2.b < c1.a)


@dataclass(frozen=True)
class CycleModel:
    """Everything the emitters and the reconstruction need about one machine
    type's cycle structure: the critical times, the potential cycles, the
    chi eligibility table, incompatibility pairs, and the variable layout of
    the emitted block (x first, then the auxiliary families in order)."""

    kind: int
    speed: Rat
    times: tuple[Rat, ...]
    cycles: tuple[Cycle, ...]
    chi_table: tuple[tuple[int, ...], ...]  # [job][cycle index]
    sizes: tuple[int, ...]
    var_x: tuple[int, ...]
    var_y: dict
    var_z: dict
    var_yl: dict
    var_yr: dict
    var_prod: dict
    var_alpha: dict
    num_vars: int

    @property
    def externals(self):
        return [c for c in self.cycles if c.external]

    def incompatible_with(self, cycle: Cycle):
        return [c for c in self.cycles if c is not cycle and incompatible(cycle, c)]

    def ext_ending_at(self, k: int):
        """External cycles whose last interior critical index is k."""
        return [c for c in self.externals if c.b == k]

    def time(self, index: int) -> Rat:
        return self.times[index - 1]
