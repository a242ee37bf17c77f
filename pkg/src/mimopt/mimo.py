"""Multitype integer monoid optimization: the user-facing problem.

An instance fixes a shared dimension d and, per type, an integer inequality
system over d + d_i variables whose integer points project (on the first d
coordinates) to the configuration set X^i, an objective, and a multiplicity.
Solving decomposes the target vector into exactly mu_i configurations per
type at minimum total cost.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError, UnboundedError
from .kernel import LE, EQ, LpStatus, make_ip, make_lp, make_row, solve_ilp, solve_lp
from .rational import Rat, ZERO, as_int, rat
from .nfold import (
    NfoldSolution,
    SolveStatus,
    derive_box,
    mimo_to_nfold,
    reduce_and_solve,
)
from .stats import SolveStats


@dataclass(frozen=True)
class MimoRow:
    """One inequality  sum coeffs . (x, x') <= rhs  with integer data."""

    coeffs: tuple[tuple[int, int], ...]
    rhs: int

    def max_abs(self) -> int:
        return max((abs(a) for _, a in self.coeffs), default=0)


def mimo_row(coeffs, rhs) -> MimoRow:
    acc: dict[int, int] = {}
    items = coeffs.items() if isinstance(coeffs, dict) else coeffs
    for j, a in items:
        a = int(a)
        if a:
            acc[j] = acc.get(j, 0) + a
    return MimoRow(tuple(sorted(acc.items())), int(rhs))


@dataclass(frozen=True)
class LinearMimoObjective:
    w: tuple[Rat, ...]  # over the shared x coordinates


@dataclass(frozen=True)
class ExtensionSeparableConvex:
    """linear over (x, x') plus convex tables on single coordinates.

    ``tables[k] = (lo, values)``: coordinate k ranges over [lo, lo+len-1]
    (this box is part of the model) with the given convex values.
    """

    linear: tuple[Rat, ...]
    tables: tuple[tuple[int, tuple[int, tuple[Rat, ...]]], ...]


@dataclass(frozen=True)
class FixedCharge:
    penalty: int


def linear_mimo_objective(w) -> LinearMimoObjective:
    return LinearMimoObjective(tuple(rat(v) for v in w))


def ext_convex_objective(linear, tables) -> ExtensionSeparableConvex:
    packed = tuple(
        sorted(
            (int(k), (int(lo), tuple(rat(v) for v in values)))
            for k, (lo, values) in dict(tables).items()
        )
    )
    return ExtensionSeparableConvex(tuple(rat(v) for v in linear), packed)


@dataclass(frozen=True)
class MimoTypeBlock:
    num_aux: int
    rows: tuple[MimoRow, ...]
    objective: LinearMimoObjective | ExtensionSeparableConvex | FixedCharge | None
    multiplicity: int


def mimo_type(num_aux, rows, objective, multiplicity) -> MimoTypeBlock:
    return MimoTypeBlock(int(num_aux), tuple(rows), objective, int(multiplicity))


@dataclass(frozen=True)
class MimoInstance:
    d: int
    types: tuple[MimoTypeBlock, ...]
    target: tuple[int, ...]

    def validate(self) -> None:
        if self.d < 1:
            raise InputError("dimension must be >= 1")
        if len(self.target) != self.d:
            raise InputError("target length mismatch")
        if not self.types:
            raise InputError("at least one type required")
        for i, tb in enumerate(self.types):
            if tb.multiplicity < 0:
                raise InputError(f"type {i} has negative multiplicity")
            nv = self.d + tb.num_aux
            for row in tb.rows:
                for j, _ in row.coeffs:
                    if j >= nv:
                        raise InputError(f"type {i} row references coordinate {j} >= {nv}")
            obj = tb.objective
            if isinstance(obj, LinearMimoObjective) and len(obj.w) != self.d:
                raise InputError(f"type {i} linear objective must have length d")
            if isinstance(obj, ExtensionSeparableConvex):
                if len(obj.linear) != nv:
                    raise InputError(f"type {i} objective linear part must cover (x, x')")
                for k, _ in obj.tables:
                    if k >= nv:
                        raise InputError(f"type {i} table on missing coordinate {k}")
            if isinstance(obj, FixedCharge) and obj.penalty < 0:
                raise InputError("fixed-charge penalty must be nonnegative")


def make_mimo(d, types, target) -> MimoInstance:
    inst = MimoInstance(int(d), tuple(types), tuple(int(v) for v in target))
    inst.validate()
    return inst


@dataclass(frozen=True)
class MimoReport:
    d: int
    tau: int
    max_rows: int
    max_aux: int
    max_coefficient: int
    total_multiplicity: int


def validate_instance(inst: MimoInstance) -> MimoReport:
    """Parameter report; verifies per-coordinate boundedness by exact LPs."""
    inst.validate()
    for i, tb in enumerate(inst.types):
        nv = inst.d + tb.num_aux
        lp_rows = [
            make_row([(j, Rat(a)) for j, a in row.coeffs], LE, Rat(row.rhs))
            for row in tb.rows
        ]
        preset_lo: list = [None] * nv
        preset_up: list = [None] * nv
        if isinstance(tb.objective, ExtensionSeparableConvex):
            for k, (lo, values) in tb.objective.tables:
                preset_lo[k] = Rat(lo)
                preset_up[k] = Rat(lo + len(values) - 1)
        for j in range(nv):
            for sign in (1, -1):
                objective = [ZERO] * nv
                objective[j] = Rat(sign)
                sol = solve_lp(make_lp(nv, objective, lp_rows, preset_lo, preset_up))
                if sol.status is LpStatus.UNBOUNDED:
                    raise UnboundedError(
                        f"type {i} polytope unbounded in coordinate {j}"
                    )
    return MimoReport(
        d=inst.d,
        tau=len(inst.types),
        max_rows=max((len(tb.rows) for tb in inst.types), default=0),
        max_aux=max((tb.num_aux for tb in inst.types), default=0),
        max_coefficient=max(
            (row.max_abs() for tb in inst.types for row in tb.rows), default=0
        ),
        total_multiplicity=sum(tb.multiplicity for tb in inst.types),
    )


@dataclass(frozen=True)
class MimoSolution:
    status: SolveStatus
    counts: tuple[tuple[int, tuple[int, ...], int], ...]  # (type, x, count)
    objective: Rat
    bricks: tuple[tuple[int, tuple[int, ...], int], ...] = ()  # (type, (x, x'), count)

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


def _project_solution(inst: MimoInstance, nsol: NfoldSolution) -> MimoSolution:
    if not nsol.optimal:
        return MimoSolution(SolveStatus.INFEASIBLE, (), ZERO)
    merged: dict[tuple[int, tuple[int, ...]], int] = {}
    bricks: dict[tuple[int, tuple[int, ...]], int] = {}
    for i, cfg, n in nsol.counts:
        x = cfg[: inst.d]
        merged[(i, x)] = merged.get((i, x), 0) + n
        full = cfg[: inst.d + inst.types[i].num_aux]
        bricks[(i, full)] = bricks.get((i, full), 0) + n
    counts = tuple(sorted((i, x, n) for (i, x), n in merged.items()))
    packed = tuple(sorted((i, v, n) for (i, v), n in bricks.items()))
    return MimoSolution(SolveStatus.OPTIMAL, counts, nsol.objective, packed)


def solve_mimo(
    inst: MimoInstance,
    strategy: str = "auto",
    conf_cap: int = 200_000,
    stats: SolveStats | None = None,
) -> MimoSolution:
    """Exact optimum via the huge N-fold reduction.

    Linear, extension-separable-convex, or absent objectives only; a
    fixed-charge instance must go through solve_fixed_charge.
    """
    inst.validate()
    if any(isinstance(tb.objective, FixedCharge) for tb in inst.types):
        raise InputError("fixed-charge objective: use solve_fixed_charge")
    nfold = mimo_to_nfold(inst)
    nsol = reduce_and_solve(nfold, mode=strategy, conf_cap=conf_cap, stats=stats)
    return _project_solution(inst, nsol)


def _type_box(inst: MimoInstance, i: int) -> tuple[list[int], list[int]]:
    tb = inst.types[i]
    nv = inst.d + tb.num_aux
    preset = {}
    if isinstance(tb.objective, ExtensionSeparableConvex):
        for k, (lo, values) in tb.objective.tables:
            preset[k] = (lo, lo + len(values) - 1)
    return derive_box([(r.coeffs, r.rhs) for r in tb.rows], nv, preset)


def _pinned_feasibility(inst: MimoInstance, i: int, x) -> tuple[int, ...] | None:
    """Solve the membership IP with the shared coordinates pinned to x."""
    tb = inst.types[i]
    nv = inst.d + tb.num_aux
    box_lo, box_up = _type_box(inst, i)
    if any(lo > up for lo, up in zip(box_lo, box_up)):
        return None  # provably empty polytope
    rows = [
        make_row([(j, Rat(a)) for j, a in row.coeffs], LE, Rat(row.rhs)) for row in tb.rows
    ]
    rows.extend(make_row([(j, Rat(1))], EQ, Rat(v)) for j, v in enumerate(x))
    lp = make_lp(nv, [ZERO] * nv, rows, [Rat(v) for v in box_lo], [Rat(v) for v in box_up])
    res = solve_ilp(make_ip(lp, [True] * nv), incumbent_limit=1)
    if not res.optimal:
        return None
    return tuple(as_int(v) for v in res.x[inst.d :])


def zero_in_type(inst: MimoInstance, i: int) -> bool:
    """Is the all-zero shared vector a configuration of type i?"""
    return _pinned_feasibility(inst, i, (0,) * inst.d) is not None


def membership_witness(inst: MimoInstance, i: int, x) -> tuple[int, ...] | None:
    """An auxiliary completion x' with (x, x') in P^i, or None."""
    if len(x) != inst.d:
        raise InputError("x must have the shared dimension")
    return _pinned_feasibility(inst, i, x)


def solve_fixed_charge(
    inst: MimoInstance, stats: SolveStats | None = None
) -> MimoSolution:
    """Fixed-charge MIMO by guessing nonzero-configuration counts.

    For each type with 0 in X^i, guesses how many of its bricks are nonzero;
    guesses are tried in nondecreasing total-cost order (ties: lexicographic),
    each as a feasibility instance with the guessed multiplicities.  The first
    feasible guess is optimal because penalties are nonnegative.
    """
    inst.validate()
    stats = stats if stats is not None else SolveStats()
    penalties = []
    for i, tb in enumerate(inst.types):
        if tb.objective is None:
            penalties.append(0)
        elif isinstance(tb.objective, FixedCharge):
            penalties.append(tb.objective.penalty)
        else:
            raise InputError("solve_fixed_charge needs fixed-charge or absent objectives")
    guessable = {i for i in range(len(inst.types)) if zero_in_type(inst, i)}
    choices = [
        range(inst.types[i].multiplicity + 1)
        if i in guessable
        else (inst.types[i].multiplicity,)
        for i in range(len(inst.types))
    ]
    guesses = sorted(
        itertools.product(*choices),
        key=lambda mu_bar: (sum(n * penalties[i] for i, n in enumerate(mu_bar)), mu_bar),
    )
    feasibility_types = tuple(
        MimoTypeBlock(tb.num_aux, tb.rows, None, tb.multiplicity) for tb in inst.types
    )
    known_infeasible: list[tuple[int, ...]] = []
    for mu_bar in guesses:
        if any(all(a <= b for a, b in zip(mu_bar, bad)) for bad in known_infeasible):
            continue  # a componentwise-larger guess already failed
        probe = MimoInstance(
            inst.d,
            tuple(
                MimoTypeBlock(tb.num_aux, tb.rows, None, mu_bar[i])
                for i, tb in enumerate(feasibility_types)
            ),
            inst.target,
        )
        stats.probes += 1
        sol = solve_mimo(probe, stats=stats)
        if sol.optimal:
            cost = sum((Rat(n * penalties[i]) for i, n in enumerate(mu_bar)), ZERO)
            # the unguessed bricks are zero configurations
            zero = (0,) * inst.d
            merged: dict[tuple[int, tuple[int, ...]], int] = {}
            for i, x, n in sol.counts:
                merged[(i, x)] = merged.get((i, x), 0) + n
            bricks: dict[tuple[int, tuple[int, ...]], int] = {}
            for i, v, n in sol.bricks:
                bricks[(i, v)] = bricks.get((i, v), 0) + n
            for i, tb in enumerate(inst.types):
                rest = tb.multiplicity - mu_bar[i]
                if rest:
                    merged[(i, zero)] = merged.get((i, zero), 0) + rest
                    witness = membership_witness(inst, i, zero)
                    full = zero + witness
                    bricks[(i, full)] = bricks.get((i, full), 0) + rest
            counts = tuple(sorted((i, x, n) for (i, x), n in merged.items()))
            packed = tuple(sorted((i, v, n) for (i, v), n in bricks.items()))
            return MimoSolution(SolveStatus.OPTIMAL, counts, cost, packed)
        known_infeasible.append(mu_bar)
    return MimoSolution(SolveStatus.INFEASIBLE, (), ZERO)


@dataclass(frozen=True)
class MimoViolation:
    kind: str
    detail: str


def verify_solution(inst: MimoInstance, sol: MimoSolution) -> list[MimoViolation]:
    """Membership, multiplicity, target, and objective re-checks."""
    if not sol.optimal:
        return []
    problems: list[MimoViolation] = []
    per_type = [0] * len(inst.types)
    total = [0] * inst.d
    objective = ZERO
    fixed_nonzero = [0] * len(inst.types)
    for i, x, n in sol.counts:
        if n < 0:
            problems.append(MimoViolation("count", f"negative count for type {i}"))
            continue
        witness = membership_witness(inst, i, x)
        if witness is None:
            problems.append(MimoViolation("membership", f"type {i} vector {x} not in X^{i}"))
            continue
        per_type[i] += n
        for k, v in enumerate(x):
            total[k] += n * v
        obj = inst.types[i].objective
        if isinstance(obj, LinearMimoObjective):
            objective += n * sum((w * v for w, v in zip(obj.w, x)), ZERO)
        elif isinstance(obj, ExtensionSeparableConvex):
            objective += n * _ext_value(inst, i, x)
        elif isinstance(obj, FixedCharge):
            if any(x):
                fixed_nonzero[i] += n
    for i, tb in enumerate(inst.types):
        if per_type[i] != tb.multiplicity:
            problems.append(
                MimoViolation(
                    "multiplicity", f"type {i} uses {per_type[i]} != {tb.multiplicity}"
                )
            )
        if isinstance(tb.objective, FixedCharge):
            objective += Rat(fixed_nonzero[i] * tb.objective.penalty)
    if tuple(total) != inst.target:
        problems.append(MimoViolation("target", f"sum {tuple(total)} != {inst.target}"))
    if not problems and objective != sol.objective:
        problems.append(
            MimoViolation("objective", f"recomputed {objective} != {sol.objective}")
        )
    return problems


def _ext_value(inst: MimoInstance, i: int, x) -> Rat:
    """f^i(x) = min over completions x' of the separable objective."""
    tb = inst.types[i]
    obj = tb.objective
    nv = inst.d + tb.num_aux
    box_lo, box_up = _type_box(inst, i)
    rows = [
        make_row([(j, Rat(a)) for j, a in row.coeffs], LE, Rat(row.rhs)) for row in tb.rows
    ]
    rows.extend(make_row([(j, Rat(1))], EQ, Rat(v)) for j, v in enumerate(x))
    tables = {}
    for k, (lo, values) in obj.tables:
        a = box_lo[k] - lo
        b = box_up[k] - lo
        tables[k] = values[a : b + 1]
    lp = make_lp(nv, obj.linear, rows, [Rat(v) for v in box_lo], [Rat(v) for v in box_up])
    res = solve_ilp(make_ip(lp, [True] * nv, tables))
    if not res.optimal:
        raise InputError(f"vector {x} has no completion in type {i}")
    return res.objective
