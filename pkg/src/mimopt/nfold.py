"""Huge N-fold integer programming over configuration polytopes.

A huge N-fold instance has tau brick types; a configuration of type i is an
integer point of the block polytope {c : E2_i c = b_i, l_i <= c <= u_i}.  The
configuration LP/ILP has one variable per (type, configuration) counting the
bricks using it, r linking rows, and one multiplicity row per type.

This module provides configuration enumeration, the configuration ILP, exact
column generation for the configuration LP (pricing by integer programming per
type), the floor/fractional brick split of a fractional solution, the
proximity bound, and the reduce-and-solve pipeline that fixes the bulk of a
fractional optimum and finishes the remainder exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import CapacityError, InputError, SolverError, UnboundedError
from .kernel import (
    EQ,
    LE,
    IntegerProgram,
    LpStatus,
    make_ip,
    make_lp,
    make_row,
    solve_compressed,
    solve_ilp,
    solve_ilp_lexmin,
    solve_lp,
)
from .rational import Rat, ZERO, as_int, ceil_log2, frac_part, is_integral, rat, rat_floor
from .stats import SolveStats

Config = tuple[int, ...]


@dataclass(frozen=True)
class LinearObjective:
    w: tuple[Rat, ...]


@dataclass(frozen=True)
class SeparableConvexObjective:
    """linear . c plus per-coordinate convex value tables.

    ``tables[k]`` holds the values over the integer range [lower_k, upper_k]
    of the brick type that owns this objective.
    """

    linear: tuple[Rat, ...]
    tables: tuple[tuple[int, tuple[Rat, ...]], ...]


def linear_objective(w) -> LinearObjective:
    return LinearObjective(tuple(rat(v) for v in w))


def convex_objective(linear, tables) -> SeparableConvexObjective:
    fixed = tuple(
        sorted((int(k), tuple(rat(v) for v in vals)) for k, vals in dict(tables).items())
    )
    return SeparableConvexObjective(tuple(rat(v) for v in linear), fixed)


@dataclass(frozen=True)
class BrickType:
    e1: tuple[tuple[int, ...], ...]  # r x t
    e2: tuple[tuple[int, ...], ...]  # s_i x t (may be empty)
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    rhs: tuple[int, ...]
    objective: LinearObjective | SeparableConvexObjective | None = None

    @property
    def t(self) -> int:
        return len(self.lower)

    @property
    def r(self) -> int:
        return len(self.e1)

    def validate(self) -> None:
        t = self.t
        if len(self.upper) != t:
            raise InputError("bound length mismatch")
        if any(lo > up for lo, up in zip(self.lower, self.upper)):
            raise InputError("brick lower bound exceeds upper bound")
        for row in self.e1 + self.e2:
            if len(row) != t:
                raise InputError("matrix width mismatch")
        if len(self.rhs) != len(self.e2):
            raise InputError("rhs length mismatch")
        if isinstance(self.objective, LinearObjective) and len(self.objective.w) != t:
            raise InputError("objective length mismatch")
        if isinstance(self.objective, SeparableConvexObjective):
            if len(self.objective.linear) != t:
                raise InputError("objective length mismatch")
            for k, values in self.objective.tables:
                if len(values) != self.upper[k] - self.lower[k] + 1:
                    raise InputError(f"table length mismatch on coordinate {k}")

    def objective_value(self, config) -> Rat:
        f = self.objective
        if f is None:
            return ZERO
        value = sum((w * v for w, v in zip(f.w if isinstance(f, LinearObjective) else f.linear, config) if w), ZERO)
        if isinstance(f, SeparableConvexObjective):
            for k, values in f.tables:
                value += values[config[k] - self.lower[k]]
        return value

    def contains(self, config) -> bool:
        if len(config) != self.t:
            return False
        if any(v < lo or v > up for v, lo, up in zip(config, self.lower, self.upper)):
            return False
        return all(
            sum(c * v for c, v in zip(row, config)) == b
            for row, b in zip(self.e2, self.rhs)
        )

    def e1_image(self, config) -> tuple[int, ...]:
        return tuple(sum(c * v for c, v in zip(row, config)) for row in self.e1)


def make_brick_type(e1, e2, lower, upper, rhs, objective=None) -> BrickType:
    bt = BrickType(
        e1=tuple(tuple(int(v) for v in row) for row in e1),
        e2=tuple(tuple(int(v) for v in row) for row in e2),
        lower=tuple(int(v) for v in lower),
        upper=tuple(int(v) for v in upper),
        rhs=tuple(int(v) for v in rhs),
        objective=objective,
    )
    bt.validate()
    return bt


@dataclass(frozen=True)
class HugeNfoldInstance:
    types: tuple[BrickType, ...]
    multiplicities: tuple[int, ...]
    b0: tuple[int, ...]

    @property
    def tau(self) -> int:
        return len(self.types)

    @property
    def r(self) -> int:
        return len(self.b0)

    @property
    def total_bricks(self) -> int:
        return sum(self.multiplicities)

    def validate(self) -> None:
        if not self.types:
            raise InputError("instance needs at least one brick type")
        if len(self.multiplicities) != len(self.types):
            raise InputError("multiplicity count mismatch")
        if any(m < 0 for m in self.multiplicities):
            raise InputError("negative multiplicity")
        t = self.types[0].t
        for bt in self.types:
            bt.validate()
            if bt.t != t:
                raise InputError("brick types must share t")
            if bt.r != len(self.b0):
                raise InputError("brick types must share r")

    def norms(self) -> tuple[int, int]:
        """(max |E2| entry, max |E| entry over the whole block matrix)."""
        norm_e2 = max(
            (abs(e) for bt in self.types for row in bt.e2 for e in row), default=0
        )
        norm_e1 = max(
            (abs(e) for bt in self.types for row in bt.e1 for e in row), default=0
        )
        return norm_e2, max(norm_e1, norm_e2)

    def max_block_rows(self) -> int:
        return max((len(bt.e2) for bt in self.types), default=0)


def make_instance(types, multiplicities, b0) -> HugeNfoldInstance:
    inst = HugeNfoldInstance(
        types=tuple(types),
        multiplicities=tuple(int(m) for m in multiplicities),
        b0=tuple(int(v) for v in b0),
    )
    inst.validate()
    return inst


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class NfoldSolution:
    status: SolveStatus
    counts: tuple[tuple[int, Config, int], ...]  # (type index, configuration, count)
    objective: Rat

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


def verify_nfold_solution(instance: HugeNfoldInstance, sol: NfoldSolution) -> list[str]:
    """Re-check the solution invariants; returns human-readable violations."""
    if not sol.optimal:
        return []
    problems = []
    per_type = [0] * instance.tau
    image = [0] * instance.r
    objective = ZERO
    for i, config, count in sol.counts:
        bt = instance.types[i]
        if count < 0:
            problems.append(f"negative count for type {i}")
        if not bt.contains(config):
            problems.append(f"configuration {config} is not in C^{i}")
        per_type[i] += count
        for k, v in enumerate(bt.e1_image(config)):
            image[k] += count * v
        objective += count * bt.objective_value(config)
    for i, (have, want) in enumerate(zip(per_type, instance.multiplicities)):
        if have != want:
            problems.append(f"type {i} uses {have} bricks, expected {want}")
    if tuple(image) != instance.b0:
        problems.append(f"aggregated E1 image {tuple(image)} != b0 {instance.b0}")
    if objective != sol.objective:
        problems.append("objective mismatch on recomputation")
    return problems


# ---------------------------------------------------------------------------
# configuration enumeration and the brick integer program


def configuration_space_bound(bt: BrickType) -> int:
    """Cheap upper bound on |C^i|: the box volume."""
    vol = 1
    for lo, up in zip(bt.lower, bt.upper):
        vol *= up - lo + 1
    return vol


def enumerate_configurations(bt: BrickType, cap: int = 200_000) -> list[Config]:
    """All integer points of the block polytope, in lexicographic order.

    Raises CapacityError beyond ``cap`` (the caller should switch to column
    generation then).  DFS with per-row interval pruning.
    """
    bt.validate()
    t = bt.t
    rows = bt.e2
    lo_tail = [[0] * (t + 1) for _ in rows]
    up_tail = [[0] * (t + 1) for _ in rows]
    for ri, row in enumerate(rows):
        for j in range(t - 1, -1, -1):
            a = row[j]
            lo_c = min(a * bt.lower[j], a * bt.upper[j])
            up_c = max(a * bt.lower[j], a * bt.upper[j])
            lo_tail[ri][j] = lo_tail[ri][j + 1] + lo_c
            up_tail[ri][j] = up_tail[ri][j + 1] + up_c
    out: list[Config] = []
    point = [0] * t
    partial = [0] * len(rows)

    def rec(j: int):
        if j == t:
            if all(partial[ri] == bt.rhs[ri] for ri in range(len(rows))):
                if len(out) >= cap:
                    raise CapacityError(
                        f"configuration count exceeds cap {cap}; use column generation"
                    )
                out.append(tuple(point))
            return
        for v in range(bt.lower[j], bt.upper[j] + 1):
            ok = True
            for ri, row in enumerate(rows):
                if row[j]:
                    partial[ri] += row[j] * v
                need = bt.rhs[ri] - partial[ri]
                if need < lo_tail[ri][j + 1] or need > up_tail[ri][j + 1]:
                    ok = False
            if ok:
                point[j] = v
                rec(j + 1)
                point[j] = 0
            for ri, row in enumerate(rows):
                if row[j]:
                    partial[ri] -= row[j] * v

    rec(0)
    return out


def brick_program(bt: BrickType, extra_linear=None, use_objective=True) -> IntegerProgram:
    """Integer program over one brick: E2 c = b, bounds, optional objective.

    ``extra_linear`` is added to the (linear part of the) objective; used by
    pricing, which minimizes f(c) - (alpha E1) c.
    """
    t = bt.t
    linear = [ZERO] * t
    tables = {}
    if use_objective and bt.objective is not None:
        if isinstance(bt.objective, LinearObjective):
            linear = list(bt.objective.w)
        else:
            linear = list(bt.objective.linear)
            tables = {k: vals for k, vals in bt.objective.tables}
    if extra_linear is not None:
        linear = [a + rat(b) for a, b in zip(linear, extra_linear)]
    rows = [
        make_row([(j, c) for j, c in enumerate(row) if c], EQ, b)
        for row, b in zip(bt.e2, bt.rhs)
    ]
    lp = make_lp(t, linear, rows, [Rat(v) for v in bt.lower], [Rat(v) for v in bt.upper])
    return make_ip(lp, [True] * t, tables)


def feasible_configuration(bt: BrickType) -> Config | None:
    """Lexicographically smallest configuration, or None if C^i is empty."""
    ip = brick_program(bt, use_objective=False)
    res = solve_ilp_lexmin(ip)
    if not res.optimal:
        return None
    return tuple(as_int(v) for v in res.x)


# ---------------------------------------------------------------------------
# configuration LP / ILP


def build_conf_ilp(
    instance: HugeNfoldInstance, configs: list[list[Config]]
) -> tuple[IntegerProgram, list[tuple[int, Config]]]:
    """The configuration ILP over explicitly listed configurations.

    Rows: r linking rows (sum of E1-images weighted by counts equals b0) and
    one multiplicity row per type; one variable per (type, configuration),
    bounded by that type's multiplicity.
    """
    instance.validate()
    if len(configs) != instance.tau:
        raise InputError("need one configuration list per type")
    columns: list[tuple[int, Config]] = []
    images: list[tuple[int, ...]] = []
    cost: list[Rat] = []
    for i, bucket in enumerate(configs):
        bt = instance.types[i]
        for cfg in bucket:
            if not bt.contains(cfg):
                raise InputError(f"configuration {cfg} not in C^{i}")
            columns.append((i, cfg))
            images.append(bt.e1_image(cfg))
            cost.append(bt.objective_value(cfg))
    rows = []
    for k in range(instance.r):
        coeffs = [(idx, Rat(images[idx][k])) for idx in range(len(columns)) if images[idx][k]]
        rows.append(make_row(coeffs, EQ, instance.b0[k]))
    for i in range(instance.tau):
        coeffs = [(idx, Rat(1)) for idx, (ti, _) in enumerate(columns) if ti == i]
        rows.append(make_row(coeffs, EQ, instance.multiplicities[i]))
    lp = make_lp(
        len(columns),
        cost,
        rows,
        [ZERO] * len(columns),
        [Rat(instance.multiplicities[i]) for i, _ in columns],
    )
    return make_ip(lp, [True] * len(columns)), columns


def price_type(
    instance: HugeNfoldInstance,
    i: int,
    alpha,
    beta_i,
    use_objective: bool = True,
) -> tuple[Config, Rat] | None:
    """Most negative reduced-cost configuration of type i, or None.

    Solves min f(c) - (alpha E1^i) c over C^i exactly (lexicographically
    smallest minimizer); returns None when the minimum is >= beta_i, i.e. no
    dual constraint of this type is violated.
    """
    bt = instance.types[i]
    alpha = [rat(a) for a in alpha]
    beta_i = rat(beta_i)
    # (alpha E1) c as a linear form over c
    form = [
        -sum((alpha[k] * bt.e1[k][j] for k in range(bt.r) if bt.e1[k][j]), ZERO)
        for j in range(bt.t)
    ]
    ip = brick_program(bt, extra_linear=form, use_objective=use_objective)
    res = solve_ilp_lexmin(ip)
    if not res.optimal:
        raise InputError(f"type {i} has no configurations (pricing infeasible)")
    if res.objective >= beta_i:
        return None
    config = tuple(as_int(v) for v in res.x)
    return config, res.objective - beta_i


@dataclass(frozen=True)
class ConfLpResult:
    status: SolveStatus
    y: tuple[tuple[int, Config, Rat], ...]  # support only
    objective: Rat
    columns_generated: int

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


def _master_lp(instance, columns, images, cost, artificial: bool):
    ncols = len(columns)
    nrows = instance.r + instance.tau
    objective = list(cost)
    lower = [ZERO] * ncols
    upper: list = [None] * ncols
    coeffs_by_row = [[] for _ in range(nrows)]
    for idx in range(ncols):
        for k in range(instance.r):
            if images[idx][k]:
                coeffs_by_row[k].append((idx, Rat(images[idx][k])))
        coeffs_by_row[instance.r + columns[idx][0]].append((idx, Rat(1)))
    if artificial:
        one = Rat(1)
        for k in range(nrows):
            plus = len(objective)
            objective += [one, one]
            lower += [ZERO, ZERO]
            upper += [None, None]
            coeffs_by_row[k] += [(plus, one), (plus + 1, -one)]
    rhs = list(instance.b0) + list(instance.multiplicities)
    rows = [make_row(coeffs_by_row[k], EQ, rhs[k]) for k in range(nrows)]
    return make_lp(len(objective), objective, rows, lower, upper)


def solve_conf_lp(
    instance: HugeNfoldInstance, stats: SolveStats | None = None, max_rounds: int = 10_000
) -> ConfLpResult:
    """Exact optimum of the configuration LP by column generation.

    Initial columns: one feasible configuration per type (feasibility IP);
    then two phases of pricing (feasibility with zero costs, true costs), each
    terminating when no type has a violated dual constraint.  The returned
    support is that of a basic optimum, hence at most r + tau.
    """
    instance.validate()
    stats = stats if stats is not None else SolveStats()
    columns: list[tuple[int, Config]] = []
    colset: set[tuple[int, Config]] = set()
    images: list[tuple[int, ...]] = []
    cost: list[Rat] = []

    def add_column(i: int, cfg: Config) -> None:
        key = (i, cfg)
        if key in colset:
            raise SolverError("internal error: priced an existing column")
        colset.add(key)
        columns.append(key)
        images.append(instance.types[i].e1_image(cfg))
        cost.append(instance.types[i].objective_value(cfg))
        stats.columns_generated += 1

    for i, mu in enumerate(instance.multiplicities):
        if mu == 0:
            continue
        cfg = feasible_configuration(instance.types[i])
        if cfg is None:
            return ConfLpResult(SolveStatus.INFEASIBLE, (), ZERO, stats.columns_generated)
        add_column(i, cfg)

    def run_phase(use_objective: bool) -> tuple | None:
        """Returns the final LP solution of the phase, or None if infeasible."""
        for _ in range(max_rounds):
            lp = _master_lp(
                instance,
                columns,
                images,
                [ZERO] * len(columns) if not use_objective else cost,
                artificial=not use_objective,
            )
            sol = solve_lp(lp)
            if sol.status is not LpStatus.OPTIMAL:
                raise SolverError("internal error: master LP not optimal")
            if not use_objective and sol.objective == 0:
                return sol
            alpha = sol.duals[: instance.r]
            betas = sol.duals[instance.r :]
            improved = False
            for i in range(instance.tau):
                if instance.multiplicities[i] == 0:
                    continue
                priced = price_type(instance, i, alpha, betas[i], use_objective=use_objective)
                if priced is not None:
                    add_column(i, priced[0])
                    improved = True
            if not improved:
                if not use_objective and sol.objective != 0:
                    return None  # certified infeasible
                return sol
        raise SolverError("column generation did not converge")

    if run_phase(use_objective=False) is None:
        return ConfLpResult(SolveStatus.INFEASIBLE, (), ZERO, stats.columns_generated)
    sol = run_phase(use_objective=True)
    support = tuple(
        (columns[idx][0], columns[idx][1], sol.x[idx])
        for idx in range(len(columns))
        if sol.x[idx]
    )
    if len(support) > instance.r + instance.tau:
        raise SolverError("internal error: basic optimum support exceeds r + tau")
    return ConfLpResult(SolveStatus.OPTIMAL, support, sol.objective, stats.columns_generated)


# ---------------------------------------------------------------------------
# the phi mapping: floors plus averaged fractional bricks


@dataclass(frozen=True)
class PhiResult:
    integral_bricks: tuple[tuple[int, Config, int], ...]
    fractional_bricks: tuple[tuple[int, tuple[Rat, ...], int], ...]  # (type, value, count)

    @property
    def fractional_count(self) -> int:
        return sum(n for _, _, n in self.fractional_bricks)


def phi(instance: HugeNfoldInstance, y) -> PhiResult:
    """Split a fractional multiplicity map into floor bricks and, per type,
    identical averaged fractional bricks.

    ``y`` is an iterable of (type, configuration, value).  Per-type values
    must sum to the type's multiplicity.
    """
    per_type: list[list[tuple[Config, Rat]]] = [[] for _ in instance.types]
    for i, cfg, value in y:
        per_type[i].append((cfg, rat(value)))
    integral = []
    fractional = []
    for i, bucket in enumerate(per_type):
        total = sum((v for _, v in bucket), ZERO)
        if total != instance.multiplicities[i]:
            raise InputError(
                f"type {i} values sum to {total}, expected {instance.multiplicities[i]}"
            )
        frac_total = ZERO
        weighted = [ZERO] * (instance.types[i].t if bucket else 0)
        for cfg, value in bucket:
            fl = rat_floor(value)
            if fl:
                integral.append((i, cfg, fl))
            fp = frac_part(value)
            if fp:
                frac_total += fp
                weighted = [w + fp * c for w, c in zip(weighted, cfg)]
        if frac_total:
            if not is_integral(frac_total):
                raise InputError("fractional parts do not sum to an integer")
            count = as_int(frac_total)
            fractional.append((i, tuple(w / frac_total for w in weighted), count))
    return PhiResult(tuple(integral), tuple(fractional))


# ---------------------------------------------------------------------------
# proximity bound and reduce-and-solve


def proximity_bound(r: int, s: int, t: int, tau: int, norm_e2: int, norm_e: int) -> int:
    """Guaranteed l1 distance between a conf-optimal fractional solution and
    some integer optimum:

        ((r+tau) * 26 t^4 * log2(t * ||E2||)) * (2r)^(r+1) * (||E|| s)^(3rs)

    The logarithm is taken as an integer ceiling and clamped below at 1, so
    the result is an exact integer upper bound of the formula.
    """
    if min(r, s, t, tau, norm_e2, norm_e) < 1:
        raise InputError("proximity bound needs all arguments >= 1")
    log_term = max(1, ceil_log2(t * norm_e2))
    return (r + tau) * 26 * t**4 * log_term * (2 * r) ** (r + 1) * (norm_e * s) ** (3 * r * s)


def instance_proximity_bound(instance: HugeNfoldInstance) -> int:
    norm_e2, norm_e = instance.norms()
    return proximity_bound(
        instance.r,
        max(1, instance.max_block_rows()),
        instance.types[0].t,
        instance.tau,
        max(1, norm_e2),
        max(1, norm_e),
    )


def _is_feasibility(instance: HugeNfoldInstance) -> bool:
    return all(bt.objective is None for bt in instance.types)


def _solve_conf_ilp_direct(
    instance: HugeNfoldInstance, conf_cap: int, stats: SolveStats
) -> NfoldSolution:
    configs = []
    remaining = conf_cap
    for bt in instance.types:
        bucket = enumerate_configurations(bt, cap=remaining)
        remaining -= len(bucket)
        configs.append(bucket)
    ip, columns = build_conf_ilp(instance, configs)
    limit = 1 if _is_feasibility(instance) else None
    res = solve_ilp(ip, incumbent_limit=limit)
    stats.count_nodes(res)
    if not res.optimal:
        return NfoldSolution(SolveStatus.INFEASIBLE, (), ZERO)
    counts = tuple(
        (columns[idx][0], columns[idx][1], as_int(v))
        for idx, v in enumerate(res.x)
        if v
    )
    return NfoldSolution(SolveStatus.OPTIMAL, counts, res.objective)


def _solve_explicit_bricks(
    instance: HugeNfoldInstance, stats: SolveStats
) -> NfoldSolution:
    """Solve the N-fold IP with explicitly materialized bricks."""
    t = instance.types[0].t
    order: list[int] = []
    for i, mu in enumerate(instance.multiplicities):
        order.extend([i] * mu)
    nvars = t * len(order)
    rows = []
    for k in range(instance.r):
        coeffs = []
        for b, i in enumerate(order):
            base = b * t
            for j, c in enumerate(instance.types[i].e1[k]):
                if c:
                    coeffs.append((base + j, Rat(c)))
        rows.append(make_row(coeffs, EQ, instance.b0[k]))
    lower: list = []
    upper: list = []
    objective = [ZERO] * nvars
    tables = {}
    for b, i in enumerate(order):
        bt = instance.types[i]
        base = b * t
        for row, bb in zip(bt.e2, bt.rhs):
            rows.append(make_row([(base + j, Rat(c)) for j, c in enumerate(row) if c], EQ, bb))
        lower.extend(Rat(v) for v in bt.lower)
        upper.extend(Rat(v) for v in bt.upper)
        if isinstance(bt.objective, LinearObjective):
            for j, w in enumerate(bt.objective.w):
                objective[base + j] = w
        elif isinstance(bt.objective, SeparableConvexObjective):
            for j, w in enumerate(bt.objective.linear):
                objective[base + j] = w
            for k, values in bt.objective.tables:
                tables[base + k] = values
    ip = make_ip(make_lp(nvars, objective, rows, lower, upper), [True] * nvars, tables)
    limit = 1 if _is_feasibility(instance) else None
    res = solve_compressed(ip, incumbent_limit=limit)
    stats.count_nodes(res)
    if not res.optimal:
        return NfoldSolution(SolveStatus.INFEASIBLE, (), ZERO)
    merged: dict[tuple[int, Config], int] = {}
    for b, i in enumerate(order):
        cfg = tuple(as_int(v) for v in res.x[b * t : (b + 1) * t])
        merged[(i, cfg)] = merged.get((i, cfg), 0) + 1
    counts = tuple(sorted((i, cfg, n) for (i, cfg), n in merged.items()))
    return NfoldSolution(SolveStatus.OPTIMAL, counts, res.objective)


def _enumerable(instance: HugeNfoldInstance, conf_cap: int) -> bool:
    total = 0
    for bt in instance.types:
        total += configuration_space_bound(bt)
        if total > conf_cap:
            return False
    return True


def reduce_and_solve(
    instance: HugeNfoldInstance,
    mode: str = "auto",
    conf_cap: int = 200_000,
    brick_cap: int = 64,
    proximity_override: int | None = None,
    stats: SolveStats | None = None,
) -> NfoldSolution:
    """Exact optimum of the huge N-fold IP as a configuration multiplicity map.

    direct: enumerate all configurations and solve the configuration ILP.
    huge:   solve the configuration LP, keep y_-P(i,c) = max(0, floor(y)-P)
            bricks fixed (P the proximity bound), solve the reduced instance
            exactly, and add the fixed bricks back.  When P >= max
            multiplicity the fixing is vacuous and the LP stage is skipped.
    auto:   direct when the configuration space is small, else huge.

    ``proximity_override`` substitutes a custom P (tests only: a too-small P
    voids the optimality guarantee).
    """
    instance.validate()
    stats = stats if stats is not None else SolveStats()
    if mode not in ("auto", "direct", "huge"):
        raise InputError(f"unknown mode {mode!r}")
    if mode == "auto":
        mode = "direct" if _enumerable(instance, conf_cap) else "huge"
    if mode == "direct":
        return _solve_conf_ilp_direct(instance, conf_cap, stats)

    bound = proximity_override if proximity_override is not None else instance_proximity_bound(instance)
    mu_max = max(instance.multiplicities, default=0)
    fixed: dict[tuple[int, Config], int] = {}
    if bound < mu_max:
        conflp = solve_conf_lp(instance, stats)
        if not conflp.optimal:
            return NfoldSolution(SolveStatus.INFEASIBLE, (), ZERO)
        for i, cfg, value in conflp.y:
            keep = max(0, rat_floor(value) - bound)
            if keep:
                fixed[(i, cfg)] = keep

    mu_bar = list(instance.multiplicities)
    b0_bar = list(instance.b0)
    fixed_cost = ZERO
    for (i, cfg), n in fixed.items():
        mu_bar[i] -= n
        for k, v in enumerate(instance.types[i].e1_image(cfg)):
            b0_bar[k] -= n * v
        fixed_cost += n * instance.types[i].objective_value(cfg)
    reduced = HugeNfoldInstance(instance.types, tuple(mu_bar), tuple(b0_bar))

    if _enumerable(reduced, conf_cap):
        part = _solve_conf_ilp_direct(reduced, conf_cap, stats)
    elif reduced.total_bricks <= brick_cap:
        part = _solve_explicit_bricks(reduced, stats)
    else:
        raise CapacityError(
            f"reduced instance still has {reduced.total_bricks} bricks over an "
            f"unenumerable configuration space (brick cap {brick_cap})"
        )
    if not part.optimal:
        if fixed:
            raise SolverError(
                "reduced instance infeasible after proximity fixing; "
                "the supplied proximity bound is too small"
            )
        return part
    merged: dict[tuple[int, Config], int] = dict(fixed)
    for i, cfg, n in part.counts:
        merged[(i, cfg)] = merged.get((i, cfg), 0) + n
    counts = tuple(sorted((i, cfg, n) for (i, cfg), n in merged.items()))
    solution = NfoldSolution(SolveStatus.OPTIMAL, counts, part.objective + fixed_cost)
    problems = verify_nfold_solution(instance, solution)
    if problems:
        raise SolverError("post-solve verification failed: " + "; ".join(problems))
    return solution


# ---------------------------------------------------------------------------
# the MIMO -> huge N-fold reduction


def _propagate_bounds(rows, nvars, lower, upper, max_rounds=None):
    """Interval propagation over <=-rows; tightens integer bounds in place."""
    max_rounds = max_rounds if max_rounds is not None else 2 * nvars + 6
    for _ in range(max_rounds):
        changed = False
        for coeffs, rhs in rows:
            finite = ZERO
            infinite = []
            for j, a in coeffs:
                lo, up = (lower[j], upper[j]) if a > 0 else (upper[j], lower[j])
                contrib = None if lo is None else a * lo
                if contrib is None:
                    infinite.append(j)
                else:
                    finite += contrib
            if len(infinite) > 1:
                continue
            for j, a in coeffs:
                if infinite and infinite[0] != j:
                    continue
                lo = lower[j] if a > 0 else upper[j]
                mine = ZERO if lo is None else a * lo
                slack = rhs - (finite - (mine if not infinite else ZERO))
                # a * x_j <= slack
                if a > 0:
                    new_up = rat_floor(Rat(slack) / a)
                    if upper[j] is None or new_up < upper[j]:
                        upper[j] = new_up
                        changed = True
                else:
                    new_lo = -rat_floor(Rat(slack) / (-a))
                    if lower[j] is None or new_lo > lower[j]:
                        lower[j] = new_lo
                        changed = True
        if not changed:
            break


def derive_box(rows, nvars, preset=None) -> tuple[list[int], list[int]]:
    """A finite integer box containing {x : rows} (rows are <= constraints).

    Interval propagation first, exact coordinate LPs for whatever remains;
    raises UnboundedError if some coordinate is genuinely unbounded.  When
    propagation proves the polytope empty the returned box is (0, -1) on the
    crossing coordinate (an empty box).
    """
    lower: list = [None] * nvars
    upper: list = [None] * nvars
    if preset:
        for j, (lo, up) in preset.items():
            lower[j], upper[j] = lo, up
    _propagate_bounds(rows, nvars, lower, upper)
    for j in range(nvars):
        if lower[j] is not None and upper[j] is not None and lower[j] > upper[j]:
            out_lo, out_up = [0] * nvars, [0] * nvars
            out_up[j] = -1
            return out_lo, out_up
    pending = [j for j in range(nvars) if lower[j] is None or upper[j] is None]
    if pending:
        lp_rows = [
            make_row([(j, Rat(a)) for j, a in coeffs], LE, Rat(rhs)) for coeffs, rhs in rows
        ]
        for j in pending:
            for sense in (1, -1):
                if sense == 1 and upper[j] is not None:
                    continue
                if sense == -1 and lower[j] is not None:
                    continue
                objective = [ZERO] * nvars
                objective[j] = Rat(-sense)  # min -x_j == max x_j for sense=+1
                lp = make_lp(
                    nvars,
                    objective,
                    lp_rows,
                    [None if lo is None else Rat(lo) for lo in lower],
                    [None if up is None else Rat(up) for up in upper],
                )
                sol = solve_lp(lp)
                if sol.status is LpStatus.UNBOUNDED:
                    raise UnboundedError(f"polytope is unbounded in coordinate {j}")
                if sol.status is LpStatus.INFEASIBLE:
                    lower[j] = 0 if lower[j] is None else lower[j]
                    upper[j] = 0 if upper[j] is None else upper[j]
                    continue
                if sense == 1:
                    upper[j] = rat_floor(sol.x[j])
                else:
                    lower[j] = -rat_floor(-sol.x[j])
    return [int(v) for v in lower], [int(v) for v in upper]


def mimo_to_nfold(mimo) -> HugeNfoldInstance:
    """Model a MIMO instance (in its inequality representation) as a huge
    N-fold IP with r = d, s = M, t = d + D + M.

    Block i keeps its polytope rows as E2 rows padded to M of them, with M
    appended slack columns forming an identity; E1 is (I 0), so the linking
    rows add up the first d coordinates of every brick to the target vector.
    (The abstract parameter statement allows s = 2M; the construction needs
    only M rows, which is what we build.)
    """
    from .mimo import FixedCharge  # local import to avoid a module cycle

    mimo.validate()
    d = mimo.d
    m_rows = max((len(tb.rows) for tb in mimo.types), default=0)
    d_aux = max((tb.num_aux for tb in mimo.types), default=0)
    t = d + d_aux + m_rows
    e1 = tuple(
        tuple(1 if j == k else 0 for j in range(t)) for k in range(d)
    )
    types = []
    for tb in mimo.types:
        if isinstance(tb.objective, FixedCharge):
            raise InputError("fixed-charge objectives route through solve_fixed_charge")
        nv = d + tb.num_aux
        preset = {}
        if tb.objective is not None and getattr(tb.objective, "tables", None):
            for k, (lo, values) in tb.objective.tables:
                preset[k] = (lo, lo + len(values) - 1)
        rows = [(row.coeffs, row.rhs) for row in tb.rows]
        lo_x, up_x = derive_box(rows, nv, preset)
        if any(lo > up for lo, up in zip(lo_x, up_x)):
            # provably empty polytope: an unsatisfiable all-zero row
            e2 = [tuple(0 for _ in range(t)) for _ in range(max(1, m_rows))]
            types.append(
                make_brick_type(e1, e2, [0] * t, [0] * t, [1] + [0] * (len(e2) - 1))
            )
            continue
        e2 = []
        rhs = []
        lower = lo_x + [0] * (d_aux - tb.num_aux)
        upper = up_x + [0] * (d_aux - tb.num_aux)
        slack_bounds = []
        for ri in range(m_rows):
            slack_col = d + d_aux + ri
            if ri < len(tb.rows):
                row = tb.rows[ri]
                coeffs = dict(row.coeffs)
                e2.append(
                    tuple(
                        (coeffs.get(j, 0) if j < nv else 0)
                        if j < d + d_aux
                        else (1 if j == slack_col else 0)
                        for j in range(t)
                    )
                )
                rhs.append(row.rhs)
                act_lo = sum(min(a * lo_x[j], a * up_x[j]) for j, a in coeffs.items())
                slack_bounds.append((0, max(0, row.rhs - act_lo)))
            else:
                e2.append(tuple(1 if j == slack_col else 0 for j in range(t)))
                rhs.append(0)
                slack_bounds.append((0, 0))
        lower += [lo for lo, _ in slack_bounds]
        upper += [up for _, up in slack_bounds]
        objective = _extend_objective(tb.objective, d, tb.num_aux, t, lo_x, up_x)
        types.append(make_brick_type(e1, e2, lower, upper, rhs, objective))
    return make_instance(types, [tb.multiplicity for tb in mimo.types], mimo.target)


def _extend_objective(obj, d, num_aux, t, lo_x, up_x):
    from .mimo import ExtensionSeparableConvex, LinearMimoObjective

    if obj is None:
        return None
    if isinstance(obj, LinearMimoObjective):
        w = list(obj.w) + [ZERO] * (t - d)
        return linear_objective(w)
    if isinstance(obj, ExtensionSeparableConvex):
        linear = list(obj.linear) + [ZERO] * (t - d - num_aux)
        tables = {}
        for k, (lo, values) in obj.tables:
            # slice to the derived box (propagation may tighten the range)
            a = lo_x[k] - lo
            b = up_x[k] - lo
            if a < 0 or b >= len(values):
                raise InputError(f"table on coordinate {k} does not cover its box")
            tables[k] = values[a : b + 1]
        return convex_objective(linear, tables)
    raise InputError(f"unsupported objective {obj!r}")
