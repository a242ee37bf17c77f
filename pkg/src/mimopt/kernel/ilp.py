"""Exact integer programming by branch-and-bound on LP relaxations.

Deterministic by construction: depth-first search, floor branch first,
branching on the lowest-index integer variable with a fractional relaxation
value, incumbents replaced only on strict improvement.

Separable convex cost tables enter through delta-expansion: a variable x with
table v[0..u-l] contributes v[0] plus segment variables d_k in [0,1] with
marginal costs v[k+1]-v[k]; because the marginals are nondecreasing, the LP
relaxation equals the convex envelope and is exact at integer points.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import ConvexityError, InputError, UnboundedError
from ..rational import Rat, ZERO, is_integral, rat, rat_ceil, rat_floor
from .lp import LinearProgram, LpStatus, make_lp, make_row, solve_lp


@dataclass(frozen=True)
class IntegerProgram:
    """An LP plus integrality flags and optional convex cost tables.

    ``convex_tables[j] = (values...)`` gives the cost of variable j at each
    integer point of [lower[j], upper[j]]; first differences must be
    nondecreasing.  Every integer variable needs finite bounds.
    """

    lp: LinearProgram
    integer: tuple[bool, ...]
    convex_tables: tuple[tuple[int, tuple[Rat, ...]], ...] = ()

    def validate(self) -> None:
        self.lp.validate()
        if len(self.integer) != self.lp.num_vars:
            raise InputError("integrality flag length mismatch")
        for j, flag in enumerate(self.integer):
            if flag and (self.lp.lower[j] is None or self.lp.upper[j] is None):
                raise InputError(f"integer variable {j} lacks finite bounds")
        for j, values in self.convex_tables:
            lo, up = self.lp.lower[j], self.lp.upper[j]
            if lo is None or up is None:
                raise InputError(f"table variable {j} lacks finite bounds")
            if not is_integral(lo) or not is_integral(up):
                raise InputError(f"table variable {j} needs integer bounds")
            if len(values) != int(up - lo) + 1:
                raise InputError(f"table for variable {j} has wrong length")
            linearize_separable_convex(values)  # raises on non-convexity


def make_ip(lp: LinearProgram, integer, convex_tables=None) -> IntegerProgram:
    tables = tuple(
        sorted((j, tuple(rat(v) for v in vals)) for j, vals in (convex_tables or {}).items())
    )
    ip = IntegerProgram(lp=lp, integer=tuple(bool(f) for f in integer), convex_tables=tables)
    ip.validate()
    return ip


def linearize_separable_convex(values) -> tuple[Rat, ...]:
    """Marginal costs of the delta-expansion of a convex value table.

    Returns (values[1]-values[0], values[2]-values[1], ...).  Raises
    ConvexityError naming the first index whose marginal decreases.
    """
    vals = [rat(v) for v in values]
    if not vals:
        raise InputError("empty value table")
    marginals = [vals[k + 1] - vals[k] for k in range(len(vals) - 1)]
    for k in range(1, len(marginals)):
        if marginals[k] < marginals[k - 1]:
            raise ConvexityError(f"value table is not convex at index {k}", k)
    return tuple(marginals)


class IlpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class IlpSolution:
    status: IlpStatus
    x: tuple[Rat, ...]
    objective: Rat
    nodes: int

    @property
    def optimal(self) -> bool:
        return self.status is IlpStatus.OPTIMAL


def _expand_tables(ip: IntegerProgram) -> tuple[LinearProgram, Rat]:
    """Append delta-expansion segments for every table variable."""
    if not ip.convex_tables:
        return ip.lp, ZERO
    lp = ip.lp
    objective = list(lp.objective)
    lower = list(lp.lower)
    upper = list(lp.upper)
    rows = list(lp.rows)
    offset = ZERO
    one = Rat(1)
    for j, values in ip.convex_tables:
        offset += values[0]
        marginals = linearize_separable_convex(values)
        if not marginals:
            continue
        first = len(lower)
        for m in marginals:
            objective.append(m)
            lower.append(ZERO)
            upper.append(one)
        # x_j = lower_j + sum(deltas)
        coeffs = [(j, one)] + [(first + k, -one) for k in range(len(marginals))]
        rows.append(make_row(coeffs, "==", lp.lower[j]))
    expanded = make_lp(len(lower), objective, rows, lower, upper)
    return expanded, offset


def solve_ilp(ip: IntegerProgram, incumbent_limit: int | None = None) -> IlpSolution:
    """Exact branch-and-bound minimization.

    With ``incumbent_limit=k`` the search stops after the k-th incumbent; use
    k=1 for pure feasibility questions (any integer point is optimal when the
    objective is constant).
    """
    ip.validate()
    base_lp, offset = _expand_tables(ip)
    n = ip.lp.num_vars
    int_vars = [j for j in range(n) if ip.integer[j]]

    incumbent: tuple[Rat, tuple[Rat, ...]] | None = None
    found = 0
    nodes = 0
    stack: list[tuple[tuple, tuple]] = [(base_lp.lower, base_lp.upper)]
    while stack:
        lower, upper = stack.pop()
        nodes += 1
        lp = LinearProgram(base_lp.num_vars, base_lp.objective, base_lp.rows, lower, upper)
        rel = solve_lp(lp)
        if rel.status is LpStatus.INFEASIBLE:
            continue
        if rel.status is LpStatus.UNBOUNDED:
            raise UnboundedError("ILP relaxation is unbounded; box every variable")
        if incumbent is not None and rel.objective >= incumbent[0]:
            continue
        branch = next((j for j in int_vars if not is_integral(rel.x[j])), None)
        if branch is None:
            incumbent = (rel.objective, rel.x[:n])
            found += 1
            if incumbent_limit is not None and found >= incumbent_limit:
                break
            continue
        v = rel.x[branch]
        lo_up = list(upper)
        lo_up[branch] = Rat(rat_floor(v))
        hi_lo = list(lower)
        hi_lo[branch] = Rat(rat_ceil(v))
        # push ceil branch first so the floor branch is explored first
        stack.append((tuple(hi_lo), upper))
        stack.append((lower, tuple(lo_up)))
    if incumbent is None:
        return IlpSolution(IlpStatus.INFEASIBLE, (), ZERO, nodes)
    return IlpSolution(IlpStatus.OPTIMAL, incumbent[1], incumbent[0] + offset, nodes)


def solve_ilp_lexmin(ip: IntegerProgram, coords: list[int] | None = None) -> IlpSolution:
    """Optimal solution that is lexicographically smallest on ``coords``.

    Solves once for the optimal value, then fixes coordinates one by one with
    the objective pinned to that value (the delta-expanded cost is linear, so
    the pin is a single equality row).
    """
    first = solve_ilp(ip)
    if not first.optimal:
        return first
    target = first.objective
    base_lp, offset = _expand_tables(ip)
    pin = make_row(
        [(j, c) for j, c in enumerate(base_lp.objective) if c], "==", target - offset
    )
    rows = base_lp.rows + (pin,)
    lower = list(base_lp.lower)
    upper = list(base_lp.upper)
    n = ip.lp.num_vars
    coords = list(range(n)) if coords is None else coords
    nodes = first.nodes
    x = list(first.x)
    for k in coords:
        probe = make_ip(
            make_lp(
                base_lp.num_vars,
                [Rat(1) if j == k else ZERO for j in range(base_lp.num_vars)],
                rows,
                lower,
                upper,
            ),
            list(ip.integer) + [False] * (base_lp.num_vars - n),
        )
        res = solve_ilp(probe)
        if not res.optimal:  # cannot happen: x is feasible for the pinned system
            raise InputError("internal error: lexmin refinement infeasible")
        nodes += res.nodes
        x = list(res.x)
        lower[k] = res.objective
        upper[k] = res.objective
    return IlpSolution(IlpStatus.OPTIMAL, tuple(x[:n]), target, nodes)


def brute_force_ilp(ip: IntegerProgram, cap: int = 1_000_000) -> IlpSolution:
    """Independent oracle: enumerate the integer box and take the best point.

    Only meaningful when every variable is integer; intended for tests on
    instances with a tiny number of lattice points.
    """
    ip.validate()
    n = ip.lp.num_vars
    if not all(ip.integer):
        raise InputError("brute force needs a pure-integer program")
    lows = [int(ip.lp.lower[j]) for j in range(n)]
    ups = [int(ip.lp.upper[j]) for j in range(n)]
    total = 1
    for lo, up in zip(lows, ups):
        total *= max(0, up - lo + 1)
        if total > cap:
            raise InputError("brute-force box too large")
    tables = dict(ip.convex_tables)
    best: tuple[Rat, tuple[Rat, ...]] | None = None

    def rec(j: int, point: list[int]):
        nonlocal best
        if j == n:
            x = tuple(Rat(v) for v in point)
            for row in ip.lp.rows:
                if not row.satisfied_by(x):
                    return
            obj = sum((ip.lp.objective[k] * x[k] for k in range(n)), ZERO)
            for k, values in tables.items():
                obj += values[point[k] - lows[k]]
            if best is None or obj < best[0] or (obj == best[0] and x < best[1]):
                best = (obj, x)
            return
        for v in range(lows[j], ups[j] + 1):
            point.append(v)
            rec(j + 1, point)
            point.pop()

    rec(0, [])
    if best is None:
        return IlpSolution(IlpStatus.INFEASIBLE, (), ZERO, total)
    return IlpSolution(IlpStatus.OPTIMAL, best[1], best[0], total)
