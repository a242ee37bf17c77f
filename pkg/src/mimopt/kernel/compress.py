"""Exact model compression for integer programs.

Mechanical, loss-free rewrites applied when building ILPs from block models:
fixed-variable substitution, singleton-row bound tightening, slack-pattern
elimination (a cost-free variable appearing in exactly one equality row with
unit coefficient), and dropping rows already implied by the bounds.  Every
rewrite preserves the feasible set and objective exactly; ``lift`` maps a
solution of the compressed program back to the original variable space.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError
from ..rational import Rat, ZERO, is_integral, rat_ceil, rat_floor
from .ilp import IntegerProgram, make_ip
from .lp import EQ, GE, LE, make_lp, make_row


@dataclass
class CompressedProgram:
    ip: IntegerProgram | None
    keep: list[int]
    fixed: dict[int, Rat]
    eliminated: list[tuple[int, Rat, Rat, tuple[tuple[int, Rat], ...]]]
    offset: Rat
    infeasible: bool = False
    num_original: int = 0

    def lift(self, x_compact) -> tuple[Rat, ...]:
        """Map a compressed solution back to original variable order."""
        values: dict[int, Rat] = dict(self.fixed)
        for new_j, old_j in enumerate(self.keep):
            values[old_j] = x_compact[new_j]
        for old_j, coef, rhs, rest in reversed(self.eliminated):
            values[old_j] = (rhs - sum((a * values[k] for k, a in rest), ZERO)) / coef
        return tuple(values[j] for j in range(self.num_original))


def _interval(coeffs, lower, upper):
    lo = ZERO
    up = ZERO
    for j, c in coeffs.items():
        l, u = lower[j], upper[j]
        if c > 0:
            lo = None if (lo is None or l is None) else lo + c * l
            up = None if (up is None or u is None) else up + c * u
        else:
            lo = None if (lo is None or u is None) else lo + c * u
            up = None if (up is None or l is None) else up + c * l
    return lo, up


def compress_program(ip: IntegerProgram) -> CompressedProgram:
    ip.validate()
    n = ip.lp.num_vars
    lower = list(ip.lp.lower)
    upper = list(ip.lp.upper)
    integer = list(ip.integer)
    objective = list(ip.lp.objective)
    tables = dict(ip.convex_tables)
    rows: list[list] = [
        [{j: c for j, c in row.coeffs}, row.rel, row.rhs] for row in ip.lp.rows
    ]
    alive = [True] * n
    fixed: dict[int, Rat] = {}
    eliminated: list[tuple[int, Rat, Rat, tuple[tuple[int, Rat], ...]]] = []
    offset = ZERO

    def bad() -> CompressedProgram:
        return CompressedProgram(None, [], {}, [], ZERO, True, n)

    def tighten(j, lo_new=None, up_new=None) -> bool:
        changed = False
        if lo_new is not None:
            if integer[j]:
                lo_new = Rat(rat_ceil(lo_new))
            if lower[j] is None or lo_new > lower[j]:
                lower[j] = lo_new
                changed = True
        if up_new is not None:
            if integer[j]:
                up_new = Rat(rat_floor(up_new))
            if upper[j] is None or up_new < upper[j]:
                upper[j] = up_new
                changed = True
        return changed

    def substitute_fixed(j, value) -> None:
        nonlocal offset
        fixed[j] = value
        alive[j] = False
        if objective[j]:
            offset += objective[j] * value
            objective[j] = ZERO
        if j in tables:
            lo = ip.lp.lower[j]
            if not is_integral(value - lo):
                raise InputError("table variable fixed at a fractional value")
            offset += tables.pop(j)[int(value - lo)]
        for row in rows:
            if row is None:
                continue
            c = row[0].pop(j, None)
            if c:
                row[2] = row[2] - c * value

    changed = True
    while changed:
        changed = False
        for j in range(n):
            if not alive[j]:
                continue
            if lower[j] is not None and upper[j] is not None:
                if lower[j] > upper[j]:
                    return bad()
                if lower[j] == upper[j] and j not in fixed:
                    if integer[j] and not is_integral(lower[j]):
                        return bad()
                    substitute_fixed(j, lower[j])
                    changed = True
        for ri, row in enumerate(rows):
            if row is None:
                continue
            coeffs, rel, rhs = row
            if not coeffs:
                ok = (rhs >= 0) if rel == LE else (rhs <= 0) if rel == GE else (rhs == 0)
                if not ok:
                    return bad()
                rows[ri] = None
                changed = True
                continue
            if len(coeffs) == 1:
                (j, c), = coeffs.items()
                bound = rhs / c
                if rel == EQ:
                    tighten(j, bound, bound)
                elif (rel == LE) == (c > 0):
                    tighten(j, None, bound)
                else:
                    tighten(j, bound, None)
                if integer[j] and lower[j] is not None and upper[j] is not None and lower[j] > upper[j]:
                    return bad()
                rows[ri] = None
                changed = True
                continue
            lo_act, up_act = _interval(coeffs, lower, upper)
            if rel == LE:
                if up_act is not None and up_act <= rhs:
                    rows[ri] = None
                    changed = True
                    continue
                if lo_act is not None and lo_act > rhs:
                    return bad()
            elif rel == GE:
                if lo_act is not None and lo_act >= rhs:
                    rows[ri] = None
                    changed = True
                    continue
                if up_act is not None and up_act < rhs:
                    return bad()
            else:
                if lo_act is not None and lo_act > rhs:
                    return bad()
                if up_act is not None and up_act < rhs:
                    return bad()
        # slack-pattern elimination: cost-free var in exactly one equality row
        # (one elimination per pass: appending replacement rows invalidates
        # the occurrence index)
        seen: dict[int, list[int]] = {}
        for ri, row in enumerate(rows):
            if row is None:
                continue
            for j in row[0]:
                seen.setdefault(j, []).append(ri)
        for j in range(n):
            if not alive[j] or objective[j] or j in tables:
                continue
            hits = seen.get(j, ())
            if len(hits) != 1:
                continue
            ri = hits[0]
            row = rows[ri]
            if row is None or row[1] != EQ:
                continue
            coeffs, _, rhs = row
            c = coeffs[j]
            if integer[j]:
                if abs(c) != 1 or not is_integral(rhs):
                    continue
                if any(not integer[k] or not is_integral(a) for k, a in coeffs.items() if k != j):
                    continue
            rest = tuple(sorted((k, a) for k, a in coeffs.items() if k != j))
            eliminated.append((j, c, rhs, rest))
            alive[j] = False
            rows[ri] = None
            # lo <= (rhs - rest)/c <= up  becomes two-sided bounds on rest
            lo, up = lower[j], upper[j]
            if c > 0:
                hi_rhs = None if lo is None else rhs - c * lo
                lo_rhs = None if up is None else rhs - c * up
            else:
                hi_rhs = None if up is None else rhs - c * up
                lo_rhs = None if lo is None else rhs - c * lo
            if hi_rhs is not None:
                rows.append([dict(rest), LE, hi_rhs])
            if lo_rhs is not None:
                rows.append([dict(rest), GE, lo_rhs])
            changed = True
            break

    keep = [j for j in range(n) if alive[j]]
    index_of = {old: new for new, old in enumerate(keep)}
    out_rows = []
    for row in rows:
        if row is None:
            continue
        coeffs, rel, rhs = row
        out_rows.append(make_row([(index_of[j], c) for j, c in coeffs.items()], rel, rhs))
    out_tables = {}
    for j, values in tables.items():
        lo0 = ip.lp.lower[j]
        a = int(lower[j] - lo0)
        b = int(upper[j] - lo0)
        out_tables[index_of[j]] = values[a : b + 1]
    lp = make_lp(
        len(keep),
        [objective[j] for j in keep],
        out_rows,
        [lower[j] for j in keep],
        [upper[j] for j in keep],
    )
    out = make_ip(lp, [integer[j] for j in keep], out_tables)
    return CompressedProgram(out, keep, fixed, eliminated, offset, False, n)


def solve_compressed(ip: IntegerProgram, incumbent_limit: int | None = None):
    """Compress, solve, and lift; returns (IlpSolution-with-original-x)."""
    from .ilp import IlpSolution, IlpStatus, solve_ilp

    comp = compress_program(ip)
    if comp.infeasible:
        return IlpSolution(IlpStatus.INFEASIBLE, (), ZERO, 0)
    res = solve_ilp(comp.ip, incumbent_limit=incumbent_limit)
    if not res.optimal:
        return res
    x = comp.lift(res.x)
    return IlpSolution(IlpStatus.OPTIMAL, x, res.objective + comp.offset, res.nodes)
