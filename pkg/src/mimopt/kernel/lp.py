"""Exact rational linear programming.

A bounded-variable two-phase primal simplex over sparse rows.  All arithmetic
is in ``Rat`` (never floats), pivoting uses Bland's rule, so solves are exact,
cycle-free, and bit-for-bit deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import InputError
from ..rational import Rat, ZERO, rat

LE, EQ, GE = "<=", "==", ">="
_RELATIONS = (LE, EQ, GE)


@dataclass(frozen=True)
class Row:
    """One linear constraint: sum(coef * x[idx]) REL rhs, coeffs sparse."""

    coeffs: tuple[tuple[int, Rat], ...]
    rel: str
    rhs: Rat

    def activity(self, x) -> Rat:
        return sum((c * x[j] for j, c in self.coeffs), ZERO)

    def satisfied_by(self, x) -> bool:
        a = self.activity(x)
        if self.rel == LE:
            return a <= self.rhs
        if self.rel == GE:
            return a >= self.rhs
        return a == self.rhs


def make_row(coeffs, rel, rhs) -> Row:
    """Build a Row from {idx: coef} / [(idx, coef)...]; drops zeros, merges dups."""
    if rel not in _RELATIONS:
        raise InputError(f"unknown relation {rel!r}")
    acc: dict[int, Rat] = {}
    items = coeffs.items() if isinstance(coeffs, dict) else coeffs
    for j, c in items:
        c = rat(c)
        if j < 0:
            raise InputError("negative variable index")
        if c:
            acc[j] = acc.get(j, ZERO) + c
    pruned = tuple(sorted((j, c) for j, c in acc.items() if c))
    return Row(pruned, rel, rat(rhs))


@dataclass(frozen=True)
class LinearProgram:
    """min objective . x  subject to rows and per-variable bounds.

    ``lower[j]``/``upper[j]`` are Rats or None (unbounded on that side).
    """

    num_vars: int
    objective: tuple[Rat, ...]
    rows: tuple[Row, ...]
    lower: tuple
    upper: tuple

    def validate(self) -> None:
        n = self.num_vars
        if len(self.objective) != n or len(self.lower) != n or len(self.upper) != n:
            raise InputError("objective/bounds length mismatch")
        for row in self.rows:
            for j, _ in row.coeffs:
                if j >= n:
                    raise InputError(f"row references variable {j} >= num_vars {n}")
        for j in range(n):
            lo, up = self.lower[j], self.upper[j]
            if lo is not None and up is not None and lo > up:
                raise InputError(f"variable {j} has lower {lo} > upper {up}")


def make_lp(num_vars, objective, rows, lower, upper) -> LinearProgram:
    lp = LinearProgram(
        num_vars=num_vars,
        objective=tuple(rat(c) for c in objective),
        rows=tuple(rows),
        lower=tuple(None if lo is None else rat(lo) for lo in lower),
        upper=tuple(None if up is None else rat(up) for up in upper),
    )
    lp.validate()
    return lp


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    x: tuple[Rat, ...]
    objective: Rat
    duals: tuple[Rat, ...]
    basis: tuple[int, ...]
    dual_objective: Rat
    pivots: int

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


_EMPTY = ()


def _sub_scaled(target: dict, factor, source: dict) -> None:
    """target -= factor * source, dropping exact zeros (keeps rows sparse)."""
    for j, v in source.items():
        new = target.get(j, ZERO) - factor * v
        if new:
            target[j] = new
        else:
            target.pop(j, None)


class _Simplex:
    """Bounded-variable simplex state over the standardized equality system."""

    def __init__(self, lp: LinearProgram):
        lp.validate()
        self.lp = lp
        n = lp.num_vars
        lower = list(lp.lower)
        upper = list(lp.upper)
        cost = list(lp.objective)

        # slacks: <= gets +1 slack in [0, inf); >= gets +1 slack in (-inf, 0]
        rows_std: list[dict[int, Rat]] = []
        rhs: list[Rat] = []
        self.slack_of_row: list[int | None] = []
        for row in lp.rows:
            coeffs = {j: c for j, c in row.coeffs}
            if row.rel != EQ:
                s = len(lower)
                coeffs[s] = Rat(1)
                if row.rel == LE:
                    lower.append(ZERO)
                    upper.append(None)
                else:
                    lower.append(None)
                    upper.append(ZERO)
                cost.append(ZERO)
                self.slack_of_row.append(s)
            else:
                self.slack_of_row.append(None)
            rows_std.append(coeffs)
            rhs.append(row.rhs)

        # initial nonbasic point: finite bound if any, else 0 (free)
        self.status: list[str] = []
        for j in range(len(lower)):
            if lower[j] is not None:
                self.status.append("L")
            elif upper[j] is not None:
                self.status.append("U")
            else:
                self.status.append("F")

        def start_value(j: int) -> Rat:
            st = self.status[j]
            if st == "L":
                return lower[j]
            if st == "U":
                return upper[j]
            return ZERO

        # one artificial per row, column +e_i, signed bounds to absorb residual
        self.art_of_row: list[int] = []
        phase1_cost: dict[int, Rat] = {}
        beta: list[Rat] = []
        for i, coeffs in enumerate(rows_std):
            residual = rhs[i] - sum(
                (c * start_value(j) for j, c in coeffs.items()), ZERO
            )
            a = len(lower)
            coeffs[a] = Rat(1)
            if residual >= 0:
                lower.append(ZERO)
                upper.append(None)
                phase1_cost[a] = Rat(1)
            else:
                lower.append(None)
                upper.append(ZERO)
                phase1_cost[a] = Rat(-1)
            cost.append(ZERO)
            self.status.append("B")
            self.art_of_row.append(a)
            beta.append(residual)

        self.lower = lower
        self.upper = upper
        self.cost = cost
        self.ncols = len(lower)
        self.nstruct = n
        self.tab = rows_std
        self.beta = beta
        self.basis = list(self.art_of_row)
        self.in_basis = [False] * self.ncols
        for j in self.basis:
            self.in_basis[j] = True
        self.phase1_cost = phase1_cost
        self.pivots = 0

    def _nb_value(self, j) -> Rat:
        st = self.status[j]
        if st == "L":
            return self.lower[j]
        if st == "U":
            return self.upper[j]
        return ZERO

    def _build_zrow(self, cost) -> dict[int, Rat]:
        zrow: dict[int, Rat] = {}
        for j in range(self.ncols):
            c = cost.get(j, ZERO) if isinstance(cost, dict) else cost[j]
            if c:
                zrow[j] = c
        for i, bj in enumerate(self.basis):
            cb = cost.get(bj, ZERO) if isinstance(cost, dict) else cost[bj]
            if cb:
                _sub_scaled(zrow, cb, self.tab[i])
        return zrow

    def _entering(self, zrow) -> tuple[int, int] | None:
        """Bland's rule: the smallest eligible index (anti-cycling).

        Only columns with a nonzero reduced cost can be eligible, so the scan
        runs over the sparse reduced-cost row.
        """
        best = None
        for j, d in zrow.items():
            if self.in_basis[j]:
                continue
            if best is not None and j >= best[0]:
                continue
            lo, up = self.lower[j], self.upper[j]
            if lo is not None and up is not None and lo == up:
                continue  # fixed
            st = self.status[j]
            if st == "L":
                if not d < 0:
                    continue
                direction = 1
            elif st == "U":
                if not d > 0:
                    continue
                direction = -1
            else:  # free at 0
                direction = 1 if d < 0 else -1
            best = (j, direction)
        return best

    def _optimize(self, zrow) -> str:
        while True:
            pick = self._entering(zrow)
            if pick is None:
                return "optimal"
            j, direction = pick
            # ratio test
            best_t = None
            leave_row = -1  # -1 = bound flip
            leave_to = ""
            lo, up = self.lower[j], self.upper[j]
            if lo is not None and up is not None:
                best_t = up - lo
            column = [(i, row[j]) for i, row in enumerate(self.tab) if j in row]
            for i, a in column:
                delta = -a * direction  # basic value change per unit step
                bj = self.basis[i]
                if delta > 0:
                    if self.upper[bj] is None:
                        continue
                    cap = (self.upper[bj] - self.beta[i]) / delta
                    to = "U"
                else:
                    if self.lower[bj] is None:
                        continue
                    cap = (self.beta[i] - self.lower[bj]) / (-delta)
                    to = "L"
                if (
                    best_t is None
                    or cap < best_t
                    or (cap == best_t and (leave_row == -1 or bj < self.basis[leave_row]))
                ):
                    best_t, leave_row, leave_to = cap, i, to
            if best_t is None:
                return "unbounded"
            self.pivots += 1
            if leave_row == -1:
                # bound flip: j moves across its span, basis unchanged
                for i, a in column:
                    self.beta[i] -= a * direction * best_t
                self.status[j] = "U" if self.status[j] == "L" else "L"
                continue
            new_val = self._nb_value(j) + direction * best_t
            for i, a in column:
                if i != leave_row:
                    self.beta[i] -= a * direction * best_t
            leaving = self.basis[leave_row]
            prow = self.tab[leave_row]
            piv = prow[j]
            prow = {k: v / piv for k, v in prow.items()}
            self.tab[leave_row] = prow
            self.basis[leave_row] = j
            self.beta[leave_row] = new_val
            self.in_basis[j] = True
            self.in_basis[leaving] = False
            self.status[j] = "B"
            self.status[leaving] = leave_to
            for i, row in enumerate(self.tab):
                if i == leave_row:
                    continue
                a = row.get(j)
                if a:
                    _sub_scaled(row, a, prow)  # zeroes row[j] exactly
            dj = zrow.get(j)
            if dj:
                _sub_scaled(zrow, dj, prow)

    def current_x(self) -> list[Rat]:
        x = [ZERO] * self.ncols
        for j in range(self.ncols):
            if not self.in_basis[j]:
                x[j] = self._nb_value(j)
        for i, bj in enumerate(self.basis):
            x[bj] = self.beta[i]
        return x

    def solve(self) -> LpSolution:
        zrow = self._build_zrow(self.phase1_cost)
        outcome = self._optimize(zrow)
        if outcome == "unbounded":  # phase-1 objective is bounded below by 0
            raise InputError("internal error: unbounded phase-1")
        x = self.current_x()
        infeas = sum(
            (abs(x[a]) for a in self.art_of_row),
            ZERO,
        )
        if infeas != 0:
            return LpSolution(
                LpStatus.INFEASIBLE, _EMPTY, ZERO, _EMPTY, _EMPTY, ZERO, self.pivots
            )
        # pin artificials at 0 and optimize the true cost
        for a in self.art_of_row:
            self.lower[a] = ZERO
            self.upper[a] = ZERO
            if not self.in_basis[a]:
                self.status[a] = "L"
        zrow = self._build_zrow(self.cost)
        outcome = self._optimize(zrow)
        if outcome == "unbounded":
            return LpSolution(
                LpStatus.UNBOUNDED, _EMPTY, ZERO, _EMPTY, _EMPTY, ZERO, self.pivots
            )
        x = self.current_x()
        obj = sum((self.cost[j] * x[j] for j in range(self.ncols) if self.cost[j]), ZERO)
        duals = tuple(-zrow.get(a, ZERO) for a in self.art_of_row)
        # dual objective: y.b plus reduced-cost contributions of bound-tight vars
        dual_obj = sum((duals[i] * self.lp.rows[i].rhs for i in range(len(duals))), ZERO)
        art_set = set(self.art_of_row)
        for j in range(self.ncols):
            if j in art_set or self.in_basis[j]:
                continue
            d = zrow.get(j, ZERO)
            if d:
                dual_obj += d * self._nb_value(j)
        xs = tuple(x[: self.nstruct])
        basis = tuple(sorted(self.basis))
        return LpSolution(LpStatus.OPTIMAL, xs, obj, duals, basis, dual_obj, self.pivots)


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Exact LP solve.

    Returns a basic optimal solution with exact duals; strong duality
    (``objective == dual_objective``) holds as a rational identity whenever the
    status is OPTIMAL.
    """
    return _Simplex(lp).solve()


def check_lp_solution(lp: LinearProgram, sol: LpSolution) -> list[str]:
    """Exact feasibility audit of an OPTIMAL solution; returns violations."""
    problems = []
    if not sol.optimal:
        return ["solution is not optimal"]
    x = sol.x
    for i, row in enumerate(lp.rows):
        if not row.satisfied_by(x):
            problems.append(f"row {i} violated")
    for j in range(lp.num_vars):
        if lp.lower[j] is not None and x[j] < lp.lower[j]:
            problems.append(f"x{j} below lower bound")
        if lp.upper[j] is not None and x[j] > lp.upper[j]:
            problems.append(f"x{j} above upper bound")
    if sol.objective != sol.dual_objective:
        problems.append("strong duality violated")
    return problems
