"""Branch-and-bound ILP tests: examples, enumeration cross-checks, tables."""

import random

import pytest

from mimopt.errors import ConvexityError, InputError
from mimopt.kernel import (
    IlpStatus,
    brute_force_ilp,
    linearize_separable_convex,
    make_ip,
    make_lp,
    make_row,
    solve_compressed,
    solve_ilp,
    solve_ilp_lexmin,
)
from mimopt.rational import Rat, ZERO


def _box_ip(objective, rows, lower, upper, tables=None):
    n = len(objective)
    lp = make_lp(n, objective, rows, [Rat(v) for v in lower], [Rat(v) for v in upper])
    return make_ip(lp, [True] * n, tables)


def test_knapsack_example():
    # max 2x+3y s.t. x+y <= 2, x,y in {0,1,2}  ->  value 6 at (0,2)
    ip = _box_ip([-2, -3], [make_row([(0, 1), (1, 1)], "<=", 2)], [0, 0], [2, 2])
    res = solve_ilp(ip)
    assert res.objective == Rat(-6)
    assert res.x == (ZERO, Rat(2))


def test_contradictory_equalities():
    ip = _box_ip(
        [0], [make_row([(0, 1)], "==", 1), make_row([(0, 1)], "==", 2)], [0], [5]
    )
    assert solve_ilp(ip).status is IlpStatus.INFEASIBLE


def test_integral_relaxation_zero_branching():
    ip = _box_ip([1, 1], [make_row([(0, 1), (1, 1)], ">=", 2)], [0, 0], [3, 3])
    res = solve_ilp(ip)
    assert res.objective == Rat(2)
    assert res.nodes == 1  # relaxation vertex is integral: no branching


def test_enumeration_cross_check_small_boxes():
    """Every ILP over a box of at most 12 points matches exhaustive search."""
    rng = random.Random(99)
    for _ in range(120):
        n = rng.randint(1, 3)
        lower = [rng.randint(-1, 1) for _ in range(n)]
        upper = []
        budget = 12
        for j in range(n):
            width = rng.randint(0, max(0, budget - 1))
            upper.append(lower[j] + min(width, 2))
            budget //= max(1, upper[j] - lower[j] + 1)
        rows = [
            make_row(
                [(j, rng.randint(-2, 2)) for j in range(n)],
                rng.choice(["<=", "==", ">="]),
                rng.randint(-3, 3),
            )
            for _ in range(rng.randint(0, 2))
        ]
        objective = [Rat(rng.randint(-3, 3)) for _ in range(n)]
        ip = _box_ip(objective, rows, lower, upper)
        expect = brute_force_ilp(ip)
        got = solve_ilp(ip)
        assert got.status == expect.status
        if expect.optimal:
            assert got.objective == expect.objective
            assert all(row.satisfied_by(got.x) for row in rows)


def test_determinism():
    ip = _box_ip(
        [-1, -1, -1],
        [make_row([(0, 2), (1, 3), (2, 4)], "<=", 7)],
        [0, 0, 0],
        [2, 2, 2],
    )
    assert solve_ilp(ip) == solve_ilp(ip)


def test_incumbent_limit_feasibility_mode():
    ip = _box_ip([0, 0], [make_row([(0, 1), (1, 2)], "==", 3)], [0, 0], [3, 3])
    res = solve_ilp(ip, incumbent_limit=1)
    assert res.optimal
    assert res.x[0] + 2 * res.x[1] == 3


def test_lexmin_tie_break():
    ip = _box_ip([0, 0], [make_row([(0, 1), (1, 1)], "==", 2)], [0, 0], [2, 2])
    assert solve_ilp_lexmin(ip).x == (ZERO, Rat(2))


class TestConvexLinearization:
    def test_square_marginals(self):
        assert linearize_separable_convex([0, 1, 4, 9]) == (Rat(1), Rat(3), Rat(5))

    def test_linear_marginals(self):
        assert linearize_separable_convex([0, 2, 4]) == (Rat(2), Rat(2))

    def test_constant_table(self):
        assert linearize_separable_convex([5, 5, 5]) == (ZERO, ZERO)

    def test_rejects_nonconvex_with_index(self):
        with pytest.raises(ConvexityError) as err:
            linearize_separable_convex([0, 2, 3])
        assert err.value.index == 1

    def test_segment_costs_reproduce_table(self):
        """Minimum segment cost at every integer value equals the table."""
        values = [Rat(v) for v in (7, 7, 9, 13, 19)]
        for target in range(5):
            ip = _box_ip(
                [0], [make_row([(0, 1)], "==", target)], [0], [4], {0: values}
            )
            res = solve_ilp(ip)
            assert res.objective == values[target]

    def test_table_with_unbounded_variable_rejected(self):
        lp = make_lp(1, [ZERO], [], [ZERO], [None])
        with pytest.raises(InputError):
            make_ip(lp, [False], {0: [1, 2]})


def test_unbounded_integer_variable_rejected():
    lp = make_lp(1, [Rat(1)], [], [ZERO], [None])
    with pytest.raises(InputError):
        make_ip(lp, [True])


def test_compress_preserves_solutions():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(2, 5)
        lower = [rng.randint(-2, 0) for _ in range(n)]
        upper = [lower[j] + rng.randint(0, 3) for j in range(n)]
        rows = [
            make_row(
                [(j, rng.randint(-2, 2)) for j in range(n) if rng.random() < 0.7],
                rng.choice(["<=", "==", ">="]),
                rng.randint(-3, 3),
            )
            for _ in range(rng.randint(1, 4))
        ]
        objective = [Rat(rng.randint(-2, 2)) for _ in range(n)]
        ip = _box_ip(objective, rows, lower, upper)
        expect = brute_force_ilp(ip)
        got = solve_compressed(ip)
        assert got.status == expect.status
        if expect.optimal:
            assert got.objective == expect.objective
            x = got.x
            assert all(row.satisfied_by(x) for row in rows)
            assert all(
                ip.lp.lower[j] <= x[j] <= ip.lp.upper[j] for j in range(n)
            )
