"""MIMO front-end tests: validation, solving, fixed charge, verification."""

import random

import pytest

from mimopt.errors import InputError, UnboundedError
from mimopt.mimo import (
    FixedCharge,
    MimoSolution,
    ext_convex_objective,
    linear_mimo_objective,
    make_mimo,
    mimo_row,
    mimo_type,
    solve_fixed_charge,
    solve_mimo,
    validate_instance,
    verify_solution,
    zero_in_type,
)
from mimopt.nfold import SolveStatus
from mimopt.rational import Rat, ZERO


def box_type(radius, objective=None, mult=1, d=1):
    rows = []
    for j in range(d):
        rows.append(mimo_row([(j, 1)], radius))
        rows.append(mimo_row([(j, -1)], 0))
    return mimo_type(0, rows, objective, mult)


class TestValidate:
    def test_parameter_report(self):
        inst = make_mimo(1, [box_type(2, mult=2)], [3])
        report = validate_instance(inst)
        assert report.d == 1 and report.tau == 1
        assert report.max_rows == 2
        assert report.max_aux == 0
        assert report.max_coefficient == 1
        assert report.total_multiplicity == 2

    def test_aux_maximum(self):
        t1 = mimo_type(0, [mimo_row([(0, 1)], 1), mimo_row([(0, -1)], 0)], None, 1)
        rows = [mimo_row([(j, 1)], 1) for j in range(4)]
        rows += [mimo_row([(j, -1)], 0) for j in range(4)]
        t2 = mimo_type(3, rows, None, 1)
        report = validate_instance(make_mimo(1, [t1, t2], [0]))
        assert report.max_aux == 3

    def test_unbounded_polytope(self):
        inst = make_mimo(1, [mimo_type(0, [mimo_row([(0, -1)], 0)], None, 1)], [1])
        with pytest.raises(UnboundedError):
            validate_instance(inst)


class TestSolve:
    def test_feasibility_example(self):
        inst = make_mimo(1, [box_type(2, mult=2)], [3])
        sol = solve_mimo(inst)
        assert sol.optimal and sol.objective == 0
        assert sum(n * x[0] for _, x, n in sol.counts) == 3

    def test_zero_target(self):
        inst = make_mimo(1, [box_type(2, mult=2)], [0])
        sol = solve_mimo(inst)
        assert sol.counts == ((0, (0,), 2),)

    def test_outside_minkowski_sum(self):
        inst = make_mimo(1, [box_type(2, mult=2)], [5])
        assert solve_mimo(inst).status is SolveStatus.INFEASIBLE

    def test_strategies_agree(self):
        inst = make_mimo(
            1, [box_type(2, linear_mimo_objective([3]), mult=2)], [3]
        )
        a = solve_mimo(inst, strategy="direct")
        b = solve_mimo(inst, strategy="huge")
        assert a.objective == b.objective == Rat(9)

    def test_exhaustive_oracle_equivalence(self):
        from mimopt.corpus import random_tiny_mimo
        from tests.oracles import brute_force_mimo

        rng = random.Random(31337)
        checked = 0
        for _ in range(40):
            inst = random_tiny_mimo(rng)
            got = solve_mimo(inst)
            want = brute_force_mimo(inst)
            if want is None:
                assert not got.optimal
            else:
                checked += 1
                assert got.optimal and got.objective == want
                assert not verify_solution(inst, got)
        assert checked >= 20

    def test_fixed_charge_routed(self):
        inst = make_mimo(1, [box_type(2, FixedCharge(1), mult=1)], [1])
        with pytest.raises(InputError):
            solve_mimo(inst)


class TestFixedCharge:
    def test_two_type_guessing(self):
        a = box_type(2, FixedCharge(1), mult=2)
        b = box_type(3, FixedCharge(5), mult=1)
        inst = make_mimo(1, [a, b], [4])
        sol = solve_fixed_charge(inst)
        assert sol.objective == Rat(2)
        assert not verify_solution(inst, sol)

    def test_zero_target_costs_nothing(self):
        a = box_type(2, FixedCharge(1), mult=2)
        inst = make_mimo(1, [a], [0])
        assert solve_fixed_charge(inst).objective == 0

    def test_type_without_zero_config(self):
        rows = [mimo_row([(0, 1)], 2), mimo_row([(0, -1)], -1)]  # 1 <= x <= 2
        inst = make_mimo(1, [mimo_type(0, rows, FixedCharge(7), 2)], [3])
        assert not zero_in_type(inst, 0)
        sol = solve_fixed_charge(inst)
        assert sol.objective == Rat(14)

    def test_penalty_scaling_invariance(self):
        a = box_type(2, FixedCharge(1), mult=2)
        b = box_type(3, FixedCharge(5), mult=1)
        base = solve_fixed_charge(make_mimo(1, [a, b], [4]))
        scaled_types = [
            box_type(2, FixedCharge(3), mult=2),
            box_type(3, FixedCharge(15), mult=1),
        ]
        scaled = solve_fixed_charge(make_mimo(1, scaled_types, [4]))
        assert scaled.objective == 3 * base.objective
        assert scaled.counts == base.counts

    def test_infeasible(self):
        a = box_type(1, FixedCharge(1), mult=1)
        assert solve_fixed_charge(make_mimo(1, [a], [9])).status is SolveStatus.INFEASIBLE


class TestVerify:
    def test_round_trip_ok(self):
        inst = make_mimo(1, [box_type(2, linear_mimo_objective([2]), mult=2)], [3])
        sol = solve_mimo(inst)
        assert verify_solution(inst, sol) == []

    def test_tampered_count(self):
        inst = make_mimo(1, [box_type(2, mult=2)], [3])
        sol = solve_mimo(inst)
        bad = MimoSolution(sol.status, tuple((i, x, n + 1) for i, x, n in sol.counts),
                           sol.objective)
        problems = verify_solution(inst, bad)
        assert any(v.kind == "multiplicity" for v in problems)

    def test_membership_violation_names_vector(self):
        inst = make_mimo(1, [box_type(2, mult=1)], [2])
        bad = MimoSolution(SolveStatus.OPTIMAL, ((0, (9,), 1),), ZERO)
        problems = verify_solution(inst, bad)
        assert any(v.kind == "membership" and "(9,)" in v.detail for v in problems)


class TestExtensionConvex:
    def test_aux_table_objective(self):
        # x in [0,3], aux y = x via rows, cost y^2; mu=2, target 4 -> 2+2: 8
        rows = [
            mimo_row([(0, 1)], 3),
            mimo_row([(0, -1)], 0),
            mimo_row([(0, 1), (1, -1)], 0),
            mimo_row([(0, -1), (1, 1)], 0),
        ]
        obj = ext_convex_objective([0, 0], {1: (0, [0, 1, 4, 9])})
        inst = make_mimo(1, [mimo_type(1, rows, obj, 2)], [4])
        sol = solve_mimo(inst)
        assert sol.objective == Rat(8)
        assert not verify_solution(inst, sol)
