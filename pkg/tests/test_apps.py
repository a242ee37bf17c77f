"""Packing and surfing front-end tests."""

import itertools
import random

import pytest

from mimopt.apps import (
    binpacking_min_bins,
    cardinality_bp_to_mimo,
    cutting_stock_to_mimo,
    knapsack_to_mimo,
    make_cutting_stock,
    make_knapsack,
    make_surfing,
    solve_cutting_stock,
    solve_knapsack,
    solve_surfing,
)
from mimopt.errors import InputError
from mimopt.mimo import verify_solution
from mimopt.nfold import SolveStatus
from mimopt.rational import Rat


class TestKnapsack:
    def test_feasible_example(self):
        ki = make_knapsack([(2,), (1,)], [2, 2], [(3,)], [2])
        sol = solve_knapsack(ki)
        assert sol.optimal
        assert not verify_solution(knapsack_to_mimo(ki), sol)

    def test_oversize_item_infeasible(self):
        ki = make_knapsack([(5,)], [1], [(3,), (4,)], [1, 1])
        assert solve_knapsack(ki).status is SolveStatus.INFEASIBLE

    def test_empty_items(self):
        ki = make_knapsack([(2,)], [0], [(3,)], [2])
        sol = solve_knapsack(ki)
        assert sol.optimal

    def test_aux_dimension_zero(self):
        ki = make_knapsack([(2, 1)], [1], [(3, 2)], [1])
        inst = knapsack_to_mimo(ki)
        assert all(tb.num_aux == 0 for tb in inst.types)


class TestBinPacking:
    def test_example(self):
        assert binpacking_min_bins([2, 1], [2, 2], 3)[0] == 2

    def test_items_equal_capacity(self):
        assert binpacking_min_bins([3], [4], 3)[0] == 4

    def test_empty(self):
        assert binpacking_min_bins([2], [0], 3)[0] == 0

    def test_oversize_rejected(self):
        with pytest.raises(InputError):
            binpacking_min_bins([4], [1], 3)

    def test_volume_lower_bound_random(self):
        rng = random.Random(17)
        for _ in range(15):
            sizes = sorted({rng.randint(1, 4) for _ in range(rng.randint(1, 3))})
            counts = [rng.randint(0, 3) for _ in sizes]
            cap = max(sizes) + rng.randint(0, 3)
            bins, _ = binpacking_min_bins(sizes, counts, cap)
            volume = sum(s * n for s, n in zip(sizes, counts))
            assert bins >= -(-volume // cap) if volume else bins == 0

    def test_feasibility_monotone_in_bins(self):
        sizes, counts, cap = [3, 2], [2, 3], 4
        bins, _ = binpacking_min_bins(sizes, counts, cap)
        ki = make_knapsack([(s,) for s in sizes], counts, [(cap,)], [bins + 1])
        assert solve_knapsack(ki).optimal


class TestCardinalityBp:
    def test_limit_one(self):
        assert binpacking_min_bins([1], [4], 9, limit=1)[0] == 4

    def test_everything_in_one_bin(self):
        assert binpacking_min_bins([1], [3], 9, limit=5)[0] == 1

    def test_count_bound(self):
        assert binpacking_min_bins([1], [3], 3, limit=2)[0] == 2

    def test_second_dimension_encoding(self):
        inst = cardinality_bp_to_mimo([2, 1], [1, 1], 3, 2, 2)
        # two knapsack rows (size, cardinality) plus nonnegativity
        assert len(inst.types[0].rows) == 2 + 2


class TestCuttingStock:
    def test_single_roll(self):
        cs = make_cutting_stock([2, 1], [1, 1], [3], [1])
        assert solve_cutting_stock(cs).objective == Rat(1)

    def test_cheap_vs_expensive(self):
        cs = make_cutting_stock([2], [3], [2, 6], [1, 2])
        assert solve_cutting_stock(cs).objective == Rat(2)

    def test_no_items(self):
        cs = make_cutting_stock([2], [0], [3], [1])
        assert solve_cutting_stock(cs).objective == 0

    def test_matches_exhaustive_usage_enumeration(self):
        rng = random.Random(23)
        for _ in range(6):
            sizes = [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
            counts = [rng.randint(0, 3) for _ in sizes]
            if sum(counts) == 0 or sum(counts) > 6:
                continue
            lengths = [rng.randint(max(sizes), 6) for _ in range(rng.randint(1, 3))]
            costs = [rng.randint(1, 4) for _ in lengths]
            cs = make_cutting_stock(sizes, counts, lengths, costs)
            got = solve_cutting_stock(cs).objective
            want = _exhaustive_cutting_stock(sizes, counts, lengths, costs)
            assert got == want

    def test_fixed_charge_type_shape(self):
        cs = make_cutting_stock([2], [3], [5], [2])
        inst = cutting_stock_to_mimo(cs)
        assert inst.types[0].multiplicity == 3  # one potential roll per item


def _exhaustive_cutting_stock(sizes, counts, lengths, costs):
    """Enumerate roll-usage vectors; per usage, check packability greedily by
    full assignment enumeration (tiny instances only)."""
    items = []
    for s, n in zip(sizes, counts):
        items.extend([s] * n)
    best = None
    max_rolls = len(items)
    for usage in itertools.product(range(max_rolls + 1), repeat=len(lengths)):
        cost = sum(u * c for u, c in zip(usage, costs))
        if best is not None and cost >= best:
            continue
        rolls = []
        for u, length in zip(usage, lengths):
            rolls.extend([length] * u)
        if _packable(items, rolls):
            best = cost
    return Rat(best) if best is not None else None


def _packable(items, rolls):
    if not items:
        return True
    if not rolls:
        return False
    for assignment in itertools.product(range(len(rolls)), repeat=len(items)):
        loads = [0] * len(rolls)
        for item, bin_idx in zip(items, assignment):
            loads[bin_idx] += item
        if all(load <= cap for load, cap in zip(loads, rolls)):
            return True
    return False


class TestSurfing:
    def test_forced_assignment(self):
        si = make_surfing([[1]], [[1]], [[1]], [[[1]]], [1])
        assert solve_surfing(si).objective == Rat(1)

    def test_cheap_server_wins(self):
        si = make_surfing([[5], [5]], [[2]], [[9, 9]], [[[1, 3]]], [2])
        assert solve_surfing(si).objective == Rat(4)

    def test_zero_demand(self):
        si = make_surfing([[2]], [[0]], [[3]], [[[1]]], [2])
        assert solve_surfing(si).objective == 0

    def test_demand_exceeding_supply_rejected_early(self):
        si = make_surfing([[1]], [[2]], [[9]], [[[1]]], [1])
        with pytest.raises(InputError):
            solve_surfing(si)

    def test_flow_oracle_equivalence(self):
        from tests.oracles import surfing_flow_value

        rng = random.Random(41)
        checked = 0
        while checked < 12:
            dprime = rng.randint(1, 2)
            dsecond = rng.randint(1, 2)
            tau = rng.randint(1, 2)
            mults = [rng.randint(1, 2) for _ in range(tau)]
            if sum(mults) > 4:
                continue
            demands = [[rng.randint(0, 2) for _ in range(dprime)] for _ in range(tau)]
            # keep per-surfer capacities non-binding across commodities so the
            # per-commodity flow decomposition is exact
            caps = [
                [sum(demands[i]) + rng.randint(0, 2) for _ in range(dsecond)]
                for i in range(tau)
            ]
            if dprime == 1:
                caps = [[rng.randint(0, 3) for _ in range(dsecond)] for _ in range(tau)]
            costs = [
                [[rng.randint(0, 4) for _ in range(dsecond)] for _ in range(dprime)]
                for _ in range(tau)
            ]
            need = [
                sum(demands[i][j] * mults[i] for i in range(tau)) for j in range(dprime)
            ]
            supplies = [
                [rng.randint(0, 3) for _ in range(dprime)] for _ in range(dsecond)
            ]
            for j in range(dprime):
                total = sum(s[j] for s in supplies)
                if total < need[j]:
                    supplies[0][j] += need[j] - total
            si = make_surfing(supplies, demands, caps, costs, mults)
            from tests.oracles import surfing_flow_value

            want = surfing_flow_value(si)
            got = solve_surfing(si)
            checked += 1
            if want is None:
                assert not got.optimal
            else:
                assert got.optimal and got.objective == want
