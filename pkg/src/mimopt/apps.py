"""Packing and surfing front-ends reducing to MIMO.

Multiple knapsack (vector bin packing) as a feasibility decomposition, bin
packing by binary search on the bin count, cardinality-constrained bin
packing through a second dimension, cutting stock as a fixed-charge instance,
and surfing (many surfer types buying commodities from servers) as a linear
MIMO over commodity-server coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .mimo import (
    FixedCharge,
    MimoInstance,
    MimoSolution,
    linear_mimo_objective,
    make_mimo,
    mimo_row,
    mimo_type,
    solve_fixed_charge,
    solve_mimo,
)
from .nfold import SolveStatus
from .rational import Rat, ZERO
from .stats import SolveStats


@dataclass(frozen=True)
class KnapsackInstance:
    item_dim: int
    item_sizes: tuple[tuple[int, ...], ...]  # per item type, a vector
    item_counts: tuple[int, ...]
    capacities: tuple[tuple[int, ...], ...]  # per knapsack type
    knapsack_counts: tuple[int, ...]

    def validate(self) -> None:
        if self.item_dim < 1:
            raise InputError("item dimension must be >= 1")
        for s in self.item_sizes:
            if len(s) != self.item_dim or any(v < 0 for v in s):
                raise InputError("bad item size vector")
        for b in self.capacities:
            if len(b) != self.item_dim or any(v < 0 for v in b):
                raise InputError("bad capacity vector")
        if len(self.item_counts) != len(self.item_sizes):
            raise InputError("item count mismatch")
        if len(self.knapsack_counts) != len(self.capacities):
            raise InputError("knapsack count mismatch")
        if any(n < 0 for n in self.item_counts + self.knapsack_counts):
            raise InputError("negative multiplicity")


def make_knapsack(item_sizes, item_counts, capacities, knapsack_counts) -> KnapsackInstance:
    sizes = tuple(tuple(int(v) for v in s) for s in item_sizes)
    caps = tuple(tuple(int(v) for v in b) for b in capacities)
    inst = KnapsackInstance(
        len(sizes[0]) if sizes else 1,
        sizes,
        tuple(int(n) for n in item_counts),
        caps,
        tuple(int(n) for n in knapsack_counts),
    )
    inst.validate()
    return inst


def knapsack_to_mimo(inst: KnapsackInstance) -> MimoInstance:
    """Feasibility MIMO: one type per knapsack type, no auxiliaries."""
    inst.validate()
    d = len(inst.item_sizes)
    types = []
    for cap, mult in zip(inst.capacities, inst.knapsack_counts):
        rows = []
        for dim in range(inst.item_dim):
            coeffs = [(j, inst.item_sizes[j][dim]) for j in range(d)]
            rows.append(mimo_row(coeffs, cap[dim]))
        for j in range(d):
            rows.append(mimo_row([(j, -1)], 0))
        types.append(mimo_type(0, rows, None, mult))
    return make_mimo(d, types, inst.item_counts)


def solve_knapsack(inst: KnapsackInstance, stats: SolveStats | None = None) -> MimoSolution:
    return solve_mimo(knapsack_to_mimo(inst), stats=stats)


def binpacking_min_bins(
    sizes, counts, capacity: int, limit: int | None = None, stats: SolveStats | None = None
) -> tuple[int, MimoSolution]:
    """Smallest bin count packing all items; binary search on the count.

    ``limit`` adds a per-bin cardinality cap (a second knapsack dimension).
    """
    stats = stats if stats is not None else SolveStats()
    sizes = [int(s) for s in sizes]
    counts = [int(n) for n in counts]
    if any(s > capacity for s, n in zip(sizes, counts) if n):
        raise InputError("an item exceeds the bin capacity")
    if limit is not None and limit < 1:
        raise InputError("cardinality limit must be >= 1")
    n_items = sum(counts)
    if n_items == 0:
        return 0, MimoSolution(SolveStatus.OPTIMAL, (), ZERO)
    volume = sum(s * n for s, n in zip(sizes, counts))
    lo = max(1, -(-volume // capacity))
    if limit is not None:
        lo = max(lo, -(-n_items // limit))
    hi = n_items
    probes: dict[int, MimoSolution] = {}

    def feasible(bins: int) -> MimoSolution:
        if bins not in probes:
            stats.probes += 1
            if limit is None:
                ki = make_knapsack([(s,) for s in sizes], counts, [(capacity,)], [bins])
            else:
                ki = cardinality_bp_instance(sizes, counts, capacity, limit, bins)
            probes[bins] = solve_knapsack(ki, stats=stats)
        return probes[bins]

    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid).optimal:
            hi = mid
        else:
            lo = mid + 1
    sol = feasible(lo)
    if not sol.optimal:
        raise InputError("internal error: item-count bin bound infeasible")
    return lo, sol


def cardinality_bp_instance(sizes, counts, capacity, limit, bins) -> KnapsackInstance:
    """Cardinality-constrained bin packing as 2-dimensional knapsack: the
    second coordinate of every item is 1 and the second capacity is the
    per-bin item limit."""
    return make_knapsack(
        [(int(s), 1) for s in sizes],
        counts,
        [(int(capacity), int(limit))],
        [int(bins)],
    )


def cardinality_bp_to_mimo(sizes, counts, capacity, limit, bins) -> MimoInstance:
    return knapsack_to_mimo(cardinality_bp_instance(sizes, counts, capacity, limit, bins))


@dataclass(frozen=True)
class CuttingStockInstance:
    sizes: tuple[int, ...]
    counts: tuple[int, ...]
    roll_lengths: tuple[int, ...]
    roll_costs: tuple[int, ...]


def make_cutting_stock(sizes, counts, roll_lengths, roll_costs) -> CuttingStockInstance:
    inst = CuttingStockInstance(
        tuple(int(s) for s in sizes),
        tuple(int(n) for n in counts),
        tuple(int(v) for v in roll_lengths),
        tuple(int(c) for c in roll_costs),
    )
    if len(inst.roll_lengths) != len(inst.roll_costs):
        raise InputError("roll data mismatch")
    if any(v < 0 for v in inst.sizes + inst.counts + inst.roll_lengths + inst.roll_costs):
        raise InputError("negative cutting-stock data")
    return inst


def cutting_stock_to_mimo(inst: CuttingStockInstance) -> MimoInstance:
    """Fixed-charge MIMO: every roll type gets multiplicity n (enough rolls
    for one item each); a used roll of type i costs c_i."""
    d = len(inst.sizes)
    n_items = sum(inst.counts)
    types = []
    for length, cost in zip(inst.roll_lengths, inst.roll_costs):
        rows = [mimo_row([(j, inst.sizes[j]) for j in range(d)], length)]
        rows += [mimo_row([(j, -1)], 0) for j in range(d)]
        types.append(mimo_type(0, rows, FixedCharge(cost), n_items))
    return make_mimo(d, types, inst.counts)


def solve_cutting_stock(
    inst: CuttingStockInstance, stats: SolveStats | None = None
) -> MimoSolution:
    if any(n and all(s > length for length in inst.roll_lengths)
           for s, n in zip(inst.sizes, inst.counts)):
        return MimoSolution(SolveStatus.INFEASIBLE, (), ZERO)
    if sum(inst.counts) == 0:
        return MimoSolution(SolveStatus.OPTIMAL, (), ZERO)
    return solve_fixed_charge(cutting_stock_to_mimo(inst), stats=stats)


@dataclass(frozen=True)
class SurfingInstance:
    commodities: int
    servers: int
    supplies: tuple[tuple[int, ...], ...]  # per server, a commodity vector
    demands: tuple[tuple[int, ...], ...]  # per surfer type, a commodity vector
    capacities: tuple[tuple[int, ...], ...]  # per surfer type, a server vector
    costs: tuple[tuple[tuple[int, ...], ...], ...]  # [type][commodity][server]
    multiplicities: tuple[int, ...]

    def validate(self) -> None:
        if self.commodities < 1 or self.servers < 1:
            raise InputError("need at least one commodity and one server")
        if len(self.supplies) != self.servers:
            raise InputError("one supply vector per server required")
        for s in self.supplies:
            if len(s) != self.commodities or any(v < 0 for v in s):
                raise InputError("bad supply vector")
        tau = len(self.multiplicities)
        if not (len(self.demands) == len(self.capacities) == len(self.costs) == tau):
            raise InputError("per-type data mismatch")
        for i in range(tau):
            if len(self.demands[i]) != self.commodities:
                raise InputError("bad demand vector")
            if len(self.capacities[i]) != self.servers:
                raise InputError("bad capacity vector")
            if len(self.costs[i]) != self.commodities or any(
                len(row) != self.servers for row in self.costs[i]
            ):
                raise InputError("bad cost matrix")
            if any(v < 0 for v in self.demands[i] + self.capacities[i]):
                raise InputError("negative surfing data")


def make_surfing(supplies, demands, capacities, costs, multiplicities) -> SurfingInstance:
    supplies = tuple(tuple(int(v) for v in s) for s in supplies)
    inst = SurfingInstance(
        commodities=len(supplies[0]) if supplies else 1,
        servers=len(supplies),
        supplies=supplies,
        demands=tuple(tuple(int(v) for v in x) for x in demands),
        capacities=tuple(tuple(int(v) for v in x) for x in capacities),
        costs=tuple(tuple(tuple(int(v) for v in row) for row in c) for c in costs),
        multiplicities=tuple(int(m) for m in multiplicities),
    )
    inst.validate()
    return inst


def surfing_to_mimo(inst: SurfingInstance) -> MimoInstance:
    """Linear MIMO over x[j,k] = amount of commodity j bought from server k;
    one extra slack surfer (multiplicity 1, zero cost) absorbs unused supply.
    """
    inst.validate()
    dprime, dsecond = inst.commodities, inst.servers
    d = dprime * dsecond

    def var(j, k):
        return j * dsecond + k

    for j in range(dprime):
        demand = sum(
            inst.demands[i][j] * inst.multiplicities[i] for i in range(len(inst.demands))
        )
        supply = sum(inst.supplies[k][j] for k in range(dsecond))
        if demand > supply:
            raise InputError(
                f"total demand {demand} for commodity {j} exceeds supply {supply}"
            )
    types = []
    for i in range(len(inst.multiplicities)):
        rows = []
        for j in range(dprime):
            coeffs = [(var(j, k), 1) for k in range(dsecond)]
            rows.append(mimo_row(coeffs, inst.demands[i][j]))
            rows.append(mimo_row([(idx, -a) for idx, a in coeffs], -inst.demands[i][j]))
        for k in range(dsecond):
            rows.append(mimo_row([(var(j, k), 1) for j in range(dprime)], inst.capacities[i][k]))
        rows += [mimo_row([(idx, -1)], 0) for idx in range(d)]
        w = [ZERO] * d
        for j in range(dprime):
            for k in range(dsecond):
                w[var(j, k)] = Rat(inst.costs[i][j][k])
        types.append(mimo_type(0, rows, linear_mimo_objective(w), inst.multiplicities[i]))
    # slack surfer: bounded by the supplies, free of charge
    slack_rows = []
    for j in range(dprime):
        for k in range(dsecond):
            slack_rows.append(mimo_row([(var(j, k), 1)], inst.supplies[k][j]))
            slack_rows.append(mimo_row([(var(j, k), -1)], 0))
    types.append(mimo_type(0, tuple(slack_rows), None, 1))
    target = [0] * d
    for k in range(dsecond):
        for j in range(dprime):
            target[var(j, k)] = inst.supplies[k][j]
    return make_mimo(d, types, target)


def solve_surfing(inst: SurfingInstance, stats: SolveStats | None = None) -> MimoSolution:
    return solve_mimo(surfing_to_mimo(inst), stats=stats)
