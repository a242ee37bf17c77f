"""Independent oracles used by the tests.

brute_force_mimo enumerates configuration multisets by dynamic programming
over (count, partial sum); surfing_flow_value builds per-commodity min-cost
flow networks (networkx network simplex: integral data in, exact integral
optimum out).
"""

from __future__ import annotations

import itertools

from mimopt.mimo import (
    ExtensionSeparableConvex,
    FixedCharge,
    LinearMimoObjective,
    MimoInstance,
)
from mimopt.mimo import _ext_value, _type_box, membership_witness
from mimopt.rational import Rat, ZERO


def enumerate_type_configs(inst: MimoInstance, i: int, limit=4000):
    """All x in X^i by scanning the derived box and checking membership."""
    lo, up = _type_box(inst, i)
    if any(a > b for a, b in zip(lo, up)):
        return []
    ranges = [range(lo[j], up[j] + 1) for j in range(inst.d)]
    total = 1
    for r in ranges:
        total *= len(r)
    if total > limit:
        raise ValueError("oracle box too large")
    out = []
    for x in itertools.product(*ranges):
        if membership_witness(inst, i, x) is not None:
            out.append(x)
    return out


def config_cost(inst: MimoInstance, i: int, x) -> Rat:
    obj = inst.types[i].objective
    if obj is None:
        return ZERO
    if isinstance(obj, LinearMimoObjective):
        return sum((w * v for w, v in zip(obj.w, x)), ZERO)
    if isinstance(obj, ExtensionSeparableConvex):
        return _ext_value(inst, i, x)
    if isinstance(obj, FixedCharge):
        return Rat(obj.penalty) if any(x) else ZERO
    raise ValueError(obj)


def brute_force_mimo(inst: MimoInstance) -> Rat | None:
    """Exact optimum by DP over (bricks used, partial sum) per type."""
    inst.validate()
    d = inst.d
    # per type: states map partial-sum -> min cost after using mu_i bricks
    states: dict[tuple[int, ...], Rat] = {(0,) * d: ZERO}
    for i, tb in enumerate(inst.types):
        configs = enumerate_type_configs(inst, i)
        if tb.multiplicity and not configs:
            return None
        layer = states
        for _ in range(tb.multiplicity):
            nxt: dict[tuple[int, ...], Rat] = {}
            for partial, cost in layer.items():
                for x in configs:
                    key = tuple(p + v for p, v in zip(partial, x))
                    value = cost + config_cost(inst, i, x)
                    if key not in nxt or value < nxt[key]:
                        nxt[key] = value
            layer = nxt
        states = layer
    return states.get(inst.target)


def surfing_flow_value(inst) -> Rat | None:
    """Min-cost-flow oracle for surfing.

    Exact per-commodity decomposition; valid when the per-surfer capacities
    cannot bind across commodities (single commodity, or capacities at least
    the total demand of the surfer).  Callers must respect that regime.
    """
    import networkx as nx

    dprime, dsecond = inst.commodities, inst.servers
    for i in range(len(inst.multiplicities)):
        total_demand = sum(inst.demands[i])
        if dprime > 1 and any(c < total_demand for c in inst.capacities[i]):
            raise ValueError("flow oracle needs non-binding capacities")
    total = 0
    for j in range(dprime):
        graph = nx.DiGraph()
        demand_j = 0
        for i, mult in enumerate(inst.multiplicities):
            need = inst.demands[i][j] * mult
            demand_j += need
            graph.add_node(f"t{i}", demand=-need)
            for k in range(dsecond):
                cap = inst.capacities[i][k] * mult
                graph.add_edge(f"t{i}", f"s{k}", weight=inst.costs[i][j][k], capacity=cap)
        for k in range(dsecond):
            graph.add_node(f"s{k}", demand=0)
            graph.add_edge(f"s{k}", "sink", weight=0, capacity=inst.supplies[k][j])
        graph.add_node("sink", demand=demand_j)
        try:
            flow = nx.min_cost_flow(graph)
        except nx.NetworkXUnfeasible:
            return None
        for u, targets in flow.items():
            for v, amount in targets.items():
                total += amount * graph[u][v]["weight"]
    return Rat(total)
