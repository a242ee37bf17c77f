"""Emission of machine-type blocks as MIMO types.

One block per (machine kind, speed): integer inequality rows over the shared
job-count coordinates x and auxiliary cycle variables.  The makespan family
uses (x, y, z); the weighted-sum objectives additionally carry the left/right
split indicators of external cycles, their products with the assignment
indicators, and per-segment aggregation chains feeding a separable-convex
objective (rectangle area + triangle area + external overhang per segment).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..mimo import MimoTypeBlock, ext_convex_objective, linear_mimo_objective, mimo_row
from ..rational import Rat, ZERO, lcm_int, rat_ceil, rat_floor
from .cycles import CycleModel, chi, critical_times, incompatible, potential_cycles


@dataclass(frozen=True)
class EmittedBlock:
    model: CycleModel
    block: MimoTypeBlock
    var_load: int | None = None

    @property
    def row_count(self) -> int:
        return len(self.block.rows)

    @property
    def max_coefficient(self) -> int:
        return max((row.max_abs() for row in self.block.rows), default=0)

    def with_multiplicity(self, mult: int) -> "EmittedBlock":
        b = self.block
        return EmittedBlock(
            self.model,
            MimoTypeBlock(b.num_aux, b.rows, b.objective, mult),
            self.var_load,
        )


def smith_order(sizes, weights, objective_kind: str, segment_time=None, dues=None):
    """Job types by nonincreasing weight/size ratio, ties by index.

    For sumwt a type's weight counts only once the segment's left critical
    time has reached its due date.  Returns (permutation, ratios by type).
    """
    d = len(sizes)
    if objective_kind == "sumwt":
        weights = segment_weights(weights, dues, segment_time)
    ratios = [Rat(weights[j]) / Rat(sizes[j]) for j in range(d)]
    order = sorted(range(d), key=lambda j: (-ratios[j], j))
    return tuple(order), tuple(ratios)


def segment_weights(weights, dues, segment_time):
    """Tardiness weights active at a segment start: w_j iff t_k >= due_j."""
    out = []
    for w, due in zip(weights, dues):
        if due is not None and Rat(segment_time) >= Rat(due):
            out.append(Rat(w))
        else:
            out.append(ZERO)
    return out


class _BlockBuilder:
    def __init__(self, d: int):
        self.d = d
        self.num_vars = d
        self.rows = []

    def new_var(self) -> int:
        idx = self.num_vars
        self.num_vars += 1
        return idx

    def le(self, coeffs, rhs) -> None:
        self.rows.append(mimo_row(coeffs, rhs))

    def eq(self, coeffs, rhs) -> None:
        self.le(coeffs, rhs)
        self.le([(j, -a) for j, a in coeffs], -rhs)

    def box(self, j, lo, up) -> None:
        self.le([(j, 1)], up)
        self.le([(j, -1)], -lo)


def _base_rows(bb, cycles, times, chi_table, sizes, counts, speed, pmax,
               var_y, var_z, lr_left_terms=None, lr_right_terms=None):
    """Rows shared by every objective: aggregation, external-cycle logic,
    eligibility boxes, incompatibility disabling, and window volumes.

    With split variables the volume of a window [t_lo, t_hi] also counts the
    head (before t_hi) of an external whose last interior critical is t_hi
    and the tail (after t_lo) of an external whose last interior critical is
    t_lo; both run strictly inside the window."""
    d = len(sizes)
    for j in range(d):
        bb.eq([(j, 1)] + [(var_y[(j, ci)], -1) for ci in range(len(cycles))], 0)
    for ci, c in enumerate(cycles):
        if c.external:
            bb.eq([(var_z[ci], 1)] + [(var_y[(j, ci)], -1) for j in range(d)], 0)
    for ci in range(len(cycles)):
        for j in range(d):
            bb.box(var_y[(j, ci)], 0, chi_table[j][ci] * counts[j])
    for ci, c in enumerate(cycles):
        if c.external:
            bb.box(var_z[ci], 0, 1)
    for ci, c in enumerate(cycles):
        if not c.external:
            continue
        if not any(chi_table[j][ci] for j in range(d)):
            continue  # no job fits this cycle: z is forced to 0, row vacuous
        coeffs = [(var_z[ci], pmax)]
        for oi, other in enumerate(cycles):
            if oi != ci and incompatible(c, other):
                coeffs += [(var_y[(j, oi)], 1) for j in range(d)]
        bb.le(coeffs, pmax)
    for lo_i in range(1, len(times) + 1):
        for hi_i in range(lo_i + 1, len(times) + 1):
            coeffs = []
            for ci, c in enumerate(cycles):
                if c.left >= lo_i and c.right <= hi_i:
                    coeffs += [(var_y[(j, ci)], sizes[j]) for j in range(d) if sizes[j]]
            if lr_left_terms is not None:
                for ci, c in enumerate(cycles):
                    if c.external and c.b == hi_i and c.a > lo_i:
                        coeffs += lr_left_terms(ci)
                    elif c.external and c.b == lo_i:
                        coeffs += lr_right_terms(ci)
            window = times[hi_i - 1] - times[lo_i - 1]
            if coeffs:
                bb.le(coeffs, rat_floor(Rat(speed) * window))


def emit_cmax_block(
    sizes,
    releases,
    dues_eff,
    counts,
    speed,
    pmax: int,
    kind_index: int = 0,
    cmin_lower=None,
    load_power: int | None = None,
    linear_weights=None,
) -> EmittedBlock:
    """Makespan-family block: feasibility rows over (x, y, z).

    Options: a load lower-bound row (min-load probes), an aggregate work
    variable with a convex power table (load objectives), or a linear
    objective on x (the late-job penalty machine).
    """
    d = len(sizes)
    times = critical_times(releases, dues_eff, "cmax")
    cycles = potential_cycles(len(times))
    chi_table = tuple(
        tuple(chi(times, c, sizes[j], releases[j], dues_eff[j], speed, "cmax")
              for c in cycles)
        for j in range(d)
    )
    bb = _BlockBuilder(d)
    var_y = {(j, ci): bb.new_var() for ci in range(len(cycles)) for j in range(d)}
    var_z = {ci: bb.new_var() for ci, c in enumerate(cycles) if c.external}
    var_load = bb.new_var() if load_power is not None else None
    _base_rows(bb, cycles, times, chi_table, sizes, counts, speed, pmax, var_y, var_z)
    if cmin_lower is not None:
        bb.le(
            [(j, -sizes[j]) for j in range(d) if sizes[j]],
            -rat_ceil(Rat(cmin_lower) * Rat(speed)),
        )
    objective = None
    if load_power is not None:
        total_work = sum(sizes[j] * counts[j] for j in range(d))
        bb.eq([(var_load, 1)] + [(j, -sizes[j]) for j in range(d) if sizes[j]], 0)
        bb.box(var_load, 0, total_work)
        table = [(Rat(w) / Rat(speed)) ** load_power for w in range(total_work + 1)]
        objective = ext_convex_objective(
            [ZERO] * bb.num_vars, {var_load: (0, table)}
        )
    elif linear_weights is not None:
        objective = linear_mimo_objective([Rat(w) for w in linear_weights])
    model = CycleModel(
        kind=kind_index,
        speed=Rat(speed),
        times=times,
        cycles=cycles,
        chi_table=chi_table,
        sizes=tuple(sizes),
        var_x=tuple(range(d)),
        var_y=var_y,
        var_z=var_z,
        var_yl={},
        var_yr={},
        var_prod={},
        var_alpha={},
        num_vars=bb.num_vars,
    )
    return EmittedBlock(model, MimoTypeBlock(bb.num_vars - d, tuple(bb.rows), objective, 0),
                        var_load)


def emit_minsum_polytope(
    sizes,
    releases,
    dues,
    counts,
    weights,
    objective_kind: str,
    pmax: int,
    kind_index: int = 0,
    horizon: int | None = None,
) -> EmittedBlock:
    """Weighted-sum block (sumwc, sumwf, sumwt) at unit speed.

    The objective decomposes per segment (t_k, t_(k+1)] into the rectangle
    below t_k (linear), the overhang of the external cycle ending inside the
    segment (linear via product variables), and the sequencing area of the
    internal cycle (convex-quadratic in the aggregation chain, with the
    negative square rewritten linearly over the binary split indicators)."""
    d = len(sizes)
    speed = Rat(1)
    if objective_kind in ("sumwc", "sumwf"):
        dues_eff = [horizon if due is None else min(due, horizon) for due in dues]
        chi_kind = "cmax"
    else:
        dues_eff = list(dues)
        chi_kind = "sumwt"
    times = critical_times(
        releases,
        dues_eff,
        chi_kind,
        horizon=horizon if chi_kind == "sumwt" else None,
    )
    cycles = potential_cycles(len(times))
    chi_table = tuple(
        tuple(chi(times, c, sizes[j], releases[j], dues_eff[j], speed, chi_kind)
              for c in cycles)
        for j in range(d)
    )
    bb = _BlockBuilder(d)
    var_y = {(j, ci): bb.new_var() for ci in range(len(cycles)) for j in range(d)}
    var_z = {ci: bb.new_var() for ci, c in enumerate(cycles) if c.external}
    externals = [ci for ci, c in enumerate(cycles) if c.external]
    var_yl = {(ci, p): bb.new_var() for ci in externals for p in range(1, pmax + 1)}
    var_yr = {(ci, p): bb.new_var() for ci in externals for p in range(1, pmax + 1)}
    var_prod = {
        (j, ci, p): bb.new_var()
        for ci in externals
        for j in range(d)
        for p in range(1, pmax + 1)
    }
    var_alpha = {
        (k, pos): bb.new_var()
        for k in range(1, len(times))
        for pos in range(d + 1)
    }
    _base_rows(
        bb, cycles, times, chi_table, sizes, counts, speed, pmax, var_y, var_z,
        lr_left_terms=lambda ci: [(var_yl[(ci, p)], p) for p in range(1, pmax + 1)],
        lr_right_terms=lambda ci: [(var_yr[(ci, p)], p) for p in range(1, pmax + 1)],
    )
    # split of an external job's size at its last interior critical time;
    # both split parts are at least 1, so a part never exceeds the largest
    # eligible size minus one (tighter boxes, same feasible set)
    for ci in externals:
        eligible = [sizes[j] for j in range(d) if chi_table[j][ci]]
        max_split = max(eligible) - 1 if eligible else 0
        bb.eq(
            [(var_yl[(ci, p)], p) for p in range(1, pmax + 1)]
            + [(var_yr[(ci, p)], p) for p in range(1, pmax + 1)]
            + [(var_y[(j, ci)], -sizes[j]) for j in range(d) if sizes[j]],
            0,
        )
        bb.eq([(var_yl[(ci, p)], 1) for p in range(1, pmax + 1)] + [(var_z[ci], -1)], 0)
        bb.eq([(var_yr[(ci, p)], 1) for p in range(1, pmax + 1)] + [(var_z[ci], -1)], 0)
        for p in range(1, pmax + 1):
            bb.box(var_yl[(ci, p)], 0, 1 if p <= max_split else 0)
            bb.box(var_yr[(ci, p)], 0, 1 if p <= max_split else 0)
        # products prod = y[j,C] * yr[C,p] by the standard binary linearization
        for j in range(d):
            cap_j = sizes[j] - 1 if chi_table[j][ci] else 0
            for p in range(1, pmax + 1):
                prod = var_prod[(j, ci, p)]
                bb.le([(var_y[(j, ci)], 1), (var_yr[(ci, p)], 1), (prod, -1)], 1)
                bb.le([(prod, 1), (var_y[(j, ci)], -1)], 0)
                bb.le([(prod, 1), (var_yr[(ci, p)], -1)], 0)
                bb.box(prod, 0, 1 if p <= cap_j else 0)

    # objective assembly: linear part plus per-alpha convex quadratic tables
    linear = [ZERO] * bb.num_vars
    tables: dict[int, tuple[int, list[Rat]]] = {}
    total_work = sum(sizes[j] * counts[j] for j in range(d))
    half = Rat(1, 2)
    int_of_gap = {c.a: ci for ci, c in enumerate(cycles) if c.internal}
    for k in range(1, len(times)):
        t_k = times[k - 1]
        # the chain never exceeds the segment capacity plus the carried-over
        # external overhang
        alpha_ub = min(total_work, rat_floor(times[k] - t_k)) + pmax
        ext_k = [ci for ci in externals if cycles[ci].b == k]
        if objective_kind == "sumwt":
            wk = segment_weights(weights, dues, t_k)
        else:
            wk = [Rat(w) for w in weights]
        order, ratios = smith_order(sizes, weights, objective_kind, t_k, dues)
        rho_max = max(ratios) if ratios else ZERO
        int_ci = int_of_gap[k]
        # aggregation chain: carried-over external overhang, then the
        # internal cycle's types in Smith order
        bb.eq(
            [(var_alpha[(k, 0)], 1)]
            + [(var_yr[(ci, p)], -p) for ci in ext_k for p in range(1, pmax + 1)],
            0,
        )
        bb.box(var_alpha[(k, 0)], 0, alpha_ub)
        for pos in range(1, d + 1):
            j = order[pos - 1]
            bb.eq(
                [
                    (var_alpha[(k, pos)], 1),
                    (var_y[(j, int_ci)], -sizes[j]),
                    (var_alpha[(k, pos - 1)], -1),
                ],
                0,
            )
            bb.box(var_alpha[(k, pos)], 0, alpha_ub)
        # rectangle below t_k
        for j in range(d):
            if objective_kind == "sumwt":
                coef = wk[j] * (t_k - Rat(dues[j])) if wk[j] else ZERO
            else:
                coef = wk[j] * t_k
            if coef:
                linear[var_y[(j, int_ci)]] += coef
                for ci in ext_k:
                    linear[var_y[(j, ci)]] += coef
        # external overhang rectangle (linearized product)
        for ci in ext_k:
            for j in range(d):
                if wk[j]:
                    for p in range(1, pmax + 1):
                        linear[var_prod[(j, ci, p)]] += wk[j] * p
        # sequencing area: telescoping squares minus the overhang square
        for pos in range(1, d + 1):
            j = order[pos - 1]
            nxt = ratios[order[pos]] if pos < d else ZERO
            coef = half * (ratios[j] - nxt)
            if coef:
                tables[var_alpha[(k, pos)]] = (
                    0,
                    [coef * v * v for v in range(alpha_ub + 1)],
                )
        for ci in ext_k:
            for p in range(1, pmax + 1):
                linear[var_yr[(ci, p)]] -= half * rho_max * p * p
        for j in range(d):
            if wk[j]:
                linear[var_y[(j, int_ci)]] += half * wk[j] * sizes[j]
    if objective_kind == "sumwf":
        for j in range(d):
            linear[j] -= Rat(weights[j]) * Rat(releases[j])
    objective = ext_convex_objective(linear, tables)
    model = CycleModel(
        kind=kind_index,
        speed=speed,
        times=times,
        cycles=cycles,
        chi_table=chi_table,
        sizes=tuple(sizes),
        var_x=tuple(range(d)),
        var_y=var_y,
        var_z=var_z,
        var_yl=var_yl,
        var_yr=var_yr,
        var_prod=var_prod,
        var_alpha=var_alpha,
        num_vars=bb.num_vars,
    )
    return EmittedBlock(model, MimoTypeBlock(bb.num_vars - d, tuple(bb.rows), objective, 0))


def scale_objective_to_integral(blocks: list[EmittedBlock]) -> tuple[list[EmittedBlock], int]:
    """Multiply every block objective by the least common multiple of the
    denominators appearing in any objective, making all values integral.
    Report optima divided by the factor to undo the scaling exactly."""
    from ..mimo import ExtensionSeparableConvex, LinearMimoObjective

    dens = []
    for eb in blocks:
        obj = eb.block.objective
        if obj is None:
            continue
        if isinstance(obj, LinearMimoObjective):
            dens += [w.denominator for w in obj.w]
        elif isinstance(obj, ExtensionSeparableConvex):
            dens += [w.denominator for w in obj.linear]
            for _, (_, values) in obj.tables:
                dens += [v.denominator for v in values]
    factor = lcm_int(dens) if dens else 1
    if factor == 1:
        return list(blocks), 1
    scaled = []
    for eb in blocks:
        obj = eb.block.objective
        if isinstance(obj, LinearMimoObjective):
            obj = LinearMimoObjective(tuple(w * factor for w in obj.w))
        elif isinstance(obj, ExtensionSeparableConvex):
            obj = ExtensionSeparableConvex(
                tuple(w * factor for w in obj.linear),
                tuple(
                    (k, (lo, tuple(v * factor for v in values)))
                    for k, (lo, values) in obj.tables
                ),
            )
        scaled.append(
            EmittedBlock(
                eb.model,
                MimoTypeBlock(eb.block.num_aux, eb.block.rows, obj, eb.block.multiplicity),
                eb.var_load,
            )
        )
    return scaled, factor


def evaluate_block_objective(block: MimoTypeBlock, vector) -> Rat:
    """Exact objective value of one brick vector under the block's objective."""
    from ..mimo import ExtensionSeparableConvex, LinearMimoObjective

    obj = block.objective
    if obj is None:
        return ZERO
    if isinstance(obj, LinearMimoObjective):
        return sum((w * v for w, v in zip(obj.w, vector) if w), ZERO)
    value = sum((w * v for w, v in zip(obj.linear, vector) if w), ZERO)
    for k, (lo, values) in obj.tables:
        value += values[int(vector[k]) - lo]
    return value
