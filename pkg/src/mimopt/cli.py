"""Command-line surface.

Commands: solve, validate, brute-force, model-dump, gen-corpus.  Reports are
JSON on stdout with exact rationals as "p/q" strings; outputs are
deterministic for fixed inputs and flags (wall time is reported only with
--timings).  Exit codes: 0 success, 1 usage/parse error, 2 infeasible,
3 size guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import io as mio
from .apps import (
    CuttingStockInstance,
    KnapsackInstance,
    SurfingInstance,
    binpacking_min_bins,
    solve_cutting_stock,
    solve_knapsack,
    solve_surfing,
)
from .errors import CapacityError, InputError, SolverError
from .kernel import dump_ip
from .mimo import (
    FixedCharge,
    MimoInstance,
    solve_fixed_charge,
    solve_mimo,
    verify_solution,
)
from .nfold import SolveStatus, build_conf_ilp, enumerate_configurations, mimo_to_nfold
from .rational import Rat, rat, rat_str
from .scheduling import (
    SchedulingInstance,
    brute_force_schedule,
    parse_objective,
    preprocess,
    solve_objective,
    validate_schedule,
)
from .stats import SolveStats

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_GUARD = 3


def _print_report(payload: dict) -> None:
    sys.stdout.write(mio.dump_json(payload))


def _decimal_approx(value: Rat, digits: int = 6) -> str:
    """Fixed-point decimal string by integer long division (no floats)."""
    num, den = value.numerator, value.denominator
    sign = "-" if num < 0 else ""
    num = abs(num)
    whole, rem = divmod(num, den)
    frac = []
    for _ in range(digits):
        rem *= 10
        digit, rem = divmod(rem, den)
        frac.append(str(digit))
    return f"{sign}{whole}." + "".join(frac)


def _solve_scheduling(inst: SchedulingInstance, args, stats: SolveStats) -> dict | int:
    objective = parse_objective(args.objective)
    result = solve_objective(inst, objective, stats)
    if not result.optimal:
        return EXIT_INFEASIBLE
    report = {
        "status": "optimal",
        "objective": args.objective,
        "value": rat_str(result.value),
        "schedule": mio.schedule_to_json(result.schedule),
        "statistics": stats.as_dict(),
    }
    if objective.kind == "lp":
        report["normApprox"] = _root_approx(result.value, objective.power)
    return report


def _root_approx(power_sum: Rat, power: int, digits: int = 4) -> str:
    """Non-normative decimal approximation of the lp norm, integer arithmetic
    only: floor of the power-th root of the scaled power sum."""
    scaled = (power_sum.numerator * 10 ** (power * digits)) // power_sum.denominator
    root = _iroot(scaled, power)
    return f"{root // 10**digits}.{str(root % 10**digits).zfill(digits)}"


def _iroot(n: int, k: int) -> int:
    """Largest x with x**k <= n (binary search, exact)."""
    if n < 0:
        raise InputError("negative radicand")
    hi = 1 << ((n.bit_length() + k - 1) // k) if n else 0
    lo = 0
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def cmd_solve(args) -> int:
    inst = mio.load_instance(args.path)
    stats = SolveStats()
    t0 = time.monotonic()
    if isinstance(inst, SchedulingInstance):
        report = _solve_scheduling(inst, args, stats)
        if isinstance(report, int):
            _print_report({"status": "infeasible", "statistics": stats.as_dict()})
            return report
    elif isinstance(inst, MimoInstance):
        fixed = any(isinstance(tb.objective, FixedCharge) for tb in inst.types)
        sol = (
            solve_fixed_charge(inst, stats=stats)
            if fixed
            else solve_mimo(inst, strategy=args.strategy, conf_cap=args.conf_cap, stats=stats)
        )
        if not sol.optimal:
            _print_report({"status": "infeasible", "statistics": stats.as_dict()})
            return EXIT_INFEASIBLE
        report = {
            "status": "optimal",
            "value": rat_str(sol.objective),
            "solution": mio.mimo_solution_to_json(sol),
            "statistics": stats.as_dict(),
        }
    elif isinstance(inst, KnapsackInstance):
        sol = solve_knapsack(inst, stats=stats)
        if not sol.optimal:
            _print_report({"status": "infeasible", "statistics": stats.as_dict()})
            return EXIT_INFEASIBLE
        report = {
            "status": "feasible",
            "solution": mio.mimo_solution_to_json(sol),
            "statistics": stats.as_dict(),
        }
    elif isinstance(inst, dict):  # binpacking bundle
        bins, sol = binpacking_min_bins(
            inst["sizes"], inst["counts"], inst["capacity"], inst["limit"], stats=stats
        )
        report = {
            "status": "optimal",
            "bins": bins,
            "solution": mio.mimo_solution_to_json(sol),
            "statistics": stats.as_dict(),
        }
    elif isinstance(inst, CuttingStockInstance):
        sol = solve_cutting_stock(inst, stats=stats)
        if not sol.optimal:
            _print_report({"status": "infeasible", "statistics": stats.as_dict()})
            return EXIT_INFEASIBLE
        report = {
            "status": "optimal",
            "value": rat_str(sol.objective),
            "solution": mio.mimo_solution_to_json(sol),
            "statistics": stats.as_dict(),
        }
    elif isinstance(inst, SurfingInstance):
        sol = solve_surfing(inst, stats=stats)
        if not sol.optimal:
            _print_report({"status": "infeasible", "statistics": stats.as_dict()})
            return EXIT_INFEASIBLE
        report = {
            "status": "optimal",
            "value": rat_str(sol.objective),
            "solution": mio.mimo_solution_to_json(sol),
            "statistics": stats.as_dict(),
        }
    else:
        raise InputError("unsupported instance object")
    if args.timings:
        report["wallMs"] = int((time.monotonic() - t0) * 1000)
    _print_report(report)
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = mio.load_instance(args.path)
    if isinstance(inst, SchedulingInstance):
        with open(args.solution, "r", encoding="utf-8") as handle:
            schedule = mio.schedule_from_json(json.load(handle))
        objective = parse_objective(args.objective)
        value, problems = validate_schedule(inst, schedule, objective)
        report = {
            "violations": [{"kind": v.kind, "detail": v.detail} for v in problems],
        }
        if value is not None:
            report["value"] = rat_str(value)
        _print_report(report)
        return EXIT_OK if not problems else EXIT_ERROR
    if isinstance(inst, MimoInstance):
        with open(args.solution, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        from .mimo import MimoSolution

        counts = tuple(
            (int(e["type"]), tuple(int(v) for v in e["vector"]), int(e["count"]))
            for e in payload["counts"]
        )
        sol = MimoSolution(SolveStatus.OPTIMAL, counts, rat(payload["objective"]))
        problems = verify_solution(inst, sol)
        _print_report(
            {"violations": [{"kind": v.kind, "detail": v.detail} for v in problems]}
        )
        return EXIT_OK if not problems else EXIT_ERROR
    raise InputError("validate supports scheduling and mimo instances")


def cmd_bruteforce(args) -> int:
    inst = mio.load_instance(args.path)
    if not isinstance(inst, SchedulingInstance):
        raise InputError("brute-force supports scheduling instances")
    objective = parse_objective(args.objective)
    value = brute_force_schedule(inst, objective)
    if value is None:
        _print_report({"status": "infeasible"})
        return EXIT_INFEASIBLE
    _print_report({"status": "optimal", "value": rat_str(value)})
    return EXIT_OK


def cmd_model_dump(args) -> int:
    inst = mio.load_instance(args.path)
    if isinstance(inst, SchedulingInstance):
        from .scheduling.solvers import _kind_arrays, _machine_blocks
        from .scheduling.models import emit_minsum_polytope, scale_objective_to_integral

        objective = parse_objective(args.objective)
        pre = preprocess(inst)
        pmax = pre.max_finite_size()
        horizon = pre.horizon()
        probe = rat(args.probe) if args.probe is not None else Rat(horizon)
        if objective.kind in ("sumwc", "sumwf", "sumwt"):
            blocks = []
            for ki, speed, mult in pre.machine_types():
                if mult == 0:
                    continue
                sizes, releases, dues = _kind_arrays(pre, ki)
                blocks.append(
                    emit_minsum_polytope(
                        sizes, releases, dues, [j.mult for j in pre.jobs],
                        [j.weight for j in pre.jobs], objective.kind, pmax,
                        kind_index=ki, horizon=horizon,
                    ).with_multiplicity(mult)
                )
            blocks, _ = scale_objective_to_integral(blocks)
        else:
            def dues_of_kind(ki):
                _, _, dues = _kind_arrays(pre, ki)
                return [probe if d is None else min(Rat(d), probe) for d in dues]

            blocks = _machine_blocks(pre, dues_of_kind, pmax)
        from .mimo import make_mimo

        mimo = make_mimo(pre.d, [eb.block for eb in blocks], [j.mult for j in pre.jobs])
        sys.stdout.write(_dump_mimo(mimo))
        return EXIT_OK
    if isinstance(inst, MimoInstance):
        sys.stdout.write(_dump_mimo(inst))
        return EXIT_OK
    raise InputError("model-dump supports scheduling and mimo instances")


def _dump_mimo(inst: MimoInstance) -> str:
    nfold = mimo_to_nfold(inst)
    try:
        configs = [enumerate_configurations(bt, cap=5000) for bt in nfold.types]
        ip, _ = build_conf_ilp(nfold, configs)
        return dump_ip(ip, header="configuration ILP")
    except CapacityError:
        from .nfold import brick_program

        parts = []
        for i, bt in enumerate(nfold.types):
            parts.append(dump_ip(brick_program(bt), header=f"brick type {i}"))
        return "".join(parts)


def cmd_gen_corpus(args) -> int:
    import random

    from . import corpus

    rng = random.Random(args.seed)
    payloads = []
    for index in range(args.count):
        if args.kind == "scheduling-cmax":
            inst = corpus.scheduling_cmax_instance(rng)
            payloads.append(_sched_payload(inst))
        elif args.kind.startswith("scheduling-"):
            inst = corpus.scheduling_unit_instance(rng, args.kind.split("-", 1)[1])
            payloads.append(_sched_payload(inst))
        else:
            raise InputError(f"unknown corpus kind {args.kind!r}")
    for index, payload in enumerate(payloads):
        path = f"{args.out}/{args.kind}-{args.seed}-{index:04d}.json"
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(mio.dump_json(payload))
    _print_report({"written": len(payloads), "kind": args.kind, "seed": args.seed})
    return EXIT_OK


def _sched_payload(inst: SchedulingInstance) -> dict:
    return {
        "kind": "scheduling",
        "jobTypes": [
            {
                "mult": job.mult,
                "weight": job.weight,
                "perKind": [
                    {
                        "size": "inf" if p.size is None else p.size,
                        "release": p.release,
                        "due": "inf" if p.due is None else p.due,
                    }
                    for p in job.per_kind
                ],
            }
            for job in inst.jobs
        ],
        "machineKinds": [
            {
                "speeds": [
                    {"num": g.num, "den": g.den, "mult": g.mult} for g in kind.speeds
                ]
            }
            for kind in inst.kinds
        ],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimopt",
        description="Exact solvers for multitype integer monoid optimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("path")
    p_solve.add_argument("--objective", default="cmax", help="scheduling objective flag")
    p_solve.add_argument("--strategy", choices=["auto", "direct", "huge"], default="auto")
    p_solve.add_argument("--conf-cap", type=int, default=200_000)
    p_solve.add_argument("--timings", action="store_true", help="include wall time")
    p_solve.set_defaults(func=cmd_solve)

    p_val = sub.add_parser("validate", help="validate a solution file")
    p_val.add_argument("path")
    p_val.add_argument("solution")
    p_val.add_argument("--objective", default="cmax")
    p_val.set_defaults(func=cmd_validate)

    p_bf = sub.add_parser("brute-force", help="independent oracle value")
    p_bf.add_argument("path")
    p_bf.add_argument("--objective", default="cmax")
    p_bf.set_defaults(func=cmd_bruteforce)

    p_dump = sub.add_parser("model-dump", help="dump the emitted model")
    p_dump.add_argument("path")
    p_dump.add_argument("--objective", default="cmax")
    p_dump.add_argument("--probe", default=None, help="makespan guess for the dump")
    p_dump.set_defaults(func=cmd_model_dump)

    p_gen = sub.add_parser("gen-corpus", help="write seeded random instances")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--count", type=int, default=10)
    p_gen.add_argument("--kind", default="scheduling-cmax")
    p_gen.add_argument("--out", default=".")
    p_gen.set_defaults(func=cmd_gen_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, SolverError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
