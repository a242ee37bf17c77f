"""JSON instance files and result reports.

One schema per instance kind (mimo, scheduling, knapsack, binpacking,
cuttingstock, surfing), validated with jsonschema before any solve.  Integers
may be JSON numbers or decimal strings; rationals are {"num", "den"} objects
or "p/q" strings.  Everything written out is exact: rationals render as
"p/q", never floats.
"""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from .apps import (
    make_cutting_stock,
    make_knapsack,
    make_surfing,
)
from .errors import InputError
from .mimo import (
    FixedCharge,
    ext_convex_objective,
    linear_mimo_objective,
    make_mimo,
    mimo_row,
    mimo_type,
)
from .rational import Rat, rat, rat_str
from .scheduling.instance import (
    JobType,
    KindParams,
    MachineKind,
    SpeedGroup,
    make_instance as make_sched_instance,
)
from .scheduling.schedule import MachineSchedule, Schedule

_INT = {"type": ["integer", "string"], "pattern": "^-?[0-9]+$"}
_POSINT = {"type": ["integer", "string"], "pattern": "^[0-9]+$"}
_INT_OR_INF = {
    "anyOf": [{"type": "integer"}, {"type": "string", "pattern": "^([0-9]+|inf)$"}]
}
_RAT = {
    "anyOf": [
        {"type": "integer"},
        {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"},
        {
            "type": "object",
            "required": ["num", "den"],
            "properties": {"num": _INT, "den": _POSINT},
            "additionalProperties": False,
        },
    ]
}

SCHEMAS: dict[str, dict] = {
    "scheduling": {
        "type": "object",
        "required": ["kind", "jobTypes", "machineKinds"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "scheduling"},
            "jobTypes": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["mult", "weight", "perKind"],
                    "additionalProperties": False,
                    "properties": {
                        "mult": _POSINT,
                        "weight": _POSINT,
                        "perKind": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["size", "release", "due"],
                                "additionalProperties": False,
                                "properties": {
                                    "size": _INT_OR_INF,
                                    "release": _POSINT,
                                    "due": _INT_OR_INF,
                                },
                            },
                        },
                    },
                },
            },
            "machineKinds": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["speeds"],
                    "additionalProperties": False,
                    "properties": {
                        "speeds": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["num", "den", "mult"],
                                "additionalProperties": False,
                                "properties": {
                                    "num": _POSINT,
                                    "den": _POSINT,
                                    "mult": _POSINT,
                                },
                            },
                        }
                    },
                },
            },
        },
    },
    "mimo": {
        "type": "object",
        "required": ["kind", "d", "target", "types"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "mimo"},
            "d": {"type": "integer", "minimum": 1},
            "target": {"type": "array", "items": _INT},
            "types": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["aux", "rows", "mult"],
                    "additionalProperties": False,
                    "properties": {
                        "aux": _POSINT,
                        "mult": _POSINT,
                        "rows": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["coeffs", "rhs"],
                                "additionalProperties": False,
                                "properties": {
                                    "coeffs": {"type": "array", "items": _INT},
                                    "rhs": _INT,
                                },
                            },
                        },
                        "objective": {
                            "type": "object",
                            "required": ["kind"],
                            "properties": {
                                "kind": {
                                    "enum": ["none", "linear", "fixedCharge", "extConvex"]
                                },
                                "w": {"type": "array", "items": _RAT},
                                "penalty": _POSINT,
                                "linear": {"type": "array", "items": _RAT},
                                "tables": {
                                    "type": "object",
                                    "additionalProperties": {
                                        "type": "object",
                                        "required": ["lo", "values"],
                                        "properties": {
                                            "lo": _INT,
                                            "values": {"type": "array", "items": _RAT},
                                        },
                                    },
                                },
                            },
                        },
                    },
                },
            },
        },
    },
    "knapsack": {
        "type": "object",
        "required": ["kind", "items", "knapsacks"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "knapsack"},
            "items": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["size", "mult"],
                    "additionalProperties": False,
                    "properties": {
                        "size": {"type": "array", "items": _POSINT},
                        "mult": _POSINT,
                    },
                },
            },
            "knapsacks": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["capacity", "mult"],
                    "additionalProperties": False,
                    "properties": {
                        "capacity": {"type": "array", "items": _POSINT},
                        "mult": _POSINT,
                    },
                },
            },
        },
    },
    "binpacking": {
        "type": "object",
        "required": ["kind", "items", "capacity"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "binpacking"},
            "items": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["size", "mult"],
                    "additionalProperties": False,
                    "properties": {"size": _POSINT, "mult": _POSINT},
                },
            },
            "capacity": _POSINT,
            "cardinalityLimit": _POSINT,
        },
    },
    "cuttingstock": {
        "type": "object",
        "required": ["kind", "items", "rolls"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "cuttingstock"},
            "items": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["size", "mult"],
                    "additionalProperties": False,
                    "properties": {"size": _POSINT, "mult": _POSINT},
                },
            },
            "rolls": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["length", "cost"],
                    "additionalProperties": False,
                    "properties": {"length": _POSINT, "cost": _POSINT},
                },
            },
        },
    },
    "surfing": {
        "type": "object",
        "required": ["kind", "supplies", "surferTypes"],
        "additionalProperties": False,
        "properties": {
            "kind": {"const": "surfing"},
            "supplies": {
                "type": "array",
                "minItems": 1,
                "items": {"type": "array", "items": _POSINT},
            },
            "surferTypes": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["mult", "demand", "capacity", "cost"],
                    "additionalProperties": False,
                    "properties": {
                        "mult": _POSINT,
                        "demand": {"type": "array", "items": _POSINT},
                        "capacity": {"type": "array", "items": _POSINT},
                        "cost": {
                            "type": "array",
                            "items": {"type": "array", "items": _POSINT},
                        },
                    },
                },
            },
        },
    },
}


def _as_int(value) -> int:
    if isinstance(value, bool):
        raise InputError("booleans are not integers")
    if isinstance(value, int):
        return value
    return int(str(value))


def _as_int_or_inf(value) -> int | None:
    if value == "inf":
        return None
    return _as_int(value)


def _as_rat(value) -> Rat:
    if isinstance(value, dict):
        return Rat(_as_int(value["num"]), _as_int(value["den"]))
    if isinstance(value, int):
        return Rat(value)
    return rat(str(value))


def validate_payload(payload: dict) -> str:
    """Schema-validate a parsed instance file; returns its kind."""
    if not isinstance(payload, dict) or "kind" not in payload:
        raise InputError("instance file needs a 'kind' field")
    kind = payload["kind"]
    if kind not in SCHEMAS:
        raise InputError(f"unknown instance kind {kind!r}")
    validator = jsonschema.Draft7Validator(SCHEMAS[kind])
    errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
    if errors:
        details = "; ".join(
            "/" + "/".join(str(p) for p in err.absolute_path) + ": " + err.message
            for err in errors[:5]
        )
        raise InputError(f"schema violation: {details}")
    return kind


def parse_instance(payload: dict):
    """Parsed, validated instance object for any supported kind."""
    kind = validate_payload(payload)
    if kind == "scheduling":
        jobs = []
        for item in payload["jobTypes"]:
            per_kind = tuple(
                KindParams(
                    _as_int_or_inf(p["size"]),
                    _as_int(p["release"]),
                    _as_int_or_inf(p["due"]),
                )
                for p in item["perKind"]
            )
            jobs.append(JobType(_as_int(item["mult"]), _as_int(item["weight"]), per_kind))
        kinds = tuple(
            MachineKind(
                tuple(
                    SpeedGroup(_as_int(s["num"]), _as_int(s["den"]), _as_int(s["mult"]))
                    for s in mk["speeds"]
                )
            )
            for mk in payload["machineKinds"]
        )
        return make_sched_instance(jobs, kinds)
    if kind == "mimo":
        d = payload["d"]
        types = []
        for tb in payload["types"]:
            rows = [
                mimo_row(
                    [(j, _as_int(a)) for j, a in enumerate(row["coeffs"])],
                    _as_int(row["rhs"]),
                )
                for row in tb["rows"]
            ]
            objective = _parse_mimo_objective(tb.get("objective"))
            types.append(mimo_type(_as_int(tb["aux"]), rows, objective, _as_int(tb["mult"])))
        return make_mimo(d, types, [_as_int(v) for v in payload["target"]])
    if kind == "knapsack":
        return make_knapsack(
            [tuple(_as_int(v) for v in it["size"]) for it in payload["items"]],
            [_as_int(it["mult"]) for it in payload["items"]],
            [tuple(_as_int(v) for v in k["capacity"]) for k in payload["knapsacks"]],
            [_as_int(k["mult"]) for k in payload["knapsacks"]],
        )
    if kind == "binpacking":
        return {
            "sizes": [_as_int(it["size"]) for it in payload["items"]],
            "counts": [_as_int(it["mult"]) for it in payload["items"]],
            "capacity": _as_int(payload["capacity"]),
            "limit": _as_int(payload["cardinalityLimit"])
            if "cardinalityLimit" in payload
            else None,
        }
    if kind == "cuttingstock":
        return make_cutting_stock(
            [_as_int(it["size"]) for it in payload["items"]],
            [_as_int(it["mult"]) for it in payload["items"]],
            [_as_int(r["length"]) for r in payload["rolls"]],
            [_as_int(r["cost"]) for r in payload["rolls"]],
        )
    if kind == "surfing":
        return make_surfing(
            payload["supplies"],
            [t["demand"] for t in payload["surferTypes"]],
            [t["capacity"] for t in payload["surferTypes"]],
            [t["cost"] for t in payload["surferTypes"]],
            [_as_int(t["mult"]) for t in payload["surferTypes"]],
        )
    raise InputError(f"unhandled kind {kind!r}")


def _parse_mimo_objective(spec):
    if spec is None or spec["kind"] == "none":
        return None
    if spec["kind"] == "linear":
        return linear_mimo_objective([_as_rat(v) for v in spec["w"]])
    if spec["kind"] == "fixedCharge":
        return FixedCharge(_as_int(spec["penalty"]))
    if spec["kind"] == "extConvex":
        tables = {
            int(k): (_as_int(v["lo"]), [_as_rat(x) for x in v["values"]])
            for k, v in spec.get("tables", {}).items()
        }
        return ext_convex_objective([_as_rat(v) for v in spec["linear"]], tables)
    raise InputError(f"unknown objective kind {spec['kind']!r}")


def load_instance(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: invalid JSON: {err}") from err
    return parse_instance(payload)


# ---------------------------------------------------------------------------
# serialization


def schedule_to_json(schedule: Schedule) -> dict:
    return {
        "machines": [
            {
                "kind": m.kind,
                "speed": rat_str(m.speed),
                "jobs": [
                    {"jobType": j, "start": rat_str(s), "end": rat_str(e)}
                    for j, s, e in m.jobs
                ],
            }
            for m in schedule.machines
        ],
        "late": [{"jobType": j, "count": n} for j, n in schedule.late],
    }


def schedule_from_json(payload: dict) -> Schedule:
    machines = tuple(
        MachineSchedule(
            int(m["kind"]),
            _as_rat(m.get("speed", 1)),
            tuple(
                (int(j["jobType"]), _as_rat(j["start"]), _as_rat(j["end"]))
                for j in m["jobs"]
            ),
        )
        for m in payload.get("machines", [])
    )
    late = tuple((int(e["jobType"]), int(e["count"])) for e in payload.get("late", []))
    return Schedule(machines, late)


def mimo_solution_to_json(sol) -> dict:
    return {
        "counts": [
            {"type": i, "vector": list(x), "count": n} for i, x, n in sol.counts
        ],
        "objective": rat_str(sol.objective),
    }


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
