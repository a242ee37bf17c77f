"""Deterministic textual dump of linear and integer programs.

One constraint per line, variables named ``x{index}``, every rational written
as "p/q".  Two dumps of the same model are byte-identical.
"""

from __future__ import annotations

from ..rational import rat_str
from .ilp import IntegerProgram
from .lp import LinearProgram


def _terms(coeffs) -> str:
    parts = [f"{rat_str(c)} x{j}" for j, c in coeffs]
    return " + ".join(parts) if parts else "0/1"


def dump_lp(lp: LinearProgram, header: str = "") -> str:
    lines = []
    if header:
        lines.append(f"# {header}")
    obj = [(j, c) for j, c in enumerate(lp.objective) if c]
    lines.append(f"min: {_terms(obj)}")
    for i, row in enumerate(lp.rows):
        lines.append(f"r{i}: {_terms(row.coeffs)} {row.rel} {rat_str(row.rhs)}")
    for j in range(lp.num_vars):
        lo = "-inf" if lp.lower[j] is None else rat_str(lp.lower[j])
        up = "+inf" if lp.upper[j] is None else rat_str(lp.upper[j])
        lines.append(f"bound: {lo} <= x{j} <= {up}")
    return "\n".join(lines) + "\n"


def dump_ip(ip: IntegerProgram, header: str = "") -> str:
    text = dump_lp(ip.lp, header)
    ints = " ".join(f"x{j}" for j, flag in enumerate(ip.integer) if flag)
    lines = [text.rstrip("\n"), f"int: {ints}" if ints else "int:"]
    for j, values in ip.convex_tables:
        lines.append(f"table x{j}: " + " ".join(rat_str(v) for v in values))
    return "\n".join(lines) + "\n"
