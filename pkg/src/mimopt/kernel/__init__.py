"""Exact rational LP/ILP kernel: the computational substrate for the package."""

from .compress import CompressedProgram, compress_program, solve_compressed
from .dump import dump_ip, dump_lp
from .ilp import (
    IlpSolution,
    IlpStatus,
    IntegerProgram,
    brute_force_ilp,
    linearize_separable_convex,
    make_ip,
    solve_ilp,
    solve_ilp_lexmin,
)
from .lp import (
    EQ,
    GE,
    LE,
    LinearProgram,
    LpSolution,
    LpStatus,
    Row,
    check_lp_solution,
    make_lp,
    make_row,
    solve_lp,
)

__all__ = [
    "CompressedProgram",
    "EQ",
    "GE",
    "IlpSolution",
    "IlpStatus",
    "IntegerProgram",
    "LE",
    "LinearProgram",
    "LpSolution",
    "LpStatus",
    "Row",
    "brute_force_ilp",
    "check_lp_solution",
    "compress_program",
    "dump_ip",
    "dump_lp",
    "linearize_separable_convex",
    "make_ip",
    "make_lp",
    "make_row",
    "solve_compressed",
    "solve_ilp",
    "solve_ilp_lexmin",
    "solve_lp",
]
