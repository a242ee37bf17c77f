"""Lattice machinery: Graver bases, circuits, conformal decompositions, and
Egyptian fractions.

Graver bases are computed by bounded enumeration of integer kernel vectors
followed by conformal-minimality filtering; the default enumeration radius is
the norm guarantee ||A||_inf * (2m||A||_inf + 1)^m for an m-row matrix, so the
result is the full basis.  Pure functions over immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InputError
from .rational import ceil_log2


@dataclass(frozen=True)
class IntegerMatrix:
    rows: tuple[tuple[int, ...], ...]
    num_cols: int

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def max_abs(self) -> int:
        return max((abs(e) for row in self.rows for e in row), default=0)

    def apply(self, x) -> tuple[int, ...]:
        return tuple(sum(c * v for c, v in zip(row, x)) for row in self.rows)


def make_matrix(rows) -> IntegerMatrix:
    rows = tuple(tuple(int(e) for e in row) for row in rows)
    if not rows:
        raise InputError("matrix needs at least one row")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise InputError("ragged matrix")
    return IntegerMatrix(rows, width)


def conformal_leq(y, x) -> bool:
    """y is sign-compatible with x and componentwise no larger in magnitude."""
    if len(y) != len(x):
        raise InputError("dimension mismatch")
    for a, b in zip(y, x):
        if a * b < 0 or abs(a) > abs(b):
            return False
    return True


def graver_norm_bound(matrix: IntegerMatrix) -> int:
    """Guaranteed max-norm radius containing every Graver element."""
    delta = matrix.max_abs()
    if delta == 0:
        return 1  # kernel is everything; the minimal elements are unit vectors
    m = matrix.num_rows
    return delta * (2 * m * delta + 1) ** m


def enumerate_kernel(matrix: IntegerMatrix, radius: int, cap: int | None = None):
    """Nonzero integer kernel vectors with max-norm <= radius, lex order.

    Only vectors whose first nonzero entry is positive are yielded (the kernel
    is symmetric under negation).  DFS with per-row interval pruning.
    """
    n = matrix.num_cols
    rows = matrix.rows
    # per position, the largest remaining |contribution| of each row
    tail = [[0] * (n + 1) for _ in rows]
    for ri, row in enumerate(rows):
        for j in range(n - 1, -1, -1):
            tail[ri][j] = tail[ri][j + 1] + abs(row[j]) * radius
    out = []
    point = [0] * n
    partial = [0] * len(rows)

    def rec(j: int, any_nonzero: bool):
        if cap is not None and len(out) > cap:
            return
        if j == n:
            if any_nonzero and all(p == 0 for p in partial):
                out.append(tuple(point))
            return
        lo = 0 if not any_nonzero else -radius
        for v in range(lo, radius + 1):
            point[j] = v
            ok = True
            for ri, row in enumerate(rows):
                if row[j]:
                    partial[ri] += row[j] * v
                if abs(partial[ri]) > tail[ri][j + 1]:
                    ok = False
            if ok:
                rec(j + 1, any_nonzero or v != 0)
            for ri, row in enumerate(rows):
                if row[j]:
                    partial[ri] -= row[j] * v
            point[j] = 0
    rec(0, False)
    return out


def _minimal_filter(vectors) -> list[tuple[int, ...]]:
    """Conformally minimal elements of a negation-closed-up-to-sign set."""
    vectors = sorted(vectors, key=lambda v: (sum(abs(e) for e in v), v))
    kept: list[tuple[int, ...]] = []
    for cand in vectors:
        if not any(conformal_leq(k, cand) or conformal_leq(tuple(-e for e in k), cand) for k in kept):
            kept.append(cand)
    return kept


@dataclass(frozen=True)
class GraverBasis:
    matrix: IntegerMatrix
    elements: tuple[tuple[int, ...], ...]

    def __contains__(self, vec) -> bool:
        return tuple(vec) in set(self.elements)


def graver_basis(
    matrix: IntegerMatrix, norm_cap: int | None = None, allow_low_cap: bool = False
) -> GraverBasis:
    """All conformally minimal nonzero kernel vectors with norm <= norm_cap.

    ``norm_cap`` defaults to the guaranteed bound; a smaller cap is rejected
    unless ``allow_low_cap`` is set (the capped result is then the basis
    intersected with the norm ball).  Closed under negation.
    """
    bound = graver_norm_bound(matrix)
    if norm_cap is None:
        norm_cap = bound
    elif norm_cap < bound and not allow_low_cap:
        raise InputError(
            f"norm cap {norm_cap} is below the guaranteed bound {bound}; "
            "pass allow_low_cap=True to accept a truncated basis"
        )
    half = _minimal_filter(enumerate_kernel(matrix, norm_cap))
    full = sorted(half + [tuple(-e for e in v) for v in half])
    return GraverBasis(matrix, tuple(full))


def circuits(matrix: IntegerMatrix, norm_cap: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Support-minimal coprime kernel vectors within the norm cap (brute force)."""
    if norm_cap is None:
        norm_cap = graver_norm_bound(matrix)
    half = enumerate_kernel(matrix, norm_cap)
    supports = [frozenset(j for j, e in enumerate(v) if e) for v in half]
    out = []
    for v, sup in zip(half, supports):
        g = 0
        for e in v:
            g = gcd(g, abs(e))
        if g != 1:
            continue
        if any(other < sup for other in supports):
            continue
        out.append(v)
    full = sorted(out + [tuple(-e for e in v) for v in out])
    return tuple(full)


def positive_sum_decompose(matrix: IntegerMatrix, x) -> list[tuple[tuple[int, ...], int]]:
    """Write a kernel vector as a nonnegative integer combination of Graver
    elements conformal to it (greedy largest-multiple extraction).
    """
    x = tuple(int(v) for v in x)
    if len(x) != matrix.num_cols:
        raise InputError("dimension mismatch")
    if any(matrix.apply(x)):
        raise InputError("vector is not in the kernel")
    basis = graver_basis(matrix).elements
    remaining = list(x)
    out: list[tuple[tuple[int, ...], int]] = []
    while any(remaining):
        best: tuple[int, tuple[int, ...]] | None = None
        for g in basis:
            if not conformal_leq(g, remaining):
                continue
            step = min(abs(r) // abs(e) for r, e in zip(remaining, g) if e)
            if step >= 1 and (best is None or step > best[0] or (step == best[0] and g < best[1])):
                best = (step, g)
        if best is None:  # cannot happen for kernel vectors (positive sum property)
            raise InputError("no conformal Graver element found")
        step, g = best
        for i, e in enumerate(g):
            remaining[i] -= step * e
        out.append((g, step))
    return out


def egyptian_fraction(p: int, q: int) -> list[int]:
    """Distinct unit-fraction denominators with sum exactly p/q.

    Constructive: with a = 2^k the largest power of two below q, write
    ap = bq + r and expand b and r in binary; the first group contributes
    denominators 2^(k-i) <= a, the second q*2^(k-i) >= q, so all are distinct,
    at most 2*log2(q) + 1 of them, each at most q^2.
    """
    p, q = int(p), int(q)
    if p < 1 or q < 1 or p > q:
        raise InputError("need 1 <= p <= q")
    if p == q:
        return [1]
    k = ceil_log2(q) - 1  # a = 2^k is the largest power of two < q
    a = 1 << k
    b, r = divmod(a * p, q)
    denominators = []
    for i in range(k):
        if (b >> i) & 1:
            denominators.append(1 << (k - i))
    for i in range(k + 1):
        if (r >> i) & 1:
            denominators.append(q << (k - i))
    return sorted(denominators)
