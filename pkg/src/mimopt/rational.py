"""Exact rational arithmetic helpers.

Every quantity on a solve path is a ``Rat`` (or a plain int, which mixes
freely).  ``Rat`` is gmpy2's mpq when available and ``fractions.Fraction``
otherwise; both store numerator/denominator in lowest terms with a positive
denominator and never round.
"""

from __future__ import annotations

from .errors import InputError

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat

ZERO = Rat(0)
ONE = Rat(1)


def rat(value, den=None) -> Rat:
    """Coerce ints, strings ("p/q" or "p"), 2-tuples, or Rats to Rat."""
    if den is not None:
        return Rat(value, den)
    if isinstance(value, tuple):
        return Rat(value[0], value[1])
    if isinstance(value, str):
        return parse_rat(value)
    if isinstance(value, float):
        raise InputError("floating-point input rejected; pass ints or 'p/q' strings")
    return Rat(value)


def parse_rat(text: str) -> Rat:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Rat(int(num), int(den))
    return Rat(int(text))


def rat_str(value) -> str:
    """Canonical "p/q" rendering, denominator always explicit ("2/1")."""
    value = Rat(value)
    return f"{value.numerator}/{value.denominator}"


def rat_floor(value) -> int:
    num, den = Rat(value).numerator, Rat(value).denominator
    return int(num // den)


def rat_ceil(value) -> int:
    num, den = Rat(value).numerator, Rat(value).denominator
    return int(-((-num) // den))


def is_integral(value) -> bool:
    return Rat(value).denominator == 1


def frac_part(value) -> Rat:
    return Rat(value) - rat_floor(value)


def as_int(value) -> int:
    """Exact int conversion; raises on a fractional value."""
    value = Rat(value)
    if value.denominator != 1:
        raise InputError(f"expected an integer, got {rat_str(value)}")
    return int(value.numerator)


def ceil_log2(n: int) -> int:
    """Smallest k with 2**k >= n, for n >= 1."""
    if n < 1:
        raise InputError("ceil_log2 needs n >= 1")
    return (n - 1).bit_length()


def floor_log2(n: int) -> int:
    if n < 1:
        raise InputError("floor_log2 needs n >= 1")
    return n.bit_length() - 1


def lcm_int(values) -> int:
    out = 1
    for v in values:
        v = abs(int(v))
        if v == 0:
            continue
        import math

        out = out * v // math.gcd(out, v)
    return out
