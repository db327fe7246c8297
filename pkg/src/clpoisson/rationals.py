"""Exact rational coefficients.

All kernel arithmetic runs over gmpy2.mpq: arbitrary-precision, always
reduced, positive denominator.  Floating point never enters the kernel.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)


def rational(value, den=None) -> Rational:
    """Coerce ints, strings like "3" / "-1/2", or mpq to a reduced mpq."""
    if den is not None:
        return mpq(value, den)
    if isinstance(value, mpq):
        return value
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, (int, mpz)):
        return mpq(value)
    raise TypeError(f"cannot build an exact rational from {type(value).__name__}")


def format_rational(q: Rational) -> str:
    """Canonical text form: "p" when integral, else "p/q"."""
    return str(q)
