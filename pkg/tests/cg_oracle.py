"""Independent Clebsch-Gordan oracle for the tests (van der Waerden's factorial form)."""

from __future__ import annotations

import math
from fractions import Fraction

from itbasis.exactnum import ZERO, ExactReal, sqrt_rational


def _f(x: Fraction) -> int:
    assert x.denominator == 1 and x >= 0
    return math.factorial(int(x))


def vdw_oracle(j1, m1, j2, m2, j, m) -> ExactReal:
    """Van der Waerden's symmetric factorial form, written out independently."""
    if m1 + m2 != m:
        return ZERO
    delta = Fraction(_f(j1 + j2 - j) * _f(j1 - j2 + j) * _f(-j1 + j2 + j), _f(j1 + j2 + j + 1))
    rad = (2 * j + 1) * delta * _f(j1 + m1) * _f(j1 - m1) * _f(j2 + m2) * _f(j2 - m2) * _f(j + m) * _f(j - m)
    s = Fraction(0)
    for t in range(0, int(j1 + j2 + j) + 1):
        args = [t, j1 + j2 - j - t, j1 - m1 - t, j2 + m2 - t, j - j2 + m1 + t, j - j1 - m2 + t]
        if any(a < 0 for a in args):
            continue
        s += Fraction((-1) ** t, math.prod(_f(Fraction(a)) for a in args))
    if s == 0:
        return ZERO
    return (1 if s > 0 else -1) * sqrt_rational(rad * s * s)
