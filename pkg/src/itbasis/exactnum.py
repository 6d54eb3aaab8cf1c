"""Exact arithmetic in the multi-quadratic field Q(sqrt(2), sqrt(3), sqrt(5), ...).

An :class:`ExactReal` is a finite sum ``q1*sqrt(d1) + q2*sqrt(d2) + ...`` with
rational ``q`` and distinct square-free radicands ``d >= 1``.  The term map is
kept canonical, so equality is identity of term maps and comparisons with zero
need no tolerance.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

__all__ = [
    "ExactReal",
    "sqrt_rational",
    "squarefree_part",
    "ZERO",
    "ONE",
    "as_exact",
]

Number = Union[int, Fraction, "ExactReal"]


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=4096)
def squarefree_part(n: int) -> tuple[int, int]:
    """Split ``n > 0`` as ``s**2 * d`` with ``d`` square-free; returns ``(s, d)``."""
    if n <= 0:
        raise ValueError(f"squarefree_part needs a positive integer, got {n}")
    s = d = 1
    for p, e in _factor(n):
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


@lru_cache(maxsize=8192)
def _radical_product(d1: int, d2: int) -> tuple[int, int]:
    # sqrt(d1)*sqrt(d2) = g*sqrt(d1*d2/g^2) for square-free d1, d2
    g = math.gcd(d1, d2)
    return g, (d1 // g) * (d2 // g)


class ExactReal:
    """Immutable element of the real multi-quadratic field."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Fraction] | None = None, *, _trusted: bool = False):
        if terms is None:
            self._terms: dict[int, Fraction] = {}
        elif _trusted:
            self._terms = dict(terms)
        else:
            acc: dict[int, Fraction] = {}
            for d, q in terms.items():
                d = int(d)
                q = Fraction(q)
                if q == 0:
                    continue
                s, sf = squarefree_part(d)
                acc[sf] = acc.get(sf, Fraction(0)) + q * s
            self._terms = {d: q for d, q in acc.items() if q != 0}
        self._hash: int | None = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def rational(cls, q: int | Fraction | str) -> "ExactReal":
        q = Fraction(q)
        return cls({1: q} if q else {}, _trusted=True)

    @classmethod
    def sqrt(cls, q: int | Fraction | str) -> "ExactReal":
        return sqrt_rational(q)

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        """Copy of the canonical term map ``{radicand: coefficient}``."""
        return dict(self._terms)

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 1 in self._terms)

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: Number) -> "ExactReal":
        other = as_exact(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for d, q in other._terms.items():
            v = acc.get(d)
            if v is None:
                acc[d] = q
            else:
                v = v + q
                if v:
                    acc[d] = v
                else:
                    del acc[d]
        return ExactReal(acc, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "ExactReal":
        return ExactReal({d: -q for d, q in self._terms.items()}, _trusted=True)

    def __pos__(self) -> "ExactReal":
        return self

    def __sub__(self, other: Number) -> "ExactReal":
        return self + (-as_exact(other))

    def __rsub__(self, other: Number) -> "ExactReal":
        return as_exact(other) + (-self)

    def __mul__(self, other: Number) -> "ExactReal":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return ExactReal({d: q * other for d, q in self._terms.items()}, _trusted=True)
        other = as_exact(other)
        if not self._terms or not other._terms:
            return ZERO
        acc: dict[int, Fraction] = {}
        for d1, q1 in self._terms.items():
            for d2, q2 in other._terms.items():
                if d1 == 1:
                    g, d = 1, d2
                elif d2 == 1:
                    g, d = 1, d1
                else:
                    g, d = _radical_product(d1, d2)
                acc[d] = acc.get(d, Fraction(0)) + q1 * q2 * g
        return ExactReal({d: q for d, q in acc.items() if q}, _trusted=True)

    __rmul__ = __mul__

    def conjugate(self, p: int) -> "ExactReal":
        """Galois conjugate flipping the sign of sqrt(p) for a prime ``p``."""
        return ExactReal(
            {d: (-q if d % p == 0 else q) for d, q in self._terms.items()}, _trusted=True
        )

    def primes(self) -> list[int]:
        ps: set[int] = set()
        for d in self._terms:
            ps.update(p for p, _ in _factor(d))
        return sorted(ps)

    def invert(self) -> "ExactReal":
        if not self._terms:
            raise ZeroDivisionError("ExactReal zero has no inverse")
        if len(self._terms) == 1:
            ((d, q),) = self._terms.items()
            return ExactReal({d: 1 / (q * d)}, _trusted=True)
        # multiply by conjugates prime by prime until the value is rational
        num = ONE
        den = self
        for p in self.primes():
            c = den.conjugate(p)
            num = num * c
            den = den * c
        assert den.is_rational(), den
        return num * (1 / den.rational_part())

    def __truediv__(self, other: Number) -> "ExactReal":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return self * as_exact(other).invert()

    def __rtruediv__(self, other: Number) -> "ExactReal":
        return as_exact(other) * self.invert()

    def __pow__(self, n: int) -> "ExactReal":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.invert() ** (-n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExactReal):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {1: Fraction(other)}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sign(self) -> int:
        """Exact sign, by rigorous rational bounds on each square root."""
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            return 1 if next(iter(self._terms.values())) > 0 else -1
        bits = 32
        while True:
            lo = hi = Fraction(0)
            scale = 1 << bits
            for d, q in self._terms.items():
                r = math.isqrt(d * scale * scale)
                r_lo = Fraction(r, scale)
                r_hi = r_lo if r * r == d * scale * scale else Fraction(r + 1, scale)
                a, b = q * r_lo, q * r_hi
                lo += min(a, b)
                hi += max(a, b)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __lt__(self, other: Number) -> bool:
        return (self - as_exact(other)).sign() < 0

    def __le__(self, other: Number) -> bool:
        return (self - as_exact(other)).sign() <= 0

    def __gt__(self, other: Number) -> bool:
        return (self - as_exact(other)).sign() > 0

    def __ge__(self, other: Number) -> bool:
        return (self - as_exact(other)).sign() >= 0

    def __abs__(self) -> "ExactReal":
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        return float(sum(float(q) * math.sqrt(d) for d, q in self._terms.items()))

    # -- text / json --------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for d, q in self.items():
            qs = str(q)
            parts.append(qs if d == 1 else f"{qs}*sqrt({d})")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"ExactReal({str(self)!r})"

    def to_json(self) -> list[list[int]]:
        return [[q.numerator, q.denominator, d] for d, q in self.items()]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[int]]) -> "ExactReal":
        return cls({d: Fraction(n, m) for n, m, d in data})

    @classmethod
    def parse(cls, text: str) -> "ExactReal":
        """Parse the canonical text form (as produced by ``str``)."""
        text = text.replace(" ", "")
        if text in ("", "0"):
            return ZERO
        acc: dict[int, Fraction] = {}
        for m in _TERM_RE.finditer(text):
            sign, coef, rad = m.group(1), m.group(2), m.group(3)
            if not coef and not rad:
                continue
            q = Fraction(coef) if coef else Fraction(1)
            if sign == "-":
                q = -q
            d = int(rad) if rad else 1
            acc[d] = acc.get(d, Fraction(0)) + q
        if _TERM_RE.sub("", text):
            raise ValueError(f"cannot parse ExactReal from {text!r}")
        return cls(acc)


_TERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(?:\*?sqrt\((\d+)\))?(?=[+-]|$)")


def as_exact(x: Number) -> ExactReal:
    if isinstance(x, ExactReal):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactReal.rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to ExactReal")


def sqrt_rational(q: int | Fraction | str) -> ExactReal:
    """Exact positive square root of a positive rational."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"sqrt_rational needs q > 0, got {q}")
    # sqrt(a/b) = sqrt(a*b)/b
    s, d = squarefree_part(q.numerator * q.denominator)
    return ExactReal({d: Fraction(s, q.denominator)}, _trusted=True)


ZERO = ExactReal()
ONE = ExactReal({1: Fraction(1)}, _trusted=True)
