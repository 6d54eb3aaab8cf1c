"""Exact SO(3) machinery: ladder coefficients, Clebsch-Gordan coefficients and
coupled products of (multi-fold) tensor operators.

Ranks and projections are half-integers held as :class:`fractions.Fraction`.
A coupled product of two operators is a formal element of the enveloping
algebra (a sum of ordered generator products, see :class:`Quadratic`); it is
turned back into a Lie algebra element with :meth:`Quadratic.to_lie` when its
symmetric part vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Protocol

from .cartanweyl import AlgebraElement, Generator
from .exactnum import ONE, ZERO, ExactReal, sqrt_rational

__all__ = [
    "Rank",
    "half",
    "projections",
    "ladder_coeff",
    "clebsch_gordan",
    "Quadratic",
    "NotInAlgebra",
    "CouplingError",
    "CouplingSpec",
    "CoupledTensor",
    "couple",
    "exchange_phase",
]

HALF = Fraction(1, 2)


def half(x: int | Fraction | str) -> Fraction:
    """Coerce ``x`` to a half-integer Fraction, rejecting anything else."""
    f = Fraction(x)
    if (2 * f).denominator != 1:
        raise ValueError(f"{x!r} is not a half-integer")
    return f


@dataclass(frozen=True, order=True)
class Rank:
    """Nonnegative half-integer rank, stored as twice its value."""

    twice: int

    def __post_init__(self) -> None:
        if self.twice < 0:
            raise ValueError("rank must be nonnegative")

    @classmethod
    def of(cls, value: int | Fraction | str) -> "Rank":
        return cls(int(2 * half(value)))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __str__(self) -> str:
        return str(self.value)


def projections(r: int | Fraction) -> list[Fraction]:
    """Projections ``r, r-1, ..., -r`` (descending)."""
    r = half(r)
    if r < 0:
        raise ValueError("rank must be nonnegative")
    return [r - k for k in range(int(2 * r) + 1)]


def _check_projection(r: Fraction, p: Fraction) -> None:
    if abs(p) > r or (r - p).denominator != 1:
        raise ValueError(f"projection {p} out of range for rank {r}")


def ladder_coeff(r: int | Fraction | str, p: int | Fraction | str, sign: int) -> ExactReal:
    """``C_+(r p)`` for ``sign=+1`` and ``C_-(r p)`` for ``sign=-1``.

    ``C_±(r p) = ∓ sqrt(½ (r ∓ p)(r ± p + 1))``; zero at the end of the ladder.
    """
    r, p = half(r), half(p)
    _check_projection(r, p)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    val = HALF * (r - sign * p) * (r + sign * p + 1)
    if val == 0:
        return ZERO
    return -sign * sqrt_rational(val)


def _fact(n: Fraction) -> int:
    if n.denominator != 1 or n < 0:
        raise ValueError(f"factorial of {n}")
    return math.factorial(int(n))


def clebsch_gordan(j1, m1, j2, m2, j, m) -> ExactReal:
    """``<j1 m1 j2 m2 | j m>`` in the Condon-Shortley convention (Racah's formula).

    Selection-rule violations give exact zero.
    """
    j1, m1, j2, m2, j, m = (half(x) for x in (j1, m1, j2, m2, j, m))
    if m1 + m2 != m:
        return ZERO
    if not (abs(j1 - j2) <= j <= j1 + j2) or (j1 + j2 - j).denominator != 1:
        return ZERO
    for jj, mm in ((j1, m1), (j2, m2), (j, m)):
        if abs(mm) > jj or (jj - mm).denominator != 1:
            return ZERO
    pref = Fraction(
        (2 * j + 1) * _fact(j1 + j2 - j) * _fact(j1 - j2 + j) * _fact(-j1 + j2 + j),
        _fact(j1 + j2 + j + 1),
    )
    pref *= (
        _fact(j + m) * _fact(j - m) * _fact(j1 - m1) * _fact(j1 + m1) * _fact(j2 - m2) * _fact(j2 + m2)
    )
    total = Fraction(0)
    kmin = max(0, int(j2 - j - m1), int(j1 + m2 - j))
    kmax = min(int(j1 + j2 - j), int(j1 - m1), int(j2 + m2))
    for k in range(kmin, kmax + 1):
        den = (
            math.factorial(k)
            * _fact(j1 + j2 - j - k)
            * _fact(j1 - m1 - k)
            * _fact(j2 + m2 - k)
            * _fact(j - j2 + m1 + k)
            * _fact(j - j1 - m2 + k)
        )
        total += Fraction((-1) ** k, den)
    if total == 0:
        return ZERO
    sgn = 1 if total > 0 else -1
    return sgn * sqrt_rational(pref * total * total)


def exchange_phase(j1, j2, j) -> int:
    """``(-1)^(j1+j2-j)``: the CG symmetry phase under swapping the two factors."""
    e = half(j1) + half(j2) - half(j)
    if e.denominator != 1:
        raise ValueError("j1 + j2 - j must be an integer")
    return -1 if int(e) % 2 else 1


# ---------------------------------------------------------------------------
# enveloping-algebra bookkeeping


class NotInAlgebra(ValueError):
    """A formal product whose symmetric part does not vanish."""


class CouplingError(ValueError):
    """Slot mismatch or triangle violation in a coupling request."""


Pair = tuple[Generator, Generator]


class Quadratic:
    """Formal sum of ordered products ``g1 g2`` of basis generators."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Pair, ExactReal] | None = None):
        self._terms: dict[Pair, ExactReal] = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def product(cls, x: AlgebraElement, y: AlgebraElement) -> "Quadratic":
        acc: dict[Pair, ExactReal] = {}
        for g1, c1 in x.items():
            for g2, c2 in y.items():
                key = (g1, g2)
                acc[key] = acc.get(key, ZERO) + c1 * c2
        return cls(acc)

    def __add__(self, other: "Quadratic") -> "Quadratic":
        acc = dict(self._terms)
        for k, v in other._terms.items():
            acc[k] = acc.get(k, ZERO) + v
        return Quadratic(acc)

    def __sub__(self, other: "Quadratic") -> "Quadratic":
        return self + other.scale(-ONE)

    def scale(self, c: ExactReal | int | Fraction) -> "Quadratic":
        return Quadratic({k: v * c for k, v in self._terms.items()})

    __rmul__ = scale

    def swapped(self) -> "Quadratic":
        """Reverse the order of every product."""
        return Quadratic({(b, a): v for (a, b), v in self._terms.items()})

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> list[tuple[Pair, ExactReal]]:
        return list(self._terms.items())

    def symmetric_part(self) -> "Quadratic":
        """``½ (Q + swapped Q)``; zero exactly when Q lies in the Lie algebra."""
        return (self + self.swapped()).scale(HALF)

    def to_lie(self, bracket: Callable[[Generator, Generator], AlgebraElement]) -> AlgebraElement:
        """Reduce ``Σ c(a,b) g_a g_b`` with antisymmetric ``c`` to ``½ Σ c(a,b) [g_a, g_b]``."""
        sym = self.symmetric_part()
        if not sym.is_zero():
            raise NotInAlgebra(f"symmetric part has {len(sym._terms)} nonzero products")
        out = AlgebraElement()
        for (a, b), c in self._terms.items():
            if a < b:
                out = out + bracket(a, b) * c
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Quadratic) and self._terms == other._terms

    def __repr__(self) -> str:
        return f"Quadratic({len(self._terms)} products)"


# ---------------------------------------------------------------------------
# coupling


class TensorLike(Protocol):
    name: str
    slots: tuple
    ranks: tuple
    charges: Mapping
    components: Mapping


MODES = ("plain", "anticommutator", "commutator", "lie")


@dataclass(frozen=True)
class CouplingSpec:
    """Coupling request for two operators.

    ``target`` maps every shared slot to the coupled rank; other slots pass
    through.  ``mode`` is ``plain`` for ``(X Y)``, ``anticommutator`` for
    ``{X Y} = (X Y) + (Y X)`` and ``commutator`` for ``[X Y] = (X Y) - (Y X)``,
    where ``(Y X)`` couples Y's rank first.  ``lie`` is the CG-contracted Lie
    bracket ``sum <a b|c> [X_a, Y_b]``; it agrees with ``anticommutator`` or
    ``commutator`` whenever the exchange phase makes those a Lie element.
    """

    left: TensorLike
    right: TensorLike
    target: Mapping[object, Fraction]
    mode: str = "plain"

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise CouplingError(f"unknown mode {self.mode!r}")


@dataclass
class CoupledTensor:
    """Formal coupled operator: slots, ranks, charges and ``Quadratic`` components."""

    slots: tuple
    ranks: tuple[Fraction, ...]
    charges: dict
    components: dict[tuple[Fraction, ...], Quadratic] = field(default_factory=dict)

    def component(self, labels: Mapping[object, Fraction]) -> Quadratic:
        key = tuple(half(labels[s]) for s in self.slots)
        return self.components.get(key, Quadratic())

    def reduce(self, bracket: Callable[[Generator, Generator], AlgebraElement]) -> dict[tuple, AlgebraElement]:
        return {k: q.to_lie(bracket) for k, q in self.components.items()}


def _ordered_product(
    first: TensorLike,
    second: TensorLike,
    target: Mapping[object, Fraction],
    out_slots: tuple,
    out_ranks: tuple[Fraction, ...],
) -> dict[tuple[Fraction, ...], Quadratic]:
    """``(first second)`` with CG contraction over the shared slots."""
    f_idx = {s: i for i, s in enumerate(first.slots)}
    s_idx = {s: i for i, s in enumerate(second.slots)}
    out: dict[tuple[Fraction, ...], Quadratic] = {}
    for ka, xa in first.components.items():
        for kb, yb in second.components.items():
            coef = ONE
            labels = []
            for slot, r in zip(out_slots, out_ranks):
                if slot in f_idx and slot in s_idx:
                    m1, m2 = ka[f_idx[slot]], kb[s_idx[slot]]
                    m = m1 + m2
                    if abs(m) > r:
                        coef = ZERO
                        break
                    coef = coef * clebsch_gordan(
                        first.ranks[f_idx[slot]], m1, second.ranks[s_idx[slot]], m2, r, m
                    )
                    if not coef:
                        break
                    labels.append(m)
                elif slot in f_idx:
                    labels.append(ka[f_idx[slot]])
                else:
                    labels.append(kb[s_idx[slot]])
            if not coef:
                continue
            key = tuple(labels)
            q = Quadratic.product(xa, yb).scale(coef)
            out[key] = out.get(key, Quadratic()) + q
    return out


def couple(spec: CouplingSpec) -> CoupledTensor:
    """Coupled product ``(X Y)``, ``{X Y}``, ``[X Y]`` or the CG-contracted bracket."""
    left, right = spec.left, spec.right
    shared = [s for s in left.slots if s in right.slots]
    if set(shared) != set(spec.target):
        raise CouplingError(
            f"target slots {sorted(map(str, spec.target))} differ from shared slots {sorted(map(str, shared))}"
        )
    out_slots = tuple(left.slots) + tuple(s for s in right.slots if s not in left.slots)
    ranks = []
    for s in out_slots:
        if s in spec.target:
            r1 = half(left.ranks[left.slots.index(s)])
            r2 = half(right.ranks[right.slots.index(s)])
            r = half(spec.target[s])
            if not (abs(r1 - r2) <= r <= r1 + r2) or (r1 + r2 - r).denominator != 1:
                raise CouplingError(f"triangle rule fails for slot {s}: {r1} x {r2} -> {r}")
            ranks.append(r)
        elif s in left.slots:
            ranks.append(half(left.ranks[left.slots.index(s)]))
        else:
            ranks.append(half(right.ranks[right.slots.index(s)]))
    out_ranks = tuple(ranks)
    charges = dict(left.charges)
    for k, v in right.charges.items():
        charges[k] = charges.get(k, 0) + v
    charges = {k: v for k, v in charges.items() if v}
    comps = _ordered_product(left, right, spec.target, out_slots, out_ranks)
    if spec.mode == "lie":
        comps = {k: q - q.swapped() for k, q in comps.items()}
    elif spec.mode != "plain":
        rev = _ordered_product(right, left, spec.target, out_slots, out_ranks)
        sgn = ONE if spec.mode == "anticommutator" else -ONE
        for k, q in rev.items():
            comps[k] = comps.get(k, Quadratic()) + q.scale(sgn)
    comps = {k: q for k, q in comps.items() if not q.is_zero()}
    return CoupledTensor(out_slots, out_ranks, charges, comps)
