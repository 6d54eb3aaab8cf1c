from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from cg_oracle import vdw_oracle

from itbasis.cartanweyl import AlgebraElement
from itbasis.exactnum import ONE, ZERO, sqrt_rational
from itbasis.so3 import (
    CouplingError,
    CouplingSpec,
    NotInAlgebra,
    Quadratic,
    clebsch_gordan,
    couple,
    exchange_phase,
    half,
    ladder_coeff,
    projections,
)

RANKS = [Fraction(n, 2) for n in range(4)]  # 0, 1/2, 1, 3/2


def _triples():
    for j1, j2 in itertools.product(RANKS, repeat=2):
        j = abs(j1 - j2)
        while j <= j1 + j2:
            yield j1, j2, j
            j += 1


def test_singlet_of_two_spinors():
    h = Fraction(1, 2)
    assert clebsch_gordan(h, h, h, -h, 0, 0) == sqrt_rational(Fraction(1, 2))
    assert vdw_oracle(h, h, h, -h, Fraction(0), Fraction(0)) == sqrt_rational(Fraction(1, 2))
    assert clebsch_gordan(h, -h, h, h, 0, 0) == -sqrt_rational(Fraction(1, 2))


def test_known_values():
    # <1 1 1/2 -1/2 | 3/2 1/2> = sqrt(1/3); <1 0 1 0 | 1 0> = 0; <1 1 1 -1 | 0 0> = sqrt(1/3)
    assert clebsch_gordan(1, 1, "1/2", "-1/2", "3/2", "1/2") == sqrt_rational(Fraction(1, 3))
    assert clebsch_gordan(1, 0, 1, 0, 1, 0) == ZERO
    assert clebsch_gordan(1, 1, 1, -1, 0, 0) == sqrt_rational(Fraction(1, 3))


@pytest.mark.parametrize("j1,j2,j", list(_triples()))
def test_matches_factorial_oracle(j1, j2, j):
    for m1 in projections(j1):
        for m2 in projections(j2):
            m = m1 + m2
            if abs(m) <= j:
                assert clebsch_gordan(j1, m1, j2, m2, j, m) == vdw_oracle(j1, m1, j2, m2, j, m)


@pytest.mark.parametrize("j1,j2", list(itertools.product(RANKS, repeat=2)))
def test_orthogonality(j1, j2):
    coupled = [(j, m) for (a, b, j) in _triples() if (a, b) == (j1, j2) for m in projections(j)]
    uncoupled = list(itertools.product(projections(j1), projections(j2)))
    assert len(coupled) == len(uncoupled)

    def cg(m1, m2, j, m):
        return clebsch_gordan(j1, m1, j2, m2, j, m)

    for (j, m), (jp, mp) in itertools.product(coupled, repeat=2):
        total = sum((cg(m1, m2, j, m) * cg(m1, m2, jp, mp) for m1, m2 in uncoupled), ZERO)
        assert total == (ONE if (j, m) == (jp, mp) else ZERO)
    for (m1, m2), (n1, n2) in itertools.product(uncoupled, repeat=2):
        total = sum((cg(m1, m2, j, m) * cg(n1, n2, j, m) for j, m in coupled), ZERO)
        assert total == (ONE if (m1, m2) == (n1, n2) else ZERO)


@pytest.mark.parametrize("j1,j2,j", list(_triples()))
def test_symmetries(j1, j2, j):
    ph = exchange_phase(j1, j2, j)
    ph_neg = -1 if int(j1 + j2 - j) % 2 else 1
    for m1 in projections(j1):
        for m2 in projections(j2):
            m = m1 + m2
            if abs(m) > j:
                continue
            c = clebsch_gordan(j1, m1, j2, m2, j, m)
            assert clebsch_gordan(j2, m2, j1, m1, j, m) == ph * c
            assert clebsch_gordan(j1, -m1, j2, -m2, j, -m) == ph_neg * c


@pytest.mark.parametrize("j1,j2,j", list(_triples()))
def test_recursion(j1, j2, j):
    # J_- applied to |j m> in the coupled and uncoupled pictures
    def lower(r, p):
        return sqrt_rational((r + p) * (r - p + 1)) if (r + p) * (r - p + 1) else ZERO

    for m in projections(j):
        if m == -j:
            continue
        for m1 in projections(j1):
            m2 = m - 1 - m1
            if abs(m2) > j2:
                continue
            lhs = lower(j, m) * clebsch_gordan(j1, m1, j2, m2, j, m - 1)
            rhs = ZERO
            if abs(m1 + 1) <= j1:
                rhs += lower(j1, m1 + 1) * clebsch_gordan(j1, m1 + 1, j2, m2, j, m)
            if abs(m2 + 1) <= j2:
                rhs += lower(j2, m2 + 1) * clebsch_gordan(j1, m1, j2, m2 + 1, j, m)
            assert lhs == rhs


def test_selection_rules_give_zero():
    assert clebsch_gordan(1, 1, 1, 1, 1, 1) == ZERO  # m1 + m2 != m
    assert clebsch_gordan(1, 0, 1, 0, 3, 0) == ZERO  # triangle
    assert clebsch_gordan("1/2", "1/2", 1, 0, 1, "1/2") == ZERO  # parity of j1 + j2 - j


def test_ladder_coefficients():
    assert ladder_coeff(1, 0, 1) == -ONE
    assert ladder_coeff(1, 0, -1) == ONE
    assert ladder_coeff(1, 1, 1) == ZERO
    assert ladder_coeff("3/2", "1/2", 1) == -sqrt_rational(Fraction(3, 2))
    assert ladder_coeff("1/2", "-1/2", 1) == -sqrt_rational(Fraction(1, 2))
    with pytest.raises(ValueError):
        ladder_coeff(1, "1/2", 1)


def test_half_and_projections():
    assert half("3/2") == Fraction(3, 2)
    assert projections(1) == [1, 0, -1]
    with pytest.raises(ValueError):
        half(Fraction(1, 3))


# -- coupling of formal operators ------------------------------------------------


class _Spinor:
    def __init__(self, name, gens):
        self.name = name
        self.slots = (1,)
        self.ranks = (Fraction(1, 2),)
        self.charges = {}
        self.components = {(Fraction(1, 2),): AlgebraElement({("E", gens[0]): ONE}),
                           (Fraction(-1, 2),): AlgebraElement({("E", gens[1]): ONE})}


def test_coupling_modes():
    x, y = _Spinor("X", ("a", "b")), _Spinor("Y", ("c", "d"))
    plain = couple(CouplingSpec(x, y, {1: 0}))
    q = plain.component({1: 0})
    r = sqrt_rational(Fraction(1, 2))
    expect = Quadratic({(("E", "a"), ("E", "d")): r, (("E", "b"), ("E", "c")): -r})
    assert q == expect
    # {X Y}^0 = (XY)^0 + (YX)^0 and the singlet is antisymmetric in the exchange
    anti = couple(CouplingSpec(x, y, {1: 0}, "anticommutator")).component({1: 0})
    comm = couple(CouplingSpec(x, y, {1: 0}, "commutator")).component({1: 0})
    lie = couple(CouplingSpec(x, y, {1: 0}, "lie")).component({1: 0})
    assert anti == expect - expect.swapped()
    assert comm == expect + expect.swapped()
    assert lie == expect - expect.swapped()
    assert lie.symmetric_part().is_zero()
    with pytest.raises(NotInAlgebra):
        plain.reduce(lambda a, b: AlgebraElement())


def test_coupling_errors():
    x, y = _Spinor("X", ("a", "b")), _Spinor("Y", ("c", "d"))
    with pytest.raises(CouplingError):
        couple(CouplingSpec(x, y, {1: 2}))
    with pytest.raises(CouplingError):
        couple(CouplingSpec(x, y, {2: 0}))
    with pytest.raises(CouplingError):
        CouplingSpec(x, y, {1: 0}, "bogus")
