from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from itbasis.cartanweyl import (
    CORRECTIONS,
    AlgebraElement,
    CartanWeyl,
    JacobiContradiction,
    KnownEntry,
    StructureConstantError,
    StructureTable,
    UnderdeterminedTable,
    corrected_entries,
    listed_entries,
    load_structure_constants,
    solve_missing_constants,
)
from itbasis.exactnum import ONE, ZERO, ExactReal, sqrt_rational
from itbasis.fixtures import load_table
from itbasis.rootsystem import build

RT_HALF = sqrt_rational(Fraction(1, 2))


def _entry(entries, x, y):
    [e] = [e for e in entries if (e.x, e.y) == (x, y)]
    return e.value


def test_listed_values_as_printed():
    f4, e6 = build("F4"), build("E6")
    assert _entry(listed_entries(f4), "alpha_1", "-beta_2") == RT_HALF / f4.K
    assert _entry(listed_entries(e6), "beta_1", "-alpha_3") == ONE / 12
    # the cell printed with a bare sign is left to the solver
    assert not [e for e in listed_entries(e6) if (e.x, e.y) == ("-beta_3", "lambda_7")]


def test_listed_entry_counts():
    assert len(listed_entries(build("F4"))) == 68
    assert len(listed_entries(build("E6"))) == 119
    with pytest.raises(ValueError):
        listed_entries(build("G2"))


def test_corrections_are_recorded_in_sources():
    entries = corrected_entries(listed_entries(build("F4")), "F4")
    fixed = [e for e in entries if "corrected:" in e.source]
    assert len(fixed) == sum(1 for c in CORRECTIONS if c.algebra == "F4") == 12
    assert _entry(entries, "alpha_1", "-beta_2") == -RT_HALF / build("F4").K
    e6 = corrected_entries(listed_entries(build("E6")), "E6")
    assert sum("corrected:" in e.source for e in e6) == 10


@pytest.mark.parametrize("algebra", ["G2", "F4", "E6"])
def test_table_symmetries(algebra):
    t = load_table(algebra)
    s = build(algebra)
    for (x, y), v in t.entries.items():
        assert t[(y, x)] == -v
        assert t[(s.negative(x), s.negative(y))] == -v
        assert s.sum_label(x, y) not in (None, "0")
    expected = sum(1 for x, y in itertools.permutations(s.labels, 2) if s.sum_label(x, y) not in (None, "0"))
    assert len(t) == expected


@pytest.mark.parametrize("algebra", ["G2", "F4", "E6"])
def test_magnitudes_follow_root_strings(algebra):
    # N_xy^2 = q (r + 1) |x|^2 / (2 K^2) for the x-string y - r x, ..., y + q x
    t = load_table(algebra)
    s = build(algebra)
    for (x, y), v in t.entries.items():
        r, q = s.string_lengths(x, y)
        assert v * v * 2 * s.K * s.K == ExactReal.rational(q * (r + 1)) * s.root(x).norm2()


def test_solver_completes_f4_and_e6_without_free_signs():
    for alg in ("F4", "E6"):
        t = load_structure_constants(alg)
        assert t.free_choices == []
        prov = set(t.provenance.values())
        assert prov <= {"paper", "symmetry", "jacobi-solved"}
        assert t.entries == load_table(alg).entries


def test_bare_sign_cell_solves_to_plus_one():
    t = load_table("E6")
    assert t[("-beta_3", "lambda_7")] == ONE / 12
    assert t.provenance[("-beta_3", "lambda_7")] == "jacobi-solved"


def test_printed_tables_are_jacobi_inconsistent():
    for alg in ("F4", "E6"):
        with pytest.raises(JacobiContradiction):
            load_structure_constants(alg, printed=True)


def test_contradictory_input_is_reported():
    s = build("F4")
    good = corrected_entries(listed_entries(s), "F4")
    bad = [KnownEntry(e.x, e.y, -e.value, e.source) if i == 0 else e for i, e in enumerate(good)]
    bad.append(good[0])
    with pytest.raises(StructureConstantError):
        solve_missing_constants(s, bad)


def test_non_root_sum_rejected():
    s = build("F4")
    with pytest.raises(StructureConstantError):
        solve_missing_constants(s, [KnownEntry("1", "-1", ONE, "bogus")])


def test_underdetermined_without_input():
    s = build("F4")
    with pytest.raises(UnderdeterminedTable) as err:
        solve_missing_constants(s, [])
    assert err.value.free
    t = solve_missing_constants(s, [], allow_free=True)
    assert t.free_choices == err.value.free


def test_json_roundtrip():
    t = load_table("F4")
    back = StructureTable.from_json(t.to_json())
    assert back.entries == t.entries and back.provenance == t.provenance
    assert t.with_flipped("alpha_1", "-beta_2")[("alpha_1", "-beta_2")] == -t[("alpha_1", "-beta_2")]


# -- brackets ------------------------------------------------------------------


def test_cartan_action_on_e7_root():
    cw = CartanWeyl(build("E6"), load_table("E6"))
    assert cw.bracket(cw.H(7), cw.E("7")) == cw.E("7", sqrt_rational(2) / 12)


def test_bracket_of_opposite_roots_is_cartan():
    cw = CartanWeyl(build("F4"), load_table("F4"))
    h = cw.bracket(cw.E("1"), cw.E("-1"))
    assert h == AlgebraElement({("H", 1): ONE / cw.K})


def test_structure_constant_example():
    cw = CartanWeyl(build("E6"), load_table("E6"))
    s = cw.system
    z = s.sum_label("beta_1", "-alpha_3")
    assert cw.bracket(cw.E("beta_1"), cw.E("-alpha_3")) == cw.E(z, ONE / 12)


@pytest.mark.parametrize("algebra", ["G2", "F4", "E6"])
def test_antisymmetry_and_conjugation(algebra):
    cw = CartanWeyl(build(algebra), load_table(algebra))
    gens = cw.generators
    for g1, g2 in itertools.islice(itertools.product(gens, repeat=2), 0, None, 7):
        a, b = AlgebraElement({g1: ONE}), AlgebraElement({g2: ONE})
        ab = cw.bracket(a, b)
        assert ab == -cw.bracket(b, a)
        # [a, b]^+ = [b^+, a^+]
        assert cw.canonical(cw.conjugate(ab)) == cw.canonical(cw.bracket(cw.conjugate(b), cw.conjugate(a)))


def test_dimensions_and_ranks():
    for alg, dim, rank in (("G2", 14, 2), ("F4", 52, 4), ("E6", 78, 6)):
        cw = CartanWeyl(build(alg), load_table(alg))
        assert cw.dimension == dim
        assert cw.rank == rank


def test_algebra_element_arithmetic():
    x = AlgebraElement.E("a", 2) + AlgebraElement({("H", 1): ONE})
    assert x - x == AlgebraElement()
    assert (x * 3) / 3 == x
    assert AlgebraElement() == 0
    assert len(x) == 2 and x.coeff(("E", "a")) == 2 and x.coeff(("E", "b")) == ZERO
