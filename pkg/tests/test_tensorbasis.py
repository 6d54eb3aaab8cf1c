from __future__ import annotations

import time
from fractions import Fraction

import pytest

from itbasis.cartanweyl import AlgebraElement
from itbasis.exactnum import sqrt_rational
from itbasis.fixtures import load_g2_labels
from itbasis.tensorbasis import (
    AssemblyError,
    G2Labels,
    TensorOperator,
    assemble,
    hermitian_conjugate,
    solve_labels,
)
from itbasis.verifier import verify_dimension

H = Fraction(1, 2)


def _shape(basis):
    out: dict[tuple, int] = {}
    for op in basis.independent_operators():
        key = (op.kind, tuple(op.ranks))
        out[key] = out.get(key, 0) + 1
    return out


def test_g2_composition():
    b = assemble("G2")
    assert b.component_count() == 14
    assert _shape(b) == {("J", (1,)): 2, ("U", (H, Fraction(3, 2))): 1}


def test_f4_composition():
    b = assemble("F4")
    assert b.component_count() == 52
    assert _shape(b) == {("J", (1,)): 4, ("U", (H, H)): 6, ("U", (H, H, H, H)): 1}


def test_e6_composition():
    b = assemble("E6")
    assert b.component_count() == 78
    assert _shape(b) == {("A", ()): 2, ("J", (1,)): 4, ("V", (H, H)): 6, ("W", (H, H)): 6, ("U", (H, H, H, H)): 1}
    # the dependent scalar is kept for relations that mention it
    assert b.has("A(5)")
    total = b.op("A(1)")[()] + b.op("A(3)")[()] + b.op("A(5)")[()]
    assert b.algebra_obj.canonical(total) == AlgebraElement()


@pytest.mark.parametrize("algebra", ["G2", "F4", "E6"])
def test_components_span_the_algebra(algebra, basis):
    b = basis(algebra)
    assert verify_dimension(b).passed
    gens = set()
    for _, _, el in b.all_components():
        gens |= {g for g in el if g[0] == "E"}
    assert gens == {("E", lab) for lab in b.system.labels}


def test_assemble_is_fast():
    for alg in ("G2", "F4", "E6"):
        t0 = time.perf_counter()
        assemble(alg)
        assert time.perf_counter() - t0 < 1.0


def test_operator_lookup_and_aliases():
    b = assemble("E6")
    assert b.op("V(24)") is b.op("V(1234)")
    with pytest.raises(KeyError):
        b.op("Q(1)")
    assert b.op("V(1234)").charges == {1: 1, 3: -1}
    assert b.op("W(1234)").charges == {1: -1, 3: 1}


def test_g2_components_from_frozen_assignment():
    b = assemble("G2")
    J1, J2 = b.op("J(1)"), b.op("J(2)")
    n = b.labels.numbering
    assert J1[1] == AlgebraElement.E(n["3"], -2)
    assert J1[-1] == AlgebraElement.E(b.system.negative(n["3"]), 2)
    assert J2[1] == AlgebraElement.E(n["6"], -2 * sqrt_rational(3))
    assert b.labels.reading == "swapped"
    assert b.labels.typo_pair == ("6", "2")


def test_hermitian_conjugate_flips_charges():
    b = assemble("E6")
    v = b.op("V(1234)")
    vc = hermitian_conjugate(v, b.algebra_obj)
    assert vc.charges == {1: -1, 3: 1}
    assert hermitian_conjugate(vc, b.algebra_obj).components == v.components


def test_operator_validation():
    el = AlgebraElement.E("x")
    with pytest.raises(AssemblyError):
        TensorOperator("J(1)", "J", (1,), (Fraction(1),), {}, {(Fraction(1),): el})
    with pytest.raises(AssemblyError):
        TensorOperator("J(1)", "J", (1, 2), (Fraction(1),), {}, {})
    comps = {(Fraction(p),): el for p in (1, 0, -1)}
    comps[(Fraction(0),)] = AlgebraElement()
    with pytest.raises(AssemblyError):
        TensorOperator("J(1)", "J", (1,), (Fraction(1),), {}, comps)


def test_component_names():
    b = assemble("G2")
    u = b.op("U(12)")
    assert u.component_name((H, Fraction(-3, 2))) == "U_{1/2 -3/2}(12)"
    assert b.op("J(2)").component_name((Fraction(0),)) == "J_0(2)"


def test_label_solver_reproduces_fixture():
    found = solve_labels()
    assert found, "no G2 assignment passes the definitions, coupled relations and Hermiticity"
    assert found[0].to_json() == load_g2_labels().to_json()


def test_label_solver_finds_weyl_orbit():
    found = solve_labels(first_only=False)
    assert len(found) == 12
    assert {f.reading for f in found} == {"swapped"}


def test_labels_json_roundtrip():
    lab = load_g2_labels()
    assert G2Labels.from_json(lab.to_json()) == lab


def test_json_export_is_complete():
    doc = assemble("F4").to_json()
    assert doc["component_count"] == 52
    assert sum(len(o["components"]) for o in doc["operators"]) == 52
    assert doc["cartan_set"] == [[f"J({i})", ["0"]] for i in range(1, 5)]
