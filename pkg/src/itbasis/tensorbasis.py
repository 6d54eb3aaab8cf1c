"""Irreducible tensor bases of G2, F4 and E6 built from the Cartan-Weyl basis.

Every operator is a :class:`TensorOperator`: a grid of components indexed by
one projection per angular-momentum slot.  Slot ids are the integers used in
the operator names (``U(1234)`` has slots 1..4, ``V(1638)`` has SO(3) slots 6
and 8 and scalar charges on A(1) and A(3)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .cartanweyl import (
    AlgebraElement,
    CartanWeyl,
    StructureConstantError,
    StructureTable,
    listed_entries,
    solve_missing_constants,
)
from .exactnum import ExactReal, sqrt_rational
from .rootsystem import RootSystem, build, dot, resolve_family_label
from .so3 import half, projections

__all__ = [
    "TensorOperator",
    "TensorBasis",
    "G2Labels",
    "assemble",
    "solve_labels",
    "hermitian_conjugate",
    "OPERATOR_ALIASES",
    "AssemblyError",
]

H = Fraction(1, 2)
SQRT2 = sqrt_rational(2)
SQRT3 = sqrt_rational(3)


class AssemblyError(ValueError):
    """Missing generator or wrong component count."""


@dataclass(frozen=True)
class TensorOperator:
    name: str
    kind: str  # J, A, U, V, W
    slots: tuple[int, ...]
    ranks: tuple[Fraction, ...]
    charges: Mapping[int, int]
    components: Mapping[tuple[Fraction, ...], AlgebraElement]

    def __post_init__(self) -> None:
        if len(self.slots) != len(self.ranks):
            raise AssemblyError(f"{self.name}: slot/rank arity mismatch")
        expected = set(itertools.product(*(projections(r) for r in self.ranks)))
        if set(self.components) != expected:
            raise AssemblyError(f"{self.name}: components do not cover the rank grid")
        for k, v in self.components.items():
            if not v:
                raise AssemblyError(f"{self.name}{k}: zero component")

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, key) -> AlgebraElement:
        if not isinstance(key, tuple):
            key = (key,)
        return self.components[tuple(half(k) for k in key)]

    def get(self, key: tuple[Fraction, ...]) -> AlgebraElement | None:
        return self.components.get(key)

    def keys(self) -> list[tuple[Fraction, ...]]:
        """Component labels, each slot descending from +r to -r."""
        return list(itertools.product(*(projections(r) for r in self.ranks)))

    def slot_index(self, slot: int) -> int:
        return self.slots.index(slot)

    def component_name(self, key: tuple[Fraction, ...]) -> str:
        if self.kind == "A":
            return self.name
        if self.kind == "J":
            return f"J_{_fmt(key[0])}({self.name[2:-1]})"
        return f"{self.name[0]}_{{{' '.join(_fmt(k) for k in key)}}}{self.name[1:]}"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "slots": list(self.slots),
            "ranks": [str(r) for r in self.ranks],
            "charges": {str(k): v for k, v in sorted(self.charges.items())},
            "components": [
                {"labels": [str(k) for k in key], "element": self.components[key].to_json(),
                 "text": str(self.components[key])}
                for key in self.keys()
            ],
        }


def _fmt(x: Fraction) -> str:
    return str(x)


@dataclass
class G2Labels:
    """Root numbering, Cartan frame and coefficient reading chosen for G2."""

    numbering: dict[str, str]  # "1".."6" -> root label
    frame: tuple[tuple[ExactReal, ...], tuple[ExactReal, ...]]
    reading: str  # "swapped" or "printed"
    typo_pair: tuple[str, str]
    free_values: dict[tuple[str, str], int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "numbering": dict(sorted(self.numbering.items())),
            "frame": [[c.to_json() for c in v] for v in self.frame],
            "reading": self.reading,
            "typo_pair": list(self.typo_pair),
            "free_values": [[x, y, b] for (x, y), b in sorted(self.free_values.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "G2Labels":
        return cls(
            numbering=dict(data["numbering"]),
            frame=tuple(tuple(ExactReal.from_json(c) for c in v) for v in data["frame"]),
            reading=data["reading"],
            typo_pair=tuple(data["typo_pair"]),
            free_values={(x, y): b for x, y, b in data.get("free_values", [])},
        )


@dataclass
class TensorBasis:
    algebra: str
    algebra_obj: CartanWeyl
    operators: list[TensorOperator]
    cartan_set: list[tuple[str, tuple[Fraction, ...]]]
    labels: G2Labels | None = None

    @property
    def system(self) -> RootSystem:
        return self.algebra_obj.system

    @property
    def table(self) -> StructureTable:
        return self.algebra_obj.table

    def __iter__(self) -> Iterator[TensorOperator]:
        return iter(self.operators)

    def op(self, name: str) -> TensorOperator:
        name = OPERATOR_ALIASES.get(name, name)
        for o in self.operators:
            if o.name == name:
                return o
        raise KeyError(name)

    def has(self, name: str) -> bool:
        name = OPERATOR_ALIASES.get(name, name)
        return any(o.name == name for o in self.operators)

    def of_kind(self, kind: str) -> list[TensorOperator]:
        return [o for o in self.operators if o.kind == kind]

    def independent_operators(self) -> list[TensorOperator]:
        """Operators minus those fixed by a linear identity (E6's A(5))."""
        skip = DEPENDENT_OPERATORS.get(self.algebra, ())
        return [o for o in self.operators if o.name not in skip]

    def component_count(self) -> int:
        return sum(len(o) for o in self.independent_operators())

    def all_components(self, *, include_dependent: bool = False) -> list[tuple[TensorOperator, tuple[Fraction, ...], AlgebraElement]]:
        ops = self.operators if include_dependent else self.independent_operators()
        return [(o, k, o.components[k]) for o in ops for k in o.keys()]

    def bracket(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        return self.algebra_obj.bracket(a, b)

    def with_table(self, table: StructureTable) -> "TensorBasis":
        return TensorBasis(self.algebra, self.algebra_obj.with_table(table), self.operators, self.cartan_set, self.labels)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "component_count": self.component_count(),
            "operators": [o.to_json() for o in self.operators],
            "cartan_set": [[n, [str(x) for x in k]] for n, k in self.cartan_set],
            "g2_labels": self.labels.to_json() if self.labels else None,
        }


# stored for completeness but excluded from counts: A(1) + A(3) + A(5) = 0
DEPENDENT_OPERATORS = {"E6": ("A(5)",)}

OPERATOR_ALIASES = {"V(24)": "V(1234)", "W(24)": "W(1234)", "V(26)": "V(1256)", "W(26)": "W(1256)",
                    "V(46)": "V(3456)", "W(46)": "W(3456)"}


# -- helpers ----------------------------------------------------------------------


def _op(name: str, kind: str, slots, ranks, cells: Mapping, charges=None) -> TensorOperator:
    comps = {tuple(half(k) for k in key): v for key, v in cells.items()}
    return TensorOperator(name, kind, tuple(slots), tuple(half(r) for r in ranks), dict(charges or {}), comps)


def _J(slot: int, plus: AlgebraElement, zero: AlgebraElement, minus: AlgebraElement) -> TensorOperator:
    return _op(f"J({slot})", "J", (slot,), (1,), {(1,): plus, (0,): zero, (-1,): minus})


def _e(system: RootSystem, label: str, coeff) -> AlgebraElement:
    lab = resolve_family_label(label, system).label
    return AlgebraElement({("E", lab): coeff})


def _h(*pairs: tuple[int, object]) -> AlgebraElement:
    return AlgebraElement({("H", i): c for i, c in pairs})


# -- F4 ---------------------------------------------------------------------------

# U(ij) built from a y-family: alpha <-> 13, beta <-> 14, gamma <-> 23, epsilon <-> 24
F4_Y_SLOTS = {"alpha": (1, 3), "beta": (1, 4), "gamma": (2, 3), "epsilon": (2, 4)}

# U(1234): rows (p, q) on slots 1, 2; columns (p', q') on slots 3, 4; (sign, root)
_F4_U1234 = {
    (H, H): [(-1, "2+4"), (1, "2+3"), (-1, "2-3"), (-1, "2-4")],
    (H, -H): [(1, "1+4"), (-1, "1+3"), (1, "1-3"), (1, "1-4")],
    (-H, H): [(1, "-1+4"), (-1, "-1+3"), (1, "-1-3"), (1, "-1-4")],
    (-H, -H): [(1, "-2+4"), (-1, "-2+3"), (1, "-2-3"), (1, "-2-4")],
}
_COLS = [(H, H), (H, -H), (-H, H), (-H, -H)]


def _assemble_f4(cw: CartanWeyl) -> list[TensorOperator]:
    s = cw.system
    K = s.K
    c = K / SQRT2
    ops: list[TensorOperator] = []
    for i in (1, 3):
        i1 = i + 1
        ops.append(_J(i, _e(s, f"{i}+{i1}", c), _h((i, K * H), (i1, K * H)), _e(s, f"-{i}-{i1}", -c)))
        ops.append(_J(i1, _e(s, f"-{i}+{i1}", c), _h((i, -K * H), (i1, K * H)), _e(s, f"{i}-{i1}", -c)))
    for i in (1, 3):
        i1 = i + 1
        cells = {
            (H, H): _e(s, f"{i1}", -c),
            (H, -H): _e(s, f"{i}", c),
            (-H, H): _e(s, f"-{i}", c),
            (-H, -H): _e(s, f"-{i1}", c),
        }
        ops.append(_op(f"U({i}{i1})", "U", (i, i1), (H, H), cells))
    for fam, (i, j) in F4_Y_SLOTS.items():
        cells = {
            (H, H): _e(s, f"{fam}_1", -c),
            (H, -H): _e(s, f"{fam}_2", c),
            (-H, H): _e(s, f"-{fam}_2", c),
            (-H, -H): _e(s, f"-{fam}_1", c),
        }
        ops.append(_op(f"U({i}{j})", "U", (i, j), (H, H), cells))
    cells = {}
    for row, entries in _F4_U1234.items():
        for col, (sg, lab) in zip(_COLS, entries):
            cells[row + col] = _e(s, lab, c * sg)
    ops.append(_op("U(1234)", "U", (1, 2, 3, 4), (H, H, H, H), cells))
    order = ["J(1)", "J(2)", "J(3)", "J(4)", "U(12)", "U(34)", "U(13)", "U(14)", "U(23)", "U(24)", "U(1234)"]
    return sorted(ops, key=lambda o: order.index(o.name))


# -- E6 ---------------------------------------------------------------------------

# V, W for (i i1 j j1) in terms of explicit roots; sign and root per (p, q)
def _vw_pair(s: RootSystem, i: int, j: int, c: ExactReal) -> tuple[TensorOperator, TensorOperator]:
    i1, j1 = i + 1, j + 1
    v = {
        (H, H): _e(s, f"{i1}-{j}", -c),
        (H, -H): _e(s, f"{i1}-{j1}", -c),
        (-H, H): _e(s, f"{i}-{j}", c),
        (-H, -H): _e(s, f"{i}-{j1}", c),
    }
    w = {
        (H, H): _e(s, f"-{i}+{j1}", c),
        (H, -H): _e(s, f"-{i}+{j}", -c),
        (-H, H): _e(s, f"-{i1}+{j1}", c),
        (-H, -H): _e(s, f"-{i1}+{j}", -c),
    }
    name = f"{i}{i1}{j}{j1}"
    return (
        _op(f"V({name})", "V", (i1, j1), (H, H), v, {i: 1, j: -1}),
        _op(f"W({name})", "W", (i1, j1), (H, H), w, {i: -1, j: 1}),
    )


# (sign, root) per printed cell (p, q) in row-major order ½½, ½-½, -½½, -½-½
_E6_FAMILY_VW = {
    "1638": ((6, 8), {1: 1, 3: -1},
             [(-1, "alpha_1"), (-1, "alpha_2"), (1, "alpha_3"), (1, "alpha_4")],
             [(1, "-alpha_4"), (-1, "-alpha_3"), (1, "-alpha_2"), (-1, "-alpha_1")]),
    "1458": ((4, 8), {1: 1, 5: -1},
             [(1, "beta_1"), (1, "beta_2"), (-1, "beta_3"), (-1, "beta_4")],
             [(-1, "-beta_4"), (1, "-beta_3"), (-1, "-beta_2"), (1, "-beta_1")]),
    # printed with rows on slot 8 and columns on slot 2; stored as (slot 2, slot 8)
    "3258": ((8, 2), {3: 1, 5: -1},
             [(-1, "epsilon_1"), (1, "epsilon_3"), (-1, "epsilon_2"), (1, "epsilon_4")],
             [(1, "-epsilon_4"), (1, "-epsilon_2"), (-1, "-epsilon_3"), (-1, "-epsilon_1")]),
}

_E6_U2468 = {
    (H, H): [(-1, "lambda_1"), (1, "lambda_2"), (-1, "lambda_3"), (-1, "lambda_4")],
    (H, -H): [(1, "lambda_5"), (-1, "lambda_6"), (1, "lambda_7"), (1, "lambda_8")],
    (-H, H): [(1, "-lambda_8"), (-1, "-lambda_7"), (1, "-lambda_6"), (1, "-lambda_5")],
    (-H, -H): [(1, "-lambda_4"), (-1, "-lambda_3"), (1, "-lambda_2"), (1, "-lambda_1")],
}


def _assemble_e6(cw: CartanWeyl) -> list[TensorOperator]:
    s = cw.system
    K = s.K
    c = K / SQRT2
    ops: list[TensorOperator] = []
    for i in (1, 3, 5):
        i1 = i + 1
        ops.append(_op(f"A({i})", "A", (), (), {(): _h((i, K), (i1, K))}))
    for i in (1, 3, 5):
        i1 = i + 1
        ops.append(_J(i1, _e(s, f"-{i}+{i1}", c), _h((i, -K * H), (i1, K * H)), _e(s, f"{i}-{i1}", -c)))
    ops.append(_J(8, _e(s, "7", c), _h((7, c)), _e(s, "-7", -c)))
    for i, j in ((1, 3), (1, 5), (3, 5)):
        ops.extend(_vw_pair(s, i, j, c))
    for name, (printed_slots, charges, vcells, wcells) in _E6_FAMILY_VW.items():
        slots = tuple(sorted(printed_slots))
        flip = slots != printed_slots
        for kind, cells, ch in (("V", vcells, charges), ("W", wcells, {k: -v for k, v in charges.items()})):
            grid = {}
            for (p, q), (sg, lab) in zip(_COLS, cells):
                key = (q, p) if flip else (p, q)
                grid[key] = _e(s, lab, c * sg)
            ops.append(_op(f"{kind}({name})", kind, slots, (H, H), grid, ch))
    cells = {}
    for row, entries in _E6_U2468.items():
        for col, (sg, lab) in zip(_COLS, entries):
            cells[row + col] = _e(s, lab, c * sg)
    ops.append(_op("U(2468)", "U", (2, 4, 6, 8), (H, H, H, H), cells))
    return ops


# -- G2 ---------------------------------------------------------------------------

# target weights under (J_0(1), J_0(2)) of the positive roots 1..6
G2_WEIGHTS = {
    "3": (Fraction(1), Fraction(0)),
    "6": (Fraction(0), Fraction(1)),
    "5": (H, Fraction(3, 2)),
    "4": (H, H),
    "2": (H, -H),
    "1": (H, Fraction(-3, 2)),
}

# J coefficients (J(1), J(2)) per reading: printed has 2*sqrt(3) on J(1), 2 on J(2)
G2_READINGS = {"printed": (2 * SQRT3, ExactReal.rational(2)), "swapped": (ExactReal.rational(2), 2 * SQRT3)}

# U(12) cells: (p, q) -> (sign, index) with coefficient 2*sqrt(3); negative index = E_-n
_G2_U = {
    (H, Fraction(3, 2)): (1, 5), (H, H): (1, 4), (H, -H): (1, 2), (H, Fraction(-3, 2)): (1, 1),
    (-H, Fraction(3, 2)): (-1, -1), (-H, H): (1, -2), (-H, -H): (-1, -4), (-H, Fraction(-3, 2)): (1, -5),
}


def _g2_root(s: RootSystem, numbering: Mapping[str, str], idx: int) -> str:
    lab = numbering[str(abs(idx))]
    return lab if idx > 0 else s.negative(lab)


def _assemble_g2(cw: CartanWeyl, labels: G2Labels) -> list[TensorOperator]:
    s = cw.system
    a1, a2 = G2_READINGS[labels.reading]
    n = labels.numbering
    e = lambda idx, coeff: AlgebraElement({("E", _g2_root(s, n, idx)): coeff})  # noqa: E731
    ops = [
        _J(1, e(3, -a1), _h((1, a1)), e(-3, a1)),
        _J(2, e(6, -a2), _h((2, a2)), e(-6, a2)),
    ]
    u = 2 * SQRT3
    cells = {key: e(idx, u * sg) for key, (sg, idx) in _G2_U.items()}
    ops.append(_op("U(12)", "U", (1, 2), (H, Fraction(3, 2)), cells))
    return ops


def _g2_candidates(s: RootSystem, reading: str) -> Iterator[G2Labels]:
    """Numberings compatible with the target weights, one per Weyl-chamber choice."""
    a1, a2 = G2_READINGS[reading]
    K = s.K
    for r3 in s.labels:
        v3 = s.coords(r3)
        n3 = dot(v3, v3)
        for r6 in s.labels:
            v6 = s.coords(r6)
            if dot(v3, v6) != 0:
                continue
            n6 = dot(v6, v6)
            h1 = tuple(x / sqrt_rational(n3.rational_part()) for x in v3)
            h2 = tuple(x / sqrt_rational(n6.rational_part()) for x in v6)
            numbering = {}
            ok = True
            for idx, (w1, w2) in G2_WEIGHTS.items():
                hit = [
                    lab for lab in s.labels
                    if a1 * dot(h1, s.coords(lab)) / K == w1 and a2 * dot(h2, s.coords(lab)) / K == w2
                ]
                if len(hit) != 1:
                    ok = False
                    break
                numbering[idx] = hit[0]
            if ok and numbering["3"] == r3 and numbering["6"] == r6:
                yield G2Labels(numbering, (h1, h2), reading, ("", ""))


def _g2_typo_pairs(s: RootSystem, numbering: Mapping[str, str]) -> list[tuple[str, str]]:
    """Ordered index pairs (a, b) of positive roots whose sum is a root."""
    out = []
    for a, b in itertools.permutations([str(k) for k in range(1, 7)], 2):
        if s.sum_label(numbering[a], numbering[b]) not in (None, "0"):
            out.append((a, b))
    return out


def solve_labels(
    system: RootSystem | None = None,
    *,
    readings: Sequence[str] = ("printed", "swapped"),
    accept=None,
    first_only: bool = True,
) -> list[G2Labels]:
    """Search G2 root numberings, coefficient readings and the mislabeled constant.

    For every candidate the structure constants are completed with the Jacobi
    solver (enumerating any residual free signs) and the assembled basis is
    passed to ``accept`` (default: definitions, the coupled relations and
    Hermiticity all pass).  Returns the accepted assignments in search order.
    """
    from . import verifier  # local import: verifier depends on this module

    s = system or build("G2")
    if accept is None:
        def accept(basis: TensorBasis) -> bool:
            return verifier.quick_accept(basis)

    found: list[G2Labels] = []
    for reading in readings:
        for cand in _g2_candidates(s, reading):
            for pair in _g2_typo_pairs(s, cand.numbering):
                entries = listed_entries(s, cand.numbering, pair)
                try:
                    base = solve_missing_constants(s, entries, allow_free=True)
                except StructureConstantError:
                    continue
                for bits in itertools.product((0, 1), repeat=len(base.free_choices)):
                    fv = dict(zip(base.free_choices, bits))
                    table = base if not bits or not any(bits) else solve_missing_constants(
                        s, entries, allow_free=True, free_values=fv
                    )
                    lab = G2Labels(dict(cand.numbering), cand.frame, reading, pair, fv)
                    basis = _g2_basis(s, table, lab)
                    if accept(basis):
                        found.append(lab)
                        if first_only:
                            return found
    return found


def _g2_basis(s: RootSystem, table: StructureTable, labels: G2Labels) -> TensorBasis:
    cw = CartanWeyl(s, table, labels.frame)
    ops = _assemble_g2(cw, labels)
    return _finish("G2", cw, ops, labels)


def g2_table(s: RootSystem, labels: G2Labels) -> StructureTable:
    entries = listed_entries(s, labels.numbering, labels.typo_pair)
    return solve_missing_constants(s, entries, allow_free=True, free_values=labels.free_values)


# -- assembly ---------------------------------------------------------------------

ORDERS = {"G2": 14, "F4": 52, "E6": 78}
CARTAN_SETS = {
    "G2": [("J(1)", (0,)), ("J(2)", (0,))],
    "F4": [(f"J({i})", (0,)) for i in range(1, 5)],
    "E6": [("A(1)", ()), ("A(3)", ()), ("J(2)", (0,)), ("J(4)", (0,)), ("J(6)", (0,)), ("J(8)", (0,))],
}


def _finish(algebra: str, cw: CartanWeyl, ops: list[TensorOperator], labels: G2Labels | None) -> TensorBasis:
    cartan = [(n, tuple(Fraction(x) for x in k)) for n, k in CARTAN_SETS[algebra]]
    basis = TensorBasis(algebra, cw, ops, cartan, labels)
    if basis.component_count() != ORDERS[algebra]:
        raise AssemblyError(f"{algebra}: {basis.component_count()} components, expected {ORDERS[algebra]}")
    return basis


def assemble(
    algebra: str,
    *,
    table: StructureTable | None = None,
    labels: G2Labels | None = None,
    system: RootSystem | None = None,
) -> TensorBasis:
    """Build the tensor basis of ``algebra`` (``G2``, ``F4`` or ``E6``).

    Without ``table`` the frozen structure constants are used (the solver
    reproduces them; see :mod:`itbasis.fixtures`).  G2 uses the frozen label
    assignment unless ``labels`` is given.
    """
    algebra = algebra.upper()
    s = system or build(algebra)
    if algebra == "G2":
        if labels is None:
            from .fixtures import load_g2_labels

            labels = load_g2_labels()
        if table is None:
            table = g2_table(s, labels)
        return _g2_basis(s, table, labels)
    if table is None:
        from .fixtures import load_table

        table = load_table(algebra)
    cw = CartanWeyl(s, table)
    ops = _assemble_f4(cw) if algebra == "F4" else _assemble_e6(cw)
    return _finish(algebra, cw, ops, None)


def hermitian_conjugate(op: TensorOperator, cw: CartanWeyl) -> TensorOperator:
    """Componentwise conjugate with ``H_i^+ = H_i`` and ``E_a^+ = E_-a``."""
    comps = {k: cw.conjugate(v) for k, v in op.components.items()}
    return TensorOperator(op.name + "^+", op.kind, op.slots, op.ranks, {k: -v for k, v in op.charges.items()}, comps)
