"""Cartan-Weyl basis, structure constants and the exact commutator engine.

Bracket conventions (``K`` the normalisation constant, ``f_i`` the Cartan
frame vectors, ``<,>`` the Euclidean product of the root coordinates)::

    [H_i, E_a]   = <f_i, a>/K E_a
    [E_a, E_-a]  = sum_i <f_i, a>/K H_i
    [E_a, E_b]   = N_ab E_(a+b)

The frame ``f_1..f_n`` is a Parseval frame of the root span, so the Cartan
part of any element has a unique canonical coefficient vector (its projection
``F F^T c``).  For F4 the frame is ``e_1..e_4``, for E6 the projections of
``e_1..e_7`` onto the root span (so ``H_1 + ... + H_6 = 0``), and for G2 an
orthonormal pair in the plane ``x1 + x2 + x3 = 0`` chosen by the label solver.

Structure-constant magnitudes are fixed by root strings,
``N_ab**2 = (r + 1) q <a, a> / (2 K**2)`` for the ``a``-string
``b - r a, ..., b + q a``.  Only signs are unknown, and every Jacobi relation
among root vectors is linear in the signs over GF(2), so completing a partial
table is Gaussian elimination over GF(2) (see :func:`solve_missing_constants`).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .exactnum import ExactReal, ONE, ZERO, as_exact, sqrt_rational
from .rootsystem import RootSystem, Vector, build, dot, normalize_label, resolve_family_label

log = logging.getLogger(__name__)

__all__ = [
    "AlgebraElement",
    "CartanWeyl",
    "KnownEntry",
    "StructureTable",
    "StructureConstantError",
    "JacobiContradiction",
    "UnderdeterminedTable",
    "solve_missing_constants",
    "load_structure_constants",
    "listed_entries",
    "corrected_entries",
    "CORRECTIONS",
    "Correction",
    "default_frame",
]

Generator = tuple  # ("H", int) | ("E", str)


def _gen_key(g: Generator) -> tuple:
    return (0, g[1], "") if g[0] == "H" else (1, 0, g[1])


class AlgebraElement:
    """Sparse exact linear combination of Cartan-Weyl generators."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Generator, ExactReal] | None = None):
        self._terms: dict[Generator, ExactReal] = {}
        if terms:
            for g, c in terms.items():
                c = as_exact(c)
                if c:
                    self._terms[g] = c
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Generator, ExactReal]) -> "AlgebraElement":
        out = cls.__new__(cls)
        out._terms = terms
        out._hash = None
        return out

    @classmethod
    def E(cls, label: str, coeff=ONE) -> "AlgebraElement":
        return cls({("E", label): as_exact(coeff)})

    @property
    def terms(self) -> dict[Generator, ExactReal]:
        return dict(self._terms)

    def items(self) -> list[tuple[Generator, ExactReal]]:
        return sorted(self._terms.items(), key=lambda kv: _gen_key(kv[0]))

    def __iter__(self) -> Iterator[Generator]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coeff(self, g: Generator) -> ExactReal:
        return self._terms.get(g, ZERO)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        acc = dict(self._terms)
        for g, c in other._terms.items():
            v = acc.get(g)
            if v is None:
                acc[g] = c
            else:
                v = v + c
                if v:
                    acc[g] = v
                else:
                    del acc[g]
        return AlgebraElement._raw(acc)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement._raw({g: -c for g, c in self._terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, scalar) -> "AlgebraElement":
        s = as_exact(scalar)
        if not s:
            return AlgebraElement()
        return AlgebraElement._raw({g: c * s for g, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "AlgebraElement":
        return self * as_exact(scalar).invert()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlgebraElement):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for g, c in self.items():
            name = f"H_{g[1]}" if g[0] == "H" else f"E_{{{g[1]}}}"
            parts.append(f"({c})*{name}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> list:
        return [
            [g[0], g[1], c.to_json()] for g, c in self.items()
        ]


def default_frame(system: RootSystem) -> list[Vector]:
    """Parseval frame of the root span used for the Cartan generators."""
    n = system.dim
    if system.algebra == "F4":
        return [tuple(ExactReal.rational(int(i == j)) for j in range(n)) for i in range(n)]
    if system.algebra == "E6":
        frame = []
        for i in range(7):
            if i < 6:
                v = [ExactReal.rational(Fraction(int(i == j)) - Fraction(1, 6)) for j in range(6)]
                frame.append(tuple(v) + (ZERO,))
            else:
                frame.append(tuple(ZERO for _ in range(6)) + (ONE,))
        return frame
    if system.algebra == "G2":
        # long root e1+e2-2e3 over sqrt(6) and the orthogonal short root over sqrt(2)
        h1 = tuple(c / sqrt_rational(6) for c in system.coords("e1+e2-2e3"))
        h2 = tuple(c / sqrt_rational(2) for c in system.coords("e1-e2"))
        return [h1, h2]
    raise ValueError(system.algebra)


# -- structure constants ---------------------------------------------------------


class StructureConstantError(ValueError):
    pass


class JacobiContradiction(StructureConstantError):
    def __init__(self, message: str, triple: tuple[str, ...] | None = None):
        super().__init__(message)
        self.triple = triple


class UnderdeterminedTable(StructureConstantError):
    def __init__(self, message: str, free: list[tuple[str, str]]):
        super().__init__(message)
        self.free = free


@dataclass(frozen=True)
class KnownEntry:
    x: str
    y: str
    value: ExactReal  # N_xy (already divided by K)
    source: str


@dataclass
class StructureTable:
    """Complete table ``(x, y) -> N_xy`` over all ordered pairs with ``x + y`` a root."""

    algebra: str
    K: ExactReal
    entries: dict[tuple[str, str], ExactReal]
    provenance: dict[tuple[str, str], str] = field(default_factory=dict)
    free_choices: list[tuple[str, str]] = field(default_factory=list)

    def __getitem__(self, key: tuple[str, str]) -> ExactReal:
        return self.entries[key]

    def get(self, x: str, y: str) -> ExactReal | None:
        return self.entries.get((x, y))

    def __len__(self) -> int:
        return len(self.entries)

    def with_flipped(self, x: str, y: str) -> "StructureTable":
        """Copy with the sign of ``N_xy`` flipped (and only that ordered pair)."""
        e = dict(self.entries)
        e[(x, y)] = -e[(x, y)]
        return StructureTable(self.algebra, self.K, e, dict(self.provenance), list(self.free_choices))

    def to_json(self, order: Sequence[str] | None = None) -> dict:
        rank = {lab: i for i, lab in enumerate(order)} if order else None

        def key(p):
            return (rank[p[0]], rank[p[1]]) if rank else p

        return {
            "algebra": self.algebra,
            "K": self.K.to_json(),
            "K_text": str(self.K),
            "entries": [
                {
                    "x": x,
                    "y": y,
                    "N": self.entries[(x, y)].to_json(),
                    "N_text": str(self.entries[(x, y)]),
                    "provenance": self.provenance.get((x, y), "jacobi-solved"),
                }
                for (x, y) in sorted(self.entries, key=key)
            ],
            "free_choices": [list(p) for p in self.free_choices],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "StructureTable":
        entries, prov = {}, {}
        for e in data["entries"]:
            entries[(e["x"], e["y"])] = ExactReal.from_json(e["N"])
            prov[(e["x"], e["y"])] = e.get("provenance", "jacobi-solved")
        return cls(data["algebra"], ExactReal.from_json(data["K"]), entries, prov,
                   [tuple(p) for p in data.get("free_choices", [])])


class _SignSystem:
    """Sign variables for N_xy up to N_yx = -N_xy and N_-x,-y = -N_xy."""

    def __init__(self, system: RootSystem):
        self.system = system
        self.var: dict[tuple[str, str], tuple[int, int]] = {}
        self.reps: list[tuple[str, str]] = []
        neg = system.negative
        for x in system.labels:
            for y in system.labels:
                s = system.sum_label(x, y)
                if s is None or s == "0" or (x, y) in self.var:
                    continue
                orbit = [((x, y), 0), ((y, x), 1), ((neg(x), neg(y)), 1), ((neg(y), neg(x)), 0)]
                idx = len(self.reps)
                self.reps.append((x, y))
                for pair, off in orbit:
                    self.var[pair] = (idx, off)

    def __len__(self) -> int:
        return len(self.reps)

    def magnitude2(self, x: str, y: str) -> Fraction:
        r, q = self.system.string_lengths(x, y)
        a2 = dot(self.system.coords(x), self.system.coords(x)).rational_part()
        K2 = (self.system.K * self.system.K).rational_part()
        return Fraction((r + 1) * q) * a2 / (2 * K2)


class _GF2:
    """Incremental row echelon form over GF(2); rows are int bitmasks."""

    def __init__(self) -> None:
        self.pivots: dict[int, tuple[int, int]] = {}

    def add(self, row: int, rhs: int) -> bool:
        while row:
            p = row.bit_length() - 1
            hit = self.pivots.get(p)
            if hit is None:
                self.pivots[p] = (row, rhs)
                return True
            row ^= hit[0]
            rhs ^= hit[1]
        return rhs == 0

    def solve(self, nvars: int, free_values: Mapping[int, int] | None = None) -> tuple[list[int], list[int]]:
        free = [v for v in range(nvars) if v not in self.pivots]
        val = [0] * nvars
        for v in free:
            val[v] = (free_values or {}).get(v, 0)
        for p in sorted(self.pivots):
            row, rhs = self.pivots[p]
            acc = rhs
            rest = row & ~(1 << p)
            while rest:
                b = rest & -rest
                acc ^= val[b.bit_length() - 1]
                rest ^= b
            val[p] = acc
        return val, free


def _jacobi_sign_equations(system: RootSystem, signs: _SignSystem, nmag: dict) -> Iterator[tuple[int, int, tuple[str, str, str]]]:
    """GF(2) equations ``(mask, rhs, triple)`` implied by Jacobi on root vectors."""
    labels = system.labels
    K2 = system.K * system.K
    fkey = {lab: tuple(round(float(x) * 1e6) for x in system.coords(lab)) for lab in labels}
    by_key = {k: lab for lab, k in fkey.items()}
    zero = tuple(0 for _ in range(system.dim))
    for a, b, c in itertools.combinations(labels, 3):
        tot = tuple(x + y + z for x, y, z in zip(fkey[a], fkey[b], fkey[c]))
        d = "0" if tot == zero else by_key.get(tot)
        if d is None:
            continue
        if d == "0":
            # N_ab = N_bc = N_ca
            va, oa = signs.var[(a, b)]
            vb, ob = signs.var[(b, c)]
            vc, oc = signs.var[(c, a)]
            if not (nmag[(a, b)] == nmag[(b, c)] == nmag[(c, a)]):
                raise JacobiContradiction("magnitude mismatch in cyclic identity", (a, b, c))
            yield (1 << va) ^ (1 << vb), oa ^ ob, (a, b, c)
            yield (1 << va) ^ (1 << vc), oa ^ oc, (a, b, c)
            continue
        const = ZERO
        terms: list[tuple[ExactReal, tuple[tuple[int, int], ...]]] = []
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            s = system.sum_label(x, y)
            if s is None:
                continue
            if s == "0":
                const = const + dot(system.coords(x), system.coords(z)) / K2
                continue
            if system.sum_label(s, z) is None:
                continue
            mag = nmag[(x, y)] * nmag[(s, z)]
            terms.append((mag, (signs.var[(x, y)], signs.var[(s, z)])))
        if not terms:
            if const:
                raise JacobiContradiction("nonzero constant Jacobi residue", (a, b, c))
            continue
        k = len(terms)
        sols = []
        for bits in range(1 << k):
            tot = const
            for t, (mag, _) in enumerate(terms):
                tot = tot - mag if (bits >> t) & 1 else tot + mag
            if not tot:
                sols.append(bits)
        if not sols:
            raise JacobiContradiction("root-string magnitudes admit no sign pattern", (a, b, c))
        s0 = sols[0]
        diffs = {s ^ s0 for s in sols}
        # affine hull must equal the solution set
        span = {0}
        for dlt in diffs:
            span |= {v ^ dlt for v in span}
        if len(span) != len(sols):
            raise JacobiContradiction("non-affine sign pattern", (a, b, c))
        for w in range(1, 1 << k):
            if any(bin(w & dlt).count("1") % 2 for dlt in diffs):
                continue
            mask, rhs = 0, bin(w & s0).count("1") % 2
            for t in range(k):
                if (w >> t) & 1:
                    for v, off in terms[t][1]:
                        mask ^= 1 << v
                        rhs ^= off
            if mask == 0 and rhs == 0:
                continue
            yield mask, rhs, (a, b, c)


def solve_missing_constants(
    system: RootSystem,
    known: Iterable[KnownEntry],
    *,
    allow_free: bool = False,
    free_values: Mapping[tuple[str, str], int] | None = None,
) -> StructureTable:
    """Complete a partial table so that the Jacobi identity holds.

    ``known`` entries are checked against the root-string magnitudes and fix
    signs; every remaining sign is propagated from the Jacobi relations.  A
    contradiction raises :class:`JacobiContradiction` naming the triple where
    it surfaced.  If signs remain undetermined, :class:`UnderdeterminedTable`
    is raised unless ``allow_free`` is set; free signs then take the values in
    ``free_values`` (default ``+``) and are listed in ``free_choices``.
    """
    signs = _SignSystem(system)
    nmag = {pair: sqrt_rational(signs.magnitude2(*pair)) for pair in signs.var}
    gf = _GF2()
    known = list(known)
    fixed: dict[int, tuple[KnownEntry, int]] = {}
    for e in known:
        if (e.x, e.y) not in signs.var:
            raise StructureConstantError(f"{e.source}: {e.x} + {e.y} is not a root")
        if abs(e.value) != nmag[(e.x, e.y)]:
            raise StructureConstantError(
                f"{e.source}: |N({e.x},{e.y})| = {abs(e.value)} but root strings give {nmag[(e.x, e.y)]}"
            )
        v, off = signs.var[(e.x, e.y)]
        bit = (1 if e.value.sign() < 0 else 0) ^ off
        if not gf.add(1 << v, bit):
            raise JacobiContradiction(f"{e.source}: conflicts with an earlier entry for the same constant")
        fixed[v] = (e, bit)
    for mask, rhs, triple in _jacobi_sign_equations(system, signs, nmag):
        if not gf.add(mask, rhs):
            raise JacobiContradiction(
                f"{system.algebra}: Jacobi identity on E_{triple[0]}, E_{triple[1]}, E_{triple[2]} "
                "cannot hold with the given constants",
                triple,
            )
    fv = {}
    for pair, bit in (free_values or {}).items():
        v, off = signs.var[pair]
        fv[v] = bit ^ off
    val, free = gf.solve(len(signs), fv)
    if free and not allow_free:
        raise UnderdeterminedTable(
            f"{system.algebra}: {len(free)} structure-constant signs left free", [signs.reps[v] for v in free]
        )
    entries: dict[tuple[str, str], ExactReal] = {}
    provenance: dict[tuple[str, str], str] = {}
    direct = {(e.x, e.y) for e in known}
    free_set = set(free)
    for pair, (v, off) in signs.var.items():
        s = val[v] ^ off
        entries[pair] = -nmag[pair] if s else nmag[pair]
        if pair in direct:
            provenance[pair] = "paper"
        elif v in fixed:
            provenance[pair] = "symmetry"
        elif v in free_set:
            provenance[pair] = "free-choice"
        else:
            provenance[pair] = "jacobi-solved"
    return StructureTable(system.algebra, system.K, entries, provenance, [signs.reps[v] for v in free])


# -- listed entries -------------------------------------------------------------------

_F4_G_TABLE = [
    # (row x, column y, G_xy)
    ("alpha_1", "alpha_2", 1), ("alpha_1", "-alpha_2", 1),
    ("beta_1", "beta_2", 1), ("beta_1", "-beta_2", 1),
    ("gamma_1", "gamma_2", 1), ("gamma_1", "-gamma_2", 1),
    ("epsilon_1", "epsilon_2", 1), ("epsilon_1", "-epsilon_2", 1),
    ("alpha_1", "-beta_2", "+h"), ("alpha_1", "-beta_1", "-h"),
    ("alpha_2", "-beta_2", "+h"), ("alpha_2", "-beta_1", "+h"),
    ("gamma_1", "-epsilon_2", "-h"), ("gamma_1", "-epsilon_1", "+h"),
    ("gamma_2", "-epsilon_2", "-h"), ("gamma_2", "-epsilon_1", "-h"),
    ("alpha_1", "gamma_2", "+h"), ("alpha_1", "-gamma_1", "-h"),
    ("-alpha_2", "gamma_2", "+h"), ("-alpha_2", "-gamma_1", "+h"),
    ("beta_1", "epsilon_2", "+h"), ("beta_1", "-epsilon_1", "-h"),
    ("-beta_2", "epsilon_2", "+h"), ("-beta_2", "-epsilon_1", "+h"),
    ("alpha_1", "epsilon_1", 1), ("alpha_1", "-epsilon_1", -1),
    ("alpha_1", "epsilon_2", 1), ("alpha_1", "-epsilon_2", 1),
    ("-alpha_2", "epsilon_1", 1), ("-alpha_2", "-epsilon_1", 1),
    ("-alpha_2", "epsilon_2", 1), ("-alpha_2", "-epsilon_2", -1),
    ("beta_1", "gamma_1", 1), ("beta_1", "-gamma_1", 1),
    ("beta_1", "gamma_2", -1), ("beta_1", "-gamma_2", 1),
    ("-beta_1", "gamma_1", 1), ("-beta_1", "-gamma_1", -1),
    ("-beta_1", "gamma_2", -1), ("-beta_1", "-gamma_2", -1),
]

_E6_S_TABLE = [
    ("alpha_1", "-alpha_3", 1), ("alpha_1", "-alpha_2", -1),
    ("alpha_4", "-alpha_3", -1), ("alpha_4", "-alpha_2", 1),
    ("beta_1", "-alpha_3", 1), ("beta_1", "-alpha_1", 1),
    ("beta_3", "-alpha_3", 1), ("beta_3", "-alpha_1", 1),
    ("beta_2", "-alpha_4", 1), ("beta_2", "-alpha_2", 1),
    ("beta_4", "-alpha_4", 1), ("beta_4", "-alpha_2", 1),
    ("beta_1", "-beta_3", 1), ("beta_1", "-beta_2", -1),
    ("beta_4", "-beta_3", -1), ("beta_4", "-beta_2", 1),
    ("epsilon_1", "-epsilon_3", 1), ("epsilon_1", "-epsilon_2", -1),
    ("epsilon_4", "-epsilon_3", -1), ("epsilon_4", "-epsilon_2", 1),
    ("lambda_1", "-lambda_3", -1), ("lambda_1", "-lambda_2", 1),
    ("lambda_4", "-lambda_3", 1), ("lambda_4", "-lambda_2", -1),
    ("lambda_1", "lambda_8", 1), ("lambda_1", "-lambda_5", 1),
    ("-lambda_4", "lambda_8", -1), ("-lambda_4", "-lambda_5", -1),
    ("lambda_2", "lambda_7", 1), ("lambda_2", "-lambda_6", 1),
    ("-lambda_3", "lambda_7", -1), ("-lambda_3", "-lambda_6", -1),
    ("lambda_5", "-lambda_7", -1), ("lambda_5", "-lambda_6", 1),
    ("lambda_8", "-lambda_7", -1), ("lambda_8", "-lambda_6", 1),
    ("alpha_1", "-lambda_5", -1), ("alpha_1", "-lambda_1", -1),
    ("alpha_1", "lambda_4", -1), ("alpha_1", "lambda_8", 1),
    ("-alpha_4", "-lambda_5", 1), ("-alpha_4", "-lambda_1", -1),
    ("-alpha_4", "lambda_4", -1), ("-alpha_4", "lambda_8", -1),
    ("alpha_2", "-lambda_6", 1), ("alpha_2", "-lambda_2", 1),
    ("alpha_2", "lambda_3", 1), ("alpha_2", "lambda_7", -1),
    ("-alpha_3", "-lambda_6", 1), ("-alpha_3", "-lambda_2", -1),
    ("-alpha_3", "lambda_3", -1), ("-alpha_3", "lambda_7", -1),
    ("beta_1", "-lambda_3", -1), ("beta_1", "-lambda_1", 1),
    ("beta_1", "lambda_6", 1), ("beta_1", "lambda_8", -1),
    ("-beta_4", "-lambda_3", 1), ("-beta_4", "-lambda_1", 1),
    ("-beta_4", "lambda_6", 1), ("-beta_4", "lambda_8", 1),
    ("beta_2", "-lambda_4", -1), ("beta_2", "-lambda_2", -1),
    ("beta_2", "lambda_5", 1), ("beta_2", "lambda_7", 1),
    ("-beta_3", "-lambda_4", -1), ("-beta_3", "-lambda_2", 1),
    ("-beta_3", "lambda_5", -1),
    # ("-beta_3", "lambda_7", ?) printed as a bare "+": left to the solver
    ("epsilon_1", "alpha_2", -1), ("epsilon_1", "alpha_4", 1),
    ("epsilon_1", "-beta_3", 1), ("epsilon_1", "-beta_1", -1),
    ("epsilon_3", "alpha_2", -1), ("epsilon_3", "alpha_4", 1),
    ("epsilon_3", "-beta_3", -1), ("epsilon_3", "-beta_1", 1),
    ("epsilon_2", "alpha_1", 1), ("epsilon_2", "alpha_3", -1),
    ("epsilon_2", "-beta_4", 1), ("epsilon_2", "-beta_2", -1),
    ("epsilon_4", "alpha_1", 1), ("epsilon_4", "alpha_3", -1),
    ("epsilon_4", "-beta_4", -1), ("epsilon_4", "-beta_2", 1),
    ("epsilon_1", "-lambda_7", -1), ("epsilon_1", "-lambda_5", 1),
    ("epsilon_1", "-lambda_3", 1), ("epsilon_1", "-lambda_1", -1),
    ("-epsilon_4", "-lambda_7", -1), ("-epsilon_4", "-lambda_5", -1),
    ("-epsilon_4", "-lambda_3", -1), ("-epsilon_4", "-lambda_1", -1),
    # columns printed as lambda_4, lambda_2; only -lambda_4, -lambda_2 give roots
    ("epsilon_2", "-lambda_8", -1), ("epsilon_2", "-lambda_6", -1),
    ("epsilon_2", "-lambda_4", 1), ("epsilon_2", "-lambda_2", 1),
    ("-epsilon_3", "-lambda_8", 1), ("-epsilon_3", "-lambda_6", -1),
    ("-epsilon_3", "-lambda_4", 1), ("-epsilon_3", "-lambda_2", -1),
]

# E6 S-table cell whose sign is missing in print
E6_TYPO_PAIR = ("-beta_3", "lambda_7")


def _lab(s: str) -> str:
    return normalize_label(s)


def listed_entries(system: RootSystem, g2_labels: Mapping[str, str] | None = None,
                  g2_typo_pair: tuple[str, str] | None = None) -> list[KnownEntry]:
    """Structure constants printed explicitly, as ``N_xy`` values.

    For G2 the entries refer to the numbering ``1..6`` of the solver, passed as
    ``g2_labels`` (``"1" -> root label``); ``g2_typo_pair`` names the pair
    carrying the second value sqrt(1/6), printed under the repeated name N_61.
    """
    K = system.K
    out: list[KnownEntry] = []
    if system.algebra == "F4":
        def e(*terms):
            v = [0] * 4
            for t in terms:
                v[abs(t) - 1] += 1 if t > 0 else -1
            return resolve_family_label(_explicit(v), system).label

        minus = -ONE / K
        for i, j in itertools.combinations(range(1, 5), 2):
            out.append(KnownEntry(e(i), e(j), minus, f"B4: N_{{{i}{j}}}"))
            out.append(KnownEntry(e(j), e(i, -j), minus, f"B4: N_{{{j},{i}-{j}}}"))
        for i, j, k in itertools.combinations(range(1, 5), 3):
            out.append(KnownEntry(e(i, -k), e(j, k), minus, f"B4: N_{{{i}-{k},{j}+{k}}}"))
            out.append(KnownEntry(e(i, k), e(j, -k), minus, f"B4: N_{{{i}+{k},{j}-{k}}}"))
            out.append(KnownEntry(e(j, k), e(i, -j), minus, f"B4: N_{{{j}+{k},{i}-{j}}}"))
            out.append(KnownEntry(e(j, -k), e(i, -j), minus, f"B4: N_{{{j}-{k},{i}-{j}}}"))
        half = sqrt_rational(Fraction(1, 2))
        for x, y, g in _F4_G_TABLE:
            if g == "+h":
                val = half
            elif g == "-h":
                val = -half
            else:
                val = ExactReal.rational(g)
            out.append(KnownEntry(_lab(x), _lab(y), val / K, f"F4 G-table: G({x},{y})"))
    elif system.algebra == "E6":
        for i, j, k in itertools.combinations(range(1, 7), 3):
            out.append(KnownEntry(f"{i}-{j}", f"{j}-{k}", ONE / K, f"A5: N_{{{i}-{j},{j}-{k}}}"))
        for x, y, s in _E6_S_TABLE:
            out.append(KnownEntry(_lab(x), _lab(y), ExactReal.rational(s) / K, f"E6 S-table: S({x},{y})"))
    elif system.algebra == "G2":
        if g2_labels is None:
            raise ValueError("G2 entries need the root numbering from the label solver")
        h = sqrt_rational(Fraction(1, 2)) * Fraction(1, 2)
        for a, b in (("6", "1"), ("6", "4"), ("4", "2"), ("1", "5")):
            out.append(KnownEntry(g2_labels[a], g2_labels[b], h, f"N_{a}{b}"))
        if g2_typo_pair is not None:
            a, b = g2_typo_pair
            out.append(KnownEntry(g2_labels[a], g2_labels[b], sqrt_rational(Fraction(1, 6)),
                                  f"N_{a}{b} (printed as the second N_61)"))
    return out


def _explicit(v: Sequence[int]) -> str:
    parts = []
    for i, c in enumerate(v, start=1):
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        parts.append(f"{sign}{i}")
    return "".join(parts)


@dataclass(frozen=True)
class Correction:
    """A printed table cell replaced before solving.

    ``printed`` is the cell as printed (row, column); ``fixed`` the cell it
    is read as, ``negate`` whether the printed sign is reversed.
    """

    algebra: str
    printed: tuple[str, str]
    fixed: tuple[str, str]
    negate: bool
    reason: str


def _corrections() -> list[Correction]:
    out: list[Correction] = []
    relabel = "row label -beta_1 is a misprint of -beta_2 (-beta_1 + gamma_1 is not a root)"
    for y in ("gamma_1", "-gamma_1", "gamma_2", "-gamma_2"):
        out.append(Correction("F4", ("-beta_1", y), ("-beta_2", y), False, relabel))
    flip_f4 = "sign forced by the tensor-operator definitions and the B4 constants"
    for x, y in (("alpha_1", "-beta_2"), ("alpha_1", "-beta_1"), ("alpha_2", "-beta_2"), ("alpha_2", "-beta_1"),
                 ("gamma_1", "-epsilon_2"), ("gamma_1", "-epsilon_1"), ("gamma_2", "-epsilon_2"),
                 ("gamma_2", "-epsilon_1")):
        out.append(Correction("F4", (x, y), (x, y), True, flip_f4))
    flip_e6 = "sign forced by the tensor-operator definitions and the A5 constants"
    for x, y in (("lambda_4", "-lambda_3"), ("lambda_4", "-lambda_2"),
                 ("epsilon_1", "alpha_2"), ("epsilon_1", "alpha_4"), ("epsilon_3", "alpha_2"),
                 ("epsilon_3", "alpha_4"), ("epsilon_2", "alpha_1"), ("epsilon_2", "alpha_3"),
                 ("epsilon_4", "alpha_1"), ("epsilon_4", "alpha_3")):
        out.append(Correction("E6", (x, y), (x, y), True, flip_e6))
    return out


CORRECTIONS: list[Correction] = _corrections()


def corrected_entries(entries: Iterable[KnownEntry], algebra: str) -> list[KnownEntry]:
    """Apply :data:`CORRECTIONS` to printed entries; the source notes each change."""
    fixes = {(c.printed[0], c.printed[1]): c for c in CORRECTIONS if c.algebra == algebra}
    out = []
    for e in entries:
        c = fixes.get((e.x, e.y)) if e.source.startswith(("F4 G-table", "E6 S-table")) else None
        if c is None:
            out.append(e)
            continue
        value = -e.value if c.negate else e.value
        out.append(KnownEntry(c.fixed[0], c.fixed[1], value, f"{e.source} corrected: {c.reason}"))
    return out


def load_structure_constants(system: RootSystem | str, *, printed: bool = False, **kwargs) -> StructureTable:
    """Listed entries plus symmetry plus Jacobi completion.

    By default the documented :data:`CORRECTIONS` are applied first; with
    ``printed=True`` the table cells are taken exactly as printed (which is
    Jacobi-inconsistent for both F4 and E6).  G2 needs the solver's root
    numbering; see :func:`itbasis.tensorbasis.solve_labels`.
    """
    if isinstance(system, str):
        system = build(system)
    if system.algebra == "G2":
        g2_labels = kwargs.pop("g2_labels", None)
        typo = kwargs.pop("g2_typo_pair", None)
        return solve_missing_constants(system, listed_entries(system, g2_labels, typo), **kwargs)
    entries = listed_entries(system)
    if not printed:
        entries = corrected_entries(entries, system.algebra)
    return solve_missing_constants(system, entries, **kwargs)


# -- the algebra -----------------------------------------------------------------


class CartanWeyl:
    """Exact bracket on the Cartan-Weyl basis of one algebra."""

    def __init__(self, system: RootSystem, table: StructureTable, frame: Sequence[Vector] | None = None):
        self.system = system
        self.algebra = system.algebra
        self.table = table
        self.K = system.K
        self.frame = [tuple(v) for v in (frame if frame is not None else default_frame(system))]
        self.rank_n = len(self.frame)
        Kinv = ONE / self.K
        # weights <f_i, a>/K for every root
        self.weight: dict[str, tuple[ExactReal, ...]] = {
            r.label: tuple(dot(f, r.coords) * Kinv for f in self.frame) for r in system
        }
        self._proj = [[dot(f, g) for g in self.frame] for f in self.frame]
        self._identity_frame = all(
            self._proj[i][j] == (1 if i == j else 0) for i in range(self.rank_n) for j in range(self.rank_n)
        )
        self._cache: dict[tuple[Generator, Generator], dict[Generator, ExactReal]] = {}

    # generators
    @property
    def generators(self) -> list[Generator]:
        return [("H", i) for i in range(1, self.rank_n + 1)] + [("E", lab) for lab in self.system.labels]

    @property
    def dimension(self) -> int:
        """Dimension of the algebra (independent generators)."""
        return len(self.system) + self.rank

    @property
    def rank(self) -> int:
        if self._identity_frame:
            return self.rank_n
        # rank of the projection matrix = trace for a projection
        tr = ZERO
        for i in range(self.rank_n):
            tr = tr + self._proj[i][i]
        return int(tr.rational_part())

    def H(self, i: int) -> AlgebraElement:
        """Canonical element for the frame generator ``H_i``."""
        if self._identity_frame:
            return AlgebraElement({("H", i): ONE})
        return AlgebraElement({("H", j + 1): self._proj[i - 1][j] for j in range(self.rank_n)})

    def H_vector(self, v: Sequence[ExactReal]) -> AlgebraElement:
        """``H_v`` for an ambient vector ``v`` (coefficient ``<f_i, v>`` on ``H_i``)."""
        return AlgebraElement({("H", i + 1): dot(f, v) for i, f in enumerate(self.frame)})

    def E(self, label: str, coeff=ONE) -> AlgebraElement:
        label = normalize_label(label)
        self.system.root(label)
        return AlgebraElement({("E", label): as_exact(coeff)})

    def canonical(self, x: AlgebraElement) -> AlgebraElement:
        if self._identity_frame:
            return x
        out = AlgebraElement({g: c for g, c in x.terms.items() if g[0] == "E"})
        for g, c in x.terms.items():
            if g[0] == "H":
                out = out + self.H(g[1]) * c
        return out

    # bracket
    def bracket_generators(self, g1: Generator, g2: Generator) -> dict[Generator, ExactReal]:
        key = (g1, g2)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out: dict[Generator, ExactReal] = {}
        if g1[0] == "H" and g2[0] == "H":
            pass
        elif g1[0] == "H":
            w = self.weight[g2[1]][g1[1] - 1]
            if w:
                out = {g2: w}
        elif g2[0] == "H":
            w = self.weight[g1[1]][g2[1] - 1]
            if w:
                out = {g1: -w}
        else:
            x, y = g1[1], g2[1]
            s = self.system.sum_label(x, y)
            if s == "0":
                out = {("H", i + 1): w for i, w in enumerate(self.weight[x]) if w}
            elif s is not None:
                out = {("E", s): self.table.entries[(x, y)]}
        self._cache[key] = out
        return out

    def bracket(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        acc: dict[Generator, ExactReal] = {}
        for g1, c1 in a._terms.items():
            for g2, c2 in b._terms.items():
                r = self.bracket_generators(g1, g2)
                if not r:
                    continue
                c = c1 * c2
                for g, v in r.items():
                    t = acc.get(g)
                    acc[g] = v * c if t is None else t + v * c
        return AlgebraElement({g: v for g, v in acc.items() if v})

    def conjugate(self, x: AlgebraElement) -> AlgebraElement:
        """Hermitian conjugate with ``H_i^+ = H_i``, ``E_a^+ = E_-a`` (real coefficients)."""
        out = {}
        for g, c in x.terms.items():
            if g[0] == "H":
                out[g] = c
            else:
                out[("E", self.system.negative(g[1]))] = c
        return AlgebraElement(out)

    def describe(self, x: AlgebraElement) -> str:
        """Readable text in the generator order of the root system."""
        if not x:
            return "0"

        def key(kv):
            g = kv[0]
            return (0, g[1]) if g[0] == "H" else (1, self.system.order(g[1]))

        parts = []
        for g, c in sorted(x.terms.items(), key=key):
            name = f"H_{g[1]}" if g[0] == "H" else f"E_{{{g[1]}}}"
            parts.append(f"({c})*{name}")
        return " + ".join(parts)

    def with_table(self, table: StructureTable) -> "CartanWeyl":
        return CartanWeyl(self.system, table, self.frame)
