"""Root systems of G2, F4 and E6 in explicit Euclidean coordinates.

Roots are kept in the unnormalised coordinates the tensor tables are written
in (integers, halves and multiples of sqrt(2)); the normalisation constant
``K`` is carried separately and only applied inside the commutator engine.

Labels follow the abbreviations used in the component tables:

* ``"i-j"``, ``"i+j"``, ``"-i+j"``, ``"-i-j"``, ``"i"``, ``"-i"`` for
  ``e_i - e_j`` and friends (``"7"`` / ``"-7"`` is ``+/- sqrt(2) e_7`` in E6);
* ``"alpha_k"``, ``"beta_k"``, ``"gamma_k"``, ``"epsilon_k"``, ``"lambda_k"``
  for the half-sum shorthand families, with ``"-"`` prefixed for negatives;
* G2 roots are labelled ``"e1-e2"``, ``"e1+e2-2e3"`` etc.  The numbering
  ``1..6`` of the G2 tables is not intrinsic and comes from
  :func:`itbasis.tensorbasis.solve_labels`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import ExactReal, ZERO, sqrt_rational

__all__ = [
    "ALGEBRAS",
    "Root",
    "RootSystem",
    "RootSystemError",
    "UnknownLabelError",
    "build",
    "resolve_family_label",
    "derive_normalization",
    "dot",
    "vadd",
    "vneg",
    "vscale",
]

ALGEBRAS = ("G2", "F4", "E6")

Vector = tuple[ExactReal, ...]

HALF = ExactReal.rational(Fraction(1, 2))
SQRT2 = sqrt_rational(2)


class RootSystemError(ValueError):
    pass


class UnknownLabelError(KeyError):
    pass


def dot(u: Sequence[ExactReal], v: Sequence[ExactReal]) -> ExactReal:
    out = ZERO
    for a, b in zip(u, v):
        if a and b:
            out = out + a * b
    return out


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vneg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def vscale(c, u: Vector) -> Vector:
    return tuple(a * c for a in u)


def _vec(*xs) -> Vector:
    return tuple(x if isinstance(x, ExactReal) else ExactReal.rational(x) for x in xs)


def _unit(n: int, i: int, c=1) -> Vector:
    return tuple(ExactReal.rational(c) if k == i else ZERO for k in range(n))


@dataclass(frozen=True)
class Root:
    coords: Vector
    family: str
    label: str

    def __neg__(self) -> "Root":
        raise TypeError("use RootSystem.negative(label)")

    def norm2(self) -> ExactReal:
        return dot(self.coords, self.coords)

    def as_floats(self) -> list[float]:
        return [float(c) for c in self.coords]


@dataclass
class RootSystem:
    """Immutable-by-convention collection of the nonnull roots of one algebra."""

    algebra: str
    dim: int
    roots: tuple[Root, ...]
    K: ExactReal
    subalgebra: str
    subalgebra_tag: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._by_label = {r.label: r for r in self.roots}
        self._by_coords = {r.coords: r for r in self.roots}
        self._order = {r.label: i for i, r in enumerate(self.roots)}
        self._sum_cache: dict[tuple[str, str], str | None] = {}

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    @property
    def labels(self) -> list[str]:
        return [r.label for r in self.roots]

    def order(self, label: str) -> int:
        return self._order[label]

    def root(self, label: str) -> Root:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownLabelError(f"{self.algebra} has no root labelled {label!r}") from None

    def coords(self, label: str) -> Vector:
        return self.root(label).coords

    def lookup(self, coords: Sequence[ExactReal]) -> Root | None:
        return self._by_coords.get(tuple(coords))

    def negative(self, label: str) -> str:
        return self._by_coords[vneg(self.coords(label))].label

    def sum_label(self, x: str, y: str) -> str | None:
        """Label of ``x + y`` if it is a root, ``"0"`` if it vanishes, else ``None``."""
        key = (x, y)
        if key not in self._sum_cache:
            s = vadd(self.coords(x), self.coords(y))
            if all(not c for c in s):
                out: str | None = "0"
            else:
                r = self._by_coords.get(s)
                out = r.label if r else None
            self._sum_cache[key] = out
            self._sum_cache[(y, x)] = out
        return self._sum_cache[key]

    def string_lengths(self, x: str, y: str) -> tuple[int, int]:
        """``(r, q)`` for the ``x``-string through ``y``: ``y - r x, ..., y + q x``."""
        a, b = self.coords(x), self.coords(y)
        r = 0
        while self.lookup(vadd(b, vscale(-(r + 1), a))) is not None:
            r += 1
        q = 0
        while self.lookup(vadd(b, vscale(q + 1, a))) is not None:
            q += 1
        return r, q

    def resolve(self, label: str) -> Root:
        return resolve_family_label(label, self)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "K": self.K.to_json(),
            "K_text": str(self.K),
            "roots": [
                {
                    "label": r.label,
                    "family": r.family,
                    "coords": [c.to_json() for c in r.coords],
                    "coords_text": [str(c) for c in r.coords],
                    "subalgebra": self.subalgebra_tag.get(r.label, False),
                }
                for r in self.roots
            ],
        }


# -- construction -------------------------------------------------------------


def _g2_roots() -> list[Root]:
    roots = []
    for i, j in itertools.permutations(range(3), 2):
        v = [0, 0, 0]
        v[i], v[j] = 1, -1
        roots.append(Root(_vec(*v), "e_i-e_j", f"e{i + 1}-e{j + 1}"))
    for k in range(3):
        i, j = [m for m in range(3) if m != k]
        for s in (1, -1):
            v = [0, 0, 0]
            v[i] = v[j] = s
            v[k] = -2 * s
            if s > 0:
                lab = f"e{i + 1}+e{j + 1}-2e{k + 1}"
            else:
                lab = f"-e{i + 1}-e{j + 1}+2e{k + 1}"
            roots.append(Root(_vec(*v), "+-(e_i+e_j)-+2e_k", lab))
    return roots


# shorthand families of F4: (first pair, second pair) of the 1/2{(..) +- (..)} form
_F4_FAMILIES = {
    "alpha": ((1, 1, 0, 0), (0, 0, 1, 1)),
    "beta": ((1, 1, 0, 0), (0, 0, -1, 1)),
    "gamma": ((-1, 1, 0, 0), (0, 0, 1, 1)),
    "epsilon": ((-1, 1, 0, 0), (0, 0, -1, 1)),
}

# E6: fixed part plus two signed parts (the last always sqrt(2) e7)
_E6_Y_FAMILIES = {
    "alpha": ((1, 1, -1, -1, 0, 0), (0, 0, 0, 0, -1, 1)),
    "beta": ((1, 1, 0, 0, -1, -1), (0, 0, -1, 1, 0, 0)),
    "epsilon": ((0, 0, 1, 1, -1, -1), (-1, 1, 0, 0, 0, 0)),
}
_E6_LAMBDA_PARTS = ((-1, 1, 0, 0, 0, 0), (0, 0, -1, 1, 0, 0), (0, 0, 0, 0, -1, 1))

# sign patterns in the order y_1..y_4 and x_1..x_8
_Y_SIGNS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
_X_SIGNS = [(1,) + s for s in itertools.product((1, -1), repeat=3)]


def _f4_shorthand() -> dict[str, Vector]:
    out = {}
    for name, (a, b) in _F4_FAMILIES.items():
        for k, s in enumerate((1, -1), start=1):
            out[f"{name}_{k}"] = _vec(*[Fraction(x + s * y, 2) for x, y in zip(a, b)])
    return out


def _e6_shorthand() -> dict[str, Vector]:
    out = {}
    half_sqrt2 = SQRT2 * HALF
    for name, (a, b) in _E6_Y_FAMILIES.items():
        for k, (s1, s2) in enumerate(_Y_SIGNS, start=1):
            head = [ExactReal.rational(Fraction(x + s1 * y, 2)) for x, y in zip(a, b)]
            out[f"{name}_{k}"] = tuple(head) + (half_sqrt2 * s2,)
    for k, signs in enumerate(_X_SIGNS, start=1):
        head = [Fraction(0)] * 6
        for s, part in zip(signs[:3], _E6_LAMBDA_PARTS):
            head = [h + Fraction(s * p, 2) for h, p in zip(head, part)]
        out[f"lambda_{k}"] = _vec(*head) + (half_sqrt2 * signs[3],)
    return out


def _explicit_label(v: Sequence[int]) -> str:
    parts = []
    for i, c in enumerate(v, start=1):
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        parts.append(f"{sign}{i}")
    return "".join(parts)


def _f4_roots() -> list[Root]:
    roots = []
    for i in range(4):
        for s in (1, -1):
            v = [0] * 4
            v[i] = s
            roots.append(Root(_vec(*v), "+-e_i", _explicit_label(v)))
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * 4
            v[i], v[j] = si, sj
            roots.append(Root(_vec(*v), "+-e_i+-e_j", _explicit_label(v)))
    for name, vec in _f4_shorthand().items():
        fam = name.split("_")[0]
        roots.append(Root(vec, f"{fam}", name))
        roots.append(Root(vneg(vec), f"{fam}", "-" + name))
    return roots


def _e6_roots() -> list[Root]:
    roots = []
    for i, j in itertools.permutations(range(6), 2):
        v = [0] * 7
        v[i], v[j] = 1, -1
        roots.append(Root(_vec(*v), "e_i-e_j", _explicit_label(v)))
    e7 = tuple(ZERO for _ in range(6)) + (SQRT2,)
    roots.append(Root(e7, "+-sqrt2*e7", "7"))
    roots.append(Root(vneg(e7), "+-sqrt2*e7", "-7"))
    for name, vec in _e6_shorthand().items():
        fam = name.split("_")[0]
        roots.append(Root(vec, fam, name))
        roots.append(Root(vneg(vec), fam, "-" + name))
    return roots


def _check(roots: list[Root], expected: int, algebra: str) -> None:
    coords = [r.coords for r in roots]
    if len(set(coords)) != len(coords) or len({r.label for r in roots}) != len(roots):
        raise RootSystemError(f"{algebra}: duplicate roots")
    if len(roots) != expected:
        raise RootSystemError(f"{algebra}: expected {expected} roots, built {len(roots)}")
    cs = set(coords)
    for c in coords:
        if all(not x for x in c):
            raise RootSystemError(f"{algebra}: zero root")
        if vneg(c) not in cs:
            raise RootSystemError(f"{algebra}: root set not closed under negation")


_COUNTS = {"G2": 12, "F4": 48, "E6": 72}
_DIMS = {"G2": 3, "F4": 4, "E6": 7}


def build(algebra: str) -> RootSystem:
    algebra = algebra.upper()
    if algebra == "G2":
        roots, sub = _g2_roots(), ""
        tag = {}
    elif algebra == "F4":
        roots, sub = _f4_roots(), "B4"
        tag = {r.label: r.family in ("+-e_i", "+-e_i+-e_j") for r in roots}
    elif algebra == "E6":
        roots, sub = _e6_roots(), "A5"
        tag = {r.label: r.family == "e_i-e_j" for r in roots}
    else:
        raise ValueError(f"unknown algebra {algebra!r}; expected one of {ALGEBRAS}")
    _check(roots, _COUNTS[algebra], algebra)
    K = derive_normalization([r.coords for r in roots])
    return RootSystem(algebra, _DIMS[algebra], tuple(roots), K, sub, tag)


def derive_normalization(roots: Iterable[Sequence[ExactReal]]) -> ExactReal:
    """Normalisation constant ``K`` with ``K**2 = |roots| * (shortest length)**2``.

    Before computing ``K`` the root set must be isotropic on its own span,
    ``sum_roots r r^T = c * P_span``; otherwise a :class:`RootSystemError` is
    raised.  The rule gives ``sqrt(24)`` for G2 and ``12`` for E6.
    """
    roots = [tuple(r) for r in roots]
    if not roots:
        raise RootSystemError("empty root set")
    n = len(roots[0])
    gram = [[dot([r[i] for r in roots], [r[j] for r in roots]) for j in range(n)] for i in range(n)]
    # isotropy on the span: gram * r == c * r for every root, with one common c
    c = None
    for r in roots:
        gr = tuple(dot(row, r) for row in gram)
        nz = next(i for i, x in enumerate(r) if x)
        ratio = gr[nz] / r[nz]
        if vscale(ratio, r) != gr:
            raise RootSystemError("sum of r r^T is not proportional to the identity on the root span")
        if c is None:
            c = ratio
        elif c != ratio:
            raise RootSystemError("sum of r r^T is not proportional to the identity on the root span")
    shortest = min((dot(r, r) for r in roots), key=float)
    if not shortest.is_rational():
        raise RootSystemError("shortest squared root length is irrational")
    return sqrt_rational(len(roots) * shortest.rational_part())


# -- label resolution -----------------------------------------------------------

_GREEK = {
    "α": "alpha",
    "β": "beta",
    "γ": "gamma",
    "ε": "epsilon",
    "ϵ": "epsilon",
    "λ": "lambda",
}
_SHORT_RE = re.compile(r"^(-?)(alpha|beta|gamma|epsilon|lambda)_?(\d+)$")
_EXPLICIT_RE = re.compile(r"^([+-]?\d)([+-]\d)?$")


def normalize_label(label: str) -> str:
    s = label.strip().replace("−", "-").replace(" ", "")
    for g, name in _GREEK.items():
        s = s.replace(g, name)
    if s in ("e7", "+e7"):
        return "7"
    if s == "-e7":
        return "-7"
    m = _SHORT_RE.match(s)
    if m:
        return f"{m.group(1)}{m.group(2)}_{m.group(3)}"
    return s.lstrip("+")


def resolve_family_label(label: str, system: RootSystem | str) -> Root:
    """Resolve a shorthand or explicit root label to a root of ``system``."""
    if isinstance(system, str):
        system = build(system)
    s = normalize_label(label)
    if s in system._by_label:
        return system._by_label[s]
    m = _EXPLICIT_RE.match(s)
    if m and system.algebra in ("F4", "E6"):
        v = [0] * system.dim
        for tok in filter(None, m.groups()):
            i = int(tok.lstrip("+-"))
            if not 1 <= i <= system.dim:
                break
            v[i - 1] += -1 if tok.startswith("-") else 1
        else:
            r = system.lookup(_vec(*v))
            if r is not None:
                return r
    if _SHORT_RE.match(s) or m:
        raise UnknownLabelError(f"label {label!r} does not name a root of {system.algebra}")
    raise UnknownLabelError(f"unknown root label {label!r}")
