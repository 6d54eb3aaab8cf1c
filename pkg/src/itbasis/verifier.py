"""Exact verification of the tensor-basis relations.

Every check compares two :class:`AlgebraElement` values for identity; there
are no tolerances.  Checks are grouped into relation records: one record per
relation family, carrying the number of component checks it ran and, when it
fails, the first offending witness in canonical order.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .cartanweyl import AlgebraElement, CartanWeyl, Generator, StructureTable
from .exactnum import ONE, ZERO, ExactReal, sqrt_rational
from .so3 import CouplingSpec, NotInAlgebra, couple, half, ladder_coeff, projections
from .tensorbasis import TensorBasis, TensorOperator, assemble, hermitian_conjugate

__all__ = [
    "Record",
    "VerificationReport",
    "verify_definitions",
    "verify_coupled_relations",
    "verify_plain_commutators",
    "verify_hermiticity",
    "verify_jacobi",
    "verify_closure",
    "verify_dimension",
    "identify_cartan",
    "verify_cartan",
    "verify_all",
    "quick_accept",
    "sensitivity",
    "E6_FAMILIES",
    "SUITE_VERSION",
]

SUITE_VERSION = "1.0"
HALF = Fraction(1, 2)
RT_HALF = sqrt_rational(HALF)
SQRT2 = sqrt_rational(2)


@dataclass
class Record:
    id: str
    kind: str
    source: str
    status: str = "pass"  # pass | fail | info
    checks: int = 0
    witness: dict | None = None
    note: str | None = None

    def to_json(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "source": self.source, "status": self.status, "checks": self.checks}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    algebra: str
    records: list[Record] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def failures(self) -> list[Record]:
        return [r for r in self.records if r.status == "fail"]

    def by_kind(self, kind: str) -> list[Record]:
        return [r for r in self.records if r.kind == kind]

    def extend(self, other: "VerificationReport") -> None:
        self.records.extend(other.records)
        self.elapsed += other.elapsed

    def counts(self) -> dict:
        out = {"relations": len(self.records), "checks": sum(r.checks for r in self.records)}
        for st in ("pass", "fail", "info"):
            out[st] = sum(1 for r in self.records if r.status == st)
        return out

    def to_json(self, *, include_timing: bool = True) -> dict:
        out = {
            "algebra": self.algebra,
            "suite_version": SUITE_VERSION,
            "status": "pass" if self.passed else "fail",
            "counts": self.counts(),
            "relations": [r.to_json() for r in self.records],
        }
        if include_timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    def to_markdown(self) -> str:
        c = self.counts()
        lines = [
            f"# Verification report: {self.algebra}",
            "",
            f"Overall: **{'PASS' if self.passed else 'FAIL'}** "
            f"({c['pass']} pass, {c['fail']} fail, {c['info']} info; {c['checks']} exact checks)",
            "",
            "| relation | kind | checks | status |",
            "|---|---|---:|---|",
        ]
        for r in self.records:
            lines.append(f"| `{r.id}` | {r.kind} | {r.checks} | {r.status} |")
        fails = self.failures()
        if fails:
            lines += ["", "## Failures", ""]
            for r in fails:
                detail = "; ".join(f"{k}={v}" for k, v in (r.witness or {}).items())
                lines.append(f"- `{r.id}`: {detail}")
        return "\n".join(lines) + "\n"


def _fmt_where(where) -> str:
    """Render a component key with fractions as p/q rather than reprs."""
    if isinstance(where, Fraction):
        return str(where)
    if isinstance(where, Mapping):
        return "{" + ", ".join(f"{k}: {_fmt_where(v)}" for k, v in where.items()) + "}"
    if isinstance(where, tuple):
        return "(" + ", ".join(_fmt_where(v) for v in where) + ")"
    return str(where)


class _Recorder:
    """Accumulates component checks into one record."""

    def __init__(self, basis: TensorBasis, rid: str, kind: str, source: str):
        self.basis = basis
        self.rec = Record(rid, kind, source)

    def eq(self, where, lhs: AlgebraElement, rhs: AlgebraElement) -> bool:
        cw = self.basis.algebra_obj
        lhs, rhs = cw.canonical(lhs), cw.canonical(rhs)
        self.rec.checks += 1
        if lhs == rhs:
            return True
        if self.rec.status != "fail":
            self.rec.status = "fail"
            self.rec.witness = {
                "component": _fmt_where(where),
                "lhs": cw.describe(lhs),
                "rhs": cw.describe(rhs),
                "difference": cw.describe(lhs - rhs),
            }
        return False

    def fail(self, where, message: str) -> None:
        self.rec.checks += 1
        if self.rec.status != "fail":
            self.rec.status = "fail"
            self.rec.witness = {"component": _fmt_where(where), "message": message}


# ---------------------------------------------------------------------------
# definitions


def _jops(basis: TensorBasis) -> dict[int, TensorOperator]:
    return {o.slots[0]: o for o in basis.of_kind("J")}


def verify_definitions(basis: TensorBasis) -> VerificationReport:
    """Angular-momentum, scalar and (multi-fold) tensor-operator definitions."""
    t0 = time.perf_counter()
    rep = VerificationReport(basis.algebra)
    br = basis.bracket
    J = _jops(basis)
    P, Z, M = (Fraction(1),), (Fraction(0),), (Fraction(-1),)
    for i, j in sorted(J.items()):
        r = _Recorder(basis, f"angular:J({i})", "angular", "angular momentum commutators")
        r.eq("[J0,J+1]", br(j[Z], j[P]), j[P])
        r.eq("[J0,J-1]", br(j[Z], j[M]), -j[M])
        r.eq("[J+1,J-1]", br(j[P], j[M]), -j[Z])
        rep.records.append(r.rec)
    for (i, a), (k, b) in itertools.combinations(sorted(J.items()), 2):
        r = _Recorder(basis, f"angular:[J({i}),J({k})]", "angular", "distinct angular momenta commute")
        for ka in a.keys():
            for kb in b.keys():
                r.eq((ka, kb), br(a.components[ka], b.components[kb]), AlgebraElement())
        rep.records.append(r.rec)
    scalars = basis.of_kind("A")
    if scalars:
        r = _Recorder(basis, "scalar:[J,A]", "scalar", "scalars commute with angular momenta")
        for a in scalars:
            for i, j in sorted(J.items()):
                for k in j.keys():
                    r.eq((a.name, j.name, k), br(j.components[k], a[()]), AlgebraElement())
        rep.records.append(r.rec)
        r = _Recorder(basis, "scalar:[A,A]", "scalar", "scalars commute among themselves")
        for a, b in itertools.combinations(scalars, 2):
            r.eq((a.name, b.name), br(a[()], b[()]), AlgebraElement())
        rep.records.append(r.rec)
        if len(scalars) == 3:
            r = _Recorder(basis, "scalar:sum A", "scalar", "scalars sum to zero")
            total = AlgebraElement()
            for a in scalars:
                total = total + a[()]
            r.eq("A(1)+A(3)+A(5)", total, AlgebraElement())
            rep.records.append(r.rec)
    for op in basis.operators:
        if op.kind in ("J", "A"):
            continue
        kind = "tensor" if len(op.slots) == 1 else "multitensor"
        for slot in op.slots:
            r = _Recorder(basis, f"{kind}:{op.name}/J({slot})", kind, "tensor operator under its own angular momentum")
            idx = op.slot_index(slot)
            rr = op.ranks[idx]
            jj = J[slot]
            for key in op.keys():
                x = op.components[key]
                p = key[idx]
                r.eq((key, "J0"), br(jj[Z], x), x * ExactReal.rational(p))
                for sgn, comp in ((1, P), (-1, M)):
                    c = ladder_coeff(rr, p, sgn)
                    nk = list(key)
                    nk[idx] = p + sgn
                    tgt = op.components.get(tuple(nk))
                    expect = tgt * c if tgt is not None and c else AlgebraElement()
                    r.eq((key, "J+1" if sgn > 0 else "J-1"), br(jj[comp], x), expect)
            rep.records.append(r.rec)
        others = [s for s in sorted(J) if s not in op.slots]
        if others:
            r = _Recorder(basis, f"{kind}:{op.name}/other J", kind, "tensor operator commutes with other angular momenta")
            for s in others:
                for kj in J[s].keys():
                    for key in op.keys():
                        r.eq((s, kj, key), br(J[s].components[kj], op.components[key]), AlgebraElement())
            rep.records.append(r.rec)
    rep.elapsed = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# coupled relations


def _lie(cw: CartanWeyl) -> Callable[[Generator, Generator], AlgebraElement]:
    return lambda a, b: AlgebraElement(cw.bracket_generators(a, b))


def _coupled_check(
    basis: TensorBasis,
    rid: str,
    source: str,
    left: TensorOperator,
    right: TensorOperator,
    target: Mapping[int, Fraction],
    mode: str,
    expected: Callable[[dict], AlgebraElement | None],
    expected_charges: Mapping[int, int] | None = None,
) -> Record:
    """Check every component of a coupled product against ``expected``.

    ``expected`` receives ``{slot: projection}`` of the coupled component and
    returns the right-hand side.
    """
    cw = basis.algebra_obj
    r = _Recorder(basis, rid, "coupled", source)
    ct = couple(CouplingSpec(left, right, {k: half(v) for k, v in target.items()}, mode))
    if expected_charges is not None and dict(ct.charges) != {k: v for k, v in expected_charges.items() if v}:
        r.fail("charges", f"coupled charges {ct.charges} differ from {dict(expected_charges)}")
    lie = _lie(cw)
    for key in itertools.product(*(projections(x) for x in ct.ranks)):
        labels = dict(zip(ct.slots, key))
        q = ct.components.get(key)
        try:
            got = q.to_lie(lie) if q is not None else AlgebraElement()
        except NotInAlgebra as exc:
            r.fail(labels, f"coupled product is not a Lie element: {exc}")
            continue
        exp = expected(labels)
        r.eq(labels, got, exp if exp is not None else AlgebraElement())
    return r.rec


def _scaled(op: TensorOperator, c: ExactReal, slots: Sequence[int]) -> Callable[[dict], AlgebraElement | None]:
    """Right-hand side ``c * op`` with op's slots read from the coupled labels."""

    def f(labels: dict) -> AlgebraElement | None:
        for s, v in labels.items():
            if s not in slots and v != 0:
                return None
        key = tuple(labels[s] for s in op.slots)
        x = op.components.get(key)
        return x * c if x is not None else None

    return f


def _u_of(basis: TensorBasis, a: int, b: int) -> TensorOperator:
    name = f"U({min(a, b)}{max(a, b)})"
    return basis.op(name)


def _coupled_g2(basis: TensorBasis) -> list[Record]:
    U = basis.op("U(12)")
    J1, J2 = basis.op("J(1)"), basis.op("J(2)")
    return [
        _coupled_check(basis, "coupled:(UU)^10", "G2 U x U to rank (1,0)", U, U, {1: 1, 2: 0}, "plain",
                       _scaled(J1, sqrt_rational(Fraction(9, 2)), (1,))),
        _coupled_check(basis, "coupled:(UU)^01", "G2 U x U to rank (0,1)", U, U, {1: 0, 2: 1}, "plain",
                       _scaled(J2, sqrt_rational(Fraction(5, 2)), (2,))),
    ]


def _four_fold_self(basis: TensorBasis, U: TensorOperator, tag: str) -> list[Record]:
    out = []
    for s in U.slots:
        tgt = {t: (1 if t == s else 0) for t in U.slots}
        out.append(_coupled_check(basis, f"coupled:({tag} {tag})^{s}", "four-fold self-coupling to one J",
                                  U, U, tgt, "plain", _scaled(basis.op(f"J({s})"), -ONE, (s,))))
    return out


def _coupled_f4(basis: TensorBasis) -> list[Record]:
    recs: list[Record] = []
    pairs = [(1, 2), (3, 4), (1, 3), (1, 4), (2, 3), (2, 4)]
    for i, j in pairs:
        U = _u_of(basis, i, j)
        for s in (i, j):
            tgt = {i: 1 if s == i else 0, j: 1 if s == j else 0}
            recs.append(_coupled_check(basis, f"coupled:(U({i}{j})U({i}{j}))^J({s})", "two-fold self-coupling",
                                       U, U, tgt, "plain", _scaled(basis.op(f"J({s})"), -HALF * ONE, (s,))))
    # {U(ij) U(jk)} over the shared slot j
    for i, j, k in itertools.permutations(range(1, 5), 3):
        if i > k:
            continue
        x = min(i, j, k)
        c = RT_HALF * (1 if (x + 1) % 2 == 0 else -1)
        recs.append(_coupled_check(basis, f"coupled:{{U({i}{j})U({j}{k})}}", "anticommutator coupling over a shared slot",
                                   _u_of(basis, i, j), _u_of(basis, j, k), {j: 0}, "anticommutator",
                                   _scaled(_u_of(basis, i, k), c, (i, k))))
    U4 = basis.op("U(1234)")
    # only the slot orders printed: (ij)(kl) = (12)(34) and (ik)(jl) = (13)(24)
    for (a, b), (c, d), coeff in (((1, 2), (3, 4), -SQRT2), ((1, 3), (2, 4), SQRT2)):
        recs.append(_coupled_check(basis, f"coupled:[U({a}{b})U(1234)]->U({c}{d})", "commutator coupling with the four-fold operator",
                                   _u_of(basis, a, b), U4, {a: 0, b: 0}, "commutator",
                                   _scaled(_u_of(basis, c, d), coeff, (c, d))))
    recs.extend(_four_fold_self(basis, U4, "U(1234)"))
    return recs


def _vw(basis: TensorBasis) -> list[tuple[TensorOperator, TensorOperator, int, int]]:
    out = []
    for v in basis.of_kind("V"):
        w = basis.op("W" + v.name[1:])
        (i, ci), (k, ck) = sorted(v.charges.items(), key=lambda kv: -kv[1])
        out.append((v, w, i, k))
    return out


def _coupled_e6(basis: TensorBasis) -> list[Record]:
    recs: list[Record] = []
    br = basis.bracket
    for v, w, i, k in _vw(basis):
        Ai, Ak = basis.op(f"A({i})")[()], basis.op(f"A({k})")[()]
        r = _Recorder(basis, f"charge:{v.name[1:]}", "coupled", "scalar charge action")
        for key in v.keys():
            r.eq(("A(i)", "V", key), br(Ai, v.components[key]), v.components[key])
            r.eq(("A(i)", "W", key), br(Ai, w.components[key]), -w.components[key])
            r.eq(("A(k)", "V", key), br(Ak, v.components[key]), -v.components[key])
            r.eq(("A(k)", "W", key), br(Ak, w.components[key]), w.components[key])
        recs.append(r.rec)
        j1, l1 = v.slots
        for s in (j1, l1):
            tgt = {j1: 1 if s == j1 else 0, l1: 1 if s == l1 else 0}
            # the literal (V W) - (W V) is symmetric here (exchange phase -1): use the Lie reading
            recs.append(_coupled_check(basis, f"coupled:[V W]{v.name[1:]}^J({s})", "V W CG-contracted Lie bracket to J",
                                       v, w, tgt, "lie", _scaled(basis.op(f"J({s})"), ONE, (s,)), {}))
        a = (basis.op(f"A({i})")[()] - basis.op(f"A({k})")[()]) * HALF
        recs.append(_coupled_check(basis, f"coupled:[V W]{v.name[1:]}^00", "V W commutator coupling to scalars",
                                   v, w, {j1: 0, l1: 0}, "commutator",
                                   lambda lab, a=a: a if all(x == 0 for x in lab.values()) else None, {}))
    for kind in ("V", "W"):
        x, y, z = basis.op(f"{kind}(24)"), basis.op(f"{kind}(46)"), basis.op(f"{kind}(26)")
        recs.append(_coupled_check(basis, f"coupled:{{{kind}(24){kind}(46)}}", "anticommutator chaining of charged operators",
                                   x, y, {4: 0}, "anticommutator", _scaled(z, ONE, (2, 6)), z.charges))
    recs.extend(_four_fold_self(basis, basis.op("U(2468)"), "U(2468)"))
    return recs


def verify_coupled_relations(basis: TensorBasis) -> VerificationReport:
    t0 = time.perf_counter()
    rep = VerificationReport(basis.algebra)
    fn = {"G2": _coupled_g2, "F4": _coupled_f4, "E6": _coupled_e6}[basis.algebra]
    rep.records.extend(fn(basis))
    rep.elapsed = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# plain commutators

# (X, Y, sign, Z) for [X, Y] = sign * sqrt(1/2) * Z, components decoded by slot
E6_FAMILIES: list[tuple[str, str, int, str]] = [
    ("V(1638)", "W(1458)", -1, "W(3456)"), ("W(1638)", "V(1458)", +1, "V(3456)"),
    ("V(3456)", "W(1638)", -1, "W(1458)"), ("W(3456)", "V(1638)", +1, "V(1458)"),
    ("V(3456)", "W(1458)", +1, "W(1638)"), ("W(3456)", "V(1458)", -1, "V(1638)"),
    ("V(1638)", "W(3258)", +1, "W(1256)"), ("W(1638)", "V(3258)", -1, "V(1256)"),
    ("V(1256)", "W(1638)", +1, "W(3258)"), ("W(1256)", "V(1638)", -1, "V(3258)"),
    ("V(1256)", "W(3258)", -1, "W(1458)"), ("W(1256)", "V(3258)", +1, "V(1458)"),
    ("V(1458)", "W(3258)", -1, "W(1234)"), ("W(1458)", "V(3258)", +1, "V(1234)"),
    ("V(1234)", "W(1458)", -1, "W(3258)"), ("W(1234)", "V(1458)", +1, "V(3258)"),
    ("V(1234)", "W(3258)", +1, "W(1458)"), ("W(1234)", "V(3258)", -1, "V(1458)"),
    ("V(1234)", "W(1638)", +1, "U(2468)"), ("W(1234)", "V(1638)", -1, "U(2468)"),
    ("V(1234)", "U(2468)", -1, "V(1638)"), ("W(1234)", "U(2468)", +1, "W(1638)"),
    ("V(1638)", "U(2468)", +1, "V(1234)"), ("W(1638)", "U(2468)", -1, "W(1234)"),
    ("V(1256)", "W(1458)", +1, "U(2468)"), ("W(1256)", "V(1458)", -1, "U(2468)"),
    ("V(1256)", "U(2468)", -1, "V(1458)"), ("W(1256)", "U(2468)", +1, "W(1458)"),
    ("V(1458)", "U(2468)", +1, "V(1256)"), ("W(1458)", "U(2468)", -1, "W(1256)"),
    ("V(3456)", "W(3258)", +1, "U(2468)"), ("W(3456)", "V(3258)", -1, "U(2468)"),
    ("V(3456)", "U(2468)", -1, "V(3258)"), ("W(3456)", "U(2468)", +1, "W(3258)"),
    ("V(3258)", "U(2468)", +1, "V(3456)"), ("W(3258)", "U(2468)", -1, "W(3456)"),
]

# F4: [U(ab), U(cd)] = sign * sqrt(1/2) * U(1234), components matched by slot
F4_FAMILIES: list[tuple[str, str, int, str]] = [
    ("U(12)", "U(34)", +1, "U(1234)"),
    ("U(13)", "U(24)", -1, "U(1234)"),
    ("U(14)", "U(23)", -1, "U(1234)"),
]


def _decoded_family(basis: TensorBasis, xn: str, yn: str, sign: int, zn: str, rid: str, source: str) -> Record:
    """``[X_a, Y_b] = sign * sqrt(1/2) * prod(2 a_s) * Z`` with shared slots contracted.

    Components on a shared slot ``s`` must be opposite (``b_s = -a_s``); the
    free slots of X and Y label Z.  Component pairs outside that pattern are
    required to commute.
    """
    X, Y, Z = basis.op(xn), basis.op(yn), basis.op(zn)
    r = _Recorder(basis, rid, "plain_commutator", source)
    shared = [s for s in X.slots if s in Y.slots]
    free = [s for s in X.slots if s not in shared] + [s for s in Y.slots if s not in shared]
    if sorted(free) != sorted(Z.slots):
        r.fail("slots", f"free slots {free} do not match {Z.name} slots {list(Z.slots)}")
        return r.rec
    for ka in X.keys():
        la = dict(zip(X.slots, ka))
        for kb in Y.keys():
            lb = dict(zip(Y.slots, kb))
            got = basis.bracket(X.components[ka], Y.components[kb])
            if all(lb[s] == -la[s] for s in shared):
                c = RT_HALF * sign
                for s in shared:
                    c = c * int(2 * la[s])
                lab = {**la, **lb}
                exp = Z.components[tuple(lab[s] for s in Z.slots)] * c
            else:
                exp = AlgebraElement()
            r.eq((ka, kb), got, exp)
    return r.rec


def verify_plain_commutators(basis: TensorBasis) -> VerificationReport:
    t0 = time.perf_counter()
    rep = VerificationReport(basis.algebra)
    fams = {"F4": F4_FAMILIES, "E6": E6_FAMILIES}.get(basis.algebra, [])
    for xn, yn, sg, zn in fams:
        rid = f"plain:[{xn},{yn}]={'+' if sg > 0 else '-'}{zn}"
        rep.records.append(_decoded_family(basis, xn, yn, sg, zn, rid, "Lie bracket between operators"))
    rep.elapsed = time.perf_counter() - t0
    return rep


def verify_unlisted(basis: TensorBasis) -> VerificationReport:
    """Informational appendix: operator pairs whose brackets are not listed.

    Each record counts the component pairs with a nonzero bracket; nothing is
    asserted beyond what closure and grading already cover.
    """
    t0 = time.perf_counter()
    rep = VerificationReport(basis.algebra)
    fams = {"F4": F4_FAMILIES, "E6": E6_FAMILIES}.get(basis.algebra, [])
    listed = {frozenset((x, y)) for x, y, _, _ in fams}
    ops = [o for o in basis.operators if o.kind not in ("J", "A")]
    names = {o.name for o in ops}
    # pairs appearing in coupled relations
    for v in names:
        if v.startswith("V("):
            listed.add(frozenset((v, "W" + v[1:])))
    for x, y in (("V(1234)", "V(3456)"), ("W(1234)", "W(3456)")):
        listed.add(frozenset((x, y)))
    for o in ops:
        listed.add(frozenset((o.name,)))
    if basis.algebra == "F4":
        listed |= {frozenset((a.name, b.name)) for a, b in itertools.combinations(ops, 2)}
    cw = basis.algebra_obj
    for a, b in itertools.combinations(ops, 2):
        if frozenset((a.name, b.name)) in listed:
            continue
        rec = Record(f"unlisted:[{a.name},{b.name}]", "unlisted", "pair not listed among the nonzero brackets",
                     status="info")
        nonzero = 0
        for ka in a.keys():
            for kb in b.keys():
                rec.checks += 1
                if cw.canonical(basis.bracket(a.components[ka], b.components[kb])):
                    nonzero += 1
        rec.note = "vanishes identically" if not nonzero else f"nonzero for {nonzero} of {rec.checks} component pairs"
        rep.records.append(rec)
    rep.elapsed = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# hermiticity


def _phase(exp: Fraction) -> int:
    if exp.denominator != 1:
        raise ValueError("non-integer phase exponent")
    return -1 if int(exp) % 2 else 1


def verify_hermiticity(basis: TensorBasis) -> VerificationReport:
    """``X_{-k} = (-1)^(offset + sum k) (Y_k)^+`` for the stated conjugate pairs."""
    t0 = time.perf_counter()
    rep = VerificationReport(basis.algebra)
    cw = basis.algebra_obj
    pairs: list[tuple[TensorOperator, TensorOperator, int]] = []
    for op in basis.operators:
        if op.kind == "U":
            offset = 0 if len(op.slots) == 2 else 1
            pairs.append((op, op, offset))
        elif op.kind == "V":
            w = basis.op("W" + op.name[1:])
            pairs.append((op, w, 1))
            pairs.append((w, op, 1))
    for x, y, offset in pairs:
        conj = hermitian_conjugate(y, cw)
        r = _Recorder(basis, f"hermiticity:{x.name}<-{y.name}^+", "hermiticity", "conjugation phase")
        for key in x.keys():
            neg = tuple(-k for k in key)
            ph = _phase(offset + sum(key, Fraction(0)))
            r.eq(key, x.components[neg], conj.components[key] * ph)
        rep.records.append(r.rec)
    rep.elapsed = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# Jacobi, closure, dimension, Cartan identification


def jacobi_generators(cw: CartanWeyl) -> list[Generator]:
    """Independent generators: a basis of the Cartan frame plus every root vector."""
    hs: list[Generator] = []
    rows: list[list[ExactReal]] = []
    for i in range(1, cw.rank_n + 1):
        v = [cw._proj[i - 1][j] for j in range(cw.rank_n)]
        if _independent(rows, v):
            rows.append(v)
            hs.append(("H", i))
    return hs + [("E", lab) for lab in cw.system.labels]


def _independent(rows: list[list[ExactReal]], v: list[ExactReal]) -> bool:
    mat = [list(r) for r in rows] + [list(v)]
    return _rank(mat) == len(mat)


def _rank(mat: list[list[ExactReal]]) -> int:
    m = [list(r) for r in mat]
    rank = 0
    ncol = len(m[0]) if m else 0
    for c in range(ncol):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = ONE / m[rank][c]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def _jacobi_residue(cw: CartanWeyl, a: Generator, b: Generator, c: Generator) -> dict:
    acc: dict[Generator, ExactReal] = {}
    bg = cw.bracket_generators
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        for g, v in bg(x, y).items():
            for g2, w in bg(g, z).items():
                t = acc.get(g2)
                acc[g2] = v * w if t is None else t + v * w
    return {g: v for g, v in acc.items() if v}


_WORKER: dict = {}


def _jacobi_chunk(args) -> tuple[int, int, list]:
    start, stop = args
    cw, gens = _WORKER["cw"], _WORKER["gens"]
    n = len(gens)
    count, bad = 0, []
    for i in range(start, stop):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                count += 1
                res = _jacobi_residue(cw, gens[i], gens[j], gens[k])
                if res:
                    bad.append((i, j, k))
    return start, count, bad


def verify_jacobi(cw: CartanWeyl, jobs: int = 1) -> VerificationReport:
    """Jacobi identity on every unordered triple of independent generators."""
    t0 = time.perf_counter()
    rep = VerificationReport(cw.algebra)
    gens = jacobi_generators(cw)
    n = len(gens)
    _WORKER["cw"], _WORKER["gens"] = cw, gens
    chunks = [(i, i + 1) for i in range(n)]
    if jobs > 1 and n > 20:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_jacobi_chunk, chunks))
    else:
        results = [_jacobi_chunk(c) for c in chunks]
    total = sum(c for _, c, _ in results)
    bad = sorted(t for _, _, b in results for t in b)
    rec = Record(f"jacobi:{cw.algebra}", "jacobi", "Jacobi identity on generator triples", checks=total)
    if bad:
        i, j, k = bad[0]
        rec.status = "fail"
        rec.witness = {
            "component": str((gens[i], gens[j], gens[k])),
            "violations": len(bad),
            "residue": cw.describe(AlgebraElement(_jacobi_residue(cw, gens[i], gens[j], gens[k]))),
        }
    rep.records.append(rec)
    rep.elapsed = time.perf_counter() - t0
    return rep


def verify_closure(basis: TensorBasis) -> VerificationReport:
    """Grading and closure of the bracket, and basis property of the components."""
    t0 = time.perf_counter()
    rep = VerificationReport(basis.algebra)
    cw = basis.algebra_obj
    s = cw.system
    known = set(cw.generators)
    r = _Recorder(basis, "closure:generators", "closure", "brackets stay in the generator span")
    for x in s.labels:
        for y in s.labels:
            out = cw.bracket_generators(("E", x), ("E", y))
            r.rec.checks += 1
            tot = s.sum_label(x, y)
            if any(g not in known for g in out) or (tot is None and out) or (tot not in (None, "0") and not out):
                r.fail((x, y), f"bracket {out} violates grading (sum: {tot})")
    rep.records.append(r.rec)
    r = _Recorder(basis, "closure:basis", "closure", "components form a basis of the algebra")
    coords = _coordinates(basis)
    r.rec.checks = len(coords)
    rk = _rank(coords)
    if rk != cw.dimension or len(coords) != cw.dimension:
        r.fail("rank", f"{len(coords)} components of rank {rk}, algebra dimension {cw.dimension}")
    rep.records.append(r.rec)
    rep.elapsed = time.perf_counter() - t0
    return rep


def _coordinates(basis: TensorBasis) -> list[list[ExactReal]]:
    cw = basis.algebra_obj
    gens = cw.generators
    idx = {g: i for i, g in enumerate(gens)}
    out = []
    for _, _, x in basis.all_components():
        row = [ZERO] * len(gens)
        for g, c in cw.canonical(x).items():
            row[idx[g]] = c
        out.append(row)
    return out


def verify_dimension(basis: TensorBasis) -> VerificationReport:
    from .tensorbasis import ORDERS

    rep = VerificationReport(basis.algebra)
    rec = Record(f"dimension:{basis.algebra}", "dimension", "component count equals the algebra order", checks=1)
    n = basis.component_count()
    if n != ORDERS[basis.algebra]:
        rec.status = "fail"
        rec.witness = {"component": "count", "lhs": str(n), "rhs": str(ORDERS[basis.algebra])}
    rep.records.append(rec)
    return rep


def identify_cartan(basis: TensorBasis) -> list[tuple[str, tuple[Fraction, ...]]]:
    """Components acting diagonally on all components, reduced to an independent set."""
    comps = basis.all_components()
    br = basis.bracket
    cw = basis.algebra_obj
    diag = []
    for op, key, x in comps:
        ok = True
        for _, _, y in comps:
            z = br(x, y)
            if not z:
                continue
            ratio = _ratio(cw.canonical(z), cw.canonical(y))
            if ratio is None:
                ok = False
                break
        if ok:
            diag.append((op.name, key, cw.canonical(x)))
    gens = cw.generators
    idx = {g: i for i, g in enumerate(gens)}
    chosen: list[tuple[str, tuple]] = []
    rows: list[list[ExactReal]] = []
    for name, key, x in diag:
        if any(br(x, basis.op(n2)[k2]) for n2, k2 in chosen):
            continue
        row = [ZERO] * len(gens)
        for g, c in x.items():
            row[idx[g]] = c
        if _independent(rows, row):
            rows.append(row)
            chosen.append((name, key))
    return chosen


def _ratio(z: AlgebraElement, y: AlgebraElement) -> ExactReal | None:
    if set(z.terms) != set(y.terms):
        return None
    items = y.items()
    g0, c0 = items[0]
    lam = z.coeff(g0) / c0
    for g, c in items:
        if z.coeff(g) != lam * c:
            return None
    return lam


def verify_cartan(basis: TensorBasis) -> VerificationReport:
    t0 = time.perf_counter()
    rep = VerificationReport(basis.algebra)
    got = identify_cartan(basis)
    rec = Record(f"cartan_id:{basis.algebra}", "cartan_id", "Cartan generators of the tensor basis", checks=1)
    want = [(n, tuple(k)) for n, k in basis.cartan_set]
    if sorted(got) != sorted(want):
        rec.status = "fail"
        rec.witness = {"component": "set", "lhs": str(got), "rhs": str(want)}
    rep.records.append(rec)
    rep.elapsed = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# drivers


def quick_accept(basis: TensorBasis) -> bool:
    """Definitions, coupled relations and Hermiticity all pass (label search filter)."""
    for fn in (verify_definitions, verify_coupled_relations, verify_hermiticity):
        if not fn(basis).passed:
            return False
    return True


def verify_all(
    algebra: str | TensorBasis,
    *,
    jobs: int | None = None,
    jacobi: bool = True,
) -> VerificationReport:
    t0 = time.perf_counter()
    basis = assemble(algebra) if isinstance(algebra, str) else algebra
    rep = VerificationReport(basis.algebra)
    for fn in (verify_dimension, verify_definitions, verify_coupled_relations, verify_plain_commutators,
               verify_hermiticity, verify_closure, verify_cartan, verify_unlisted):
        rep.extend(fn(basis))
    if jacobi:
        rep.extend(verify_jacobi(basis.algebra_obj, jobs=jobs or 1))
    rep.elapsed = time.perf_counter() - t0
    return rep


_SENSITIVE_SUITES = (verify_definitions, verify_coupled_relations, verify_plain_commutators, verify_hermiticity)


def _failing(basis: TensorBasis) -> set[str]:
    return {r.id for fn in _SENSITIVE_SUITES for r in fn(basis).failures()}


def sensitivity(
    basis: TensorBasis,
    pairs: Iterable[tuple[str, str]],
) -> list[tuple[tuple[str, str], list[str]]]:
    """For each pair, flip ``N_xy`` together with its symmetry partners and
    report which relation records newly fail afterwards.

    Records already failing on the unflipped basis are ignored, so a flip is
    only detected if it breaks something that held before.  Jacobi is consulted
    when no relation record reacts.
    """
    s = basis.system
    baseline = _failing(basis)
    out = []
    for x, y in pairs:
        e = dict(basis.table.entries)
        for a, b in ((x, y), (y, x), (s.negative(x), s.negative(y)), (s.negative(y), s.negative(x))):
            e[(a, b)] = -e[(a, b)]
        t = StructureTable(basis.table.algebra, basis.table.K, e, dict(basis.table.provenance))
        flipped = basis.with_table(t)
        fails = sorted(_failing(flipped) - baseline)
        if not fails:
            fails = [r.id for r in verify_jacobi(flipped.algebra_obj).failures()]
        out.append(((x, y), fails))
    return out


def implied_constants(basis: TensorBasis, *, plain: bool = True) -> list:
    """Structure constants forced by single-term relations.

    Whenever a ladder relation or a decoded plain commutator equates
    ``[a E_x, b E_y]`` with ``c E_z``, the constant ``N_xy = c / (a b)`` is
    implied.  Returns :class:`~itbasis.cartanweyl.KnownEntry` records whose
    ``source`` names the relation.
    """
    from .cartanweyl import KnownEntry

    s = basis.system
    out: list[KnownEntry] = []

    def single(x: AlgebraElement):
        x = basis.algebra_obj.canonical(x)
        if len(x) == 1:
            (g, c), = x.items()
            if g[0] == "E":
                return g[1], c
        return None

    def add(xe: AlgebraElement, ye: AlgebraElement, ze: AlgebraElement, where: str) -> None:
        a, b = single(xe), single(ye)
        if a is None or b is None:
            return
        tot = s.sum_label(a[0], b[0])
        if tot in (None, "0"):
            return
        z = single(ze) if ze else None
        if z is None or z[0] != tot:
            return
        out.append(KnownEntry(a[0], b[0], z[1] / (a[1] * b[1]), where))

    J = _jops(basis)
    for op in basis.operators:
        if op.kind in ("J", "A"):
            continue
        for slot in op.slots:
            idx = op.slot_index(slot)
            for key in op.keys():
                for sgn, comp in ((1, 1), (-1, -1)):
                    c = ladder_coeff(op.ranks[idx], key[idx], sgn)
                    if not c:
                        continue
                    nk = list(key)
                    nk[idx] = key[idx] + sgn
                    add(J[slot][(comp,)], op.components[key], op.components[tuple(nk)] * c,
                        f"ladder {op.name}{key} by J({slot})")
    if plain:
        fams = {"F4": F4_FAMILIES, "E6": E6_FAMILIES}.get(basis.algebra, [])
        for xn, yn, sign, zn in fams:
            X, Y, Z = basis.op(xn), basis.op(yn), basis.op(zn)
            shared = [t for t in X.slots if t in Y.slots]
            free = [t for t in X.slots + Y.slots if t not in shared]
            if sorted(free) != sorted(Z.slots):
                continue
            for ka in X.keys():
                la = dict(zip(X.slots, ka))
                for kb in Y.keys():
                    lb = dict(zip(Y.slots, kb))
                    if not all(lb[t] == -la[t] for t in shared):
                        continue
                    c = RT_HALF * sign
                    for t in shared:
                        c = c * int(2 * la[t])
                    lab = {**la, **lb}
                    add(X.components[ka], Y.components[kb], Z.components[tuple(lab[t] for t in Z.slots)] * c,
                        f"[{xn},{yn}] at {ka},{kb}")
    return out
