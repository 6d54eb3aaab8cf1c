"""Command-line front end: ``itbasis <command> <algebra> [options]``.

Exit codes: 0 success, 1 verification failure, 2 construction error,
64 usage error.  Every JSON document carries ``schema_version``.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .cartanweyl import StructureConstantError, load_structure_constants
from .exactnum import ExactReal
from .rootsystem import RootSystemError, build, dot
from .tensorbasis import AssemblyError, TensorBasis, assemble, solve_labels

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAIL, EXIT_BUILD, EXIT_USAGE = 0, 1, 2, 64
ALGEBRAS = ("g2", "f4", "e6")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2
        raise UsageError(f"{self.prog}: error: {message}")


# -- rendering helpers ------------------------------------------------------------


def _json(doc: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **doc}, indent=2, sort_keys=False) + "\n"


def _md_table(header: Sequence[str], rows: list[Sequence[str]]) -> str:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    out += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return "\n".join(out) + "\n"


def _text_table(header: Sequence[str], rows: list[Sequence[str]]) -> str:
    cols = [list(map(str, c)) for c in zip(header, *rows)] if rows else [[h] for h in header]
    width = [max(len(x) for x in c) for c in cols]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, width)).rstrip()]
    lines += ["  ".join(str(c).ljust(w) for c, w in zip(r, width)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def _table(fmt: str, header: Sequence[str], rows: list[Sequence[str]]) -> str:
    return _md_table(header, rows) if fmt == "md" else _text_table(header, rows)


# -- commands ---------------------------------------------------------------------


def cmd_roots(args) -> tuple[str, int]:
    s = build(args.algebra)
    if args.format == "json":
        return _json({"command": "roots", **s.to_json()}), EXIT_OK
    sub_name = {"F4": "B4", "E6": "A5"}.get(s.algebra, "")
    rows = [(r.label, r.family, "(" + ", ".join(str(c) for c in r.coords) + ")",
             sub_name if s.subalgebra_tag.get(r.label) else "")
            for r in s.roots]
    head = f"{s.algebra}: {len(s)} roots, K = {s.K}\n\n"
    return head + _table(args.format, ("label", "family", "coordinates", "subalgebra"), rows), EXIT_OK


def _table_for(algebra: str, printed: bool):
    if algebra == "G2":
        from .fixtures import load_g2_labels
        from .tensorbasis import g2_table

        return g2_table(build("G2"), load_g2_labels())
    return load_structure_constants(algebra, printed=printed)


def cmd_constants(args) -> tuple[str, int]:
    s = build(args.algebra)
    table = _table_for(s.algebra, args.printed)
    if args.format == "json":
        return _json({"command": "constants", **table.to_json(s.labels)}), EXIT_OK
    order = {lab: i for i, lab in enumerate(s.labels)}
    rows = []
    for (x, y) in sorted(table.entries, key=lambda p: (order[p[0]], order[p[1]])):
        prov = table.provenance.get((x, y), "jacobi-solved")
        if args.given_only and prov != "paper":
            continue
        rows.append((x, y, str(table.entries[(x, y)] * table.K), prov))
    head = f"{s.algebra}: N_xy = value / K with K = {table.K}\n\n"
    return head + _table(args.format, ("x", "y", "K*N_xy", "provenance"), rows), EXIT_OK


def cmd_basis(args) -> tuple[str, int]:
    b = assemble(args.algebra)
    if args.format == "json":
        return _json({"command": "basis", **b.to_json()}), EXIT_OK
    out = io.StringIO()
    out.write(f"{b.algebra}: {b.component_count()} independent components\n")
    for op in b.operators:
        charges = ", ".join(f"A({k}): {v:+d}" for k, v in sorted(op.charges.items()))
        ranks = ", ".join(str(r) for r in op.ranks) or "scalar"
        out.write(f"\n{'## ' if args.format == 'md' else ''}{op.name}  (ranks {ranks}{'; ' + charges if charges else ''})\n\n")
        rows = [(op.component_name(k), str(op.components[k])) for k in op.keys()]
        out.write(_table(args.format, ("component", "Cartan-Weyl form"), rows))
    return out.getvalue(), EXIT_OK


def _verify_one(algebra: str, args):
    from . import verifier

    return verifier.verify_all(algebra, jobs=args.jobs, jacobi=not args.no_jacobi)


def cmd_verify(args) -> tuple[str, int]:
    algebras = [a.upper() for a in ALGEBRAS] if args.algebra == "ALL" else [args.algebra]
    reports = [_verify_one(a, args) for a in algebras]
    ok = all(r.passed for r in reports)
    if args.format == "json":
        docs = [r.to_json(include_timing=args.timing) for r in reports]
        body = {"command": "verify", "status": "pass" if ok else "fail", "reports": docs}
        return _json(body), EXIT_OK if ok else EXIT_FAIL
    if args.format == "md":
        return "\n".join(r.to_markdown() for r in reports), EXIT_OK if ok else EXIT_FAIL
    out = io.StringIO()
    for r in reports:
        c = r.counts()
        out.write(f"{r.algebra}: {'PASS' if r.passed else 'FAIL'}  "
                  f"{c['pass']} pass, {c['fail']} fail, {c['info']} info, {c['checks']} exact checks")
        out.write(f"  ({r.elapsed:.2f} s)\n" if args.timing else "\n")
        for f in r.failures():
            detail = "; ".join(f"{k}={v}" for k, v in f.witness.items())
            out.write(f"  FAIL {f.id}: {detail}\n")
    return out.getvalue(), EXIT_OK if ok else EXIT_FAIL


def diagram_points(basis: TensorBasis) -> list[dict]:
    """G2 roots in the Cartan plane, shortest root of length 1, with tensor labels."""
    if basis.algebra != "G2":
        raise UsageError("diagram is defined for g2 only")
    s = basis.system
    frame = basis.algebra_obj.frame
    where = {}
    for op in basis.operators:
        for k in op.keys():
            for g in op.components[k].terms:
                if g[0] == "E":
                    where[g[1]] = op.component_name(k)
    index = {}
    for n, lab in basis.labels.numbering.items():
        index[lab] = n
        index[s.negative(lab)] = f"-{n}"
    raw = {lab: tuple(dot(f, s.coords(lab)) for f in frame) for lab in s.labels}
    short = min((x * x + y * y for x, y in raw.values()), key=float)
    scale = ExactReal.rational(1) / ExactReal.sqrt(short.rational_part())
    pts = []
    for lab in sorted(s.labels, key=lambda l: (int(index[l].lstrip("-")), index[l].startswith("-"))):
        x, y = (c * scale for c in raw[lab])
        pts.append({"root": lab, "index": index[lab], "component": where[lab],
                    "x": str(x), "y": str(y), "x_float": round(float(x), 12), "y_float": round(float(y), 12)})
    return pts


def render_diagram(points: list[dict], path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    for p in points:
        x, y = p["x_float"], p["y_float"]
        ax.annotate("", xy=(x, y), xytext=(0, 0), arrowprops={"arrowstyle": "->", "color": "0.3"})
        ax.plot([x], [y], "o", color="tab:blue")
        ax.text(x * 1.12, y * 1.12, f"{p['index']}\n{p['component']}", ha="center", va="center", fontsize=7)
    ax.plot([0], [0], "s", color="tab:red")
    ax.text(0.08, -0.18, "J_0(1), J_0(2)", fontsize=7, color="tab:red")
    ax.set_aspect("equal")
    lim = 1.45 * max(max(abs(p["x_float"]), abs(p["y_float"])) for p in points)
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_xlabel("J_0(1) direction")
    ax.set_ylabel("J_0(2) direction")
    ax.set_title("G2 roots in the irreducible tensor basis")
    ax.grid(True, lw=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_diagram(args) -> tuple[str, int]:
    pts = diagram_points(assemble(args.algebra))
    if args.plot:
        render_diagram(pts, Path(args.plot))
    if args.format == "json":
        return _json({"command": "diagram", "algebra": "G2", "points": pts,
                      "figure": str(args.plot) if args.plot else None}), EXIT_OK
    rows = [(p["index"], p["root"], p["component"], p["x"], p["y"]) for p in pts]
    return _table(args.format, ("index", "root", "component", "x", "y"), rows), EXIT_OK


def cmd_solve_labels(args) -> tuple[str, int]:
    found = solve_labels(first_only=not args.all)
    if args.write:
        from .fixtures import regenerate

        regenerate(Path(args.write))
    if args.format == "json":
        return _json({"command": "solve-labels", "count": len(found),
                      "assignments": [f.to_json() for f in found]}), EXIT_OK if found else EXIT_FAIL
    rows = [(f.reading, "N_" + "".join(f.typo_pair),
             ", ".join(f"{k}:{v}" for k, v in sorted(f.numbering.items()))) for f in found]
    return _table(args.format, ("reading", "second sqrt(1/6)", "numbering"), rows), EXIT_OK if found else EXIT_FAIL


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="itbasis", description="Exact Cartan-Weyl and irreducible tensor bases of G2, F4, E6.")
    p.add_argument("--version", action="version", version=f"itbasis {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, algebras=ALGEBRAS):
        sp.add_argument("algebra", type=str.lower, choices=algebras)
        sp.add_argument("--format", choices=("text", "md", "json"), default="text")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        return sp

    common(sub.add_parser("roots", help="list the roots and K"))
    sp = common(sub.add_parser("constants", help="completed structure-constant table"))
    sp.add_argument("--printed", action="store_true", help="use table cells exactly as printed (F4/E6)")
    sp.add_argument("--given-only", action="store_true", help="show only constants given explicitly")
    common(sub.add_parser("basis", help="tensor operators and their components"))
    sp = common(sub.add_parser("verify", help="run every verification suite"), ALGEBRAS + ("all",))
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes for Jacobi")
    sp.add_argument("--no-jacobi", action="store_true")
    sp.add_argument("--timing", action="store_true", help="include elapsed times (output no longer byte-stable)")
    sp = common(sub.add_parser("diagram", help="G2 root diagram coordinates"), ("g2",))
    sp.add_argument("--plot", help="also render the diagram to this image file (PNG, SVG, PDF)")
    sp = sub.add_parser("solve-labels", help="search the G2 numbering and readings")
    sp.add_argument("--format", choices=("text", "md", "json"), default="text")
    sp.add_argument("--output", "-o")
    sp.add_argument("--all", action="store_true", help="list every accepted assignment")
    sp.add_argument("--write", metavar="DIR", help="regenerate all fixtures into DIR")
    return p


COMMANDS = {
    "roots": cmd_roots,
    "constants": cmd_constants,
    "basis": cmd_basis,
    "verify": cmd_verify,
    "diagram": cmd_diagram,
    "solve-labels": cmd_solve_labels,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("itbasis: error: --jobs must be positive")
        if hasattr(args, "algebra"):
            args.algebra = args.algebra.upper()
        text, code = COMMANDS[args.command](args)
    except UsageError as e:
        stderr.write(f"{e}\n")
        return EXIT_USAGE
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    except (StructureConstantError, AssemblyError, RootSystemError) as e:
        stderr.write(f"itbasis: construction error: {e}\n")
        return EXIT_BUILD
    if args.output:
        Path(args.output).write_text(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
