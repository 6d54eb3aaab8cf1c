"""Frozen, versioned results of the one-off searches.

The G2 label assignment, the normalisation constants and the completed
structure-constant tables are computed once (see :func:`regenerate`) and
stored as JSON next to this module, so everyday runs are deterministic and
cheap.  Tests re-run the searches and compare against these files.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .cartanweyl import StructureTable, load_structure_constants
from .exactnum import ExactReal
from .rootsystem import build

FIXTURE_VERSION = 1
_PKG = "itbasis.data"


def _read(name: str) -> dict:
    data = json.loads(resources.files(_PKG).joinpath(name).read_text())
    if data.get("fixture_version") != FIXTURE_VERSION:
        raise ValueError(f"{name}: fixture version {data.get('fixture_version')} != {FIXTURE_VERSION}")
    return data


@lru_cache(maxsize=None)
def load_g2_labels():
    from .tensorbasis import G2Labels

    return G2Labels.from_json(_read("g2_labels.json")["labels"])


@lru_cache(maxsize=None)
def load_normalization(algebra: str) -> ExactReal:
    return ExactReal.from_json(_read("normalization.json")["K"][algebra.upper()])


@lru_cache(maxsize=None)
def load_table(algebra: str) -> StructureTable:
    return StructureTable.from_json(_read(f"table_{algebra.upper()}.json")["table"])


def _dump(path: Path, payload: dict) -> None:
    path.write_text(json.dumps({"fixture_version": FIXTURE_VERSION, **payload}, indent=1, sort_keys=True) + "\n")


def regenerate(out_dir: Path | None = None) -> list[Path]:
    """Recompute every fixture from scratch and write it to ``out_dir``."""
    from .tensorbasis import g2_table, solve_labels

    out = Path(out_dir) if out_dir is not None else Path(str(resources.files(_PKG)))
    out.mkdir(parents=True, exist_ok=True)
    written = []
    labels = solve_labels()[0]
    p = out / "g2_labels.json"
    _dump(p, {"labels": labels.to_json()})
    written.append(p)
    p = out / "normalization.json"
    _dump(p, {"K": {a: build(a).K.to_json() for a in ("G2", "F4", "E6")},
              "K_text": {a: str(build(a).K) for a in ("G2", "F4", "E6")}})
    written.append(p)
    for a in ("G2", "F4", "E6"):
        s = build(a)
        table = g2_table(s, labels) if a == "G2" else load_structure_constants(s)
        p = out / f"table_{a}.json"
        _dump(p, {"table": table.to_json()})
        written.append(p)
    return written
