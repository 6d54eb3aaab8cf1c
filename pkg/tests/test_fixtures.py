from __future__ import annotations

import filecmp
from importlib import resources

from itbasis import fixtures
from itbasis.exactnum import ExactReal, sqrt_rational
from itbasis.rootsystem import build


def test_regenerated_fixtures_match_frozen_files(tmp_path):
    written = fixtures.regenerate(tmp_path)
    frozen = resources.files("itbasis.data")
    assert sorted(p.name for p in written) == [
        "g2_labels.json", "normalization.json", "table_E6.json", "table_F4.json", "table_G2.json",
    ]
    for p in written:
        assert filecmp.cmp(p, str(frozen.joinpath(p.name)), shallow=False), p.name


def test_normalization_fixture():
    assert fixtures.load_normalization("F4") == 4 * sqrt_rational(3)
    assert fixtures.load_normalization("G2") == sqrt_rational(24)
    assert fixtures.load_normalization("E6") == ExactReal.rational(12)
    for alg in ("G2", "F4", "E6"):
        assert fixtures.load_normalization(alg) == build(alg).K


def test_bare_sign_cell_is_frozen():
    t = fixtures.load_table("E6")
    assert t[("-beta_3", "lambda_7")] * t.K == 1
    assert t[("beta_3", "-lambda_7")] * t.K == -1


def test_g2_labels_fixture():
    lab = fixtures.load_g2_labels()
    assert lab.numbering == {
        "1": "-e1-e2+2e3", "2": "e3-e1", "3": "e2+e3-2e1", "4": "e2-e1", "5": "-e1-e3+2e2", "6": "e2-e3",
    }
