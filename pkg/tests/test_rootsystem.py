from __future__ import annotations

import pytest

from itbasis.exactnum import ExactReal, sqrt_rational
from itbasis.rootsystem import (
    RootSystemError,
    UnknownLabelError,
    build,
    derive_normalization,
    resolve_family_label,
)


@pytest.mark.parametrize("algebra,count,dim", [("G2", 12, 3), ("F4", 48, 4), ("E6", 72, 7)])
def test_root_counts(algebra, count, dim):
    s = build(algebra)
    assert len(s) == count
    assert all(len(r.coords) == dim for r in s)
    assert len({r.coords for r in s}) == count
    assert len(set(s.labels)) == count


def test_normalization_constants():
    assert build("G2").K == sqrt_rational(24)
    assert build("E6").K == ExactReal.rational(12)
    assert build("F4").K == 4 * sqrt_rational(3)


def test_f4_roots_are_isotropic():
    # sum over roots of r r^T = 18 I: 2 from +-e_i, 12 from +-e_i+-e_j, 16/4 from the half-integer roots
    s = build("F4")
    for i in range(4):
        for j in range(4):
            total = sum((r.coords[i] * r.coords[j] for r in s), ExactReal())
            assert total == (18 if i == j else 0)


def test_every_root_has_its_negative():
    for alg in ("G2", "F4", "E6"):
        s = build(alg)
        for lab in s.labels:
            assert s.negative(s.negative(lab)) == lab
            assert s.sum_label(lab, s.negative(lab)) == "0"


def test_subalgebra_tags():
    f4, e6 = build("F4"), build("E6")
    assert f4.subalgebra == "B4" and sum(f4.subalgebra_tag.values()) == 32
    assert e6.subalgebra == "A5" and sum(e6.subalgebra_tag.values()) == 30


def test_root_strings_in_g2_reach_length_three():
    s = build("G2")
    longest = max(sum(s.string_lengths(x, y)) for x in s.labels for y in s.labels if x != y)
    assert longest == 3


def test_label_resolution():
    e6 = build("E6")
    assert resolve_family_label("β1", e6).label == "beta_1"
    assert resolve_family_label("−α_3", e6).label == "-alpha_3"
    assert resolve_family_label("e7", e6).coords == (0,) * 6 + (sqrt_rational(2),)
    f4 = build("F4")
    assert resolve_family_label("+1-2", f4).coords == (1, -1, 0, 0)
    with pytest.raises(UnknownLabelError):
        resolve_family_label("lambda_99", e6)
    with pytest.raises(UnknownLabelError):
        f4.root("nope")


def test_normalization_rejects_anisotropic_sets():
    one = ExactReal.rational(1)
    zero = ExactReal()
    with pytest.raises(RootSystemError):
        derive_normalization([(one, zero), (-one, zero), (zero, one + one), (zero, -one - one)])
    with pytest.raises(RootSystemError):
        derive_normalization([])


def test_unknown_algebra():
    with pytest.raises(ValueError):
        build("E8")
