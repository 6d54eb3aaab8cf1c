from __future__ import annotations

import io
import json

import pytest

from itbasis.cli import EXIT_BUILD, EXIT_FAIL, EXIT_OK, EXIT_USAGE, SCHEMA_VERSION, run


def call(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_roots_text():
    code, out, _ = call("roots", "g2")
    assert code == EXIT_OK
    assert out.startswith("G2: 12 roots, K = 2*sqrt(6)")


@pytest.mark.parametrize("algebra,count", [("g2", 12), ("f4", 48), ("e6", 72)])
def test_roots_json(algebra, count):
    code, out, _ = call("roots", algebra, "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["schema_version"] == SCHEMA_VERSION and doc["command"] == "roots"
    assert len(doc["roots"]) == count


def test_constants_given_only():
    code, out, _ = call("constants", "g2", "--given-only")
    assert code == EXIT_OK
    assert out.count("paper") == 5


def test_constants_printed_table_is_a_construction_error():
    code, _, err = call("constants", "f4", "--printed")
    assert code == EXIT_BUILD
    assert "construction error" in err


def test_basis_markdown():
    code, out, _ = call("basis", "f4", "--format", "md")
    assert code == EXIT_OK
    assert "## U(1234)" in out and "| component | Cartan-Weyl form |" in out


def test_verify_exit_codes():
    assert call("verify", "g2", "--jobs", "1")[0] == EXIT_OK
    code, out, _ = call("verify", "f4", "--no-jacobi")
    assert code == EXIT_FAIL
    assert "FAIL coupled:{U(13)U(34)}" in out


def test_verify_json_is_byte_stable():
    a = call("verify", "g2", "--format", "json", "--jobs", "1")[1]
    b = call("verify", "g2", "--format", "json", "--jobs", "2")[1]
    assert a == b
    doc = json.loads(a)
    assert doc["status"] == "pass" and doc["reports"][0]["suite_version"] == "1.0"
    assert "elapsed" not in doc["reports"][0]


def test_verify_timing_flag():
    doc = json.loads(call("verify", "g2", "--format", "json", "--no-jacobi", "--timing")[1])
    assert "elapsed" in doc["reports"][0]


def test_diagram_writes_plot(tmp_path):
    png = tmp_path / "g2.png"
    code, out, _ = call("diagram", "g2", "--plot", str(png), "--format", "json")
    assert code == EXIT_OK
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    doc = json.loads(out)
    assert len(doc["points"]) == 12
    lengths = sorted(round(p["x_float"] ** 2 + p["y_float"] ** 2, 9) for p in doc["points"])
    assert lengths == [1.0] * 6 + [3.0] * 6


def test_output_file(tmp_path):
    target = tmp_path / "roots.txt"
    code, out, _ = call("roots", "e6", "-o", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text().startswith("E6: 72 roots, K = 12")


def test_solve_labels():
    code, out, _ = call("solve-labels", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["count"] == 1
    assert doc["assignments"][0]["typo_pair"] == ["6", "2"]


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["roots"],
    ["roots", "e8"],
    ["verify", "g2", "--jobs", "0"],
    ["diagram", "f4"],
    ["roots", "g2", "--format", "xml"],
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == EXIT_USAGE
    assert out == "" and "error" in err


def test_version_and_help():
    assert call("--version")[0] == EXIT_OK
    assert call("--help")[0] == EXIT_OK
