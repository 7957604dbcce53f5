import json

import pytest

from cli.config import FIXTURES_DIR
from cli.handlers import EXIT_INCONSISTENT, EXIT_INPUT, EXIT_OK
from cli.main import main

GENUS2 = str(FIXTURES_DIR / "genus2_f3.json")
SHEAVES = FIXTURES_DIR / "sheaves"


def _run_json(tmp_path, *args):
    out = tmp_path / "result.json"
    code = main(list(args) + ["--out", str(out)])
    assert code == EXIT_OK
    return json.loads(out.read_text(encoding="utf-8"))


def test_h1_json(tmp_path):
    data = _run_json(tmp_path, "h1", "--curve", GENUS2)
    assert data["rank"] == 1
    assert data["group"] == "(Z/3)^1"
    assert data["level"] == 1
    assert len(data["basis"]) == 1


def test_cover_text(tmp_path):
    out = tmp_path / "cover.txt"
    assert main(["cover", "--curve", GENUS2, "--n", "2", "--format", "text", "--out", str(out)]) == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert "t_0^3 - t_0 = h_0" in text
    assert "t_1^3 - t_1 = 2*t_0^7" in text


def test_output_is_deterministic(tmp_path):
    first = (tmp_path / "a.json")
    second = (tmp_path / "b.json")
    assert main(["cover", "--curve", GENUS2, "--n", "2", "--out", str(first)]) == EXIT_OK
    assert main(["cover", "--curve", GENUS2, "--n", "2", "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_sheaf_command(tmp_path):
    data = _run_json(tmp_path, "sheaf", "--curve", GENUS2, "--sheaf", str(SHEAVES / "involution_sign.json"))
    assert data["H1"] == [3]
    assert data["H0"] == []
    assert data["group"]["order"] == 6
    assert len(data["group"]["table"]) == 6
    assert data["group"]["abelian"] is False
    assert data["group"]["words"][0] == []
    assert all(len(w) <= 3 for w in data["group"]["words"])
    assert len(data["lifts"]) == 2


def test_trivial_sheaf_command(tmp_path):
    data = _run_json(tmp_path, "sheaf", "--curve", GENUS2, "--sheaf", str(SHEAVES / "trivial_z3.json"))
    assert data["H1"] == [3]
    assert data["H0"] == [3]
    assert data["group"]["abelian"] is True


@pytest.mark.parametrize("args", [
    ["h1", "--curve", "missing.json"],
    ["h1"],
    ["sheaf", "--curve", GENUS2],
    ["h1", "--curve", GENUS2, "--n", "0"],
    ["h1", "--curve", GENUS2, "--hw", "[[1, 0]]"],
    ["unknown"],
])
def test_input_errors(args):
    assert main(args) == EXIT_INPUT


def test_inconsistent_hasse_witt():
    assert main(["h1", "--curve", GENUS2, "--hw", "[[0, 0], [0, 1]]"]) == EXIT_INCONSISTENT


@pytest.mark.slow
def test_selftest(tmp_path):
    out = tmp_path / "selftest.txt"
    assert main(["selftest", "--out", str(out)]) == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert "genus2_f3: H^1_et ≅ (Z/3)^1" in text
    assert "fermat_quartic_f5: H^1_et ≅ (Z/5)^3" in text
