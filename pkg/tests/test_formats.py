import json

import pytest

from cli.errors import InputError
from fields.lattice import FieldLattice
from formats.loader import build_curve, load_curve_spec, load_hasse_witt, load_sheaf, read_json, validate
from formats.schemas import CurveSpec, JobSpec, PointSpec, SheafSpec


def test_curve_spec_example_is_valid():
    example = CurveSpec.model_json_schema()["example"]
    spec = CurveSpec.model_validate(example)
    curve, points = build_curve(spec, FieldLattice(3))
    assert curve.genus == 2
    assert len(points) == 2


def test_point_spec_validation():
    assert PointSpec(x=0, y=2).x == "0"
    assert PointSpec(at_infinity=True).x is None
    with pytest.raises(ValueError):
        PointSpec(x="1")
    with pytest.raises(ValueError):
        PointSpec(x="1", y="1", at_infinity=True)


def test_curve_spec_rejects_composite_characteristic():
    with pytest.raises(InputError):
        validate(CurveSpec, {"p": 4, "family": "hyperelliptic", "equation": "y^2 = x^3 + 1"}, "test")


def test_point_must_lie_on_curve():
    spec = CurveSpec(p=3, family="hyperelliptic", equation="y^2 = x^5 + x^2 + 1", points=[PointSpec(x=1, y=1)])
    with pytest.raises(InputError):
        build_curve(spec, FieldLattice(3))


def test_hasse_witt_sources(tmp_path):
    lattice = FieldLattice(5)
    inline = load_hasse_witt("[[1, 2], [0, 4]]", lattice)
    assert inline == [[1, 0], [2, 4]]
    path = tmp_path / "hw.json"
    path.write_text(json.dumps({"matrix": [["z2", 1], [0, 0]]}), encoding="utf-8")
    from_file = load_hasse_witt(str(path), lattice)
    assert from_file[0][0].degree == 2
    with pytest.raises(InputError):
        load_hasse_witt("[[1, 2", lattice)
    with pytest.raises(InputError):
        load_hasse_witt("[[1, 2]]", lattice)


def test_read_json_errors(tmp_path):
    with pytest.raises(InputError):
        read_json(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(InputError):
        read_json(broken)


def test_sheaf_spec_shapes():
    with pytest.raises(InputError):
        validate(SheafSpec, {"automorphisms": [], "module": {"generators": 1, "actions": [[[1]]]}}, "test")
    with pytest.raises(InputError):
        validate(SheafSpec, {"automorphisms": [], "module": {"generators": 2, "relations": [[1]]}}, "test")


def test_load_sheaf(genus2, sheaf_dir):
    automorphisms, module = load_sheaf(sheaf_dir / "involution_sign.json", genus2.curve, 1)
    assert automorphisms[0].name == "iota"
    assert module.orders == [3]
    assert module.actions[0].tolist() == [[2]]


def test_job_spec_requires_inputs():
    with pytest.raises(InputError):
        validate(JobSpec, {"command": "h1"}, "test")
    with pytest.raises(InputError):
        validate(JobSpec, {"command": "sheaf", "curve": "c.json"}, "test")
    job = validate(JobSpec, {"command": "selftest"}, "test")
    assert job.n == 1


def test_fixture_specs_load():
    from cli.config import FIXTURES_DIR

    names = sorted(p.stem for p in FIXTURES_DIR.glob("*.json"))
    assert names == ["conic_f3", "fermat_quartic_f5", "genus2_f3", "supersingular_f3"]
    for name in names:
        spec = load_curve_spec(FIXTURES_DIR / f"{name}.json")
        assert spec.expected_rank is not None
