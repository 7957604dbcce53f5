from pathlib import Path

import pytest

from adeles.h1 import h1_basis_from_points
from cli.config import FIXTURES_DIR
from formats.loader import build_curve, load_curve_spec, parse_hasse_witt


class CurveFixture:
    """Эталонная кривая: описание, модель, точки, базис H^1(X, O_X) и матрица Хассе - Витта."""

    def __init__(self, name: str):
        self.path: Path = FIXTURES_DIR / f"{name}.json"
        self.spec = load_curve_spec(self.path)
        self.curve, self.points = build_curve(self.spec)
        self.basis = h1_basis_from_points(self.curve, self.points)
        self.matrix = parse_hasse_witt(self.spec.hasse_witt or [], self.curve.lattice)


@pytest.fixture(scope="session")
def genus2():
    """y^2 = x^5 + x^2 + 1 над F_3, ранг 1."""
    return CurveFixture("genus2_f3")


@pytest.fixture(scope="session")
def fermat():
    """x^4 + y^4 = 1 над F_5, ранг 3."""
    return CurveFixture("fermat_quartic_f5")


@pytest.fixture(scope="session")
def supersingular():
    return CurveFixture("supersingular_f3")


@pytest.fixture
def sheaf_dir() -> Path:
    return FIXTURES_DIR / "sheaves"
