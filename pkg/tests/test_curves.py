import math

import pytest

from cli.errors import InputError
from curves.local import LocalChart, local_chart, principal_part, valuation
from curves.model import ClosedPoint, fibre_points
from curves.riemann_roch import is_nonspecial, riemann_roch_basis, riemann_roch_dimension
from curves.series import LaurentSeries
from fields.lattice import FieldLattice
from formats.loader import build_curve
from formats.schemas import CurveSpec


def _point(curve, x, y):
    F = curve.lattice.field(1)
    return ClosedPoint(F.from_int(x), F.from_int(y))


def test_genera(genus2, fermat, supersingular):
    assert genus2.curve.genus == 2
    assert fermat.curve.genus == 3
    assert supersingular.curve.genus == 1


@pytest.mark.parametrize("equation", ["y^2 = x^3", "y^2 = x^4 + 1"])
def test_bad_hyperelliptic_models_rejected(equation):
    spec = CurveSpec(p=3, family="hyperelliptic", equation=equation)
    with pytest.raises(InputError):
        build_curve(spec, FieldLattice(3))


def test_contains(genus2):
    curve = genus2.curve
    F = curve.lattice.field(1)
    assert curve.contains(F.from_int(0), F.from_int(2))
    assert not curve.contains(F.from_int(1), F.from_int(1))


def test_function_arithmetic(genus2):
    curve = genus2.curve
    x, y = curve.x(), curve.y()
    assert (x + 1) * (x - 1) == x ** 2 - 1
    assert y * y == x ** 5 + x ** 2 + 1
    assert (y / x) * x == y
    assert y.substitute(x, -y) == -y
    assert curve.constant(2).is_constant()


def test_local_expansion_satisfies_equation(genus2):
    curve = genus2.curve
    P = _point(curve, 0, 2)
    chart = local_chart(curve, P)
    x, y = curve.x(), curve.y()
    s = chart.expand(y, 10)
    rhs = chart.expand(x ** 5 + x ** 2 + 1, 10)
    diff = s * s - rhs
    assert all(diff.coefficient(k).is_zero() for k in range(0, 10))
    assert s.coefficient(0) == 2


def test_valuations(genus2, supersingular):
    curve = genus2.curve
    P = _point(curve, 0, 2)
    assert valuation(curve, curve.x(), P) == 1
    assert valuation(curve, curve.y() - 2, P) == 2
    assert valuation(curve, 1 / curve.x(), P) == -1
    assert valuation(curve, curve.constant(0), P) == math.inf
    assert local_chart(curve, P).evaluate(1 / curve.x()) is None

    # точка ветвления: униформизатор y
    E = supersingular.curve
    Q = _point(E, 0, 0)
    assert valuation(E, E.x(), Q) == 2
    assert valuation(E, E.y(), Q) == 1


def test_principal_part(genus2):
    curve = genus2.curve
    P = _point(curve, 0, 2)
    x = curve.x()
    assert principal_part(curve, (1 + x) / (x * x), P, 2) == [1, 1]
    assert principal_part(curve, 1 / x, P, 3) == [0, 0, 1]
    assert principal_part(curve, x + 1, P, 2) == [0, 0]
    f, g = 1 / x, curve.y() / (x * x)
    total = principal_part(curve, f + g, P, 2)
    assert total == [a + b for a, b in zip(principal_part(curve, f, P, 2), principal_part(curve, g, P, 2))]
    with pytest.raises(ValueError):
        principal_part(curve, 1 / (x * x), P, 1)


def test_expansion_at_infinity(genus2):
    curve = genus2.curve
    chart = local_chart(curve, ClosedPoint.infinity())
    assert chart.valuation(curve.x()) == -2
    assert chart.valuation(curve.y()) == -5


def test_riemann_roch_dimensions(genus2):
    curve = genus2.curve
    inf = ClosedPoint.infinity()
    assert riemann_roch_dimension(curve, {}) == 1
    assert riemann_roch_dimension(curve, {inf: 2}) == 2
    P, Q = _point(curve, 0, 2), _point(curve, 0, 1)
    assert riemann_roch_dimension(curve, {P: 1, Q: 1}) == 2
    basis = riemann_roch_basis(curve, {P: 1, Q: 1})
    for f in basis:
        assert valuation(curve, f, P) >= -1
        assert valuation(curve, f, Q) >= -1


def test_nonspecial_systems(genus2, fermat):
    assert is_nonspecial(genus2.curve, genus2.points)
    assert is_nonspecial(fermat.curve, fermat.points)
    special = [_point(genus2.curve, 0, 2), _point(genus2.curve, 0, 1)]
    assert not is_nonspecial(genus2.curve, special)
    with pytest.raises(InputError):
        is_nonspecial(genus2.curve, genus2.points[:1])


def test_fibre_points(genus2):
    F = genus2.curve.lattice.field(1)
    ys = sorted(int(P.y.vec[0]) for P in fibre_points(genus2.curve, F.from_int(0)))
    assert ys == [1, 2]


def test_series_inverse_and_compose():
    F = FieldLattice(5).field(1)
    t = LaurentSeries.monomial(1, 1, F)
    one = LaurentSeries.constant(1, F)
    geometric = (one - t).with_precision(8).inverse()
    assert all(geometric.coefficient(k) == 1 for k in range(8))
    s = (t + t * t).with_precision(8)
    r = s.reversion()
    assert (s.compose(r) - t).valuation >= 8
    assert (1 / t).valuation == -1


def test_fresh_chart_expands_at_zero_precision(genus2):
    curve, _ = build_curve(genus2.spec, FieldLattice(3))
    chart = LocalChart(curve, _point(curve, 2, 2))
    # x^4 + x = x (x + 1)^3 в характеристике 3
    s = chart.expand(curve.parse_function("1/(x^4 + x)"), 0)
    assert s.valuation == -3
    assert s.prec >= 0
