import pytest

from adeles.classes import AdeleClass
from adeles.h1 import coordinates_in_basis, find_function, h1_basis_from_points, hasse_witt_rows, verify_hasse_witt
from cli.errors import InconsistencyError, InputError
from curves.local import local_chart
from curves.model import ClosedPoint


def _point(curve, x, y):
    F = curve.lattice.field(1)
    return ClosedPoint(F.from_int(x), F.from_int(y))


def _principal(curve, f, points):
    """Главные части функции f в точках points."""
    out = AdeleClass.zero(curve)
    for P in points:
        out = out + AdeleClass.delta(curve, P, f)
    return out


def _regular_difference(curve, r, h, S) -> bool:
    expanded = AdeleClass(curve, {P: local_chart(curve, P).expand(h, 1) for P in S})
    return (r - expanded).is_regular(S)


def test_basis_classes(genus2):
    basis = genus2.basis
    assert basis.dimension == 2
    for P, b in zip(basis.points, basis.classes):
        assert b.pole_order(P) == 1
        assert b.support() == [P]


def test_special_system_rejected(genus2):
    curve = genus2.curve
    with pytest.raises(InputError):
        h1_basis_from_points(curve, [_point(curve, 0, 2), _point(curve, 0, 1)])
    with pytest.raises(InputError):
        h1_basis_from_points(curve, [genus2.points[0], genus2.points[0]])


def test_find_function_for_principal_adele(genus2):
    curve = genus2.curve
    P, Q = _point(curve, 0, 2), _point(curve, 0, 1)
    f = 1 / curve.x() + curve.y()
    r = _principal(curve, f, [P, Q])
    h = find_function(curve, [P, Q], r)
    assert h is not None
    assert _regular_difference(curve, r, h, [P, Q])
    # нормировка: постоянный член h в первой точке равен нулю
    assert local_chart(curve, P).expand(h, 1).coefficient(0).is_zero()


def test_find_function_detects_nontrivial_class(genus2):
    curve = genus2.curve
    assert find_function(curve, genus2.basis.support, genus2.basis.classes[0]) is None


def test_find_function_support_check(genus2):
    curve = genus2.curve
    r = genus2.basis.classes[1]
    with pytest.raises(InconsistencyError):
        find_function(curve, [genus2.points[0]], r)


def test_coordinates_in_basis(genus2):
    curve = genus2.curve
    basis = genus2.basis
    Q = _point(curve, 0, 1)
    S = basis.support + [Q]
    r = basis.classes[0].scale(2) + basis.classes[1] + _principal(curve, 1 / curve.x(), [basis.points[0], Q])
    beta, h = coordinates_in_basis(curve, S, r, basis.classes)
    assert beta == [2, 1]
    combo = basis.classes[0].scale(2) + basis.classes[1]
    assert _regular_difference(curve, r - combo, h, S)


def test_hasse_witt_genus2(genus2):
    rows = hasse_witt_rows(genus2.basis)
    assert rows == [[1, 0], [0, 0]]
    verify_hasse_witt(genus2.basis, genus2.matrix)


def test_hasse_witt_fermat(fermat):
    rows = hasse_witt_rows(fermat.basis)
    assert rows == [[1, 3, 0], [1, 4, 0], [2, 2, 3]]
    # во входном файле столбец j - координаты F(b_j)
    assert fermat.spec.hasse_witt == [[1, 1, 2], [3, 4, 2], [0, 0, 3]]
    assert fermat.matrix == rows
    verify_hasse_witt(fermat.basis, fermat.matrix)


def test_hasse_witt_supersingular(supersingular):
    assert hasse_witt_rows(supersingular.basis) == [[0]]


def test_hasse_witt_mismatch(genus2):
    with pytest.raises(InconsistencyError):
        verify_hasse_witt(genus2.basis, [[1, 0], [0, 1]])
    with pytest.raises(InputError):
        verify_hasse_witt(genus2.basis, [[1, 0]])


def test_adele_pointwise_operations(genus2):
    curve = genus2.curve
    P, Q = genus2.basis.points
    r, s = genus2.basis.classes
    assert r + AdeleClass.zero(curve) == r
    assert set((r + s).support()) == {P, Q}
    assert r.frobenius().pole_order(P) == 3
    lam = curve.lattice.field(2).gen()
    assert (r + s).scale(lam) == r.scale(lam) + s.scale(lam)
