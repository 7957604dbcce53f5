"""
H^1(X, O_X) в адельном представлении: поиск функции с заданными главными
частями и координаты класса в базисе.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from adeles.classes import AdeleClass
from cli.errors import InconsistencyError, InputError
from curves.local import local_chart
from curves.model import ClosedPoint, CurveFunction, CurveModel
from curves.riemann_roch import RiemannRochSpace, is_nonspecial
from curves.series import LaurentSeries
from fields.lattice import FieldElement, Scalar, lcm
from fields.linalg import field_solve

logger = logging.getLogger(__name__)


@dataclass
class H1Basis:
    """Базис b_i = (1/t_i) δ_{P_i} пространства H^1(X, O_X) по неспециальной системе точек."""
    curve: CurveModel
    points: List[ClosedPoint]
    uniformisers: List[CurveFunction]
    classes: List[AdeleClass] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.classes)

    @property
    def support(self) -> List[ClosedPoint]:
        return list(dict.fromkeys(self.points))


def h1_basis_from_points(curve: CurveModel, points: Sequence[ClosedPoint]) -> H1Basis:
    """
    Строит базис H^1(X, O_X) по g точкам неспециальной системы.

    Args:
        curve: Кривая рода g
        points: P_1, ..., P_g

    Returns:
        H1Basis с классами (1/t_i) δ_{P_i}
    """
    points = list(points)
    if len(set(points)) != len(points):
        raise InputError("точки неспециальной системы должны быть различны")
    if not is_nonspecial(curve, points):
        raise InputError("система точек специальна: dim L(P_1 + ... + P_g) > 1")
    classes, uniformisers = [], []
    for P in points:
        chart = local_chart(curve, P)
        uniformisers.append(chart.uniformiser())
        classes.append(AdeleClass(curve, {P: LaurentSeries.monomial(1, -1, chart.field)}))
    basis = H1Basis(curve, points, uniformisers, classes)
    logger.info(f"Базис H^1(X, O_X): {', '.join(repr(b) for b in classes) or 'пустой'}")
    return basis


def _check_support(r: AdeleClass, S: Sequence[ClosedPoint]) -> None:
    extra = [P for P in r.entries if P not in set(S) and not r[P].is_regular()]
    if extra:
        raise InconsistencyError(f"носитель адели выходит за пределы S: {', '.join(P.label for P in extra)}")


def _working_degree(space: RiemannRochSpace, S: Sequence[ClosedPoint], adeles: Sequence[AdeleClass]) -> int:
    m = space.degree
    for P in S:
        m = lcm(m, local_chart(space.curve, P).field.degree)
    for a in adeles:
        for s in a.entries.values():
            m = lcm(m, s.field.degree)
    return m


def _solve(space: RiemannRochSpace, S: Sequence[ClosedPoint], orders: Dict[ClosedPoint, int],
           targets: Sequence[AdeleClass], r: AdeleClass, m: int) -> Optional[np.ndarray]:
    """
    Решает Σ β_i pp(targets_i) + pp(G/H) = pp(r) в точках S при условиях L(D)
    и нормировке: коэффициент при t^0 функции G/H в S[0] равен нулю.
    """
    field = space.curve.lattice.field(m)
    k = len(targets)
    n = len(space.monomials)
    blocks, rhs = [], []
    cond = space.condition_matrix(m)
    if cond.shape[0]:
        blocks.append(np.concatenate([np.zeros((cond.shape[0], k, m), dtype=np.int64), cond], axis=1))
        rhs.append(np.zeros((cond.shape[0], m), dtype=np.int64))
    for P in S:
        s = orders.get(P, 0)
        if s <= 0:
            continue
        left = np.zeros((s, k, m), dtype=np.int64)
        for i, b in enumerate(targets):
            left[:, i] = b[P].block(-s, 0, m)
        blocks.append(np.concatenate([left, space.laurent_block(P, -s, 0, m)], axis=1))
        rhs.append(r[P].block(-s, 0, m))
    if S:
        norm = space.laurent_block(S[0], 0, 1, m)
        blocks.append(np.concatenate([np.zeros((1, k, m), dtype=np.int64), norm], axis=1))
        rhs.append(np.zeros((1, m), dtype=np.int64))
    if not blocks or k + n == 0:
        return np.zeros((k + n, m), dtype=np.int64)
    A = np.concatenate(blocks, axis=0)
    b = np.concatenate(rhs, axis=0)
    return field_solve(field, A, b)


def find_function(curve: CurveModel, S: Sequence[ClosedPoint], r: AdeleClass) -> Optional[CurveFunction]:
    """
    Функция h с r - h всюду регулярной или None, если класс r в H^1(X, O_X) ненулевой.

    Args:
        curve: Кривая
        S: Конечное множество точек, содержащее носитель r
        r: Адель с компонентами, известными по крайней мере до t^0

    Returns:
        h (нормированная: коэффициент при t^0 в S[0] равен нулю) или None
    """
    S = list(S)
    _check_support(r, S)
    orders = {P: r.pole_order(P) for P in S}
    space = RiemannRochSpace(curve, orders)
    m = _working_degree(space, S, [r])
    sol = _solve(space, S, orders, [], r, m)
    if sol is None:
        logger.debug(f"Класс адели {r} нетривиален")
        return None
    return space.function(sol)


def coordinates_in_basis(
    curve: CurveModel,
    S: Sequence[ClosedPoint],
    r: AdeleClass,
    basis: Sequence[AdeleClass],
) -> Tuple[List[FieldElement], CurveFunction]:
    """
    Координаты β и функция h с r - Σ β_j b_j - h всюду регулярной.

    Args:
        curve: Кривая
        S: Точки, содержащие носители r и базиса
        r: Адель
        basis: Представители базиса H^1(X, O_X)

    Returns:
        (β, h)
    """
    S = list(S)
    _check_support(r, S)
    for b in basis:
        _check_support(b, S)
    orders = {P: max([r.pole_order(P)] + [b.pole_order(P) for b in basis]) for P in S}
    space = RiemannRochSpace(curve, orders)
    m = _working_degree(space, S, [r] + list(basis))
    sol = _solve(space, S, orders, list(basis), r, m)
    if sol is None:
        raise InconsistencyError(f"адель {r} не выражается через базис H^1(X, O_X)")
    lattice = curve.lattice
    field_m = lattice.field(m)
    beta = [lattice.descend(FieldElement(field_m, row)) for row in sol[: len(basis)]]
    h = space.function(sol[len(basis):])
    return beta, h


def hasse_witt_rows(basis: H1Basis) -> List[List[FieldElement]]:
    """Строки матрицы Фробениуса: координаты F(b_i) = b_i^p в базисе."""
    rows = []
    for b in basis.classes:
        beta, _ = coordinates_in_basis(basis.curve, basis.support, b.frobenius(1), basis.classes)
        rows.append(beta)
    return rows


def verify_hasse_witt(basis: H1Basis, matrix: Sequence[Sequence[Scalar]]) -> None:
    """
    Проверяет, что матрица Хассе - Витта согласована с базисом: строка i - координаты F(b_i).

    Raises:
        InconsistencyError: Если хотя бы одна строка не совпала
    """
    g = basis.dimension
    if len(matrix) != g or any(len(row) != g for row in matrix):
        raise InputError(f"матрица Хассе - Витта должна иметь размер {g}x{g}")
    base = basis.curve.lattice.field(1)
    for i, (row, computed) in enumerate(zip(matrix, hasse_witt_rows(basis))):
        expected = [x if isinstance(x, FieldElement) else base.from_int(int(x)) for x in row]
        if any(a != b for a, b in zip(expected, computed)):
            raise InconsistencyError(
                f"строка {i} матрицы Хассе - Витта не совпадает с координатами F(b_{i}): "
                f"задано {expected}, вычислено {computed}"
            )
    logger.info("Матрица Хассе - Витта согласована с базисом H^1(X, O_X)")
