"""
Векторы Витта аделей и функций.

Все операции выполняются поточечно: в каждой точке P множества S компоненты
образуют вектор Витта над кольцом рядов Лорана в униформизаторе P, а функции
h_k раскладываются в P с рабочей точностью W. Драйвер точности удваивает W,
пока все нужные коэффициенты результата не станут известны.
"""
import logging
from typing import Callable, Dict, List, Optional, Sequence, TypeVar

from adeles.classes import AdeleClass
from adeles.h1 import find_function
from cli.config import INITIAL_PRECISION, MAX_PRECISION
from cli.errors import PrecisionError
from curves.local import local_chart
from curves.model import ClosedPoint, CurveFunction, CurveModel
from curves.series import EXACT, LaurentSeries
from fields.lattice import FieldElement
from witt.vectors import WittVector

logger = logging.getLogger(__name__)

T = TypeVar("T")


class WittAdele:
    """Вектор Витта (r_0, ..., r_{n-1}) аделей на одной кривой."""

    __slots__ = ("curve", "coords")

    def __init__(self, curve: CurveModel, coords: Sequence[AdeleClass]):
        if not coords:
            raise ValueError("вектор Витта аделей должен иметь хотя бы одну координату")
        self.curve = curve
        self.coords = list(coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def p(self) -> int:
        return self.curve.p

    def __getitem__(self, i: int) -> AdeleClass:
        return self.coords[i]

    def support(self) -> List[ClosedPoint]:
        points = {}
        for c in self.coords:
            for P in c.entries:
                points[P] = True
        return list(points)

    def at(self, point: ClosedPoint) -> WittVector:
        return WittVector([c[point] for c in self.coords], self.p)

    def truncate(self, m: int) -> "WittAdele":
        return WittAdele(self.curve, self.coords[:m])

    def extend(self, n: int) -> "WittAdele":
        return WittAdele(self.curve, self.coords + [AdeleClass.zero(self.curve)] * (n - self.n))

    def frobenius(self) -> "WittAdele":
        return WittAdele(self.curve, [c.frobenius(1) for c in self.coords])

    def min_precision(self) -> int:
        """Наименьшая абсолютная точность компонент; EXACT, если все компоненты точные."""
        return min((s.prec for c in self.coords for s in c.entries.values()), default=EXACT)

    def is_regular(self, points: Sequence[ClosedPoint]) -> bool:
        return all(c.is_regular(points) for c in self.coords)

    def terms(self) -> List[List[Dict[str, str]]]:
        return [c.terms() for c in self.coords]

    def __repr__(self) -> str:
        return "(" + ", ".join(repr(c) for c in self.coords) + ")"


def function_vector(h: Sequence[CurveFunction], p: int) -> WittVector:
    return WittVector(list(h), p)


def _local(curve: CurveModel, point: ClosedPoint, operand, n: int, W: int) -> WittVector:
    """Локальный вектор Витта операнда в точке point (функции раскладываются до O(t^W))."""
    if isinstance(operand, WittAdele):
        v = operand.at(point)
    elif isinstance(operand, WittVector):
        chart = local_chart(curve, point)
        coords = []
        for c in operand.coords:
            if isinstance(c, CurveFunction):
                coords.append(chart.expand(c, W))
            elif isinstance(c, LaurentSeries):
                coords.append(c)
            else:
                coords.append(LaurentSeries.constant(c, chart.field))
        v = WittVector(coords, operand.p)
    else:
        raise TypeError(f"неподдерживаемый операнд: {type(operand).__name__}")
    if v.n < n:
        v = v.extend(n)
    return v


def pointwise(
    curve: CurveModel,
    points: Sequence[ClosedPoint],
    func: Callable[..., WittVector],
    operands: Sequence,
    n: int,
    W: int,
) -> WittAdele:
    """Применяет func к локальным векторам Витта операндов во всех точках points."""
    coords: List[Dict[ClosedPoint, LaurentSeries]] = [dict() for _ in range(n)]
    for P in points:
        local = [_local(curve, P, op, n, W) for op in operands]
        res = func(*local)
        for k in range(n):
            coords[k][P] = res[k]
    return WittAdele(curve, [AdeleClass(curve, c) for c in coords])


def with_precision(compute: Callable[[int], T], precision: Callable[[T], int], target: int = 0) -> T:
    """
    Повторяет compute(W), удваивая W, пока precision(результат) < target.

    Raises:
        PrecisionError: Если W превысило MAX_PRECISION
    """
    W = INITIAL_PRECISION
    while W <= MAX_PRECISION:
        try:
            result = compute(W)
        except PrecisionError as e:
            logger.debug(f"Точность {W} недостаточна: {e}")
        else:
            if precision(result) >= target:
                return result
            logger.debug(f"Точность {W} недостаточна: результат известен до O(t^{precision(result)})")
        W *= 2
    raise PrecisionError(f"не удалось достичь точности O(t^{target}) при рабочей точности до {MAX_PRECISION}")


def witt_combination(
    curve: CurveModel,
    points: Sequence[ClosedPoint],
    func: Callable[..., WittVector],
    operands: Sequence,
    n: int,
    target: int = 0,
) -> WittAdele:
    """pointwise под драйвером точности: все компоненты результата известны до t^target."""
    return with_precision(
        lambda W: pointwise(curve, points, func, operands, n, W),
        lambda res: res.min_precision(),
        target,
    )


def scalar_vector(curve: CurveModel, alpha: int, n: int) -> WittVector:
    """Образ alpha mod p^n в W_n(F_p) с координатами - элементами поля."""
    return WittVector.from_int(alpha, n, curve.p, one=curve.lattice.field(1).one())


def digits_vector(curve: CurveModel, digits: Sequence[FieldElement]) -> WittVector:
    return WittVector(list(digits), curve.p)


def find_function_witt(curve: CurveModel, S: Sequence[ClosedPoint], r: WittAdele) -> Optional[WittVector]:
    """
    Вектор функций h с r - h ∈ W_n(A°) или None, если класс r нетривиален.

    На шаге i u_i - последняя координата (r_0, ..., r_i) - (h_0, ..., h_{i-1}, 0),
    а h_i = find_function(u_i).

    Args:
        curve: Кривая
        S: Точки, содержащие носитель r
        r: Вектор Витта аделей

    Returns:
        WittVector функций или None
    """
    S = list(S)
    p = curve.p
    h: List[CurveFunction] = []
    for i in range(r.n):
        if i == 0:
            u = r[0]
        else:
            prefix = WittVector(h + [curve.constant(0)], p)
            diff = witt_combination(curve, S, lambda a, b: a - b, [r.truncate(i + 1), prefix], i + 1)
            u = diff[i]
        h_i = find_function(curve, S, u)
        if h_i is None:
            logger.debug(f"Координата {i}: класс нетривиален")
            return None
        h.append(h_i)
    return WittVector(h, p)


def wp_residual(curve: CurveModel, S: Sequence[ClosedPoint], r: WittAdele, h: WittVector) -> WittAdele:
    """F(r) - r - h, вычисленное полной арифметикой Витта в точках S."""
    return witt_combination(curve, S, lambda a, b: a.frobenius() - a - b, [r, h], r.n)


def certify_basis(curve: CurveModel, S: Sequence[ClosedPoint], r: WittAdele, h: WittVector) -> bool:
    """
    ℘-сертификат: все координаты F(r) - r - h регулярны во всех точках S.
    Так как полюсы h лежат в S, это означает ℘(r) - h ∈ W_n(A°).
    """
    residual = wp_residual(curve, S, r, h)
    ok = residual.is_regular(S)
    if not ok:
        logger.warning(f"℘-сертификат не выполнен: остаток {residual}")
    return ok
