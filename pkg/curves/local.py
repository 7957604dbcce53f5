"""
Локальные разложения функций в ряды Лорана по униформизатору точки.

Карта точки хранит разложения координат x(t), y(t). По умолчанию
униформизатор: x - x0, если dF/dy(P) != 0, иначе y - y0; на бесконечности
гиперэллиптической кривой t = x^g / y. Заданный пользователем униформизатор
подставляется через обращение ряда.
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

from cli.config import INITIAL_PRECISION, MAX_PRECISION
from cli.errors import InputError, PrecisionError
from curves.model import ClosedPoint, CurveFamily, CurveFunction, CurveModel, bipoly_evaluate
from curves.series import LaurentSeries
from fields.lattice import FieldElement

logger = logging.getLogger(__name__)


class LocalChart:
    """Разложения в точке P кривой в выбранном униформизаторе."""

    def __init__(self, curve: CurveModel, point: ClosedPoint):
        self.curve = curve
        self.point = point
        lattice = curve.lattice
        if point.at_infinity:
            if curve.family != CurveFamily.HYPERELLIPTIC:
                raise InputError("бесконечно удалённая точка поддерживается только для гиперэллиптических кривых")
            self.mode = "infinity"
            m = curve.base_degree
        else:
            if point.x is None or point.y is None:
                raise InputError("у аффинной точки должны быть заданы обе координаты")
            if not curve.contains(point.x, point.y):
                raise InputError(f"точка {point.label} не лежит на кривой")
            m = lattice.common_degree([point.x, point.y] + list(curve.equation.values()))
            fy = bipoly_evaluate(curve.fy, point.x, point.y, point.x.field.one())
            self.mode = "x" if not fy.is_zero() else "y"
            if self.mode == "y":
                fx = bipoly_evaluate(curve.fx, point.x, point.y, point.x.field.one())
                if fx.is_zero():
                    raise InputError(f"точка {point.label} особая: обе частные производные равны нулю")
        self.field = lattice.field(m)
        self._default: Dict[str, Tuple[LaurentSeries, LaurentSeries]] = {}
        self._coords: Optional[Tuple[LaurentSeries, LaurentSeries]] = None
        self._cache: Dict[str, LaurentSeries] = {}

    # --- униформизатор ---

    def default_uniformiser(self) -> CurveFunction:
        curve = self.curve
        if self.mode == "infinity":
            return curve.x() ** curve.genus / curve.y()
        if self.mode == "x":
            return curve.x() - self.point.x
        return curve.y() - self.point.y

    def uniformiser(self) -> CurveFunction:
        """Назначенный униформизатор точки."""
        return self.point.uniformiser if self.point.uniformiser is not None else self.default_uniformiser()

    # --- разложения координат ---

    def _newton(self, W: int) -> Tuple[LaurentSeries, LaurentSeries]:
        """Разложение в униформизаторе x - x0 (или y - y0) итерацией Ньютона по второй координате."""
        curve, field = self.curve, self.field
        x0, y0 = self.point.x, self.point.y
        one = LaurentSeries.constant(1, field, W)
        t = LaurentSeries.monomial(1, 1, field, W)
        moving_y = self.mode == "x"
        fixed = LaurentSeries.constant(x0 if moving_y else y0, field, W) + t
        start = y0 if moving_y else x0
        deriv = curve.fy if moving_y else curve.fx
        z = LaurentSeries.constant(start, field, 1)
        prec = 1
        while prec < W:
            prec = min(2 * prec, W)
            z = LaurentSeries(z.field, z.val, z.coeffs, prec)
            X, Y = (fixed, z) if moving_y else (z, fixed)
            value = bipoly_evaluate(curve.equation, X, Y, one).with_precision(prec)
            slope = bipoly_evaluate(deriv, X, Y, one).with_precision(prec)
            z = (z - value / slope).with_precision(prec)
        return (fixed, z) if moving_y else (z, fixed)

    def _infinity(self, W: int) -> Tuple[LaurentSeries, LaurentSeries]:
        """x = 1/s, y = x^g / t, где s = t^2 * s^{2g+1} f(1/s)."""
        curve, field = self.curve, self.field
        g = curve.genus
        f = curve.hyperelliptic_f()
        deg = 2 * g + 1
        Wp = W + 2 * g + 4
        # Коэффициенты f~(s) = Σ f_i s^{deg - i}
        tilde = {deg - i: c for i, c in f.items()}
        t2 = LaurentSeries.monomial(1, 2, field, Wp)
        one = LaurentSeries.constant(1, field, Wp)
        s = LaurentSeries.zero(field, Wp)
        for _ in range(Wp // 2 + 2):
            acc = LaurentSeries.zero(field, Wp)
            power = one
            for k in range(deg + 1):
                if k in tilde:
                    acc = acc + power * tilde[k]
                power = power * s
            new = (t2 * acc).with_precision(Wp)
            if new == s:
                break
            s = new
        X = s.inverse()
        t_inv = LaurentSeries.monomial(1, -1, field)
        Y = X ** g * t_inv
        return X, Y

    def default_coordinates(self, W: int) -> Tuple[LaurentSeries, LaurentSeries]:
        """x(t), y(t) в униформизаторе по умолчанию с точностью не ниже W."""
        cached = self._default.get("xy")
        if cached is not None and min(cached[0].prec, cached[1].prec) >= W:
            return cached
        work = W
        while True:
            if self.mode == "infinity":
                X, Y = self._infinity(work)
            else:
                X, Y = self._newton(work)
                X, Y = X.with_precision(work), Y.with_precision(work)
            if min(X.prec, Y.prec) >= W:
                break
            work += W - min(X.prec, Y.prec)
        self._default["xy"] = (X, Y)
        logger.debug(f"Разложение координат в точке {self.point.label} до O(t^{W})")
        return X, Y

    def coordinates(self, W: int) -> Tuple[LaurentSeries, LaurentSeries]:
        """x, y в назначенном униформизаторе с точностью не ниже W."""
        if self.point.uniformiser is None:
            return self.default_coordinates(W)
        if self._coords is not None and min(self._coords[0].prec, self._coords[1].prec) >= W:
            return self._coords
        work = W + 4
        while True:
            if work > MAX_PRECISION:
                raise PrecisionError(f"не удалось сменить униформизатор в точке {self.point.label}")
            X, Y = self.default_coordinates(work)
            u = self._evaluate_series(self.point.uniformiser, X.with_precision(work), Y.with_precision(work))
            if u is None or u.coeffs.shape[0] == 0:
                work *= 2
                continue
            if u.valuation != 1:
                raise InputError(
                    f"униформизатор {self.point.uniformiser} имеет порядок {u.valuation} в точке {self.point.label}"
                )
            rev = u.with_precision(min(u.prec, work)).reversion()
            Xu, Yu = X.with_precision(work).compose(rev), Y.with_precision(work).compose(rev)
            if min(Xu.prec, Yu.prec) >= W:
                self._coords = (Xu, Yu)
                return Xu, Yu
            work *= 2

    # --- функции ---

    def _evaluate_series(self, f: CurveFunction, X: LaurentSeries, Y: LaurentSeries) -> Optional[LaurentSeries]:
        """None, если знаменатель неотличим от нуля на данной точности."""
        one = LaurentSeries.constant(1, self.field)
        num = bipoly_evaluate(f.num, X, Y, one)
        den = bipoly_evaluate(f.den, X, Y, one)
        if den.coeffs.shape[0] == 0:
            return None
        return num / den

    def expand(self, f: CurveFunction, prec: int) -> LaurentSeries:
        """
        Ряд Лорана f в назначенном униформизаторе, известный по модулю t^prec.

        Args:
            f: Функция на кривой
            prec: Требуемая абсолютная точность

        Returns:
            LaurentSeries с точностью не ниже prec (или точный ноль)
        """
        if f.is_zero():
            return LaurentSeries.zero(self.field)
        key = repr(f)
        cached = self._cache.get(key)
        if cached is not None and cached.prec >= prec:
            return cached
        work = max(prec, 1) + 2
        while True:
            if work > MAX_PRECISION:
                raise PrecisionError(
                    f"разложение {f} в точке {self.point.label} не достигло O(t^{prec}) "
                    f"при рабочей точности {MAX_PRECISION}"
                )
            X, Y = self.coordinates(work)
            res = self._evaluate_series(f, X.with_precision(work), Y.with_precision(work))
            if res is None:
                work *= 2
                continue
            if res.prec >= prec:
                self._cache[key] = res
                return res
            work = max(2 * work, work + prec - res.prec)

    def valuation(self, f: CurveFunction) -> float:
        """v_P(f); math.inf для нулевой функции."""
        if f.is_zero():
            return math.inf
        W = INITIAL_PRECISION
        while W <= MAX_PRECISION:
            s = self.expand(f, W)
            if s.coeffs.shape[0]:
                return s.val
            W *= 2
        raise PrecisionError(f"не удалось определить порядок {f} в точке {self.point.label}")

    def principal_part(self, f: CurveFunction, s: int) -> List[FieldElement]:
        """Коэффициенты при t^{-s}, ..., t^{-1}."""
        res = self.expand(f, 0)
        if res.valuation < -s:
            raise ValueError(f"порядок полюса {-res.valuation} функции {f} больше запрошенного {s}")
        return res.principal_part(s)

    def evaluate(self, f: CurveFunction) -> Optional[FieldElement]:
        """Значение f(P) или None, если P - полюс f."""
        res = self.expand(f, 1)
        if res.valuation < 0:
            return None
        return res.coefficient(0)


def local_chart(curve: CurveModel, point: ClosedPoint) -> LocalChart:
    """Карта точки (кэшируется на кривой с учётом униформизатора)."""
    key = (point, repr(point.uniformiser))
    chart = curve.charts.get(key)
    if chart is None:
        chart = LocalChart(curve, point)
        curve.charts[key] = chart
    return chart


def valuation(curve: CurveModel, f: CurveFunction, point: ClosedPoint) -> float:
    return local_chart(curve, point).valuation(f)


def principal_part(curve: CurveModel, f: CurveFunction, point: ClosedPoint, s: int) -> List[FieldElement]:
    return local_chart(curve, point).principal_part(f, s)


def expand(curve: CurveModel, f: CurveFunction, point: ClosedPoint, prec: int) -> LaurentSeries:
    return local_chart(curve, point).expand(f, prec)
