"""
Пространства Римана - Роха L(D) = {f : div(f) + D >= 0} для гиперэллиптических
кривых нечётной степени и гладких плоских кривых.

Кандидаты имеют вид G / H, где H = Π (x - c)^{e_c} гасит полюсы D в аффинной
части, а G пробегает мономы: x^i, x^i y для гиперэллиптической модели
(с оценкой порядка полюса на бесконечности), x^i y^j с i + j <= deg H, j < d
для плоской. Условия v_Q(G) >= v_Q(H) - D(Q) - линейные уравнения на
коэффициенты тейлоровских разложений мономов.
"""
import logging
from math import ceil
from typing import Dict, List, Sequence, Tuple

import numpy as np

from cli.errors import InputError, PrecisionError
from curves.local import local_chart
from curves.model import (
    BiPoly,
    ClosedPoint,
    CurveFamily,
    CurveFunction,
    CurveModel,
    bipoly_mul,
    fibre_points,
)
from curves.series import LaurentSeries
from fields.lattice import FieldElement, lcm
from fields.linalg import field_nullspace

logger = logging.getLogger(__name__)

Divisor = Dict[ClosedPoint, int]


class RiemannRochSpace:
    """
    Пространство L(D) в виде G / H с G из линейной оболочки мономов.

    Attributes:
        denominator: H как многочлен от x
        monomials: Показатели (i, j) мономов-кандидатов
        conditions: Точки Q и число k_Q младших тейлоровских коэффициентов G, равных нулю
        degree: Степень поля, над которым записаны условия
    """

    def __init__(self, curve: CurveModel, divisor: Divisor):
        self.curve = curve
        self.divisor = {P: int(k) for P, k in divisor.items() if k}
        lattice = curve.lattice
        one = lattice.field(1).one()
        self.degree = curve.base_degree

        infinity = 0
        roots: Dict[Tuple, Tuple[FieldElement, int]] = {}
        for P, k in self.divisor.items():
            if P.at_infinity:
                if curve.family != CurveFamily.HYPERELLIPTIC:
                    raise InputError("дивизоры с бесконечно удалёнными точками поддерживаются только для гиперэллиптических кривых")
                infinity += k
                continue
            self.degree = lcm(self.degree, local_chart(curve, P).field.degree)
            if k <= 0:
                continue
            c = lattice.descend(P.x)
            order = local_chart(curve, P).valuation(curve.x() - c)
            e = ceil(k / order)
            key = (c.degree, c.key())
            if key not in roots or roots[key][1] < e:
                roots[key] = (c, e)

        H: BiPoly = {(0, 0): one}
        for c, e in roots.values():
            linear = {(1, 0): one, (0, 0): -c}
            for _ in range(e):
                H = bipoly_mul(H, linear)
        self.denominator = H
        self.h_degree = max(i for i, _ in H)

        if curve.family == CurveFamily.HYPERELLIPTIC:
            g = curve.genus
            bound = 2 * self.h_degree + infinity
            self.monomials = [(i, 0) for i in range(bound // 2 + 1) if 2 * i <= bound]
            self.monomials += [(i, 1) for i in range(bound // 2 + 1) if 2 * i + 2 * g + 1 <= bound]
        else:
            k = self.h_degree
            self.monomials = [(i, j) for j in range(curve.deg_y) for i in range(k + 1 - j)]
            self.monomials.sort(key=lambda ij: (ij[0] + ij[1], ij[1]))

        # Условия в слоях над корнями H и в точках с отрицательной кратностью
        self.conditions: List[Tuple[ClosedPoint, int]] = []
        seen = set()
        for c, e in roots.values():
            for Q in fibre_points(curve, c):
                chart = local_chart(curve, Q)
                self.degree = lcm(self.degree, chart.field.degree)
                k_Q = e * chart.valuation(curve.x() - c) - self.divisor.get(Q, 0)
                seen.add(Q)
                if k_Q > 0:
                    self.conditions.append((Q, k_Q))
        for P, k in self.divisor.items():
            if k < 0 and not P.at_infinity and P not in seen:
                self.conditions.append((P, -k))

    @property
    def field(self):
        return self.curve.lattice.field(self.degree)

    def denominator_function(self) -> CurveFunction:
        return CurveFunction(self.curve, self.denominator)

    def monomial_series(self, point: ClosedPoint, prec: int) -> List[LaurentSeries]:
        """Разложения мономов-кандидатов в точке с точностью не ниже prec."""
        chart = local_chart(self.curve, point)
        X, Y = chart.coordinates(max(prec, 1))
        X, Y = X.with_precision(max(prec, 1)), Y.with_precision(max(prec, 1))
        one = LaurentSeries.constant(1, chart.field)
        max_i = max((i for i, _ in self.monomials), default=0)
        max_j = max((j for _, j in self.monomials), default=0)
        xp = [one]
        for _ in range(max_i):
            xp.append(xp[-1] * X)
        yp = [one]
        for _ in range(max_j):
            yp.append(yp[-1] * Y)
        return [xp[i] * yp[j] for i, j in self.monomials]

    def condition_matrix(self, m: int) -> np.ndarray:
        """Строки условий L(D) над полем степени m: массив (rows, len(monomials), m)."""
        blocks = []
        for Q, k in self.conditions:
            series = self.monomial_series(Q, k)
            block = np.stack([s.block(0, k, m) for s in series], axis=1) if series else np.zeros((k, 0, m), dtype=np.int64)
            blocks.append(block)
        if not blocks:
            return np.zeros((0, len(self.monomials), m), dtype=np.int64)
        return np.concatenate(blocks, axis=0)

    def laurent_block(self, point: ClosedPoint, lo: int, hi: int, m: int) -> np.ndarray:
        """
        Коэффициенты при t^lo .. t^{hi-1} разложений мономов, делённых на H.

        Returns:
            Массив (hi - lo, len(monomials), m)
        """
        chart = local_chart(self.curve, point)
        inv = chart.expand(self.denominator_function().inverse(), hi)
        h = max(-inv.valuation, 0)
        out = np.zeros((hi - lo, len(self.monomials), m), dtype=np.int64)
        for col, s in enumerate(self.monomial_series(point, hi + h)):
            prod = s * inv
            if prod.prec < hi:
                raise PrecisionError(f"не хватает точности разложения в точке {point.label}")
            out[:, col] = prod.block(lo, hi, m)
        return out

    def function(self, coeffs: np.ndarray) -> CurveFunction:
        """G / H для вектора коэффициентов G (массив (len(monomials), m))."""
        lattice = self.curve.lattice
        field = lattice.field(coeffs.shape[-1])
        num: BiPoly = {}
        for (i, j), row in zip(self.monomials, coeffs):
            if row.any():
                num[(i, j)] = lattice.descend(FieldElement(field, row))
        return CurveFunction(self.curve, num, self.denominator)

    def basis_coefficients(self) -> np.ndarray:
        field = self.field
        A = self.condition_matrix(field.degree)
        if not self.monomials:
            return np.zeros((0, 0, field.degree), dtype=np.int64)
        return field_nullspace(field, A)

    def basis(self) -> List[CurveFunction]:
        """Базис L(D) в ступенчатом виде относительно мономов."""
        funcs = [self.function(row) for row in self.basis_coefficients()]
        logger.debug(f"dim L(D) = {len(funcs)}, кандидатов {len(self.monomials)}, условий {len(self.conditions)}")
        return funcs

    def dimension(self) -> int:
        return self.basis_coefficients().shape[0]


def riemann_roch_basis(curve: CurveModel, divisor: Divisor) -> List[CurveFunction]:
    """
    Базис пространства L(D).

    Args:
        curve: Кривая
        divisor: Кратности в точках

    Returns:
        Список функций; для D = 0 - единственная константа 1
    """
    return RiemannRochSpace(curve, divisor).basis()


def riemann_roch_dimension(curve: CurveModel, divisor: Divisor) -> int:
    return RiemannRochSpace(curve, divisor).dimension()


def is_nonspecial(curve: CurveModel, points: Sequence[ClosedPoint]) -> bool:
    """Истина, если dim L(P_1 + ... + P_g) = 1."""
    if len(points) != curve.genus:
        raise InputError(f"неспециальная система должна состоять из g = {curve.genus} точек, получено: {len(points)}")
    divisor: Divisor = {}
    for P in points:
        divisor[P] = divisor.get(P, 0) + 1
    dim = riemann_roch_dimension(curve, divisor)
    logger.info(f"dim L(P_1 + ... + P_g) = {dim}")
    return dim == 1
