"""
H^1_et(X, Z/p^n) как подгруппа F-неподвижных классов H^1(X, W_n(O_X)).

Уровень 1 - неподвижные точки полулинейного оператора Хассе - Витта;
переход с уровня j на j+1 решает r_j^p - r_j = v_j в H^1(X, O_X),
где v_j = -P_j(r_<j, h_<j).
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from adeles.classes import AdeleClass
from adeles.h1 import H1Basis, coordinates_in_basis, find_function, verify_hasse_witt
from cli.errors import InconsistencyError, PoleGrowthError
from curves.model import ClosedPoint, CurveFunction, CurveModel
from fields.lattice import FieldElement, Scalar
from semilinear.fixed_points import fixed_points, inhom_solve
from semilinear.operators import SemilinearOperator, Vector, split_nilpotent_invertible, stable_rank
from covers.witt_adeles import (
    WittAdele,
    certify_basis,
    digits_vector,
    witt_combination,
)
from witt.vectors import WittVector, witt_digits_to_int

logger = logging.getLogger(__name__)


@dataclass
class H1EtBasis:
    """
    Базис свободного Z/p^n-модуля H^1_et(X, Z/p^n).

    Attributes:
        representatives: r^(i) - векторы Витта аделей с носителем в S
        functions: h^(i) - векторы Витта функций с ℘(r^(i)) - h^(i) ∈ W_n(A°)
        level_one: Координаты r_0^(i) в базисе H^1(X, O_X)
    """
    curve: CurveModel
    S: List[ClosedPoint]
    level: int
    representatives: List[WittAdele] = field(default_factory=list)
    functions: List[WittVector] = field(default_factory=list)
    level_one: List[Vector] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.representatives)

    def truncate(self, m: int) -> "H1EtBasis":
        """Образ базиса при усечении W_n -> W_m."""
        if not 1 <= m <= self.level:
            raise ValueError(f"уровень усечения {m} вне диапазона 1..{self.level}")
        return H1EtBasis(
            self.curve,
            self.S,
            m,
            [r.truncate(m) for r in self.representatives],
            [h.truncate(m) for h in self.functions],
            self.level_one,
        )


def combination(basis: H1Basis, coeffs: Sequence[FieldElement]) -> AdeleClass:
    """Σ c_k b_k."""
    acc = AdeleClass.zero(basis.curve)
    for c, b in zip(coeffs, basis.classes):
        if not c.is_zero():
            acc = acc + b.scale(c)
    return acc


def lift_polynomial_value(curve: CurveModel, S: Sequence[ClosedPoint], r: WittAdele, h: Sequence[CurveFunction]) -> AdeleClass:
    """P_j(r_<j, h_<j): последняя координата F(r, 0) - (r, 0) - (h, 0) в W_{j+1}."""
    j = r.n
    zero = curve.constant(0)
    padded = r.extend(j + 1)
    hv = WittVector(list(h) + [zero], curve.p)
    res = witt_combination(curve, S, lambda a, b: a.frobenius() - a - b, [padded, hv], j + 1)
    return res[j]


def _pole_bound(p: int, j: int, m: int) -> int:
    return p ** (j * (j + 1) // 2) * m


def compute_h1(
    curve: CurveModel,
    S: Sequence[ClosedPoint],
    basis: H1Basis,
    F: SemilinearOperator,
    level_one: Sequence[Vector],
    n: int,
) -> H1EtBasis:
    """
    Поднимает F_p-базис H^1_et(X, Z/p) до базиса H^1_et(X, Z/p^n).

    Args:
        curve: Кривая
        S: Множество точек, на котором живут все представители
        basis: Базис H^1(X, O_X)
        F: Оператор Фробениуса на H^1(X, O_X) в координатах basis
        level_one: Координаты представителей r_0^(i) в basis
        n: Уровень

    Returns:
        H1EtBasis уровня n
    """
    if n < 1:
        raise ValueError(f"уровень n должен быть положительным, получено: {n}")
    S = list(S)
    p = curve.p
    r0s = [combination(basis, v) for v in level_one]
    # m ограничивает суммарный порядок полюса F(r_0) по S
    m = p * max((sum(r.pole_order(P) for P in S) for r in r0s), default=0)
    result = H1EtBasis(curve, S, n, level_one=[list(v) for v in level_one])

    for i, r0 in enumerate(r0s):
        h0 = find_function(curve, S, r0.frobenius(1) - r0)
        if h0 is None:
            raise InconsistencyError(f"представитель r_0^({i}) не является F-неподвижным классом")
        rs, hs = [r0], [h0]
        for j in range(1, n):
            v = -lift_polynomial_value(curve, S, WittAdele(curve, rs), hs)
            pole = max((v.pole_order(P) for P in S), default=0)
            bound = _pole_bound(p, j, m)
            if pole > bound:
                raise PoleGrowthError(f"порядок полюса v_{j} равен {pole}, что больше оценки {bound}")
            u, _ = coordinates_in_basis(curve, S, v, basis.classes)
            x = inhom_solve(F, u)
            r_j = combination(basis, x)
            h_j = find_function(curve, S, r_j.frobenius(1) - r_j - v)
            if h_j is None:
                raise InconsistencyError(f"уравнение r^p - r = v_{j} не решено в ветви {i}")
            rs.append(r_j)
            hs.append(h_j)
            logger.info(f"Ветвь {i}, уровень {j + 1}: порядок полюса v_{j} = {pole}")
        rep = WittAdele(curve, rs)
        hv = WittVector(hs, p)
        if not certify_basis(curve, S, rep, hv):
            raise InconsistencyError(f"℘-сертификат не выполнен для ветви {i}")
        result.representatives.append(rep)
        result.functions.append(hv)
    logger.info(f"H^1_et(X, Z/{p}^{n}) ≅ (Z/{p}^{n})^{result.rank}")
    return result


def hasse_witt_operator(curve: CurveModel, matrix: Sequence[Sequence[Scalar]]) -> SemilinearOperator:
    """Оператор F(b_i) = Σ_j m_ij b_j, полулинейный относительно x -> x^p."""
    return SemilinearOperator(matrix, curve.p, curve.lattice)


def rank_cross_check(F: SemilinearOperator, s: int) -> None:
    """Сравнивает число неподвижных векторов со стабильным рангом матрицы."""
    expected = stable_rank(F)
    if expected != s:
        raise InconsistencyError(f"найдено {s} неподвижных векторов, стабильный ранг равен {expected}")


def compute_h1_from_hw(
    curve: CurveModel,
    n: int,
    basis: H1Basis,
    matrix: Sequence[Sequence[Scalar]],
    S: Optional[Sequence[ClosedPoint]] = None,
) -> H1EtBasis:
    """
    H^1_et(X, Z/p^n) по матрице Хассе - Витта в базисе H^1(X, O_X).

    Args:
        curve: Кривая
        n: Уровень
        basis: Базис H^1(X, O_X), в котором задана матрица
        matrix: Матрица Хассе - Витта, строка i - координаты F(b_i)
        S: Множество точек (по умолчанию - носитель базиса)

    Returns:
        H1EtBasis
    """
    S = list(S) if S is not None else basis.support
    verify_hasse_witt(basis, matrix)
    F = hasse_witt_operator(curve, matrix)
    _, invertible = split_nilpotent_invertible(F)
    fixed = fixed_points(F, invertible) if invertible else []
    rank_cross_check(F, len(fixed))
    logger.info(f"dim H^1_et(X, Z/{curve.p}) = {len(fixed)}")
    return compute_h1(curve, S, basis, F, fixed, n)


def coordinates_in_basis_witt(
    curve: CurveModel,
    S: Sequence[ClosedPoint],
    r: WittAdele,
    basis: H1EtBasis,
) -> Tuple[WittVector, List[int]]:
    """
    Координаты α^(i) ∈ Z/p^n и h ∈ W_n(K) с r - h - Σ α^(i) b^(i) ∈ W_n(A°).

    Args:
        curve: Кривая
        S: Точки, содержащие все носители
        r: Представитель F-неподвижного класса уровня n = basis.level
        basis: Базис H^1_et(X, Z/p^n)

    Returns:
        (h, [α^(1), ..., α^(s)])
    """
    S = list(S)
    p, n, s = curve.p, basis.level, basis.rank
    if r.n != n:
        raise ValueError(f"длина вектора {r.n} не совпадает с уровнем базиса {n}")
    b0 = [b[0] for b in basis.representatives]
    digits: List[List[FieldElement]] = [[] for _ in range(s)]
    h: List[CurveFunction] = []
    for j in range(n):
        if j == 0:
            u = r[0]
        else:
            operands = [r.truncate(j + 1), WittVector(h + [curve.constant(0)], p)]
            for i in range(s):
                operands.append(digits_vector(curve, digits[i] + [curve.lattice.field(1).zero()]))
                operands.append(basis.representatives[i].truncate(j + 1))

            def residual(rv, hv, *pairs):
                acc = rv - hv
                for k in range(0, len(pairs), 2):
                    acc = acc - pairs[k] * pairs[k + 1]
                return acc

            u = witt_combination(curve, S, residual, operands, j + 1)[j]
        targets = [b.frobenius(j) for b in b0]
        alpha, h_j = coordinates_in_basis(curve, S, u, targets)
        for i, a in enumerate(alpha):
            if a.lattice.descend(a).degree != 1:
                raise InconsistencyError(f"координата α^({i})_{j} = {a} не лежит в F_{p}: класс не F-неподвижен")
            digits[i].append(a.lattice.descend(a))
        h.append(h_j)
    alphas = [witt_digits_to_int([int(d.vec[0]) for d in ds], p) for ds in digits]
    return WittVector(h, p), alphas
