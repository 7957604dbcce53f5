"""
Автоморфизмы кривой и их подъёмы на максимальное абелево накрытие экспоненты p^n.

Автоморфизм tau поля K_Y задаётся образами x и y; группа таких автоморфизмов
рассматривается с композицией (tau1 * tau2)(f) = tau1(tau2(f)). Подъём на
башню действует на образующие как t^(i) -> Σ_j A_ij t^(j) + h^(i) + v^(i),
где A_ij ∈ Z/p^n, h^(i) - вектор Витта функций, v^(i) - постоянный вектор Витта.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from adeles.classes import AdeleClass
from cli.errors import InconsistencyError, InputError
from covers.h1et import H1EtBasis, coordinates_in_basis_witt
from covers.witt_adeles import WittAdele, scalar_vector, witt_combination, with_precision
from curves.local import local_chart
from curves.model import ClosedPoint, CurveFamily, CurveFunction, CurveModel, bipoly_evaluate, fibre_points, sorted_points
from fields.lattice import FieldElement
from fields.solvers import solve_artin_schreier_scalar
from sheaves.groups import FiniteGroupTable
from witt.vectors import WittVector

logger = logging.getLogger(__name__)

MAX_AUTOMORPHISM_ORDER = 1000
# Число коэффициентов, по которым проверяется постоянство вектора Витта
CONSTANCY_PRECISION = 4


class CurveAutomorphism:
    """Автоморфизм поля функций кривой: x -> x_image, y -> y_image."""

    def __init__(self, curve: CurveModel, x_image: CurveFunction, y_image: CurveFunction, name: str = ""):
        if not bipoly_evaluate(curve.equation, x_image, y_image, curve.constant(1)).is_zero():
            raise InputError(f"подстановка x -> {x_image}, y -> {y_image} не сохраняет уравнение кривой")
        self.curve = curve
        self.x_image = x_image
        self.y_image = y_image
        self.name = name
        self._inverse: Optional["CurveAutomorphism"] = None

    @classmethod
    def identity(cls, curve: CurveModel) -> "CurveAutomorphism":
        return cls(curve, curve.x(), curve.y(), "id")

    @classmethod
    def parse(cls, curve: CurveModel, x_text: str, y_text: str, name: str = "") -> "CurveAutomorphism":
        return cls(curve, curve.parse_function(x_text), curve.parse_function(y_text), name)

    def apply(self, f: CurveFunction) -> CurveFunction:
        return f.substitute(self.x_image, self.y_image)

    def apply_witt(self, v: WittVector) -> WittVector:
        return v.map(lambda c: self.apply(c) if isinstance(c, CurveFunction) else c)

    def compose(self, other: "CurveAutomorphism") -> "CurveAutomorphism":
        """self ∘ other: f -> self(other(f))."""
        return CurveAutomorphism(self.curve, self.apply(other.x_image), self.apply(other.y_image))

    def is_identity(self) -> bool:
        return self.x_image == self.curve.x() and self.y_image == self.curve.y()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurveAutomorphism):
            return NotImplemented
        return self.x_image == other.x_image and self.y_image == other.y_image

    __hash__ = None

    def inverse(self) -> "CurveAutomorphism":
        """Обратный автоморфизм как степень tau^{k-1}, где k - порядок tau."""
        if self._inverse is None:
            prev, power = CurveAutomorphism.identity(self.curve), self
            for _ in range(MAX_AUTOMORPHISM_ORDER):
                if power.is_identity():
                    self._inverse = prev
                    break
                prev, power = power, self.compose(power)
            else:
                raise InputError(f"порядок автоморфизма {self} больше {MAX_AUTOMORPHISM_ORDER}")
        return self._inverse

    def point_image(self, point: ClosedPoint) -> ClosedPoint:
        """
        φ(P) для морфизма φ с φ* = tau: (tau(x)(P), tau(y)(P)).

        Raises:
            InconsistencyError: Если образ не лежит на модели
        """
        chart = local_chart(self.curve, point)
        X = chart.evaluate(self.x_image)
        Y = chart.evaluate(self.y_image)
        if X is None or Y is None:
            if self.curve.family != CurveFamily.HYPERELLIPTIC:
                raise InconsistencyError(f"образ точки {point.label} лежит на бесконечности плоской модели")
            return ClosedPoint.infinity()
        lattice = self.curve.lattice
        X, Y = lattice.descend(X), lattice.descend(Y)
        if not self.curve.contains(X, Y):
            raise InconsistencyError(f"образ ({X}, {Y}) точки {point.label} не лежит на кривой")
        return ClosedPoint(X, Y)

    def __repr__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"{label}(x, y) -> ({self.x_image}, {self.y_image})"


def automorphism_group(curve: CurveModel, generators: Sequence[CurveAutomorphism]) -> Tuple[List[CurveAutomorphism], np.ndarray]:
    """
    Элементы группы, порождённой автоморфизмами, и её таблица умножения.

    Returns:
        (элементы с единицей на нулевом месте, таблица table[i, j] = индекс elements[i] ∘ elements[j])
    """
    elements = [CurveAutomorphism.identity(curve)]

    def find(tau: CurveAutomorphism) -> Optional[int]:
        for i, e in enumerate(elements):
            if e == tau:
                return i
        return None

    k = 0
    while k < len(elements):
        for g in generators:
            h = elements[k].compose(g)
            if find(h) is None:
                if len(elements) >= MAX_AUTOMORPHISM_ORDER:
                    raise InputError(f"группа автоморфизмов больше {MAX_AUTOMORPHISM_ORDER}")
                elements.append(h)
        k += 1
    table = np.zeros((len(elements), len(elements)), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = find(a.compose(b))
    logger.info(f"Группа Aut(Y|X) порядка {len(elements)}")
    return elements, table


# --- обратный образ аделей ---

def pullback_adele(tau: CurveAutomorphism, r: AdeleClass, precision: int) -> AdeleClass:
    """tau(r): в точке Q = φ^{-1}(P) компонента равна r_P(tau(u_P)), разложенному в Q."""
    curve = tau.curve
    inverse = tau.inverse()
    entries = {}
    for P, series in r.entries.items():
        Q = inverse.point_image(P)
        u = local_chart(curve, P).uniformiser()
        s = local_chart(curve, Q).expand(tau.apply(u), precision)
        entries[Q] = series.compose(s)
    return AdeleClass(curve, entries)


def pullback_witt_adele(tau: CurveAutomorphism, r: WittAdele) -> WittAdele:
    return with_precision(
        lambda W: WittAdele(tau.curve, [pullback_adele(tau, c, W) for c in r.coords]),
        lambda res: res.min_precision(),
    )


# --- постоянные векторы Витта ---

def reference_points(curve: CurveModel, points: Sequence[ClosedPoint], count: int = 2) -> List[ClosedPoint]:
    """count различных точек: сначала из points, затем рациональные точки x = 0, 1, ..."""
    out = list(dict.fromkeys(points))[:count]
    for c in curve.lattice.field(curve.base_degree).elements():
        if len(out) >= count:
            break
        for Q in fibre_points(curve, c):
            if Q not in out and len(out) < count:
                out.append(Q)
    if len(out) < count:
        raise InconsistencyError("не найдено достаточно точек для проверки постоянства")
    return out


def constant_value(curve: CurveModel, points: Sequence[ClosedPoint], func, operands: Sequence, n: int) -> WittVector:
    """
    Значение вектора Витта func(operands), который обязан быть постоянным.

    В каждой из points все координаты должны быть регулярны, без членов t^1..t^3,
    а постоянные члены должны совпадать.

    Raises:
        InconsistencyError: Если вектор не постоянен
    """
    res = witt_combination(curve, points, func, operands, n, target=CONSTANCY_PRECISION)
    coords = []
    for k in range(n):
        values = []
        for P in points:
            s = res[k][P]
            if not s.is_regular():
                raise InconsistencyError(f"координата {k} имеет полюс в {P.label}: вектор не постоянен")
            for e in range(1, CONSTANCY_PRECISION):
                if not s.coefficient(e).is_zero():
                    raise InconsistencyError(f"координата {k} не постоянна в окрестности {P.label}")
            values.append(s.coefficient(0))
        if any(v != values[0] for v in values[1:]):
            raise InconsistencyError(f"координата {k} принимает разные значения в точках {[P.label for P in points]}")
        coords.append(values[0].lattice.descend(values[0]))
    return WittVector(coords, curve.p)


def wp_preimage(u: WittVector, p: int) -> WittVector:
    """
    v ∈ W_n(k) с ℘(v) = u; координаты - канонические корни уравнений Артина - Шрайера.

    Прибавление V^j[x] к вектору с нулевой j-й координатой меняет ℘ на V^j[x^p - x],
    поэтому координаты находятся по очереди.
    """
    zero = u[0] - u[0]
    coords: List[FieldElement] = []
    for j in range(u.n):
        if j == 0:
            y = u[0]
        else:
            partial = WittVector(coords + [zero], p)
            y = u[j] - partial.wp()[j]
        coords.append(solve_artin_schreier_scalar(y, p))
    return WittVector(coords, p)


# --- подъёмы ---

@dataclass
class CoverAutomorphism:
    """
    Автоморфизм σ поля K_{Y^<p^n>} над tau: σ(t^(i)) = Σ_j A_ij t^(j) + h^(i) + v^(i).

    Attributes:
        matrix: A_ij ∈ Z/p^n
        functions: h^(i) - векторы Витта функций на Y
        constants: v^(i) - постоянные векторы Витта
    """
    tau: CurveAutomorphism
    level: int
    matrix: List[List[int]] = field(default_factory=list)
    functions: List[WittVector] = field(default_factory=list)
    constants: List[WittVector] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def translate(self, a: Sequence[int]) -> "CoverAutomorphism":
        """σ, за которым следует сдвиг t -> t + a, a ∈ (Z/p^n)^s."""
        p = self.tau.curve.p
        one = self.tau.curve.lattice.field(1).one()
        constants = [v + WittVector.from_int(int(k), self.level, p, one=one) for v, k in zip(self.constants, a)]
        return CoverAutomorphism(self.tau, self.level, self.matrix, self.functions, constants)

    def images(self) -> List[str]:
        """Образы w^(i) образующих в виде строк."""
        out = []
        for i in range(self.rank):
            parts = [
                (f"t^({j})" if a == 1 else f"{a}*t^({j})")
                for j, a in enumerate(self.matrix[i]) if a
            ]
            if not self.functions[i].is_zero():
                parts.append(repr(self.functions[i]))
            if not self.constants[i].is_zero():
                parts.append(repr(self.constants[i]))
            out.append(" + ".join(parts) if parts else "0")
        return out


def _intertwining_defect(tf, g, *pairs):
    """tau(f) - ℘(g) - Σ_j a_j f^(j); пары (a_j, f^(j)) идут подряд."""
    acc = tf - g.wp()
    for k in range(0, len(pairs), 2):
        acc = acc - pairs[k] * pairs[k + 1]
    return acc


def _lift_support(h1: H1EtBasis, tau: CurveAutomorphism) -> List[ClosedPoint]:
    inverse = tau.inverse()
    return sorted_points(set(h1.S) | {inverse.point_image(P) for P in h1.S})


def lift_automorphism(h1: H1EtBasis, tau: CurveAutomorphism) -> CoverAutomorphism:
    """
    Подъём автоморфизма tau кривой Y на максимальное абелево накрытие экспоненты p^n.

    Для каждой ветви: tau(r^(i)) = Σ_j A_ij r^(j) + g^(i) по модулю W_n(A°),
    u^(i) = tau(f^(i)) - Σ_j A_ij f^(j) - ℘(g^(i)) постоянен, ℘(v^(i)) = u^(i).

    Args:
        h1: Базис H^1_et(Y, Z/p^n) с функциями f^(i) = ℘(r^(i)) mod W_n(A°)
        tau: Автоморфизм поля K_Y

    Returns:
        CoverAutomorphism
    """
    curve, p, n = h1.curve, h1.curve.p, h1.level
    lift = CoverAutomorphism(tau, n)
    if h1.rank == 0:
        return lift
    S = _lift_support(h1, tau)
    points = reference_points(curve, S)
    for i, (r, f) in enumerate(zip(h1.representatives, h1.functions)):
        g, alphas = coordinates_in_basis_witt(curve, S, pullback_witt_adele(tau, r), h1)
        operands = [tau.apply_witt(f), g]
        for a, fj in zip(alphas, h1.functions):
            operands += [scalar_vector(curve, a, n), fj]
        u = constant_value(curve, points, _intertwining_defect, operands, n)
        lift.matrix.append([int(a) for a in alphas])
        lift.functions.append(g)
        lift.constants.append(wp_preimage(u, p))
        logger.info(f"Подъём {tau.name or tau}: ветвь {i}, A = {alphas}, u = {u}")
    return lift


def _as_functions(curve: CurveModel, v: WittVector) -> WittVector:
    return v.map(lambda c: c if isinstance(c, CurveFunction) else curve.constant(c))


def verify_lift(h1: H1EtBasis, lift: CoverAutomorphism) -> bool:
    """
    ℘-сплетение: ℘(σ(t^(i))) = tau(f^(i)) как векторы Витта функций на Y.

    Сначала дефект сверяется с нулём в окрестностях опорных точек, затем
    тождество проверяется точно в поле функций.
    """
    curve, n = h1.curve, h1.level
    points = reference_points(curve, _lift_support(h1, lift.tau))
    for i in range(lift.rank):
        operands = [lift.tau.apply_witt(h1.functions[i]), lift.functions[i], lift.constants[i]]
        for a, fj in zip(lift.matrix[i], h1.functions):
            operands += [scalar_vector(curve, a, n), fj]
        try:
            defect = constant_value(
                curve, points, lambda tf, g, v, *pairs: _intertwining_defect(tf, g, *pairs) - v.wp(), operands, n
            )
        except InconsistencyError as e:
            logger.warning(f"Подъём не сплетает ℘ в ветви {i}: {e}")
            return False
        if not defect.is_zero():
            logger.warning(f"Подъём не сплетает ℘ в ветви {i}: дефект {defect}")
            return False
        exact = [_as_functions(curve, op) for op in operands]
        if not (_intertwining_defect(exact[0], exact[1], *exact[3:]) - exact[2].wp()).is_zero():
            logger.warning(f"Подъём не сплетает ℘ в ветви {i}: дефект отличен от нуля вне опорных точек")
            return False
    return True


# --- группа автоморфизмов накрытия ---

@dataclass
class CoverGroup:
    """
    Aut(Y^<p^n>|X) как множество пар (tau, a): σ(t) = A_tau t + c_tau + a.

    Закон умножения: (tau1, a1)(tau2, a2) = (tau1 tau2, A_tau2 a1 + a2 + κ(tau1, tau2)).
    """
    h1: H1EtBasis
    base: List[CurveAutomorphism]
    base_table: np.ndarray
    lifts: List[CoverAutomorphism]
    cocycle: Dict[Tuple[int, int], Tuple[int, ...]]
    table: FiniteGroupTable
    base_generators: List[int]

    @property
    def translation_count(self) -> int:
        return self.h1.rank

    def automorphism(self, index: int) -> CoverAutomorphism:
        t, a = self.table.elements[index]
        return self.lifts[t].translate(a)


def _cocycle_value(h1: H1EtBasis, base, lifts, i: int, j: int, ij: int, points) -> Tuple[int, ...]:
    """κ(tau_i, tau_j) = A_j c_i + tau_i(c_j) - c_{ij}, c = h + v."""
    curve, n, s = h1.curve, h1.level, h1.rank
    N = curve.p ** n
    li, lj, lij = lifts[i], lifts[j], lifts[ij]
    out = []
    for k in range(s):
        operands = [base[i].apply_witt(lj.functions[k]), lj.constants[k], lij.functions[k], lij.constants[k]]
        for m in range(s):
            operands += [scalar_vector(curve, lj.matrix[k][m], n), li.functions[m], li.constants[m]]

        def value(tcj, vj, cij, vij, *triples):
            acc = tcj + vj - cij - vij
            for q in range(0, len(triples), 3):
                acc = acc + triples[q] * (triples[q + 1] + triples[q + 2])
            return acc

        kappa = constant_value(curve, points, value, operands, n)
        try:
            out.append(kappa.to_int() % N)
        except ValueError:
            raise InconsistencyError(f"коцикл κ({i}, {j}) не лежит в W_n(F_p): {kappa}")
    return tuple(out)


def assemble_group(h1: H1EtBasis, generators: Sequence[CurveAutomorphism]) -> CoverGroup:
    """
    Группа Aut(Y^<p^n>|X), порождённая подъёмами образующих Aut(Y|X) и сдвигами (Z/p^n)^s.

    Args:
        h1: Базис H^1_et(Y, Z/p^n)
        generators: Образующие Aut(Y|X)

    Returns:
        CoverGroup с таблицей группы порядка p^{ns} |Aut(Y|X)|

    Raises:
        InconsistencyError: Если подъёмы несовместимы или порядок не совпал с ожидаемым
    """
    curve, p, n, s = h1.curve, h1.curve.p, h1.level, h1.rank
    N = p ** n
    base, base_table = automorphism_group(curve, generators)
    lifts = [lift_automorphism(h1, tau) for tau in base]
    for idx, lift in enumerate(lifts):
        if s and not verify_lift(h1, lift):
            raise InconsistencyError(f"подъём автоморфизма {base[idx]} не сплетает ℘")

    A = [np.array(l.matrix, dtype=np.int64).reshape(s, s) for l in lifts]
    cocycle: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    points = reference_points(curve, h1.S) if s else []
    for i in range(len(base)):
        for j in range(len(base)):
            ij = int(base_table[i, j])
            if not np.array_equal(A[ij] % N, A[j] @ A[i] % N):
                raise InconsistencyError(f"матрицы подъёмов несовместимы: A({ij}) != A({j}) A({i})")
            cocycle[(i, j)] = _cocycle_value(h1, base, lifts, i, j, ij, points) if s else ()

    def multiply(x, y):
        (t1, a1), (t2, a2) = x, y
        a = (A[t2] @ np.array(a1, dtype=np.int64) + np.array(a2, dtype=np.int64)
             + np.array(cocycle[(t1, t2)], dtype=np.int64)) % N if s else np.zeros(0, dtype=np.int64)
        return int(base_table[t1, t2]), tuple(int(v) for v in a)

    zero = tuple([0] * s)
    identity = (0, zero)
    if any(cocycle[(0, j)] != zero or cocycle[(j, 0)] != zero for j in range(len(base))):
        raise InconsistencyError("подъём тождественного автоморфизма не тривиален")
    base_generators = [next(i for i, e in enumerate(base) if e == g) for g in generators]
    group_gens = [(0, tuple(int(i == k) for i in range(s))) for k in range(s)]
    group_gens += [(t, zero) for t in base_generators]
    expected = len(base) * N ** s
    table = FiniteGroupTable.generate(identity, group_gens, multiply, max_order=expected)
    if table.order != expected:
        raise InconsistencyError(f"порядок группы {table.order} не равен ожидаемому {expected}")
    table.verify()
    logger.info(f"|Aut(Y^<{p}^{n}>|X)| = {table.order}")
    return CoverGroup(h1, base, base_table, lifts, cocycle, table, base_generators)
