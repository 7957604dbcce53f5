"""
Уравнения максимального абелева этального накрытия экспоненты p^n.

Для каждой ветви i равенство ℘(t^(i)) = h^(i) векторов Витта даёт по
координатам уравнения t_j^p - t_j = -D_j(t_<j) + h_j. Правые части
строятся над Z из координат разности F(t) - t и приводятся по модулю p только
при выводе.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyElement, ring

from adeles.h1 import H1Basis
from covers.h1et import H1EtBasis, compute_h1_from_hw
from curves.model import ClosedPoint, CurveModel
from fields.lattice import Scalar
from witt.structure import lift_polynomial

logger = logging.getLogger(__name__)


@dataclass
class TowerEquation:
    """
    Уравнение t_j^p - t_j = rhs ветви branch.

    Attributes:
        polynomial: Правая часть над Z от t0..t{n-1}, h0..h{n-1}
        universal: Часть правой части без переменных h (зависит только от p и j)
    """
    branch: int
    index: int
    p: int
    polynomial: PolyElement
    universal: PolyElement

    @property
    def equation(self) -> str:
        lhs = f"t_{self.index}^{self.p} - t_{self.index}"
        return f"{lhs} = {format_polynomial(self.polynomial, self.p)}"


@dataclass
class CoverTower:
    """Башня K ⊂ K(t_0^(i), ..., t_{n-1}^(i)) степени p^{n s}."""
    p: int
    level: int
    rank: int
    equations: List[TowerEquation] = field(default_factory=list)
    h1: Optional[H1EtBasis] = None

    @property
    def degree(self) -> int:
        return self.p ** (self.level * self.rank)


def _tower_ring(n: int):
    names = [f"t{k}" for k in range(n)] + [f"h{k}" for k in range(n)]
    R, *gens = ring(",".join(names), ZZ)
    return R, gens


def tower_polynomials(p: int, n: int) -> List[PolyElement]:
    """
    Правые части -D_j(t_<j) + h_j, j = 0..n-1, над Z; D_j - j-я координата
    разности F(t) - t векторов Витта (зависит только от t_<j).

    Args:
        p: Характеристика
        n: Число уравнений в ветви

    Returns:
        Многочлены в кольце Z[t0..t{n-1}, h0..h{n-1}]
    """
    R, gens = _tower_ring(n)
    out = []
    for j in range(n):
        _, lift = lift_polynomial(p, j)
        poly: Dict[Tuple[int, ...], int] = {}
        for monom, c in lift.terms():
            poly[tuple(int(e) for e in monom) + (0,) * (2 * n - len(monom))] = int(c)
        rhs = R.from_dict(poly) if poly else R.zero
        out.append(rhs + gens[n + j])
    return out


def universal_part(poly: PolyElement, n: int) -> PolyElement:
    """Слагаемые без переменных h."""
    R = poly.ring
    return R.from_dict({m: c for m, c in poly.terms() if not any(m[n:])}) if poly else R.zero


def format_polynomial(poly: PolyElement, p: int) -> str:
    """
    Запись многочлена с коэффициентами по модулю p: мономы по убыванию полной
    степени, затем лексикографически; например '2*t_0^7 + t_0^5 + h_1'.
    """
    names = [str(g) for g in poly.ring.gens]
    terms = []
    for monom, c in sorted(poly.terms(), key=lambda mc: (-sum(mc[0]), tuple(-e for e in mc[0]))):
        c = int(c) % p
        if c == 0:
            continue
        parts = []
        for name, e in zip(names, monom):
            if e == 0:
                continue
            var = f"{name[0]}_{name[1:]}"
            parts.append(var if e == 1 else f"{var}^{e}")
        if not parts:
            terms.append(str(c))
        elif c == 1:
            terms.append("*".join(parts))
        else:
            terms.append("*".join([str(c)] + parts))
    return " + ".join(terms) if terms else "0"


def build_tower(h1: H1EtBasis) -> CoverTower:
    """Уравнения башни для найденного базиса H^1_et(X, Z/p^n)."""
    p, n = h1.curve.p, h1.level
    polys = tower_polynomials(p, n)
    tower = CoverTower(p, n, h1.rank, h1=h1)
    for i in range(h1.rank):
        for j, poly in enumerate(polys):
            # Переменные t, h с индексами > j в j-е уравнение не входят
            tower.equations.append(TowerEquation(i, j, p, poly, universal_part(poly, n)))
    logger.info(f"Башня: {len(tower.equations)} уравнений, степень накрытия {p}^{n * h1.rank}")
    return tower


def compute_maximal_cover(
    curve: CurveModel,
    n: int,
    basis: H1Basis,
    matrix: Sequence[Sequence[Scalar]],
    S: Optional[Sequence[ClosedPoint]] = None,
) -> CoverTower:
    """
    Максимальное абелево этальное накрытие экспоненты p^n.

    Args:
        curve: Кривая
        n: Уровень
        basis: Базис H^1(X, O_X)
        matrix: Матрица Хассе - Витта
        S: Множество точек носителя (по умолчанию - носитель базиса)

    Returns:
        CoverTower с s * n уравнениями
    """
    h1 = compute_h1_from_hw(curve, n, basis, matrix, S)
    return build_tower(h1)
