"""
Универсальные структурные многочлены p-типичных векторов Витта.

Все многочлены строятся над Z через призрачные компоненты с точной
рациональной арифметикой: знаменатели сокращаются, результат переводится в ZZ.
"""
import logging
import threading
from functools import cached_property, lru_cache
from typing import Dict, List, Tuple

from sympy import isprime
from sympy.polys.domains import QQ, ZZ
from sympy.polys.rings import PolyElement, ring

logger = logging.getLogger(__name__)


def ghost_components(p: int, coords) -> list:
    """w_i = Σ_{j<=i} p^j x_j^{p^{i-j}} для элементов любого коммутативного кольца."""
    out = []
    for i in range(len(coords)):
        w = coords[0] ** (p ** i)
        for j in range(1, i + 1):
            w = w + (p ** j) * coords[j] ** (p ** (i - j))
        out.append(w)
    return out


def _from_ghost(p: int, ghosts: list) -> list:
    """Обратное к призрачному отображению над Q: x_i = (w_i - Σ_{j<i} p^j x_j^{p^{i-j}}) / p^i."""
    coords = []
    for i, w in enumerate(ghosts):
        rest = w
        for j in range(i):
            rest = rest - (p ** j) * coords[j] ** (p ** (i - j))
        coords.append(rest * QQ(1, p ** i))
    return coords


def _to_integer_ring(polys: List[PolyElement], R_ZZ) -> List[PolyElement]:
    # Ошибка приведения означает, что знаменатели не сократились
    return [P.set_ring(R_ZZ) for P in polys]


class WittStructurePolynomials:
    """
    Многочлены S_i (сумма), R_i = S_i - X_i - Y_i (перенос), N_i (противоположный),
    M_i (произведение) и P_i (подъём) для W_n над Z.

    Компоненты вычисляются лениво при первом обращении.
    """

    def __init__(self, p: int, n: int):
        if not isprime(p):
            raise ValueError(f"p должно быть простым, получено: {p}")
        if n < 1:
            raise ValueError(f"длина n должна быть положительной, получено: {n}")
        self.p = p
        self.n = n
        names = [f"X{i}" for i in range(n)] + [f"Y{i}" for i in range(n)]
        self.ring_QQ, *gens = ring(",".join(names), QQ)
        self.ring_ZZ = ring(",".join(names), ZZ)[0]
        self.X = gens[:n]
        self.Y = gens[n:]

    @cached_property
    def sums(self) -> List[PolyElement]:
        gx = ghost_components(self.p, self.X)
        gy = ghost_components(self.p, self.Y)
        polys = _to_integer_ring(_from_ghost(self.p, [a + b for a, b in zip(gx, gy)]), self.ring_ZZ)
        logger.debug(f"Построены многочлены суммы Витта для p={self.p}, n={self.n}")
        return polys

    @cached_property
    def carries(self) -> List[PolyElement]:
        Xz = self.ring_ZZ.gens[: self.n]
        Yz = self.ring_ZZ.gens[self.n:]
        return [S - Xz[i] - Yz[i] for i, S in enumerate(self.sums)]

    @cached_property
    def products(self) -> List[PolyElement]:
        gx = ghost_components(self.p, self.X)
        gy = ghost_components(self.p, self.Y)
        return _to_integer_ring(_from_ghost(self.p, [a * b for a, b in zip(gx, gy)]), self.ring_ZZ)


@lru_cache(maxsize=None)
def make_structure_polynomials(p: int, n: int) -> WittStructurePolynomials:
    """
    Возвращает (кэшированный) набор структурных многочленов для (p, n).

    Args:
        p: Простое число
        n: Длина векторов

    Returns:
        WittStructurePolynomials
    """
    return WittStructurePolynomials(p, n)


_teich_lock = threading.Lock()
_teich_cache: Dict[Tuple[int, int], List[List[Tuple[int, int]]]] = {}


def teichmuller_sum_table(p: int, n: int) -> List[List[Tuple[int, int]]]:
    """
    Координаты суммы [X] + [Y] тейхмюллеровских представителей по модулю p.

    Returns:
        Список длины n; элемент k - пары (e, c): моном c * X^e * Y^{p^k - e}, c != 0 mod p
    """
    key = (p, n)
    with _teich_lock:
        cached = _teich_cache.get(key)
        if cached is not None:
            return cached
        R, X, Y = ring("X,Y", QQ)
        ghosts = [X ** (p ** i) + Y ** (p ** i) for i in range(n)]
        coords = _from_ghost(p, ghosts)
        table = []
        for k, sigma in enumerate(coords):
            terms = []
            for (ex, ey), c in sorted(sigma.terms()):
                if c.denominator != 1:
                    raise ArithmeticError(f"нецелый коэффициент в σ_{k}: {c}")
                cm = int(c.numerator) % p
                if cm:
                    terms.append((int(ex), cm))
            table.append(terms)
        _teich_cache[key] = table
        logger.debug(f"Таблица тейхмюллеровских сумм для p={p}, n={n} построена")
        return table


@lru_cache(maxsize=None)
def lift_polynomial(p: int, j: int):
    """
    -D_j(t_0..t_{j-1}) над Z, где D_j - j-я координата F(t) - t: универсальная часть
    j-го уравнения башни t_j^p - t_j = -D_j(t_<j) + h_j.

    Returns:
        (кольцо, многочлен) - многочлен от t0..t{j-1} над ZZ
    """
    if j == 0:
        R, _ = ring("t0", ZZ)
        return R, R.zero
    names = ",".join(f"t{i}" for i in range(j))
    R_QQ, *ts = ring(names, QQ)
    R_ZZ = ring(names, ZZ)[0]
    fx = [t ** p for t in ts] + [R_QQ.zero]
    x = list(ts) + [R_QQ.zero]
    g = [a - b for a, b in zip(ghost_components(p, fx), ghost_components(p, x))]
    P = _from_ghost(p, g)[j]
    return R_ZZ, (-P).set_ring(R_ZZ)
