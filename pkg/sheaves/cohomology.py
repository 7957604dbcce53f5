"""
Когомологии локально постоянного пучка Z/p^n-модулей через скрещенные гомоморфизмы.

Комплекс M -> Hom_cr(G, M), m -> (g -> g m - m). Скрещенный гомоморфизм
задаётся образами образующих: значения на остальных элементах восстанавливаются
по дереву Шрайера из f(g s) = f(g) + g f(s), а рёбра графа Кэли вне дерева
дают линейные условия над Z/p^n.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from cli.errors import InconsistencyError, InputError
from covers.h1et import H1EtBasis
from curves.model import CurveModel
from sheaves.automorphisms import CoverGroup, CurveAutomorphism, assemble_group
from sheaves.groups import FiniteGroupTable
from sheaves.modules import SheafModule, format_invariants, group_order, kernel_modpn, quotient_invariants

logger = logging.getLogger(__name__)


def element_actions(group: FiniteGroupTable, module: SheafModule) -> np.ndarray:
    """
    Матрицы действия всех элементов группы, (|G|, m, m).

    Raises:
        InputError: Если матрицы образующих не удовлетворяют соотношениям группы
    """
    if len(module.actions) != len(group.generators):
        raise InputError(
            f"модулю задано {len(module.actions)} матриц действия, а у группы {len(group.generators)} образующих"
        )
    N, m = module.N, module.rank
    rho = np.zeros((group.order, m, m), dtype=np.int64)
    rho[0] = module.identity()
    for g in range(1, group.order):
        parent, k = group.parent[g]
        rho[g] = rho[parent] @ module.actions[k] % N
    for g, k, h in group.non_tree_edges():
        if not module.equal(rho[g] @ module.actions[k] % N, rho[h]):
            raise InputError(f"действие на модуле не согласовано с соотношением группы (элемент {g}, образующая {k})")
    return rho


@dataclass
class CrossedHomomorphisms:
    """
    Hom_cr(G, M) как подмодуль M^k образов k образующих.

    Attributes:
        generators: Столбцы (k*m, t) - порождающие подмодуля (поднятые в (Z/p^n)^{km})
        invariants: Инвариантные множители Hom_cr(G, M)
        element_maps: L_g: (|G|, m, k*m), f(g) = L_g x для x = (f(s_1), ..., f(s_k))
        actions: Матрицы действия элементов (|G|, m, m)
    """
    group: FiniteGroupTable
    module: SheafModule
    generators: np.ndarray
    invariants: List[int]
    element_maps: np.ndarray
    actions: np.ndarray

    def values(self, x: np.ndarray) -> np.ndarray:
        """Значения f(g) для всех g, (|G|, m)."""
        return np.einsum("gij,j->gi", self.element_maps, np.asarray(x, dtype=np.int64)) % self.module.N

    def verify(self) -> None:
        """
        Проверяет f(gh) = f(g) + g f(h) для каждого порождающего на всех парах
        (на выборке пар для больших групп).
        """
        N = self.module.N
        for c in range(self.generators.shape[1]):
            f = self.values(self.generators[:, c])
            for g, h in self.group.pairs():
                gh = self.group.mul(g, h)
                if not self.module.equal(f[gh], (f[g] + self.actions[g] @ f[h]) % N):
                    raise InconsistencyError(f"нарушен закон скрещенного гомоморфизма на паре ({g}, {h})")


def crossed_homs(group: FiniteGroupTable, module: SheafModule) -> CrossedHomomorphisms:
    """
    Модуль скрещенных гомоморфизмов G -> M.

    Args:
        group: Конечная группа
        module: Модуль с матрицами действия образующих группы

    Returns:
        CrossedHomomorphisms
    """
    p, n, N, m = module.p, module.n, module.N, module.rank
    k = len(group.generators)
    rho = element_actions(group, module)
    L = np.zeros((group.order, m, k * m), dtype=np.int64)
    for g in range(1, group.order):
        parent, s = group.parent[g]
        L[g] = L[parent]
        L[g][:, s * m:(s + 1) * m] = (L[g][:, s * m:(s + 1) * m] + rho[parent]) % N

    if k * m == 0:
        return CrossedHomomorphisms(group, module, np.zeros((0, 0), dtype=np.int64), [], L, rho)

    edges = list(group.non_tree_edges())
    relations = module.relations(k)
    if edges:
        g_idx = np.array([e[0] for e in edges])
        s_idx = np.array([e[1] for e in edges])
        h_idx = np.array([e[2] for e in edges])
        C = L[g_idx] - L[h_idx]
        for s in range(k):
            sel = s_idx == s
            C[sel, :, s * m:(s + 1) * m] += rho[g_idx[sel]]
        C = C * module.row_scales().reshape(1, m, 1) % N
        kernel = kernel_modpn(C.reshape(-1, k * m), p, n)
    else:
        kernel = np.eye(k * m, dtype=np.int64)
    gens = np.concatenate([kernel, relations], axis=1) % N
    invariants = quotient_invariants(gens, relations, p, n)
    logger.info(f"Hom_cr(G, M) ≅ {format_invariants(invariants)} ({len(edges)} условий)")
    return CrossedHomomorphisms(group, module, kernel, invariants, L, rho)


def differential(group: FiniteGroupTable, module: SheafModule) -> np.ndarray:
    """Матрица d: M -> M^k, m -> (s_i m - m)_i."""
    N, m = module.N, module.rank
    blocks = [(a - module.identity()) % N for a in module.actions]
    if not blocks:
        return np.zeros((0, m), dtype=np.int64)
    return np.concatenate(blocks, axis=0)


@dataclass
class CohomologyComplex:
    """
    Двучленный комплекс M -> Hom_cr(G, M) и его когомологии.

    Attributes:
        differential: Матрица (k*m, m) отображения d в координатах образов образующих
        h0: Инвариантные множители H^0 = M^G
        h1: Инвариантные множители H^1 = Hom_cr / im d
    """
    group: FiniteGroupTable
    module: SheafModule
    crossed: CrossedHomomorphisms
    differential: np.ndarray
    h0: List[int] = field(default_factory=list)
    h1: List[int] = field(default_factory=list)

    @property
    def terms(self) -> List[List[int]]:
        return [self.module.orders, self.crossed.invariants]

    @property
    def h1_order(self) -> int:
        return group_order(self.h1)


def cohomology_complex(group: FiniteGroupTable, module: SheafModule, verify: bool = True) -> CohomologyComplex:
    """
    Комплекс M -> Hom_cr(G, M) с извлечёнными H^0 и H^1.

    Args:
        group: Конечная группа
        module: Модуль с действием образующих
        verify: Проверять ли закон скрещенного гомоморфизма на парах элементов

    Returns:
        CohomologyComplex
    """
    p, n, N, m = module.p, module.n, module.N, module.rank
    k = len(group.generators)
    crossed = crossed_homs(group, module)
    if verify:
        crossed.verify()
    d = differential(group, module)

    if m == 0:
        h0: List[int] = []
    elif k == 0:
        h0 = list(module.orders)
    else:
        scaled = d * module.row_scales(k).reshape(-1, 1) % N
        fixed = kernel_modpn(scaled, p, n)
        h0 = quotient_invariants(np.concatenate([fixed, module.relations()], axis=1), module.relations(), p, n)

    if k * m == 0:
        h1: List[int] = []
    else:
        relations = module.relations(k)
        cocycles = np.concatenate([crossed.generators, relations], axis=1)
        boundaries = np.concatenate([d, relations], axis=1)
        h1 = quotient_invariants(cocycles, boundaries, p, n)

    logger.info(f"H^0 ≅ {format_invariants(h0)}, H^1 ≅ {format_invariants(h1)}")
    return CohomologyComplex(group, module, crossed, d, h0, h1)


def cover_module(cover: CoverGroup, module: SheafModule) -> SheafModule:
    """
    Модуль с действием образующих Aut(Y^<p^n>|X): сдвиги действуют тривиально,
    подъёмы образующих Aut(Y|X) - заданными матрицами.
    """
    if len(module.actions) != len(cover.base_generators):
        raise InputError(
            f"задано {len(module.actions)} матриц действия для {len(cover.base_generators)} образующих Aut(Y|X)"
        )
    actions = [module.identity()] * cover.translation_count + list(module.actions)
    return SheafModule(module.p, module.n, module.exponents, actions)


def compute_cohomology_complex(
    h1: H1EtBasis,
    generators: Sequence[CurveAutomorphism],
    module: SheafModule,
) -> Tuple[CoverGroup, CohomologyComplex]:
    """
    Когомологии пучка на X = Y / Aut(Y|X), тривиализуемого накрытием Y -> X.

    Args:
        h1: Базис H^1_et(Y, Z/p^n)
        generators: Образующие Aut(Y|X) (автоморфизмы поля K_Y)
        module: M = H^0(Y, L|_Y) с матрицами действия образующих

    Returns:
        Группа Aut(Y^<p^n>|X) и CohomologyComplex для неё
    """
    curve: CurveModel = h1.curve
    if module.p != curve.p or module.n != h1.level:
        raise InputError(
            f"модуль над Z/{module.p}^{module.n} не согласован с уровнем Z/{curve.p}^{h1.level}"
        )
    cover = assemble_group(h1, generators)
    return cover, cohomology_complex(cover.table, cover_module(cover, module))
