"""
Конечные группы, заданные образующими и законом умножения.

Группа строится замыканием образующих обходом в ширину; вместе с элементами
сохраняются таблица правого умножения на образующие и дерево Шрайера
(каждый элемент, кроме единицы, получен из родителя умножением справа на
образующую). Полная таблица умножения строится по требованию для групп
небольшого порядка.
"""
import logging
from collections import deque
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from cli.config import SEED
from cli.errors import InconsistencyError

logger = logging.getLogger(__name__)

# Порядок, до которого строится полная таблица и проверяется ассоциативность
FULL_TABLE_LIMIT = 2048
ASSOCIATIVITY_LIMIT = 64
SAMPLE_SIZE = 4000
PAIR_LIMIT = 20000


class FiniteGroupTable:
    """
    Конечная группа с занумерованными элементами.

    Attributes:
        elements: Элементы (хешируемые), elements[0] - единица
        generators: Индексы образующих
        right: right[g, k] - индекс elements[g] * elements[generators[k]]
        parent: parent[g] = (h, k) с elements[g] = elements[h] * образующая k
    """

    def __init__(
        self,
        elements: Sequence[Hashable],
        multiply: Callable[[Hashable, Hashable], Hashable],
        generators: Sequence[int],
        right: np.ndarray,
        parent: Sequence[Optional[Tuple[int, int]]],
    ):
        self.elements = list(elements)
        self.multiply = multiply
        self.generators = list(generators)
        self.right = right
        self.parent = list(parent)
        self.index: Dict[Hashable, int] = {g: i for i, g in enumerate(self.elements)}
        self._table: Optional[np.ndarray] = None

    identity = 0

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def generate(
        cls,
        identity: Hashable,
        generators: Sequence[Hashable],
        multiply: Callable[[Hashable, Hashable], Hashable],
        max_order: Optional[int] = None,
    ) -> "FiniteGroupTable":
        """
        Замыкание образующих относительно умножения.

        Args:
            identity: Единица
            generators: Образующие
            multiply: Закон умножения
            max_order: Ожидаемый порядок; превышение означает ошибку в законе умножения

        Raises:
            InconsistencyError: Если замыкание больше max_order
        """
        elements = [identity]
        index = {identity: 0}
        parent: List[Optional[Tuple[int, int]]] = [None]
        rows: List[List[int]] = []
        queue = deque([0])
        while queue:
            g = queue.popleft()
            row = []
            for k, s in enumerate(generators):
                h = multiply(elements[g], s)
                j = index.get(h)
                if j is None:
                    j = len(elements)
                    if max_order is not None and j >= max_order:
                        raise InconsistencyError(f"замыкание образующих больше ожидаемого порядка {max_order}")
                    elements.append(h)
                    index[h] = j
                    parent.append((g, k))
                    queue.append(j)
                row.append(j)
            rows.append(row)
        right = np.array(rows, dtype=np.int64).reshape(len(elements), len(generators))
        gens = [index[s] for s in generators]
        group = cls(elements, multiply, gens, right, parent)
        logger.info(f"Группа порядка {group.order} с {len(gens)} образующими")
        return group

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroupTable":
        return cls.generate(0, [1 % m], lambda a, b: (a + b) % m)

    @classmethod
    def abelian(cls, N: int, s: int) -> "FiniteGroupTable":
        """(Z/N)^s со стандартными образующими."""
        def add(a, b):
            return tuple((x + y) % N for x, y in zip(a, b))
        gens = [tuple(int(i == k) for i in range(s)) for k in range(s)]
        return cls.generate(tuple([0] * s), gens, add)

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return self.index[self.multiply(self.elements[i], self.elements[j])]

    def table(self) -> np.ndarray:
        """Полная таблица умножения."""
        if self._table is None:
            if self.order > FULL_TABLE_LIMIT:
                raise ValueError(f"полная таблица не строится для групп порядка больше {FULL_TABLE_LIMIT}")
            t = np.zeros((self.order, self.order), dtype=np.int64)
            for i in range(self.order):
                for j in range(self.order):
                    t[i, j] = self.index[self.multiply(self.elements[i], self.elements[j])]
            self._table = t
        return self._table

    def word(self, g: int) -> List[int]:
        """Номера образующих, произведение которых равно g."""
        out = []
        while self.parent[g] is not None:
            g, k = self.parent[g]
            out.append(k)
        return out[::-1]

    def non_tree_edges(self) -> Iterator[Tuple[int, int, int]]:
        """Рёбра (g, k, g*s_k) графа Кэли, не входящие в дерево Шрайера."""
        for g in range(self.order):
            for k in range(len(self.generators)):
                h = int(self.right[g, k])
                if self.parent[h] != (g, k):
                    yield g, k, h

    def pairs(self, limit: int = PAIR_LIMIT) -> Iterator[Tuple[int, int]]:
        """Все пары элементов или детерминированная выборка из limit пар."""
        if self.order ** 2 <= limit:
            for i in range(self.order):
                for j in range(self.order):
                    yield i, j
            return
        rng = np.random.default_rng(SEED)
        for i, j in rng.integers(0, self.order, size=(limit, 2)):
            yield int(i), int(j)

    def verify(self) -> None:
        """
        Проверяет аксиомы группы: единица, обратимость, ассоциативность.

        Для больших групп ассоциативность проверяется на выборке троек.
        """
        for k in range(len(self.generators)):
            if len(set(self.right[:, k].tolist())) != self.order:
                raise InconsistencyError(f"умножение на образующую {k} не является перестановкой")
        for g in range(self.order):
            if self.mul(self.identity, g) != g or self.mul(g, self.identity) != g:
                raise InconsistencyError(f"элемент 0 не является единицей для {self.elements[g]}")
        if self.order <= ASSOCIATIVITY_LIMIT:
            triples = ((a, b, c) for a in range(self.order) for b in range(self.order) for c in range(self.order))
        else:
            rng = np.random.default_rng(SEED)
            triples = (tuple(int(x) for x in t) for t in rng.integers(0, self.order, size=(SAMPLE_SIZE, 3)))
        for a, b, c in triples:
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise InconsistencyError(f"нарушена ассоциативность на ({a}, {b}, {c})")

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def __repr__(self) -> str:
        return f"FiniteGroupTable(order={self.order}, generators={len(self.generators)})"
