"""
Линейная алгебра над Z/p^n и конечно порождённые Z/p^n-модули.

Кольцо Z/p^n цепное: любой элемент равен p^e * u с обратимым u, поэтому
нормальная форма Смита строится выбором ведущего элемента наименьшей
валюации. Векторы модулей хранятся столбцами целочисленных массивов.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from cli.errors import InputError

logger = logging.getLogger(__name__)

# p^n * p^n с запасом на суммы помещается в int64
MAX_MODULUS = 1 << 28


def check_modulus(p: int, n: int) -> int:
    """p^n или ValueError, если модуль слишком велик для int64-арифметики."""
    if n < 1:
        raise ValueError(f"уровень n должен быть положительным, получено: {n}")
    N = p ** n
    if N > MAX_MODULUS:
        raise ValueError(f"модуль {p}^{n} слишком велик (предел {MAX_MODULUS})")
    return N


def valuations(A: np.ndarray, p: int, n: int) -> np.ndarray:
    """p-адические валюации элементов; для нуля - n."""
    N = p ** n
    A = np.asarray(A, dtype=np.int64) % N
    val = np.full(A.shape, n, dtype=np.int64)
    nonzero = A != 0
    val[nonzero] = 0
    for e in range(1, n):
        val[nonzero & (A % p ** e == 0)] = e
    return val


@dataclass
class SmithForm:
    """
    U A V = D, D[k, k] = p^{exponents[k]} для k < rank, остальные элементы нулевые.

    U и U_inv вычисляются только при track_rows=True.
    """
    exponents: List[int]
    V: np.ndarray
    U: Optional[np.ndarray] = None
    U_inv: Optional[np.ndarray] = None

    @property
    def rank(self) -> int:
        return len(self.exponents)


def smith_modpn(A: np.ndarray, p: int, n: int, track_rows: bool = False) -> SmithForm:
    """
    Нормальная форма Смита матрицы над Z/p^n.

    Args:
        A: Матрица r x c
        p: Простое число
        n: Показатель
        track_rows: Накапливать ли строчные преобразования U и U^{-1}

    Returns:
        SmithForm
    """
    N = check_modulus(p, n)
    A = np.array(A, dtype=np.int64) % N
    r, c = A.shape
    U = np.eye(r, dtype=np.int64) if track_rows else None
    U_inv = np.eye(r, dtype=np.int64) if track_rows else None
    V = np.eye(c, dtype=np.int64)
    exponents: List[int] = []

    for k in range(min(r, c)):
        sub = A[k:, k:]
        if not sub.any():
            break
        val = valuations(sub, p, n)
        i, j = np.unravel_index(int(np.argmin(val)), val.shape)
        e = int(val[i, j])
        i, j = int(i) + k, int(j) + k
        if i != k:
            A[[k, i]] = A[[i, k]]
            if track_rows:
                U[[k, i]] = U[[i, k]]
                U_inv[:, [k, i]] = U_inv[:, [i, k]]
        if j != k:
            A[:, [k, j]] = A[:, [j, k]]
            V[:, [k, j]] = V[:, [j, k]]

        pe = p ** e
        unit = int(A[k, k]) // pe
        inv = pow(unit, -1, N)
        A[k] = A[k] * inv % N
        if track_rows:
            U[k] = U[k] * inv % N
            U_inv[:, k] = U_inv[:, k] * unit % N

        f = A[:, k] // pe
        f[k] = 0
        if f.any():
            A = (A - np.outer(f, A[k])) % N
            if track_rows:
                U = (U - np.outer(f, U[k])) % N
                U_inv[:, k] = (U_inv[:, k] + U_inv @ f) % N
        g = A[k] // pe
        g[k] = 0
        if g.any():
            A = (A - np.outer(A[:, k], g)) % N
            V = (V - np.outer(V[:, k], g)) % N
        exponents.append(e)

    return SmithForm(exponents, V, U, U_inv)


def kernel_modpn(A: np.ndarray, p: int, n: int) -> np.ndarray:
    """
    Порождающие ядра {x : A x = 0} над Z/p^n.

    Returns:
        Матрица c x t, столбцы которой порождают ядро
    """
    N = check_modulus(p, n)
    A = np.asarray(A, dtype=np.int64) % N
    c = A.shape[1]
    if A.shape[0]:
        A = A[A.any(axis=1)]
    if A.shape[0] > c:
        A = np.unique(A, axis=0)
    if A.shape[0] == 0:
        return np.eye(c, dtype=np.int64)
    sf = smith_modpn(A, p, n)
    cols = []
    for k in range(c):
        if k < sf.rank:
            e = sf.exponents[k]
            if e == 0:
                continue
            cols.append(sf.V[:, k] * p ** (n - e) % N)
        else:
            cols.append(sf.V[:, k])
    if not cols:
        return np.zeros((c, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def quotient_invariants(A: np.ndarray, B: np.ndarray, p: int, n: int) -> List[int]:
    """
    Инвариантные множители span(A) / span(B) при span(B) ⊆ span(A).

    Args:
        A: Порождающие большего подмодуля (столбцы)
        B: Порождающие меньшего подмодуля (столбцы)

    Returns:
        Порядки циклических слагаемых по возрастанию, например [3, 9]
    """
    N = check_modulus(p, n)
    A = np.asarray(A, dtype=np.int64) % N
    B = np.asarray(B, dtype=np.int64) % N
    a = A.shape[1]
    if a == 0:
        return []
    if B.shape[1] == 0:
        K = kernel_modpn(A, p, n)
    else:
        K = kernel_modpn(np.concatenate([A, (-B) % N], axis=1), p, n)[:a]
    orders = []
    sf = smith_modpn(K, p, n) if K.shape[1] else SmithForm([], np.eye(a, dtype=np.int64))
    for k in range(a):
        e = sf.exponents[k] if k < sf.rank else n
        if e > 0:
            orders.append(p ** e)
    return sorted(orders)


def group_order(orders: Sequence[int]) -> int:
    result = 1
    for d in orders:
        result *= d
    return result


def format_invariants(orders: Sequence[int]) -> str:
    """Запись вида 'Z/3 + Z/9'; '0' для нулевой группы."""
    if not orders:
        return "0"
    return " + ".join(f"Z/{d}" for d in orders)


@dataclass
class SheafModule:
    """
    M = ⊕ Z/p^{e_i} с действием образующих группы.

    Attributes:
        exponents: Показатели 1 <= e_i <= n циклических слагаемых
        actions: Матрицы образующих (g e_j = Σ_i A_ij e_i) в этом базисе
    """
    p: int
    n: int
    exponents: List[int]
    actions: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        N = check_modulus(self.p, self.n)
        m = len(self.exponents)
        if any(not 1 <= e <= self.n for e in self.exponents):
            raise InputError(f"показатели слагаемых должны лежать в 1..{self.n}: {self.exponents}")
        self.actions = [np.asarray(a, dtype=np.int64).reshape(m, m) % N for a in self.actions]
        self.check_actions()

    @property
    def N(self) -> int:
        return self.p ** self.n

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def orders(self) -> List[int]:
        return [self.p ** e for e in self.exponents]

    def identity(self) -> np.ndarray:
        return np.eye(self.rank, dtype=np.int64)

    def relations(self, copies: int = 1) -> np.ndarray:
        """Столбцы p^{e_i} e_i подмодуля соотношений в (Z/p^n)^{copies * m}."""
        return np.diag(np.tile(self.orders, copies)).astype(np.int64) % self.N

    def row_scales(self, copies: int = 1) -> np.ndarray:
        """Множители p^{n - e_i}: строка a x = 0 в M равносильна p^{n - e_i} a x = 0 в Z/p^n."""
        return np.array([self.p ** (self.n - e) for e in self.exponents] * copies, dtype=np.int64)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Канонические представители координат (по модулю p^{e_i} построчно)."""
        mods = np.array(self.orders, dtype=np.int64).reshape((-1,) + (1,) * (np.ndim(v) - 1))
        return np.asarray(v, dtype=np.int64) % mods

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return not self.reduce(np.asarray(a) - np.asarray(b)).any()

    def check_actions(self) -> None:
        """Матрицы корректно определены на M: A (p^{e_j} e_j) = 0 в M."""
        for k, a in enumerate(self.actions):
            for i, ei in enumerate(self.exponents):
                for j, ej in enumerate(self.exponents):
                    if int(a[i, j]) * self.p ** ej % self.p ** ei:
                        raise InputError(
                            f"матрица действия {k} не согласована с соотношениями модуля: элемент ({i}, {j})"
                        )

    @classmethod
    def from_presentation(
        cls,
        p: int,
        n: int,
        generators: int,
        relations: Sequence[Sequence[int]],
        actions: Sequence[Sequence[Sequence[int]]],
    ) -> "SheafModule":
        """
        Модуль (Z/p^n)^m / <relations> с действием, приведённый к сумме циклических.

        Args:
            generators: Число образующих m
            relations: Соотношения Σ_j r_j e_j = 0 (строки длины m)
            actions: Матрицы m x m действия образующих группы

        Returns:
            SheafModule в базисе Смита
        """
        N = check_modulus(p, n)
        m = generators
        R = np.array(relations, dtype=np.int64).reshape(-1, m).T % N if relations else np.zeros((m, 0), dtype=np.int64)
        if R.shape[1]:
            sf = smith_modpn(R, p, n, track_rows=True)
            U, U_inv, exps = sf.U, sf.U_inv, list(sf.exponents)
        else:
            U = U_inv = np.eye(m, dtype=np.int64)
            exps = []
        exps = exps + [n] * (m - len(exps))
        keep = [i for i, e in enumerate(exps) if e > 0]
        converted = []
        for k, a in enumerate(actions):
            a = np.array(a, dtype=np.int64)
            if a.shape != (m, m):
                raise InputError(f"матрица действия {k} должна иметь размер {m}x{m}")
            b = U @ (a % N) % N @ U_inv % N
            converted.append(b[np.ix_(keep, keep)])
        module = cls(p, n, [exps[i] for i in keep], converted)
        logger.info(f"Модуль M ≅ {format_invariants(module.orders)}")
        return module

    @classmethod
    def trivial(cls, p: int, n: int, num_generators: int, rank: int = 1) -> "SheafModule":
        """(Z/p^n)^rank с тривиальным действием."""
        return cls(p, n, [n] * rank, [np.eye(rank, dtype=np.int64)] * num_generators)
