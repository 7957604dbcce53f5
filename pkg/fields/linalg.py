"""
Точная линейная алгебра над F_p и над конечными полями решётки.

Матрицы над F_p - массивы numpy int64 с элементами в [0, p).
Матрицы над F_{p^m} - массивы формы (rows, cols, m): последняя ось хранит
координаты элемента в степенном базисе поля.
"""
from typing import List, Optional, Tuple

import numpy as np


def rref_modp(A: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    Приведённая ступенчатая форма матрицы над F_p.

    Args:
        A: Матрица (rows, cols)
        p: Простое число

    Returns:
        (R, pivots): ступенчатая форма и номера ведущих столбцов
    """
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = (R[others] - np.outer(R[others, c], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_modp(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref_modp(A, p)[1])


def nullspace_modp(A: np.ndarray, p: int) -> np.ndarray:
    """Базис ядра {x : A x = 0} построчно, в каноническом (ступенчатом) виде."""
    rows, cols = A.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref_modp(A, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = (-R[i, f]) % p
    return basis


def solve_modp(A: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Частное решение A x = b (свободные переменные равны нулю) или None."""
    rows, cols = A.shape
    aug = np.concatenate([np.array(A, dtype=np.int64), np.array(b, dtype=np.int64).reshape(rows, 1)], axis=1)
    R, pivots = rref_modp(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, cols]
    return x


# --- Матрицы над F_{p^m} ---

def _outer_products(field, a: np.ndarray, row: np.ndarray) -> np.ndarray:
    """Массив (k, cols, m) произведений a[i] * row[c] в поле."""
    m = field.degree
    wide = np.zeros((a.shape[0], row.shape[0], 2 * m - 1), dtype=np.int64)
    for u in range(m):
        wide[:, :, u:u + m] += a[:, u, None, None] * row[None, :, :]
    return field.reduce_wide(wide % field.p)


def field_rref(field, A: np.ndarray, augmented: int = 0) -> Tuple[np.ndarray, List[int]]:
    """
    Приведённая ступенчатая форма матрицы над полем решётки.

    Args:
        field: FiniteField, в котором лежат элементы
        A: Массив (rows, cols, m)
        augmented: Число последних столбцов правой части, в которых ведущие элементы не ищутся

    Returns:
        (R, pivots)
    """
    p = field.p
    if field.degree == 1:
        R1, pivots = rref_modp(np.array(A, dtype=np.int64)[:, :, 0], p)
        if augmented:
            pivots = [c for c in pivots if c < A.shape[1] - augmented]
        return R1[:, :, None], pivots
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape[0], R.shape[1]
    pivots: List[int] = []
    r = 0
    for c in range(cols - augmented):
        if r >= rows:
            break
        col_nz = np.nonzero(R[r:, c].any(axis=1))[0]
        if col_nz.size == 0:
            continue
        piv = r + int(col_nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = field.inv_vec(R[r, c])
        R[r] = field.scale_rows(R[r], inv)
        others = np.nonzero(R[:, c].any(axis=1))[0]
        others = others[others != r]
        if others.size:
            R[others] = (R[others] - _outer_products(field, R[others, c], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def field_nullspace(field, A: np.ndarray) -> np.ndarray:
    """Базис ядра матрицы над полем: массив (k, cols, m) в ступенчатом виде."""
    rows, cols = A.shape[0], A.shape[1]
    m = field.degree
    if rows == 0:
        basis = np.zeros((cols, cols, m), dtype=np.int64)
        for k in range(cols):
            basis[k, k, 0] = 1
        return basis
    R, pivots = field_rref(field, A)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols, m), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f, 0] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = (-R[i, f]) % field.p
    return basis


def field_solve(field, A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """Частное решение A x = b над полем (свободные переменные равны нулю) или None."""
    rows, cols = A.shape[0], A.shape[1]
    aug = np.concatenate([A, b.reshape(rows, 1, field.degree)], axis=1)
    R, pivots = field_rref(field, aug, augmented=1)
    rank = len(pivots)
    if rank < rows and R[rank:, cols].any():
        return None
    x = np.zeros((cols, field.degree), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, cols]
    return x


def field_rank(field, A: np.ndarray) -> int:
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return len(field_rref(field, A)[1])
