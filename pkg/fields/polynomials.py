"""
Многочлены от одной переменной над полями решётки и поиск их корней.

Многочлен хранится массивом (L, m): строка k - коэффициент при X^k
в степенном базисе поля степени m.
"""
import logging
import random
from typing import List, Sequence, Union

import numpy as np

from fields.lattice import FieldElement, FiniteField, lcm

logger = logging.getLogger(__name__)

PolyInput = Union[Sequence[int], Sequence[FieldElement], np.ndarray]


def poly_trim(A: np.ndarray) -> np.ndarray:
    nz = np.nonzero(A.any(axis=1))[0]
    if nz.size == 0:
        return A[:0]
    return A[: int(nz[-1]) + 1]


def poly_degree(A: np.ndarray) -> int:
    """Степень многочлена; -1 для нулевого."""
    return poly_trim(A).shape[0] - 1


def as_poly(field: FiniteField, coeffs: PolyInput) -> np.ndarray:
    """
    Приводит коэффициенты (младшие первыми) к массиву над полем field.

    Args:
        field: Поле, над которым рассматривается многочлен
        coeffs: Целые числа, элементы решётки или готовый массив (L, m)

    Returns:
        Массив (L, m)
    """
    if isinstance(coeffs, np.ndarray) and coeffs.ndim == 2:
        return poly_trim(coeffs % field.p)
    lattice = field.lattice
    rows = np.zeros((len(coeffs), field.degree), dtype=np.int64)
    for k, c in enumerate(coeffs):
        if isinstance(c, FieldElement):
            if field.degree % c.degree:
                raise ValueError(f"коэффициент из GF(p^{c.degree}) не лежит в {field}")
            rows[k] = lattice.embed(c, field.degree).vec
        else:
            rows[k, 0] = int(c) % field.p
    return poly_trim(rows)


def poly_x(field: FiniteField) -> np.ndarray:
    A = np.zeros((2, field.degree), dtype=np.int64)
    A[1, 0] = 1
    return A


def poly_add(field: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    n = max(A.shape[0], B.shape[0])
    out = np.zeros((n, field.degree), dtype=np.int64)
    out[: A.shape[0]] += A
    out[: B.shape[0]] += B
    return poly_trim(out % field.p)


def poly_sub(field: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    n = max(A.shape[0], B.shape[0])
    out = np.zeros((n, field.degree), dtype=np.int64)
    out[: A.shape[0]] += A
    out[: B.shape[0]] -= B
    return poly_trim(out % field.p)


def poly_mul(field: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return poly_trim(field.mul_arrays(A, B))


def poly_divmod(field: FiniteField, A: np.ndarray, B: np.ndarray):
    """Деление с остатком: A = Q*B + R, deg R < deg B."""
    B = poly_trim(B)
    db = B.shape[0] - 1
    if db < 0:
        raise ZeroDivisionError("деление на нулевой многочлен")
    R = np.array(poly_trim(A), dtype=np.int64)
    if R.shape[0] - 1 < db:
        return np.zeros((0, field.degree), dtype=np.int64), R
    inv_lead = field.inv_vec(B[db])
    Q = np.zeros((R.shape[0] - db, field.degree), dtype=np.int64)
    for i in range(R.shape[0] - 1 - db, -1, -1):
        top = R[i + db]
        if not top.any():
            continue
        c = field.mul_vec(top, inv_lead)
        Q[i] = c
        R[i: i + db + 1] = (R[i: i + db + 1] - field.scale_rows(B, c)) % field.p
    return poly_trim(Q), poly_trim(R[:db])


def poly_mod(field: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return poly_divmod(field, A, B)[1]


def poly_monic(field: FiniteField, A: np.ndarray) -> np.ndarray:
    A = poly_trim(A)
    if A.shape[0] == 0:
        return A
    return field.scale_rows(A, field.inv_vec(A[-1]))


def poly_gcd(field: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Нормированный НОД."""
    A, B = poly_trim(A), poly_trim(B)
    while B.shape[0]:
        A, B = B, poly_mod(field, A, B)
    return poly_monic(field, A)


def poly_powmod(field: FiniteField, A: np.ndarray, e: int, mod: np.ndarray) -> np.ndarray:
    """A^e по модулю mod (e - неотрицательное целое произвольной длины)."""
    result = np.zeros((1, field.degree), dtype=np.int64)
    result[0, 0] = 1
    result = poly_mod(field, result, mod)
    base = poly_mod(field, A, mod)
    while e:
        if e & 1:
            result = poly_mod(field, poly_mul(field, result, base), mod)
        e >>= 1
        if e:
            base = poly_mod(field, poly_mul(field, base, base), mod)
    return result


def poly_eval(field: FiniteField, A: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Значение многочлена в точке x (вектор поля), схема Горнера."""
    acc = np.zeros(field.degree, dtype=np.int64)
    for k in range(A.shape[0] - 1, -1, -1):
        acc = (field.mul_vec(acc, x) + A[k]) % field.p
    return acc


def _frobenius_x_from(field: FiniteField, h: np.ndarray, mod: np.ndarray, power: int) -> np.ndarray:
    """h^{p^power} mod mod."""
    h = poly_mod(field, h, mod)
    for _ in range(power):
        h = poly_powmod(field, h, field.p, mod)
    return h


def _split_linear(field: FiniteField, g: np.ndarray, rng: random.Random) -> List[np.ndarray]:
    """Разложение произведения различных линейных множителей (алгоритм Кантора - Цассенхауза)."""
    d = poly_degree(g)
    if d <= 0:
        return []
    if d == 1:
        return [g]
    p, m = field.p, field.degree
    while True:
        delta = np.array([rng.randrange(p) for _ in range(m)], dtype=np.int64)
        shift = np.stack([delta, np.eye(1, m, dtype=np.int64)[0]])
        if p == 2:
            # След из F_{2^m} в F_2
            term = poly_mod(field, shift, g)
            acc = term
            for _ in range(m - 1):
                term = poly_mod(field, poly_mul(field, term, term), g)
                acc = poly_add(field, acc, term)
            cand = acc
        else:
            cand = poly_powmod(field, shift, (p ** m - 1) // 2, g)
            one = np.zeros((1, m), dtype=np.int64)
            one[0, 0] = 1
            cand = poly_sub(field, cand, one)
        f = poly_gcd(field, g, cand)
        df = poly_degree(f)
        if 0 < df < d:
            rest = poly_divmod(field, g, f)[0]
            return _split_linear(field, f, rng) + _split_linear(field, rest, rng)


def roots_in_field(coeffs: PolyInput, field: FiniteField) -> List[FieldElement]:
    """
    Все различные корни многочлена, лежащие в поле field.

    Args:
        coeffs: Коэффициенты многочлена, младшие первыми
        field: Поле, в котором ищутся корни

    Returns:
        Корни, упорядоченные по координатам в степенном базисе field
    """
    A = as_poly(field, coeffs)
    if A.shape[0] == 0:
        raise ValueError("корни нулевого многочлена не определены")
    if A.shape[0] == 1:
        return []
    A = poly_monic(field, A)
    h = _frobenius_x_from(field, poly_x(field), A, field.degree)
    g = poly_gcd(field, A, poly_sub(field, h, poly_x(field)))
    rng = random.Random(f"{field.lattice.seed}:roots:{field.p}:{field.degree}")
    roots = []
    for factor in _split_linear(field, g, rng):
        factor = poly_monic(field, factor)
        roots.append(FieldElement(field, (-factor[0]) % field.p))
    roots.sort(key=lambda r: r.key())
    return roots


def splitting_degree(field: FiniteField, coeffs: PolyInput) -> int:
    """
    Наименьшая степень d такая, что все корни многочлена лежат в поле степени
    field.degree * d (разложение на множители различных степеней).
    """
    A = poly_monic(field, as_poly(field, coeffs))
    if A.shape[0] <= 1:
        return 1
    m = field.degree
    rest = A
    result = 1
    h = poly_mod(field, poly_x(field), rest)
    k = 0
    while poly_degree(rest) > 0:
        k += 1
        h = _frobenius_x_from(field, h, rest, m)
        g = poly_gcd(field, rest, poly_sub(field, h, poly_x(field)))
        if poly_degree(g) > 0:
            result = lcm(result, k)
            while True:
                common = poly_gcd(field, rest, g)
                if poly_degree(common) <= 0:
                    break
                rest = poly_divmod(field, rest, common)[0]
            h = poly_mod(field, h, rest) if poly_degree(rest) > 0 else h
    return result


def roots_of(coeffs: PolyInput, field: FiniteField) -> List[FieldElement]:
    """
    Все корни многочлена с коэффициентами в field над алгебраическим замыканием:
    поле расширяется до поля разложения.

    Args:
        coeffs: Коэффициенты, младшие первыми
        field: Поле коэффициентов

    Returns:
        Корни в поле разложения, упорядоченные по координатам
    """
    d = splitting_degree(field, coeffs)
    big = field.lattice.field(field.degree * d)
    A = as_poly(field, coeffs)
    if d > 1:
        A = field.lattice.embed_array(A, field.degree, big.degree)
    roots = roots_in_field(A, big)
    logger.debug(f"Найдено {len(roots)} корней в GF({field.p}^{big.degree})")
    return roots
