"""
Решатели уровня поля: σ = x -> x^q, уравнение Артина - Шрайера X^q - X = c
и базис корней линеаризованного q-многочлена.
"""
import logging
from typing import List, Sequence

import numpy as np

from cli.errors import DegreeCapError, InconsistencyError
from fields.lattice import FieldElement, FieldLattice, lcm
from fields.linalg import nullspace_modp, rank_modp, rref_modp, solve_modp

logger = logging.getLogger(__name__)


def q_exponent(p: int, q: int) -> int:
    """a такое, что q = p^a."""
    a, r = 0, 1
    while r < q:
        r *= p
        a += 1
    if r != q or a == 0:
        raise ValueError(f"q = {q} не является степенью p = {p}")
    return a


def frobenius_q(x: FieldElement, q: int, e: int = 1) -> FieldElement:
    """
    Возвращает x^{q^e}.

    Args:
        x: Элемент поля
        q: Степень характеристики
        e: Число применений σ

    Returns:
        FieldElement
    """
    if e < 0:
        raise ValueError(f"показатель e должен быть неотрицательным, получено: {e}")
    a = q_exponent(x.field.p, q)
    return x.frobenius(a * e)


def _fq_basis(lattice: FieldLattice, a: int, M: int) -> np.ndarray:
    """Базис F_q внутри F_{p^M} над F_p построчно (q = p^a, a | M)."""
    E = lattice.embedding_matrix(a, M)
    return E.T.copy()


def lex_min_coset(x: np.ndarray, basis: np.ndarray, p: int) -> np.ndarray:
    """
    Лексикографически наименьший представитель класса x + span(basis) над F_p:
    координаты в ведущих позициях ступенчатого базиса обнуляются.
    """
    if basis.shape[0] == 0:
        return x % p
    R, pivots = rref_modp(basis, p)
    out = np.array(x, dtype=np.int64) % p
    for i, c in enumerate(pivots):
        if out[c]:
            out = (out - out[c] * R[i]) % p
    return out


def solve_artin_schreier_scalar(c: FieldElement, q: int) -> FieldElement:
    """
    Решение λ уравнения λ^q - λ = c; из λ + F_q выбирается
    лексикографически наименьший представитель в рабочем поле.

    Args:
        c: Правая часть
        q: Степень характеристики

    Returns:
        λ в наименьшем подполе, которое его содержит
    """
    lattice = c.lattice
    p = lattice.p
    a = q_exponent(p, q)
    if c.is_zero():
        return lattice.field(1).zero()
    m0 = lcm(c.degree, a)
    c0 = lattice.embed(c, m0)
    trace = c0
    term = c0
    for _ in range(m0 // a - 1):
        term = term.frobenius(a)
        trace = trace + term
    M = m0 if trace.is_zero() else m0 * p
    field = lattice.field(M)
    target = lattice.embed(c, M)
    op = (field.frobenius_matrix(a) - np.eye(M, dtype=np.int64)) % p
    x = solve_modp(op, target.vec, p)
    if x is None:
        raise InconsistencyError(f"уравнение X^{q} - X = {c} не решилось в GF({p}^{M})")
    x = lex_min_coset(x, _fq_basis(lattice, a, M), p)
    result = lattice.descend(FieldElement(field, x))
    logger.debug(f"Решено X^{q} - X = {c}: λ = {result}")
    return result


def _twisted_mul(left: Sequence[FieldElement], right: Sequence[FieldElement], a: int) -> List[FieldElement]:
    """(Σ a_i τ^i)(Σ b_j τ^j) = Σ a_i b_j^{q^i} τ^{i+j}, τ = x -> x^q."""
    zero = left[0] * 0
    out = [zero] * (len(left) + len(right) - 1)
    for i, ai in enumerate(left):
        if ai.is_zero():
            continue
        for j, bj in enumerate(right):
            if not bj.is_zero():
                out[i + j] = out[i + j] + ai * bj.frobenius(a * i)
    return out


def _twisted_mod(poly: List[FieldElement], L: Sequence[FieldElement], a: int) -> List[FieldElement]:
    """Остаток от левого деления на L в скрученном кольце."""
    r = len(L) - 1
    poly = list(poly)
    for s in range(len(poly) - 1, r - 1, -1):
        b = poly[s]
        if b.is_zero():
            continue
        e = s - r
        beta = b / L[r].frobenius(a * e)
        for i in range(r + 1):
            poly[e + i] = poly[e + i] - beta * L[i].frobenius(a * e)
    zero = L[0] * 0
    out = poly[:r]
    return out + [zero] * (r - len(out))


def linearized_roots(coeffs: Sequence[FieldElement], q: int) -> List[FieldElement]:
    """
    F_q-базис корней q-многочлена L(X) = Σ c_i X^{q^i}.

    Args:
        coeffs: Коэффициенты c_0..c_r
        q: Степень характеристики

    Returns:
        Список из r элементов (каждый в наименьшем содержащем его поле)
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if not coeffs:
        raise ValueError("нулевой q-многочлен: пространство корней бесконечно")
    if coeffs[0].is_zero():
        raise ValueError("q-многочлен несепарабелен: c_0 = 0")
    r = len(coeffs) - 1
    if r == 0:
        return []
    lattice = coeffs[0].lattice
    p = lattice.p
    a = q_exponent(p, q)
    m0 = lcm(lattice.common_degree(coeffs), a)
    L = [lattice.embed(c, m0) for c in coeffs]
    zero = lattice.field(m0).zero()
    one = lattice.field(m0).one()
    # τ^{m0/a} mod L, затем степени до совпадения с X
    R1 = [one]
    for _ in range(m0 // a):
        R1 = _twisted_mod([zero] + [x.frobenius(a) for x in R1], L, a)
    identity = [one] + [zero] * (r - 1)
    R = R1
    k = 1
    while not all(x == y for x, y in zip(R, identity)):
        k += 1
        if m0 * k > lattice.max_degree:
            raise DegreeCapError(
                f"поле разложения q-многочлена требует степени больше {lattice.max_degree}"
            )
        R = _twisted_mod(_twisted_mul(R, R1, a), L, a)
    M = m0 * k
    field = lattice.field(M)
    op = np.zeros((M, M), dtype=np.int64)
    for i, c in enumerate(coeffs):
        ci = lattice.embed(c, M)
        op = (op + field.mult_matrix(ci.vec) @ field.frobenius_matrix(a * i)) % p
    kernel = nullspace_modp(op, p)
    if kernel.shape[0] != a * r:
        raise InconsistencyError(
            f"размерность ядра {kernel.shape[0]} над F_p, ожидалось {a * r}"
        )
    fq = _fq_basis(lattice, a, M)
    fq_mult = [field.mult_matrix(w) for w in fq]
    chosen: List[np.ndarray] = []
    span = np.zeros((0, M), dtype=np.int64)
    for v in kernel:
        trial = np.concatenate([span, np.stack([(W @ v) % p for W in fq_mult])])
        if rank_modp(trial, p) > span.shape[0]:
            chosen.append(v)
            span = trial
        if len(chosen) == r:
            break
    logger.debug(f"Корни q-многочлена степени {r} найдены в GF({p}^{M})")
    return [lattice.descend(FieldElement(field, v)) for v in chosen]
