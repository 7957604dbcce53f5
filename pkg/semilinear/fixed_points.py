"""
Неподвижные точки σ-полулинейного оператора и уравнение F(x) - x = m.
"""
import logging
from typing import List, Optional, Sequence

from cli.errors import InconsistencyError
from fields.lattice import Scalar
from fields.solvers import linearized_roots, solve_artin_schreier_scalar
from semilinear.operators import (
    SemilinearOperator,
    Vector,
    _coerce,
    solve_combination,
    span_rank,
    split_nilpotent_invertible,
    vec_add,
    vec_is_zero,
    vec_scale,
    vec_sub,
)

logger = logging.getLogger(__name__)


def _krylov(F: SemilinearOperator, start: Vector, fixed: List[Vector]):
    """
    Строит a_0 = start, a_l = F(a_{l-1}) до первой линейной зависимости
    с fixed ∪ {a_0..a_{j-1}}.

    Returns:
        (a_0..a_{j-1}, коэффициенты λ при fixed, коэффициенты λ_0..λ_{j-1})
    """
    chain = [start]
    while True:
        nxt = F.apply(chain[-1])
        coeffs = solve_combination(F.lattice, fixed + chain, nxt)
        if coeffs is not None:
            k = len(fixed)
            return chain, coeffs[:k], coeffs[k:]
        chain.append(nxt)
        if len(chain) > F.d:
            raise InconsistencyError("последовательность Крылова длиннее размерности пространства")


def fixed_points(F: SemilinearOperator, basis: Optional[Sequence[Vector]] = None) -> List[Vector]:
    """
    k-базис неподвижных точек F (конструктивное доказательство теоремы Ланга - Дьёдонне).

    Args:
        F: Оператор, обратимый на span(basis)
        basis: Базис F-устойчивого подпространства; по умолчанию - всё пространство

    Returns:
        Векторы b с F(b) = b; их F_q-оболочка - все неподвижные точки подпространства
    """
    lattice = F.lattice
    q = F.q
    if basis is None:
        basis = [F.basis_vector(i) for i in range(F.d)]
        if span_rank(lattice, F.matrix) < F.d:
            raise ValueError("матрица оператора необратима: сначала выделите обратимую часть")
    fixed: List[Vector] = []
    for b in basis:
        if solve_combination(lattice, fixed, list(b)) is not None:
            continue
        chain, lam_fixed, lam = _krylov(F, list(b), fixed)
        j = len(chain)
        # L(X) = X - Σ_l λ_l^{q^{j-l-1}} X^{q^{j-l}}
        coeffs = [lattice.field(1).one()] + [None] * j
        for l in range(j):
            coeffs[j - l] = -(lam[l].frobenius(F.a * (j - l - 1)))
        roots = linearized_roots(coeffs, q)
        if len(roots) != j:
            raise InconsistencyError(f"ожидалось {j} корней q-многочлена, найдено {len(roots)}")
        snapshot = list(fixed)
        for r in roots:
            rq = r.frobenius(F.a)
            alphas = [None] * j
            alphas[j - 1] = r
            if j >= 2:
                alphas[0] = rq * lam[0]
                for l in range(1, j - 1):
                    alphas[l] = alphas[l - 1].frobenius(F.a) + rq * lam[l]
            vec = F.zero_vector()
            for l in range(j):
                vec = vec_add(vec, vec_scale(alphas[l], chain[l]))
            for f, lf in zip(snapshot, lam_fixed):
                alpha_f = solve_artin_schreier_scalar(-(rq * lf), q)
                vec = vec_add(vec, vec_scale(alpha_f, f))
            if not vec_is_zero(vec_sub(F.apply(vec), vec)):
                raise InconsistencyError("построенный вектор не является неподвижной точкой")
            fixed.append([lattice.descend(x) for x in vec])
    logger.info(f"Найдено {len(fixed)} неподвижных векторов (q = {q})")
    return fixed


def inhom_solve(F: SemilinearOperator, m: Sequence[Scalar]) -> Vector:
    """
    Решение x уравнения F(x) - x = m.

    Args:
        F: Полулинейный оператор
        m: Правая часть в координатах базиса

    Returns:
        x = x_nil + x_ss
    """
    lattice = F.lattice
    if len(m) != F.d:
        raise ValueError(f"размерность правой части {len(m)} не равна {F.d}")
    m = [_coerce(lattice, x) for x in m]
    if vec_is_zero(m):
        return F.zero_vector()
    N, S = split_nilpotent_invertible(F)
    coords = solve_combination(lattice, N + S, m)
    if coords is None:
        raise InconsistencyError("N ⊕ S не порождает пространство")
    m_N = F.zero_vector()
    for c, v in zip(coords[: len(N)], N):
        m_N = vec_add(m_N, vec_scale(c, v))
    m_S = vec_sub(m, m_N)

    x = F.zero_vector()
    n = m_N
    steps = 0
    while not vec_is_zero(n):
        x = vec_sub(x, n)
        n = F.apply(n)
        steps += 1
        if steps > F.d + 1:
            raise InconsistencyError("F не нильпотентен на N")

    if S and not vec_is_zero(m_S):
        fixed = F.cache.get("fixed")
        if fixed is None:
            fixed = F.cache["fixed"] = fixed_points(F, S)
        m_f = solve_combination(lattice, fixed, m_S)
        if m_f is None:
            raise InconsistencyError("правая часть не лежит в S")
        for c, f in zip(m_f, fixed):
            lam = solve_artin_schreier_scalar(c, F.q)
            x = vec_add(x, vec_scale(lam, f))
    return [lattice.descend(v) for v in x]
