"""
σ-полулинейные операторы над полями решётки и разложение M = N ⊕ S
на нильпотентную и обратимую части.

Соглашение: F(b_i) = Σ_j m_{i,j} b_j, поэтому на координатах F(v) = M^T σ(v).
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fields.lattice import FieldElement, FieldLattice, Scalar, lcm
from fields.linalg import field_nullspace, field_rank, field_rref, field_solve
from fields.solvers import q_exponent

logger = logging.getLogger(__name__)

Vector = List[FieldElement]
Matrix = List[List[FieldElement]]


def _coerce(lattice: FieldLattice, x: Scalar) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    return lattice.field(1).from_int(int(x))


def vectors_degree(vectors: Sequence[Sequence[FieldElement]]) -> int:
    m = 1
    for v in vectors:
        for x in v:
            m = lcm(m, x.degree)
    return m


def to_array(lattice: FieldLattice, vectors: Sequence[Sequence[FieldElement]], m: int) -> np.ndarray:
    """Список векторов -> массив (k, d, m) над полем степени m."""
    k = len(vectors)
    d = len(vectors[0]) if k else 0
    out = np.zeros((k, d, m), dtype=np.int64)
    for i, v in enumerate(vectors):
        for j, x in enumerate(v):
            out[i, j] = lattice.embed(x, m).vec
    return out


def from_array(lattice: FieldLattice, arr: np.ndarray) -> Vector:
    field = lattice.field(arr.shape[-1])
    return [lattice.descend(FieldElement(field, row)) for row in arr]


def solve_combination(
    lattice: FieldLattice, columns: Sequence[Vector], target: Vector
) -> Optional[Vector]:
    """
    Коэффициенты c с Σ c_k columns[k] = target или None, если target вне линейной оболочки.
    """
    if not columns:
        return [] if all(x.is_zero() for x in target) else None
    m = vectors_degree(list(columns) + [target])
    field = lattice.field(m)
    A = to_array(lattice, columns, m).transpose(1, 0, 2)
    b = to_array(lattice, [target], m)[0]
    x = field_solve(field, A, b)
    if x is None:
        return None
    return from_array(lattice, x)


def span_rank(lattice: FieldLattice, vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    m = vectors_degree(vectors)
    return field_rank(lattice.field(m), to_array(lattice, vectors, m))


def vec_add(u: Vector, v: Vector) -> Vector:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u: Vector, v: Vector) -> Vector:
    return [a - b for a, b in zip(u, v)]


def vec_scale(c: FieldElement, v: Vector) -> Vector:
    return [c * x for x in v]


def vec_is_zero(v: Vector) -> bool:
    return all(x.is_zero() for x in v)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(rows):
        row = []
        for k in range(cols):
            acc = A[i][0] * B[0][k]
            for j in range(1, inner):
                acc = acc + A[i][j] * B[j][k]
            row.append(acc)
        out.append(row)
    return out


def mat_transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def mat_frobenius(A: Matrix, e: int) -> Matrix:
    """Поэлементно x -> x^{p^e}."""
    return [[x.frobenius(e) for x in row] for row in A]


class SemilinearOperator:
    """
    σ-полулинейный оператор F на k^d, σ(x) = x^q, заданный матрицей m_{i,j}
    с F(b_i) = Σ_j m_{i,j} b_j.
    """

    def __init__(self, matrix: Sequence[Sequence[Scalar]], q: int, lattice: FieldLattice):
        d = len(matrix)
        if any(len(row) != d for row in matrix):
            raise ValueError(f"матрица оператора должна быть квадратной {d}x{d}")
        self.lattice = lattice
        self.q = q
        self.a = q_exponent(lattice.p, q)
        self.d = d
        self.matrix: Matrix = [[_coerce(lattice, x) for x in row] for row in matrix]
        self.cache: dict = {}

    @property
    def degree(self) -> int:
        return vectors_degree(self.matrix)

    def sigma(self, v: Vector, e: int = 1) -> Vector:
        """σ^e покоординатно; e может быть отрицательным."""
        return [x.frobenius(self.a * e) for x in v]

    def apply(self, v: Sequence[Scalar]) -> Vector:
        """F(v) = M^T σ(v)."""
        if len(v) != self.d:
            raise ValueError(f"размерность вектора {len(v)} не равна {self.d}")
        sv = self.sigma([_coerce(self.lattice, x) for x in v])
        out = []
        for j in range(self.d):
            acc = self.matrix[0][j] * sv[0]
            for i in range(1, self.d):
                acc = acc + self.matrix[i][j] * sv[i]
            out.append(acc)
        return out

    def power_matrix(self, j: int) -> Matrix:
        """A_j с F^j(v) = A_j σ^j(v): A_j = M^T (M^T)^σ ... (M^T)^{σ^{j-1}}."""
        one = self.lattice.field(1).one()
        zero = self.lattice.field(1).zero()
        A = [[one if r == c else zero for c in range(self.d)] for r in range(self.d)]
        MT = mat_transpose(self.matrix)
        for i in range(j):
            A = mat_mul(A, mat_frobenius(MT, self.a * i))
        return A

    def zero_vector(self) -> Vector:
        return [self.lattice.field(1).zero() for _ in range(self.d)]

    def basis_vector(self, i: int) -> Vector:
        v = self.zero_vector()
        v[i] = self.lattice.field(1).one()
        return v


def apply(F: SemilinearOperator, v: Sequence[Scalar]) -> Vector:
    return F.apply(v)


def _matrix_rank(lattice: FieldLattice, A: Matrix) -> int:
    return span_rank(lattice, A)


def stabilisation_index(F: SemilinearOperator) -> int:
    """Наименьшее j с rank A_{j+1} = rank A_j."""
    rank_prev = F.d
    j = 0
    A_next = F.power_matrix(1)
    while True:
        rank_next = _matrix_rank(F.lattice, A_next) if F.d else 0
        if rank_next == rank_prev:
            return j
        j += 1
        rank_prev = rank_next
        A_next = mat_mul(A_next, mat_frobenius(mat_transpose(F.matrix), F.a * j))


def split_nilpotent_invertible(F: SemilinearOperator) -> Tuple[List[Vector], List[Vector]]:
    """
    Базисы F-устойчивых подпространств N = ker F^j и S = im F^j.

    Returns:
        (базис N, базис S)
    """
    if F.d == 0:
        return [], []
    j = stabilisation_index(F)
    lattice = F.lattice
    if j == 0:
        return [], [F.basis_vector(i) for i in range(F.d)]
    A = F.power_matrix(j)
    m = vectors_degree(A)
    field = lattice.field(m)
    arr = to_array(lattice, A, m)
    kernel = field_nullspace(field, arr)
    N = [F.sigma(from_array(lattice, row), -j) for row in kernel]
    R, pivots = field_rref(field, arr.transpose(1, 0, 2))
    S = [from_array(lattice, R[i]) for i in range(len(pivots))]
    logger.debug(f"Разложение: dim N = {len(N)}, dim S = {len(S)}, индекс стабилизации {j}")
    return N, S


def stable_rank(F: SemilinearOperator) -> int:
    """Ранг HW · HW^(σ) · ... · HW^(σ^{d-1}); для матрицы над F_q равен dim S."""
    if F.d == 0:
        return 0
    prod = F.matrix
    for i in range(1, F.d):
        prod = mat_mul(prod, mat_frobenius(F.matrix, F.a * i))
    return _matrix_rank(F.lattice, prod)
