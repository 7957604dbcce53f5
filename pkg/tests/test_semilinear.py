import pytest

from fields.lattice import FieldLattice
from semilinear.fixed_points import fixed_points, inhom_solve
from semilinear.operators import (
    SemilinearOperator,
    span_rank,
    split_nilpotent_invertible,
    stabilisation_index,
    stable_rank,
    vec_sub,
)


@pytest.fixture
def lattice3():
    return FieldLattice(3)


def _assert_fixed(F: SemilinearOperator, vectors):
    for b in vectors:
        assert all(x.is_zero() for x in vec_sub(F.apply(b), b))


def test_apply_uses_row_convention(lattice3):
    F = SemilinearOperator([[1, 2], [0, 1]], 3, lattice3)
    one, zero = lattice3.field(1).one(), lattice3.field(1).zero()
    # F(b_0) = b_0 + 2 b_1
    assert F.apply([one, zero]) == [one, one * 2]


def test_split_genus2_hasse_witt(lattice3):
    F = SemilinearOperator([[1, 0], [0, 0]], 3, lattice3)
    N, S = split_nilpotent_invertible(F)
    assert len(N) == 1 and len(S) == 1
    assert stable_rank(F) == 1
    fixed = fixed_points(F, S)
    assert len(fixed) == 1
    _assert_fixed(F, fixed)


def test_nilpotent_operator(lattice3):
    F = SemilinearOperator([[0, 1], [0, 0]], 3, lattice3)
    N, S = split_nilpotent_invertible(F)
    assert S == [] and len(N) == 2
    assert stable_rank(F) == 0
    assert stabilisation_index(F) == 2


def test_fermat_quartic_operator_is_invertible():
    lattice = FieldLattice(5)
    F = SemilinearOperator([[1, 3, 0], [1, 4, 0], [2, 2, 3]], 5, lattice)
    assert stable_rank(F) == 3
    fixed = fixed_points(F)
    assert len(fixed) == 3
    assert span_rank(lattice, fixed) == 3
    _assert_fixed(F, fixed)


@pytest.mark.parametrize("q", [3, 9])
def test_fixed_points_over_extension(lattice3, q):
    z = lattice3.field(2).gen()
    F = SemilinearOperator([[z, 1], [2, z + 1]], q, lattice3)
    fixed = fixed_points(F)
    assert len(fixed) == 2
    assert span_rank(lattice3, fixed) == 2
    _assert_fixed(F, fixed)


def test_fixed_points_require_invertible_operator(lattice3):
    F = SemilinearOperator([[1, 0], [0, 0]], 3, lattice3)
    with pytest.raises(ValueError):
        fixed_points(F)


@pytest.mark.parametrize("matrix", [
    [[1, 0], [0, 0]],
    [[0, 1], [0, 0]],
    [[1, 1, 0], [0, 2, 0], [1, 0, 0]],
])
def test_inhomogeneous_equation(lattice3, matrix):
    F = SemilinearOperator(matrix, 3, lattice3)
    z = lattice3.field(2).gen()
    for m in ([1] * F.d, [z] + [0] * (F.d - 1), [z + k for k in range(F.d)]):
        x = inhom_solve(F, m)
        residual = vec_sub(vec_sub(F.apply(x), x), [lattice3.field(1).zero() + c for c in m])
        assert all(c.is_zero() for c in residual)


def test_inhomogeneous_zero_rhs(lattice3):
    F = SemilinearOperator([[1, 0], [0, 1]], 3, lattice3)
    assert all(c.is_zero() for c in inhom_solve(F, [0, 0]))


def test_non_square_matrix_rejected(lattice3):
    with pytest.raises(ValueError):
        SemilinearOperator([[1, 0]], 3, lattice3)
