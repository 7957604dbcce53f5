import numpy as np
import pytest

from cli.errors import InconsistencyError, InputError
from sheaves.cohomology import cohomology_complex, crossed_homs, differential, element_actions
from sheaves.groups import FiniteGroupTable
from sheaves.modules import (
    SheafModule,
    check_modulus,
    format_invariants,
    group_order,
    kernel_modpn,
    quotient_invariants,
    smith_modpn,
    valuations,
)


def _symmetric_group():
    """S_3 на перестановках (0, 1, 2): transposition и 3-цикл."""
    def compose(a, b):
        return tuple(a[b[i]] for i in range(3))
    return FiniteGroupTable.generate((0, 1, 2), [(1, 0, 2), (1, 2, 0)], compose)


# --- линейная алгебра над Z/p^n ---

def test_valuations():
    assert valuations(np.array([0, 1, 3, 9, 18]), 3, 3).tolist() == [3, 0, 1, 2, 2]


@pytest.mark.parametrize("p,n,shape", [(3, 3, (3, 4)), (2, 4, (4, 3)), (5, 2, (3, 3))])
def test_smith_form_diagonalises(p, n, shape):
    N = p ** n
    rng = np.random.default_rng(p + n)
    A = rng.integers(0, N, size=shape) * np.array([1, p, p * p][: shape[1]] + [1] * max(0, shape[1] - 3))
    A %= N
    sf = smith_modpn(A, p, n, track_rows=True)
    D = sf.U @ A % N @ sf.V % N
    expected = np.zeros(shape, dtype=np.int64)
    for k, e in enumerate(sf.exponents):
        expected[k, k] = p ** e
    assert np.array_equal(D, expected)
    assert np.array_equal(sf.U @ sf.U_inv % N, np.eye(shape[0], dtype=np.int64))
    assert sf.exponents == sorted(sf.exponents)


def test_kernel_modpn():
    K = kernel_modpn(np.array([[3]]), 3, 2)
    assert not (np.array([[3]]) @ K % 9).any()
    assert sorted({int(v) for k in range(9) for v in (k * K[:, 0]) % 9}) == [0, 3, 6]
    assert kernel_modpn(np.array([[1, 2]]), 3, 1).shape == (2, 1)
    assert np.array_equal(kernel_modpn(np.zeros((0, 2)), 3, 1), np.eye(2))


def test_quotient_invariants():
    A = np.eye(2, dtype=np.int64)
    B = np.array([[3, 0], [0, 0]])
    assert quotient_invariants(A, B, 3, 2) == [3, 9]
    assert quotient_invariants(A, A, 3, 2) == []
    assert quotient_invariants(A, np.zeros((2, 0)), 3, 2) == [9, 9]


def test_invariant_formatting():
    assert format_invariants([3, 9]) == "Z/3 + Z/9"
    assert format_invariants([]) == "0"
    assert group_order([3, 9]) == 27


def test_modulus_limit():
    with pytest.raises(ValueError):
        check_modulus(2, 40)


# --- модули ---

def test_module_from_presentation():
    M = SheafModule.from_presentation(3, 2, 2, [[3, 0]], [[[1, 0], [0, 1]]])
    assert sorted(M.orders) == [3, 9]
    cyclic = SheafModule.from_presentation(3, 2, 2, [[1, 0]], [])
    assert cyclic.orders == [9]
    assert SheafModule.from_presentation(3, 2, 1, [[1]], []).rank == 0


def test_module_rejects_ill_defined_action():
    with pytest.raises(InputError):
        SheafModule(3, 2, [1, 2], [[[1, 0], [1, 1]]])
    with pytest.raises(InputError):
        SheafModule(3, 2, [3], [])


# --- группы ---

def test_cyclic_and_abelian_groups():
    C6 = FiniteGroupTable.cyclic(6)
    assert C6.order == 6 and C6.is_abelian()
    C6.verify()
    assert len(C6.word(3)) == 3
    A = FiniteGroupTable.abelian(3, 2)
    assert A.order == 9
    assert len(list(A.non_tree_edges())) == 9 * 2 - 8
    assert np.array_equal(A.table(), A.table().T)


def test_symmetric_group():
    S3 = _symmetric_group()
    assert S3.order == 6
    assert not S3.is_abelian()
    S3.verify()
    assert len(list(S3.pairs())) == 36


def test_closure_bound():
    with pytest.raises(InconsistencyError):
        FiniteGroupTable.generate(0, [1], lambda a, b: (a + b) % 10, max_order=5)


# --- когомологии ---

def test_sign_action_on_z9():
    cx = cohomology_complex(FiniteGroupTable.cyclic(2), SheafModule(3, 2, [2], [[[8]]]))
    assert cx.h1 == []
    assert cx.h0 == []
    assert cx.crossed.invariants == [9]


def test_sign_action_on_z4():
    cx = cohomology_complex(FiniteGroupTable.cyclic(2), SheafModule(2, 2, [2], [[[3]]]))
    assert cx.h1 == [2]
    assert cx.h0 == [2]


def test_trivial_action_is_hom():
    cx = cohomology_complex(FiniteGroupTable.cyclic(3), SheafModule.trivial(3, 1, 1))
    assert cx.h1 == [3] and cx.h0 == [3]
    cx = cohomology_complex(FiniteGroupTable.abelian(9, 2), SheafModule.trivial(3, 2, 2))
    assert cx.h1 == [9, 9]
    assert cx.h1_order == 81


def test_symmetric_group_cohomology():
    S3 = _symmetric_group()
    sign = cohomology_complex(S3, SheafModule(3, 1, [1], [[[2]], [[1]]]))
    assert sign.h1 == [3] and sign.h0 == []
    trivial = cohomology_complex(S3, SheafModule.trivial(3, 1, 2))
    assert trivial.h1 == [] and trivial.h0 == [3]


def test_zero_module():
    empty = np.zeros((0, 0), dtype=np.int64)
    cx = cohomology_complex(FiniteGroupTable.cyclic(3), SheafModule(3, 1, [], [empty]))
    assert cx.h0 == [] and cx.h1 == []


def test_non_cyclic_module():
    # Z/3 + Z/9, образующая Z/2 действует на оба слагаемых умножением на -1
    M = SheafModule(3, 2, [1, 2], [[[2, 0], [0, 8]]])
    cx = cohomology_complex(FiniteGroupTable.cyclic(2), M)
    assert cx.h0 == [] and cx.h1 == []
    assert cx.terms == [[3, 9], [3, 9]]


def test_crossed_homomorphism_values():
    group = FiniteGroupTable.cyclic(4)
    module = SheafModule(2, 2, [2], [[[3]]])
    crossed = crossed_homs(group, module)
    crossed.verify()
    d = differential(group, module)
    assert d.tolist() == [[2]]
    rho = element_actions(group, module)
    assert [int(r[0, 0]) for r in rho] == [1, 3, 1, 3]


def test_action_must_respect_group_relations():
    with pytest.raises(InputError):
        cohomology_complex(FiniteGroupTable.cyclic(2), SheafModule(3, 2, [2], [[[2]]]))
    with pytest.raises(InputError):
        cohomology_complex(FiniteGroupTable.cyclic(2), SheafModule(3, 2, [2], []))
