from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from cli.errors import DegreeCapError
from fields.lattice import FieldLattice, format_element, get_field, parse_element
from fields.linalg import nullspace_modp, rank_modp, rref_modp, solve_modp
from fields.polynomials import roots_in_field, roots_of, splitting_degree
from fields.solvers import frobenius_q, linearized_roots, q_exponent, solve_artin_schreier_scalar


@pytest.fixture
def lattice3():
    return FieldLattice(3, seed=7)


def test_get_field_is_idempotent(lattice3):
    F = get_field(lattice3, 4)
    assert F is get_field(lattice3, 4)
    assert F.degree == 4
    assert get_field(lattice3, 2).gen().frobenius(2) == get_field(lattice3, 2).gen()
    assert {1, 2, 4} <= set(lattice3.degrees)


def test_concurrent_registration_publishes_embeddings_with_field():
    lattice = FieldLattice(3)

    def worker(_):
        F4 = lattice.field(4)
        return lattice.embed(lattice.field(2).gen(), 4), F4

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(worker, range(16)))
    images = [img for img, _ in results]
    assert all(img == images[0] for img in images)
    assert all(F4 is results[0][1] for _, F4 in results)
    assert images[0].frobenius(2) == images[0]


def test_embeddings_are_compatible(lattice3):
    F9 = lattice3.field(2)
    for x in [F9.gen(), F9.gen() ** 5 + 2]:
        direct = lattice3.embed(x, 12)
        via = lattice3.embed(lattice3.embed(x, 4), 12)
        assert direct == via


def test_embedding_is_ring_homomorphism(lattice3):
    a, b = lattice3.field(2).gen(), lattice3.field(2).gen() + 1

    def E(x):
        return lattice3.embed(x, 6)

    assert E(a * b) == E(a) * E(b)
    assert E(a + b) == E(a) + E(b)


def test_mixed_degree_arithmetic_lands_in_common_field(lattice3):
    a, b = lattice3.field(2).gen(), lattice3.field(3).gen()
    assert (a + b).degree == 6
    assert (a * b) - b * a == 0


def test_frobenius_order_and_descend(lattice3):
    z = lattice3.field(4).gen()
    assert z.frobenius(4) == z
    assert z.frobenius(2) != z
    two = lattice3.embed(lattice3.field(1).from_int(2), 4)
    assert lattice3.descend(two).degree == 1
    w = lattice3.embed(lattice3.field(2).gen(), 4)
    assert lattice3.descend(w).degree == 2


def test_parse_and_format_element(lattice3):
    x = parse_element("2*z2 + 1", lattice3)
    assert x.degree == 2
    assert parse_element(format_element(x), lattice3) == x
    assert parse_element("-1", lattice3) == 2


def test_degree_cap():
    small = FieldLattice(3, max_degree=4)
    small.field(4)
    with pytest.raises(DegreeCapError):
        small.field(5)


def test_q_exponent():
    assert q_exponent(5, 125) == 3
    with pytest.raises(ValueError):
        q_exponent(5, 30)


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (3, 2), (5, 2)])
def test_artin_schreier_scalar(p, m):
    lattice = FieldLattice(p)
    field = lattice.field(m)
    for c in list(field.elements())[:8]:
        lam = solve_artin_schreier_scalar(c, p)
        assert lam ** p - lam == c


def test_artin_schreier_over_fq():
    lattice = FieldLattice(3)
    c = lattice.field(2).gen()
    lam = solve_artin_schreier_scalar(c, 9)
    assert frobenius_q(lam, 9) - lam == c


def test_artin_schreier_nonzero_trace_extends_field():
    lattice = FieldLattice(3)
    one = lattice.field(1).one()
    lam = solve_artin_schreier_scalar(one, 3)
    assert lam.degree == 3
    assert lam ** 3 - lam == one


def test_artin_schreier_is_deterministic():
    c = FieldLattice(5).field(2).gen()
    a = solve_artin_schreier_scalar(c, 5)
    b = solve_artin_schreier_scalar(FieldLattice(5).field(2).gen(), 5)
    assert a.key() == b.key()


def test_linearized_roots():
    lattice = FieldLattice(3)
    F = lattice.field(1)
    coeffs = [F.from_int(1), F.from_int(1), F.from_int(1)]
    roots = linearized_roots(coeffs, 3)
    assert len(roots) == 2
    for r in roots:
        value = sum((c * r.frobenius(i) for i, c in enumerate(coeffs)), r * 0)
        assert value.is_zero()


def test_linearized_roots_rejects_inseparable():
    F = FieldLattice(3).field(1)
    with pytest.raises(ValueError):
        linearized_roots([F.zero(), F.one()], 3)


def test_roots_of_extends_to_splitting_field():
    F3 = FieldLattice(3).field(1)
    assert roots_in_field([1, 0, 1], F3) == []
    assert splitting_degree(F3, [1, 0, 1]) == 2
    roots = roots_of([1, 0, 1], F3)
    assert len(roots) == 2
    for r in roots:
        assert (r * r + 1).is_zero()


def test_linear_algebra_modp():
    A = np.array([[1, 2, 0], [2, 4, 1]])
    R, pivots = rref_modp(A, 5)
    assert pivots == [0, 2]
    assert rank_modp(A, 5) == 2
    kernel = nullspace_modp(A, 5)
    assert kernel.shape == (1, 3)
    assert not ((A @ kernel.T) % 5).any()
    x = solve_modp(A, np.array([1, 3]), 5)
    assert np.array_equal((A @ x) % 5, np.array([1, 3]))
