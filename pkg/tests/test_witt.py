import numpy as np
import pytest

from fields.lattice import FieldLattice
from witt.structure import lift_polynomial, make_structure_polynomials, teichmuller_sum_table
from witt.vectors import (
    IntegerWittVector,
    WittVector,
    int_to_witt_digits,
    witt_add,
    witt_digits_to_int,
    witt_frobenius,
    witt_mul,
    witt_neg,
    witt_verschiebung,
    wp,
)

CASES = [(p, n) for p in (2, 3, 5) for n in (1, 2, 3, 4)]


def _samples(p: int, n: int, count: int = 6):
    rng = np.random.default_rng(p * 10 + n)
    return [int(k) for k in rng.integers(0, p ** n, size=count)]


@pytest.mark.parametrize("p,n", CASES)
def test_digits_roundtrip_all_residues(p, n):
    if p ** n > 200:
        residues = _samples(p, n, 40)
    else:
        residues = range(p ** n)
    for k in residues:
        assert witt_digits_to_int(int_to_witt_digits(k, p, n), p) == k


@pytest.mark.parametrize("p,n", CASES)
def test_arithmetic_matches_integers_mod_pn(p, n):
    one = FieldLattice(p).field(1).one()
    N = p ** n
    values = _samples(p, n)
    for a in values:
        for b in values[:3]:
            va = WittVector.from_int(a, n, p, one=one)
            vb = WittVector.from_int(b, n, p, one=one)
            assert (va + vb).to_int() == (a + b) % N
            assert (va - vb).to_int() == (a - b) % N
            assert (va * vb).to_int() == (a * b) % N
            assert (-va).to_int() == (-a) % N


@pytest.mark.parametrize("p,n", CASES)
def test_ghost_map_is_ring_homomorphism(p, n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        a = IntegerWittVector([int(v) for v in rng.integers(-20, 20, size=n)], p)
        b = IntegerWittVector([int(v) for v in rng.integers(-20, 20, size=n)], p)
        assert (a + b).ghost() == [x + y for x, y in zip(a.ghost(), b.ghost())]
        assert (a * b).ghost() == [x * y for x, y in zip(a.ghost(), b.ghost())]
        assert (a - a).ghost() == [0] * n


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (5, 2)])
def test_reduction_mod_p_is_ring_homomorphism(p, n):
    field = FieldLattice(p).field(1)
    a = IntegerWittVector([3, 7, 1][:n], p)
    b = IntegerWittVector([2, 5, 11][:n], p)
    assert (a + b).reduce(field) == a.reduce(field) + b.reduce(field)
    assert (a * b).reduce(field) == a.reduce(field) * b.reduce(field)


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 3)])
def test_frobenius_verschiebung_identities(p, n):
    lattice = FieldLattice(p)
    z = lattice.field(2).gen()
    v = WittVector([z, z + 1, z * z, z + 2][:n], p)
    assert v.verschiebung().frobenius() == v.scale(p)
    assert v.frobenius().verschiebung() == v.scale(p)
    one = lattice.field(1).one()
    for k in _samples(p, n, 3):
        w = WittVector.from_int(k, n, p, one=one)
        assert w.wp().is_zero()
        assert w.verschiebung().to_int() == (p * k) % p ** n


def test_frobenius_is_additive_over_extension():
    lattice = FieldLattice(3)
    z = lattice.field(3).gen()
    a = WittVector([z, z + 2, z ** 4], 3)
    b = WittVector([z ** 2, 1 + z * 0, z], 3)
    assert (a + b).frobenius() == a.frobenius() + b.frobenius()
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()


def test_sum_polynomials_p2():
    W = make_structure_polynomials(2, 2)
    X0, X1, Y0, Y1 = W.ring_ZZ.gens
    assert W.sums[0] == X0 + Y0
    assert W.sums[1] == X1 + Y1 - X0 * Y0
    assert W.carries[1] == -X0 * Y0


def test_product_polynomials_p3():
    W = make_structure_polynomials(3, 2)
    X0, X1, Y0, Y1 = W.ring_ZZ.gens
    assert W.products[0] == X0 * Y0
    assert W.products[1] == X0 ** 3 * Y1 + X1 * Y0 ** 3 + 3 * X1 * Y1


def test_teichmuller_sum_table():
    table = teichmuller_sum_table(3, 2)
    assert table[0] == [(0, 1), (1, 1)]
    # σ_1(X, Y) = -(X^2 Y + X Y^2) mod 3
    assert table[1] == [(1, 2), (2, 2)]


def test_lift_polynomial_p3():
    R, poly = lift_polynomial(3, 1)
    t0 = R.gens[0]
    assert poly == -t0 ** 7 + t0 ** 5


def test_incompatible_lengths_rejected():
    with pytest.raises(ValueError):
        WittVector([1, 0], 3) + WittVector([1, 0, 0], 3)


def test_functional_operations_agree_with_methods():
    lattice = FieldLattice(5)
    z = lattice.field(2).gen()
    v = WittVector([z, z + 3], 5)
    w = WittVector([z * z, 1 + z * 0], 5)
    assert witt_add(v, w) == v + w
    assert witt_mul(v, witt_neg(w)) == -(v * w)
    assert witt_frobenius(witt_verschiebung(v)) == v.scale(5)
    assert wp(v) == witt_frobenius(v) - v


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (5, 2)])
def test_scalar_action_matches_repeated_addition(p, n):
    lattice = FieldLattice(p)
    z = lattice.field(2).gen()
    v = WittVector([z + k for k in range(n)], p)
    acc = v.zero_like()
    for k in range(p ** n + 1):
        assert v.scale(k) == acc
        assert k * v == acc
        acc = acc + v
