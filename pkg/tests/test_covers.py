import numpy as np
import pytest

from adeles.classes import AdeleClass
from cli.config import FIXTURES_DIR
from cli.errors import InconsistencyError
from covers.h1et import coordinates_in_basis_witt, compute_h1_from_hw
from covers.tower import build_tower, compute_maximal_cover, format_polynomial, tower_polynomials, universal_part
from covers.witt_adeles import (
    WittAdele,
    certify_basis,
    find_function_witt,
    scalar_vector,
    witt_combination,
    wp_residual,
)
from curves.local import local_chart
from curves.model import ClosedPoint
from curves.series import LaurentSeries
from formats.loader import build_curve, load_curve_spec

# -D_1(t_0) + h_1 при p = 3 по модулю 3
SECOND_EQUATION = "2*t_0^7 + t_0^5 + h_1"


def _pure_t0(poly, p):
    """Слагаемые, зависящие только от t0, с коэффициентами по модулю p."""
    out = {}
    for monom, c in poly.terms():
        if not any(monom[1:]) and int(c) % p:
            out[monom[0]] = int(c) % p
    return out


def test_second_equation_universal_part():
    poly = tower_polynomials(3, 2)[1]
    universal = universal_part(poly, 2)
    t0 = poly.ring.gens[0]
    assert universal == -t0 ** 7 + t0 ** 5
    assert format_polynomial(universal, 3) == "2*t_0^7 + t_0^5"
    assert format_polynomial(poly, 3) == SECOND_EQUATION


def test_third_equation_pure_t0_part():
    poly = tower_polynomials(3, 3)[2]
    expected = {25: -1, 23: 4, 21: -9, 19: 13, 17: -13, 15: 9, 13: -4, 11: 1}
    assert _pure_t0(poly, 3) == {e: c % 3 for e, c in expected.items() if c % 3}
    exact = {m[0]: int(c) for m, c in poly.terms() if not any(m[1:])}
    assert exact == expected


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (5, 2)])
def test_equations_depend_only_on_lower_t_and_own_h(p, n):
    for j, poly in enumerate(tower_polynomials(p, n)):
        h = poly.ring.gens[n + j]
        rest = poly - h
        for monom, _ in rest.terms():
            assert not any(monom[n:])
            assert not any(monom[j:n])


def test_first_equation_is_plain_artin_schreier():
    for p in (2, 3, 5):
        poly = tower_polynomials(p, 1)[0]
        assert poly == poly.ring.gens[1]


def test_wrong_hasse_witt_rejected(genus2):
    with pytest.raises(InconsistencyError):
        compute_h1_from_hw(genus2.curve, 1, genus2.basis, [[0, 0], [0, 1]])


def test_genus2_level_one(genus2):
    h1 = compute_h1_from_hw(genus2.curve, 1, genus2.basis, genus2.matrix)
    assert h1.rank == 1
    v = h1.level_one[0]
    assert not v[0].is_zero() and v[1].is_zero()
    assert certify_basis(genus2.curve, h1.S, h1.representatives[0], h1.functions[0])


def test_rank_zero_curves(supersingular):
    h1 = compute_h1_from_hw(supersingular.curve, 2, supersingular.basis, supersingular.matrix)
    assert h1.rank == 0
    assert build_tower(h1).equations == []


def test_genus2_level_two(genus2):
    curve = genus2.curve
    h1 = compute_h1_from_hw(curve, 2, genus2.basis, genus2.matrix)
    assert h1.rank == 1
    r, h = h1.representatives[0], h1.functions[0]
    assert certify_basis(curve, h1.S, r, h)
    assert wp_residual(curve, h1.S, r, h).is_regular(h1.S)
    # класс r нетривиален, а его координата в базисе равна 1
    assert find_function_witt(curve, h1.S, r) is None
    _, alphas = coordinates_in_basis_witt(curve, h1.S, r, h1)
    assert alphas == [1]

    low = compute_h1_from_hw(curve, 1, genus2.basis, genus2.matrix)
    truncated = h1.truncate(1)
    assert truncated.level_one == low.level_one
    assert truncated.representatives[0][0] == low.representatives[0][0]
    assert certify_basis(curve, h1.S, truncated.representatives[0], truncated.functions[0])


def test_tower_shape(genus2):
    tower = compute_maximal_cover(genus2.curve, 2, genus2.basis, genus2.matrix)
    assert tower.degree == 9
    assert [(e.branch, e.index) for e in tower.equations] == [(0, 0), (0, 1)]
    assert tower.equations[1].equation == f"t_1^3 - t_1 = {SECOND_EQUATION}"


def test_fermat_level_one(fermat):
    h1 = compute_h1_from_hw(fermat.curve, 1, fermat.basis, fermat.matrix)
    assert h1.rank == 3
    for r, h in zip(h1.representatives, h1.functions):
        assert certify_basis(fermat.curve, h1.S, r, h)


@pytest.mark.slow
def test_genus2_level_three(genus2):
    curve = genus2.curve
    h1 = compute_h1_from_hw(curve, 3, genus2.basis, genus2.matrix)
    assert h1.rank == 1
    assert certify_basis(curve, h1.S, h1.representatives[0], h1.functions[0])
    for m in (1, 2):
        t = h1.truncate(m)
        assert certify_basis(curve, t.S, t.representatives[0], t.functions[0])
    tower = build_tower(h1)
    assert len(tower.equations) == 3
    assert tower.degree == 27


@pytest.mark.slow
def test_fermat_level_two(fermat):
    curve = fermat.curve
    h1 = compute_h1_from_hw(curve, 2, fermat.basis, fermat.matrix)
    assert h1.rank == 3
    for r, h in zip(h1.representatives, h1.functions):
        assert certify_basis(curve, h1.S, r, h)
    tower = build_tower(h1)
    assert len(tower.equations) == 6
    assert tower.degree == 5 ** 6


def _combination(curve, S, alphas, representatives, n):
    """Σ α^(i) b^(i) как вектор Витта аделей."""
    operands = []
    for a, b in zip(alphas, representatives):
        operands += [scalar_vector(curve, int(a), n), b]

    def combine(*pairs):
        acc = pairs[0] * pairs[1]
        for k in range(2, len(pairs), 2):
            acc = acc + pairs[k] * pairs[k + 1]
        return acc

    return witt_combination(curve, S, combine, operands, n)


def test_coordinates_of_p_times_basis_vector(genus2):
    curve = genus2.curve
    h1 = compute_h1_from_hw(curve, 2, genus2.basis, genus2.matrix)
    r = _combination(curve, h1.S, [3], h1.representatives, 2)
    # p * b = V(F b): нулевая координата обнуляется, класс остаётся нетривиальным
    assert r[0].is_regular(h1.S)
    assert find_function_witt(curve, h1.S, r) is None
    _, alphas = coordinates_in_basis_witt(curve, h1.S, r, h1)
    assert alphas == [3]
    assert scalar_vector(curve, alphas[0], 2) == scalar_vector(curve, 1, 2).verschiebung()


def test_coordinates_of_random_combinations(genus2):
    curve = genus2.curve
    h1 = compute_h1_from_hw(curve, 2, genus2.basis, genus2.matrix)
    rng = np.random.default_rng(11)
    for k in rng.integers(1, 9, size=3):
        r = _combination(curve, h1.S, [k], h1.representatives, 2)
        _, alphas = coordinates_in_basis_witt(curve, h1.S, r, h1)
        assert alphas == [int(k)]


def test_coordinates_of_random_combination_fermat(fermat):
    curve = fermat.curve
    h1 = compute_h1_from_hw(curve, 1, fermat.basis, fermat.matrix)
    alphas = [int(a) for a in np.random.default_rng(5).integers(0, 5, size=h1.rank)]
    r = _combination(curve, h1.S, alphas, h1.representatives, 1)
    _, found = coordinates_in_basis_witt(curve, h1.S, r, h1)
    assert found == alphas


def test_find_function_witt_on_conic():
    curve, _ = build_curve(load_curve_spec(FIXTURES_DIR / "conic_f3.json"))
    F = curve.lattice.field(1)
    P = ClosedPoint(F.zero(), F.one())
    r = WittAdele(
        curve,
        [AdeleClass.delta(curve, P, LaurentSeries.monomial(1, -1, F)), AdeleClass.zero(curve)],
    )
    h = find_function_witt(curve, [P], r)
    assert h is not None
    difference = witt_combination(curve, [P], lambda a, b: a - b, [r, h], 2)
    assert difference.is_regular([P])
    assert local_chart(curve, P).valuation(h[0]) == -1
