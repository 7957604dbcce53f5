from dataclasses import replace

import numpy as np
import pytest

from cli.errors import InputError
from covers.h1et import compute_h1_from_hw
from curves.model import ClosedPoint
from formats.loader import load_sheaf
from sheaves.automorphisms import (
    CurveAutomorphism,
    assemble_group,
    automorphism_group,
    lift_automorphism,
    reference_points,
    verify_lift,
    wp_preimage,
)
from sheaves.cohomology import cohomology_complex, compute_cohomology_complex, cover_module
from sheaves.modules import SheafModule
from witt.vectors import WittVector


@pytest.fixture(scope="module")
def h1_level_one(genus2):
    return compute_h1_from_hw(genus2.curve, 1, genus2.basis, genus2.matrix)


@pytest.fixture
def involution(genus2):
    return CurveAutomorphism.parse(genus2.curve, "x", "-y", "iota")


def _point(curve, x, y):
    F = curve.lattice.field(1)
    return ClosedPoint(F.from_int(x), F.from_int(y))


def test_substitution_must_preserve_equation(genus2):
    with pytest.raises(InputError):
        CurveAutomorphism.parse(genus2.curve, "x + 1", "y")


def test_involution_structure(genus2, involution):
    curve = genus2.curve
    assert not involution.is_identity()
    assert involution.compose(involution).is_identity()
    assert involution.inverse() == involution
    assert involution.apply(curve.y() * curve.x()) == -(curve.y() * curve.x())
    assert involution.point_image(_point(curve, 0, 2)) == _point(curve, 0, 1)
    elements, table = automorphism_group(curve, [involution])
    assert len(elements) == 2
    assert table.tolist() == [[0, 1], [1, 0]]


def test_reference_points_are_distinct(genus2):
    points = reference_points(genus2.curve, genus2.points[:1])
    assert len(points) == 2 and points[0] != points[1]
    assert points[0] == genus2.points[0]


def test_wp_preimage():
    from fields.lattice import FieldLattice

    lattice = FieldLattice(3)
    z = lattice.field(2).gen()
    u = WittVector([z, z + 1], 3)
    v = wp_preimage(u, 3)
    assert v.wp() == u


def test_identity_lift(genus2, h1_level_one):
    lift = lift_automorphism(h1_level_one, CurveAutomorphism.identity(genus2.curve))
    assert lift.matrix == [[1]]
    assert all(v.is_zero() for v in lift.constants)
    assert verify_lift(h1_level_one, lift)


def test_involution_lift(h1_level_one, involution):
    lift = lift_automorphism(h1_level_one, involution)
    # гиперэллиптическая инволюция действует на H^1 умножением на -1
    assert lift.matrix == [[2]]
    assert verify_lift(h1_level_one, lift)
    assert len(lift.images()) == 1


def test_perturbed_matrix_is_rejected(h1_level_one, involution):
    lift = lift_automorphism(h1_level_one, involution)
    wrong = replace(lift, matrix=[[1]])
    assert verify_lift(h1_level_one, wrong) is False


def test_perturbed_function_is_rejected(genus2, h1_level_one, involution):
    lift = lift_automorphism(h1_level_one, involution)
    shifted = WittVector([genus2.curve.x() + lift.functions[0][0]], 3)
    assert verify_lift(h1_level_one, replace(lift, functions=[shifted])) is False


def test_translations_only(h1_level_one):
    cover = assemble_group(h1_level_one, [])
    assert cover.table.order == 3
    cx = cohomology_complex(cover.table, cover_module(cover, SheafModule.trivial(3, 1, 0)))
    assert cx.h1 == [3]
    assert cx.h0 == [3]


def test_involution_cover_group(h1_level_one, involution):
    cover = assemble_group(h1_level_one, [involution])
    group = cover.table
    assert group.order == 6
    assert not group.is_abelian()
    assert cover.cocycle[(1, 1)] == (0,)
    sigma = cover.automorphism(group.generators[1])
    assert sigma.tau == involution


def test_sheaf_cohomology_with_sign_action(genus2, h1_level_one, sheaf_dir):
    automorphisms, module = load_sheaf(sheaf_dir / "involution_sign.json", genus2.curve, 1)
    _, cx = compute_cohomology_complex(h1_level_one, automorphisms, module)
    assert cx.group.order == 6
    assert cx.h1 == [3]
    assert cx.h0 == []


def test_sheaf_cohomology_with_trivial_action(genus2, h1_level_one, involution):
    module = SheafModule.trivial(3, 1, 1)
    _, cx = compute_cohomology_complex(h1_level_one, [involution], module)
    assert cx.h1 == []
    assert cx.h0 == [3]


def test_module_level_must_match(h1_level_one, involution):
    with pytest.raises(InputError):
        compute_cohomology_complex(h1_level_one, [involution], SheafModule.trivial(3, 2, 1))


def test_lift_matrix_consistency(h1_level_one, involution):
    cover = assemble_group(h1_level_one, [involution])
    A = [np.array(l.matrix) for l in cover.lifts]
    assert np.array_equal(A[1] @ A[1] % 3, A[0])
