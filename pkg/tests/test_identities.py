import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alglab import identities as ident
from alglab import presets
from alglab.core import AlgebraError, derived_algebra
from alglab.identities import Rank4Tensor, SymmetryError


@pytest.mark.parametrize("level,assoc", [(0, True), (1, True), (2, True), (3, False)])
def test_hurwitz_identities(level, assoc):
    A = presets.hurwitz(level).algebra
    assert ident.check_identity(A, "alternative").passed
    assert ident.check_identity(A, "associative").passed == assoc


def test_failure_has_witness():
    rep = ident.check_identity(presets.hurwitz(3).algebra, "associative")
    assert not rep.passed and rep.witness is not None and rep.max_defect > 0


def test_anticommutative_and_lie_admissible():
    A = presets.hurwitz(3).algebra
    assert ident.check_identity(presets.cross(7).algebra, "anticommutative").passed
    assert not ident.check_identity(presets.cross(7).algebra, "lie_admissible").passed
    assert ident.check_identity(derived_algebra(presets.hurwitz(2).algebra, "bracket"), "lie_admissible").passed
    assert ident.check_identity(A, "flexible").passed


def test_jordan_and_commutative():
    A = presets.herm(3, 1).algebra
    assert ident.check_identity(A, "commutative").passed
    assert ident.check_identity(A, "jordan").passed
    assert not ident.check_identity(presets.c_epsilon(1).algebra, "jordan").passed


def test_unknown_identity():
    with pytest.raises(AlgebraError):
        ident.check_identity(presets.zero().algebra, "nope")


def test_curvature_tensor_symmetry():
    M = presets.c_epsilon(1)
    flat = ident.curvature_flat(M)
    P, Q = ident.project_curvature(flat)
    assert P.symmetry_defect("CurvatureType") == 0
    assert (P + Q).equals(flat)


def test_rank4_validation():
    a = np.zeros((2, 2, 2, 2))
    a[0, 1, 0, 1] = 1.0
    with pytest.raises(SymmetryError):
        Rank4Tensor(a, "CurvatureType", "float").validate()
    with pytest.raises(AlgebraError):
        Rank4Tensor(np.zeros((2, 2, 2)), "none", "float")


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 5000))
def test_bianchi_and_prepoisson_random(seed):
    A = presets.random_algebra(seed, 3)
    assert max(ident.bianchi_defects(A)) == 0
    assert ident.prepoisson_defect(A) == 0


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 5000))
def test_lie_admissible_iff_q_vanishes(seed):
    M = presets.random_metrized(seed, 3, "anticommutative")
    _, Q = ident.project_curvature(ident.curvature_flat(M))
    assert ident.check_identity(M.algebra, "lie_admissible").passed == Q.is_zero()
