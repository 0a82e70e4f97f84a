from fractions import Fraction

import pytest

from alglab import identities as ident
from alglab import presets
from alglab import sectional as sec
from alglab.core import AlgebraError

DEFAULTS = [d["name"] for d in presets.list_presets()]


@pytest.mark.parametrize("name", DEFAULTS)
def test_every_preset_builds(name):
    M = presets.build(name)
    assert M.dim >= 1 and M.meta["provenance"]
    if name != "matrix_lie":
        assert M.metric_invariant


@pytest.mark.parametrize("n,level,dim", [(2, 0, 3), (3, 0, 6), (3, 1, 9), (3, 2, 15), (3, 3, 27), (4, 0, 10)])
def test_herm_dimensions(n, level, dim):
    assert presets.herm(n, level).dim == dim


def test_herm_octonion_needs_n3():
    with pytest.raises(AlgebraError):
        presets.herm(4, 3)


def test_herm_element_matches_matrices():
    M = presets.herm(3, 1)
    x = presets.herm_element(M, {(1, 1): 1, (2, 3): 2})
    mats = presets.herm_matrices(M, x)
    assert mats.shape[0] == 3


def test_cayley_dickson_dimensions():
    for level in range(4):
        assert presets.hurwitz(level).dim == 2**level


def test_descriptor_parsing():
    d = presets.descriptor("preset:c_epsilon:3/10")
    assert d.params == {"epsilon": Fraction(3, 10)}
    assert d.expected["constant_sect"] == Fraction(1, 4) - Fraction(9, 100)
    assert presets.descriptor("herm:n=4").params == {"n": 4, "level": 0}
    with pytest.raises(AlgebraError):
        presets.descriptor("nope:1")
    with pytest.raises(AlgebraError):
        presets.descriptor("herm:3:0:9")
    with pytest.raises(AlgebraError):
        presets.descriptor("herm:foo=1")


@pytest.mark.parametrize("name", ["hurwitz:1", "hurwitz:2", "hurwitz:3", "cross:3", "cross:7", "so3_killing",
                                  "c_epsilon:1/5", "zero", "two_step_double"])
def test_expected_constant_sect(name):
    M = presets.build(name)
    assert sec.constant_sect(M) == M.meta["expected"]["constant_sect"]


def test_composition_checks():
    for level in range(4):
        M = presets.hurwitz(level)
        assert presets.composition_check(M.algebra, M.meta["norm_form"]).passed
    P = presets.para_hurwitz(3)
    assert presets.composition_check(P.algebra, P.form, check_invariance=True).passed
    assert not presets.composition_check(presets.c_epsilon(1).algebra, presets.c_epsilon(1).form).passed


def test_okubo_is_flexible_not_unital():
    A = presets.okubo_compact().algebra
    assert ident.check_identity(A, "flexible").passed
    assert not ident.check_identity(A, "associative").passed


@pytest.mark.parametrize("n", [4, 5, 6])
def test_e_algebra_killing_and_sign(n):
    M = presets.build(f"e_algebra:{n}")
    assert presets.e_algebra_killing_formula(n) == M.form
    assert sec.constant_sect(M) < 0 and M.meta["expected"]["sect_sign"] == -1


def test_random_algebra_reproducible():
    assert presets.random_algebra(5) == presets.random_algebra(5)
    assert presets.random_algebra(5) != presets.random_algebra(6)
    with pytest.raises(AlgebraError):
        presets.random_metrized(1, 3, "weird")


def test_with_product_keeps_metric():
    M = presets.with_product(presets.r3_star(), "bracket")
    assert M.form == presets.r3_star().form and M.meta["name"].endswith("[bracket]")
