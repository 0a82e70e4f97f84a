from fractions import Fraction

import numpy as np
import pytest

from alglab import presets
from alglab import special as sp
from alglab import suites
from alglab.core import AlgebraError

FAST = sp.SearchConfig(starts=64)


def test_r3_star_idempotents():
    found = sp.find_idempotents(presets.r3_star(), FAST)
    exact = sorted(tuple(v) for v in found.exact_elements)
    assert (1, 1, 1) in exact and len(exact) == 4
    assert all(n == 3 for n in found.exact_norms)
    assert max(found.residuals) < 1e-10


def test_herm2_spectrum():
    M = presets.herm(2, 0)
    e = presets.herm_element(M, {(1, 1): 1})
    assert sp.orthogonal_spectrum(M, e) == pytest.approx([0.0, 0.5])


def test_spectrum_guards():
    M = presets.c_epsilon(1)
    with pytest.warns(UserWarning):
        sp.orthogonal_spectrum(M, [1, 1, 0])
    # X is isotropic for the pairing metric of g + g*
    with pytest.raises(AlgebraError):
        sp.orthogonal_spectrum(presets.two_step_double(), [1, 0, 0, 0, 0, 0])


def test_herm3_structure():
    st = sp.structural_report(presets.herm(3, 0))
    assert not st.exact and st.faithful


def test_e_algebra_exact():
    assert sp.structural_report(presets.e_algebra(4)).exact


def test_herm3_no_square_zero():
    assert len(sp.find_square_zero(presets.herm(3, 0), FAST)) == 0


@pytest.mark.parametrize("eps", [Fraction(0), Fraction(1, 4), Fraction(2)])
def test_table_other_eps(eps):
    rep = suites.table1(eps)
    assert rep["passed"], rep["failed"]


def test_table_expected_guard():
    with pytest.raises(AlgebraError):
        suites.table1_expected(Fraction(1, 2))


def test_complex_square_zero_c0():
    found = sp.complexified_search(presets.c_epsilon(0), "square_zero", FAST)
    assert len(found) >= 1
    for info in found.exact_elements:
        assert info["sect"] == pytest.approx(info["predicted"], abs=1e-9)


def test_complex_search_needs_euclidean():
    with pytest.raises(AlgebraError):
        sp.complexified_search(presets.kosier(), "idempotent", FAST)


def test_search_deterministic():
    a = sp.find_idempotents(presets.c_epsilon(1), FAST).as_dict()
    b = sp.find_idempotents(presets.c_epsilon(1), FAST).as_dict()
    assert str(a) == str(b)


def test_idempotents_are_idempotent():
    M = presets.herm(3, 1).to_float()
    for e in sp.find_idempotents(presets.herm(3, 1), FAST).elements:
        assert np.allclose(M.algebra.mul_w(e, e), e, atol=1e-10)
