from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alglab import presets
from alglab.core import (Algebra, AlgebraError, BilinearForm, MetricError, MetrizedAlgebra, associator, check_metric,
                         compose, derived_algebra, killing_form, multiply, trace_form_of_left)
from alglab.numeric import FLOAT, RATIONAL, QArray, einsum, format_rational, parse_rational, snap_rational

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)


@given(fractions)
def test_rational_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


@pytest.mark.parametrize("bad", ["2/4", "1/0", "x", "1.5/2"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(st.lists(fractions, min_size=4, max_size=4), st.lists(fractions, min_size=4, max_size=4))
def test_qarray_matches_fractions(a, b):
    A, B = QArray.from_values(np.array(a, dtype=object)), QArray.from_values(np.array(b, dtype=object))
    assert list((A + B).to_fractions()) == [x + y for x, y in zip(a, b)]
    assert list((A - B).to_fractions()) == [x - y for x, y in zip(a, b)]
    assert einsum("i,i->", A, B) == sum(x * y for x, y in zip(a, b))


def test_snap_rational():
    assert snap_rational(1 / 3) == Fraction(1, 3)
    assert snap_rational(np.pi) is None


def test_algebra_validation():
    with pytest.raises(AlgebraError):
        Algebra(2, [(0, 0, 2, 1)])
    with pytest.raises(AlgebraError):
        Algebra(2, [(0, 0, 0, 1), (0, 0, 0, 2)])
    with pytest.raises(AlgebraError):
        Algebra(0, [])


def test_from_tensor_roundtrip():
    A = presets.hurwitz(2).algebra
    assert Algebra.from_tensor(A.tensor) == A


def test_quaternion_products():
    A = presets.hurwitz(2).algebra
    i, j, k = A.basis(1), A.basis(2), A.basis(3)
    assert list(multiply(A, i.to_fractions(), j.to_fractions())) == list(k.to_fractions())
    assert all(v == 0 for v in associator(A, [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]))


def test_octonion_associator_nonzero():
    A = presets.hurwitz(3).algebra
    e = [A.basis(i).to_fractions() for i in range(8)]
    assoc = associator(A, e[1], e[2], e[4])
    assert any(v != 0 for v in assoc)


def test_metric_checks():
    M = presets.c_epsilon(Fraction(1, 3))
    rep = check_metric(M.algebra, M.form)
    assert rep.invariant and rep.nondegenerate and rep.definiteness == "positive"
    bad = BilinearForm(np.array([[Fraction(1), 0, 0], [0, Fraction(2), 0], [0, 0, Fraction(1)]], dtype=object))
    with pytest.raises(MetricError):
        MetrizedAlgebra(M.algebra, bad)
    assert not MetrizedAlgebra(M.algebra, bad, strict=False).metric_invariant


def test_kosier_metric_indefinite():
    M = presets.kosier()
    assert M.metric_invariant and M.report.definiteness == "indefinite"


def test_so3_metric_is_minus_killing():
    # -Killing = 2 I, twice the cross-product metric: this halves sect to 1/2
    M = presets.so3_killing()
    assert killing_form(M.algebra).scaled(-1) == M.form
    assert M.form == BilinearForm.identity(3).scaled(2)


def test_derived_and_compose():
    A = presets.hurwitz(2).algebra
    br = derived_algebra(A, "bracket")
    sym = derived_algebra(A, "symmetrized")
    assert derived_algebra(A, "adjoint").dim == 4
    x, y = [1, 2, 0, -1], [0, 1, 3, 1]
    xy, yx = multiply(A, x, y), multiply(A, y, x)
    assert list(multiply(br, x, y)) == list(xy - yx)
    assert list(multiply(sym, x, y)) == list(xy + yx)
    with pytest.raises(AlgebraError):
        derived_algebra(A, "nope")
    C = presets.hurwitz(1)
    assert compose("direct_sum", C, C).dim == 4
    assert compose("tensor_product", C, C).metric_invariant


def test_exactness_trace():
    assert all(v == 0 for v in trace_form_of_left(presets.cross(7).algebra).to_fractions())
    assert any(v != 0 for v in trace_form_of_left(presets.herm(3, 0).algebra).to_fractions())


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(presets.RANDOM_KINDS))
def test_random_metrized_is_invariant(seed, kind):
    M = presets.random_metrized(seed, 3, kind)
    assert M.metric_invariant and M.euclidean
    C = M.algebra.tensor.to_fractions()
    if kind == "commutative":
        assert np.all(C == C.transpose(1, 0, 2))
    if kind == "anticommutative":
        assert np.all(C == -C.transpose(1, 0, 2))


def test_float_mode():
    Mf = presets.herm(3, 1).to_float()
    assert Mf.mode == FLOAT and Mf.metric_invariant
    assert presets.herm(3, 1).mode == RATIONAL
