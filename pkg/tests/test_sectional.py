from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alglab import presets
from alglab import sectional as sec
from alglab.core import AlgebraError

small = st.integers(-3, 3)
vec3 = st.lists(small, min_size=3, max_size=3)


def test_sect_herm_witness_exact():
    M = presets.herm(3, 0)
    x = presets.herm_element(M, {(1, 1): 1, (3, 3): -1})
    y = presets.herm_element(M, {(1, 3): 1})
    assert sec.sect(M, x, y) == Fraction(3, 2)


def test_sect_errors():
    M = presets.c_epsilon(0)
    with pytest.raises(sec.LinearDependence):
        sec.sect(M, [1, 0, 0], [2, 0, 0])
    # a null plane of an indefinite metric
    K = presets.two_step_double()
    with pytest.raises(sec.DegeneratePlane):
        sec.sect(K, [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0])


@settings(max_examples=25, deadline=None)
@given(vec3, vec3, st.integers(1, 3), st.integers(-3, 3))
def test_sect_depends_only_on_plane(x, y, a, b):
    """sect(x, y) is unchanged by (x, y) -> (a x, b x + y) with a != 0."""
    M = presets.c_epsilon(Fraction(1, 3))
    try:
        s = sec.sect(M, x, y)
    except AlgebraError:
        return
    x2 = [a * v for v in x]
    y2 = [b * u + v for u, v in zip(x, y)]
    assert sec.sect(M, x2, y2) == s


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 1000), vec3, vec3)
def test_sect_split_identity(seed, x, y):
    M = presets.random_metrized(seed, 3, "generic")
    try:
        s = sec.sect(M, x, y)
    except AlgebraError:
        return
    sym, br = sec.sect_split(M, x, y)
    assert 4 * s == sym + br


def test_constant_sect_none_for_herm():
    assert sec.constant_sect(presets.herm(3, 0)) is None


def test_constant_sect_zero_algebra():
    assert sec.constant_sect(presets.zero(3)) == 0


def test_constant_sect_matches_sampled():
    M = presets.c_epsilon(Fraction(1, 5))
    vals = sec.sample_sect(M, 1000)
    assert np.allclose(vals, float(sec.constant_sect(M)), atol=1e-9)


def test_extrema_requires_euclidean():
    with pytest.raises(sec.NotEuclidean):
        sec.estimate_extrema(presets.kosier(), sec.OptimizerConfig(starts=2))


def test_extrema_herm2():
    rep = sec.estimate_extrema(presets.herm(2, 0), sec.OptimizerConfig(starts=16))
    assert abs(rep.bwu - 1.0) < 1e-6 and abs(rep.bwl) < 1e-6
    assert abs(sec.sect(presets.herm(2, 0).to_float(), rep.witness_high.x, rep.witness_high.y) - rep.bwu) < 1e-12


def test_bw_grad_matches_finite_differences():
    frame = sec.orthonormalize(presets.matrix_lie(2, 1).algebra, presets.matrix_lie(2, 1).form)
    rng = np.random.default_rng(3)
    x, y = rng.standard_normal(frame.n), rng.standard_normal(frame.n)
    for gram in (False, True):
        _, gx, _ = sec.bw_value_and_grad(frame.C, x, y, gram)
        h = 1e-6
        fd = [(sec.bw_value_and_grad(frame.C, x + h * e, y, gram)[0]
               - sec.bw_value_and_grad(frame.C, x - h * e, y, gram)[0]) / (2 * h) for e in np.eye(frame.n)]
        assert np.allclose(fd, gx, rtol=1e-5, atol=1e-8)


def test_bw_rejects_indefinite():
    K = presets.kosier()
    with pytest.raises(sec.NotPositiveDefinite):
        sec.bw_constant(K.algebra, K.form, sec.OptimizerConfig(starts=2, samples=10))


def test_bracket_ratio_exact():
    M = presets.matrix_lie(2, 1)
    x = [0] * M.dim
    y = [0] * M.dim
    # E12 and E21 (real parts) commute to diag(1, -1)
    x[(0 * 2 + 1) * 2] = 1
    y[(1 * 2 + 0) * 2] = 1
    r1, r2 = sec.bracket_ratio(M.algebra, M.form, x, y)
    assert r1 == 2 and r2 == 2


def test_cdk_witness_and_guards():
    assert sec.cdk_equality_witness(3) == (8.0, 8.0)
    with pytest.raises(AlgebraError):
        sec.cdk_verify(4, 3, 10)
    rep = sec.cdk_verify(3, 1, 500)
    assert rep.passed and rep.max_ratio <= 1 + 1e-9


def test_extrema_deterministic_for_seed():
    cfg = sec.OptimizerConfig(starts=8, seed=11)
    a = sec.estimate_extrema(presets.herm(3, 0), cfg).as_dict()
    b = sec.estimate_extrema(presets.herm(3, 0), sec.OptimizerConfig(starts=8, seed=11, threads=4)).as_dict()
    assert a == b


def test_so4_self_dual_witness():
    # a self-dual pair attains the sup squared ratio 1 on so(4)
    M = presets.so(4)
    L = M.algebra.labels
    x, y = [0] * 6, [0] * 6
    x[L.index("A12")] = x[L.index("A34")] = 1
    y[L.index("A13")], y[L.index("A24")] = 1, -1
    assert sec.bracket_ratio(M.algebra, M.form, x, y) == (1, 1)
