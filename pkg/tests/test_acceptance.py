"""Acceptance criteria, one test per sub-check.

Each test records a PASS/FAIL line (shown in the terminal summary) and asserts.
Checks whose documented target disagrees with the exact mathematics are recorded
as FAIL and marked ``xfail(strict=True)`` so the discrepancy stays visible.
"""

from __future__ import annotations

import io
from contextlib import redirect_stdout
from fractions import Fraction

import numpy as np
import pytest

from alglab import presets, suites
from alglab import sectional as sec
from alglab.cli import run_cli
from alglab.core import AlgebraError


def _suite_checks(rep: dict, criterion: int, acceptance) -> None:
    for c in rep["checks"]:
        acceptance(criterion, f"{rep['suite']} {rep.get('params', {}).get('eps', '')} {c['check']}".replace("  ", " "),
                   c["passed"], c["observed"] if not c["passed"] else "")
    assert rep["passed"], rep["failed"]


# --- 1. exact constant sect ----------------------------------------------------------------

@pytest.mark.parametrize("eps", ["0", "3/10", "1", "2"])
def test_c1_c_epsilon(eps, acceptance):
    e = Fraction(eps)
    c = sec.constant_sect(presets.c_epsilon(e))
    assert acceptance(1, f"c_epsilon({eps}) constant sect = 1/4 - eps^2", c == Fraction(1, 4) - e * e, c)


@pytest.mark.parametrize("level", [1, 2, 3])
def test_c1_hurwitz(level, acceptance):
    c = sec.constant_sect(presets.hurwitz(level))
    assert acceptance(1, f"hurwitz({level}) constant sect = 0", c == 0, c)


def test_c1_hurwitz_real_is_vacuous(acceptance):
    # the reals are one-dimensional: there are no planes, so there is nothing to certify
    M = presets.hurwitz(0)
    with pytest.raises(AlgebraError):
        sec.constant_sect(M)
    acceptance(1, "hurwitz(0) constant sect: dim 1, no planes (vacuous)", M.dim == 1)


@pytest.mark.parametrize("n", [3, 7])
def test_c1_cross(n, acceptance):
    c = sec.constant_sect(presets.cross(n))
    assert acceptance(1, f"cross({n}) constant sect = 1", c == 1, c)


@pytest.mark.xfail(strict=True, reason="so(3) with the Killing form has constant sect 1/2, not 1")
def test_c1_so3_killing(acceptance):
    c = sec.constant_sect(presets.so3_killing())
    assert acceptance(1, "so3_killing constant sect = 1 (exact value is 1/2)", c == 1, c)


def test_c1_so3_killing_exact_value(acceptance):
    c = sec.constant_sect(presets.so3_killing())
    assert acceptance(1, "so3_killing constant sect = 1/2 (derived)", c == Fraction(1, 2), c)


@pytest.mark.parametrize("kind,value", [("symmetrized", -1), ("bracket", 1)])
def test_c1_r3_star(kind, value, acceptance):
    c = sec.constant_sect(presets.with_product(presets.r3_star(), kind))
    assert acceptance(1, f"r3_star {kind} constant sect = {value}", c == value, c)


def test_c1_cli(acceptance):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run_cli(["constant-sect", "preset:c_epsilon:3/10"])
    assert acceptance(1, "CLI constant-sect c_epsilon(3/10) = 4/25", code == 0 and '"4/25"' in buf.getvalue())


# --- 2. Hermitian bounds ---------------------------------------------------------------------

@pytest.mark.parametrize("n,level", [(3, 0), (3, 1), (3, 2), (3, 3), (4, 0)])
def test_c2_herm_bounds(n, level, acceptance):
    rep = suites.herm_bounds(n, level, sec.OptimizerConfig(starts=64), samples=100_000)
    _suite_checks(rep, 2, acceptance)


# --- 3. Boettcher-Wenzel -----------------------------------------------------------------------

def test_c3_complex_matrices(acceptance):
    rep = suites.bw_mat(2, 1, sec.OptimizerConfig(samples=1_000_000))
    _suite_checks(rep, 3, acceptance)


def test_c3_quaternion_witness(acceptance):
    rep = suites.bw_mat(1, 2, sec.OptimizerConfig(samples=100_000))
    _suite_checks(rep, 3, acceptance)


@pytest.mark.xfail(strict=True, reason="so(4) with the trace form has sup ratio 1 (su(2) + su(2)), not 2")
def test_c3_so4_target(acceptance):
    rep = suites.bw_lie(presets.so(4), 2, sec.OptimizerConfig(samples=100_000))
    ok = acceptance(3, "so(4) sup ratio = 2 +- 1e-3 (observed value below)", rep["passed"], rep["checks"][0]["observed"])
    assert ok


def test_c3_so4_derived(acceptance):
    rep = suites.bw_lie(presets.so(4), 1, sec.OptimizerConfig(samples=100_000))
    _suite_checks(rep, 3, acceptance)


# --- 4. Table of special elements ----------------------------------------------------------------

def test_c4_table1(acceptance):
    rep = suites.table1(Fraction(1))
    _suite_checks(rep, 4, acceptance)


def test_c4_cli(acceptance):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run_cli(["verify", "table1", "--eps", "1"])
    assert acceptance(4, "CLI verify table1 --eps 1 exits 0", code == 0, code)


# --- 5. symmetric composition algebras ----------------------------------------------------------

def test_c5_symmetric_composition(acceptance):
    _suite_checks(suites.symmetric_composition(100_000), 5, acceptance)


# --- 6. identity battery -------------------------------------------------------------------------

def test_c6_identities(acceptance):
    _suite_checks(suites.identity_battery(), 6, acceptance)


# --- 7. curvature property suite ------------------------------------------------------------------

def test_c7_properties(acceptance):
    _suite_checks(suites.bianchi(20), 7, acceptance)


# --- 8. structure consequences ---------------------------------------------------------------------

def test_c8_norton(acceptance):
    _suite_checks(suites.norton(), 8, acceptance)


# --- 9. optimizer health ----------------------------------------------------------------------------

# constant-sect presets (c_epsilon, hurwitz) have zero gradient, so a relative check needs varying sect
@pytest.mark.parametrize("name", ["herm:3:0", "para_hurwitz:3", "okubo_compact"])
def test_c9_gradient(name, acceptance):
    frame = sec.orthonormalize(presets.build(name).to_float())
    rng = np.random.default_rng(9)
    h = 1e-5
    worst = 0.0
    for _ in range(100):
        x, y = rng.standard_normal(frame.n), rng.standard_normal(frame.n)
        _, gx, gy = sec.sect_value_and_grad(frame.C, x, y)
        g = np.concatenate([gx, gy])
        fd = np.empty_like(g)
        for k in range(2 * frame.n):
            d = np.zeros(2 * frame.n)
            d[k] = h
            fp = sec.sect_value_and_grad(frame.C, x + d[:frame.n], y + d[frame.n:])[0]
            fm = sec.sect_value_and_grad(frame.C, x - d[:frame.n], y - d[frame.n:])[0]
            fd[k] = (fp - fm) / (2 * h)
        worst = max(worst, float(np.linalg.norm(fd - g) / max(np.linalg.norm(g), 1e-12)))
    assert acceptance(9, f"{name}: analytic vs central-difference gradient <= 1e-6 relative", worst <= 1e-6,
                      f"{worst:.2e}")


def test_c9_thread_determinism(acceptance):
    outs = []
    for threads in (1, 4, 8):
        buf = io.StringIO()
        with redirect_stdout(buf):
            assert run_cli(["extrema", "herm:3:1", "--starts", "16", "--seed", "7", "--threads", str(threads)]) == 0
        outs.append(buf.getvalue().encode())
    assert acceptance(9, "extrema reports byte-identical at 1, 4, 8 threads", outs[0] == outs[1] == outs[2])
