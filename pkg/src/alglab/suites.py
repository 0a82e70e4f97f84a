"""Reproduction suites: each returns a report with one entry per check.

A check records what was expected, what was observed, and whether it passed.
Suites are deterministic for a fixed seed, so their reports are reproducible.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import identities as ident
from . import presets
from . import sectional as sec
from . import special as sp
from .core import AlgebraError
from .numeric import RATIONAL, snap_rational

TOL = 1e-9


def check(name: str, passed: bool, expected: Any = None, observed: Any = None, **extra) -> dict:
    out = {"check": name, "passed": bool(passed), "expected": expected, "observed": observed}
    out.update(extra)
    return out


def summarize(suite: str, checks: list[dict], params: dict | None = None, notes: list | None = None) -> dict:
    failed = [c["check"] for c in checks if not c["passed"]]
    rep = {"suite": suite, "params": params or {}, "passed": not failed, "failed": failed, "checks": checks}
    if notes:
        rep["notes"] = notes
    return rep


def _close_sets(a: list[float], b: list[float], tol: float) -> bool:
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(sorted(a), sorted(b)))


# --- Table of idempotents and square-zero elements of C_eps ---------------------------------

def table1_expected(eps: Fraction) -> dict:
    """Real idempotents, square-zero rays, and spectra of ``C_eps`` from the closed forms."""
    eps = Fraction(eps)
    if eps < 0 or eps == Fraction(1, 2):
        raise AlgebraError("the table covers eps >= 0 with eps != 1/2")
    e = float(eps)
    idem = [{"x": [1.0, 0.0, 0.0], "norm": Fraction(1), "spectrum": sorted({1.0, 0.5 - e, 0.5 + e})}]
    w2 = 4 * eps / (2 * eps - 1)
    if w2 > 0:
        w, s = math.sqrt(w2), 1 / (1 - 2 * e)
        norm = (1 - 6 * eps) / (1 - 2 * eps) ** 3
        for sgn in (1, -1):
            idem.append({"x": [s, s * sgn * w, 0.0], "norm": norm,
                         "spectrum": sorted({1.0, 0.5 * (1 + 2 * e) / (1 - 2 * e)})})
    w2 = 4 * eps / (1 + 2 * eps)
    if w2 > 0:
        w, s = math.sqrt(w2), 1 / (1 + 2 * e)
        norm = (1 + 6 * eps) / (1 + 2 * eps) ** 3
        for sgn in (1, -1):
            idem.append({"x": [s, 0.0, s * sgn * w], "norm": norm,
                         "spectrum": sorted({1.0, 0.5 * (1 - 2 * e) / (1 + 2 * e)})})
    rays = []
    w2 = 4 * eps**2 - 1
    if w2 > 0:
        c = math.sqrt(w2) / (1 + 2 * e)
        for sgn in (1, -1):
            rays.append({"x": [0.0, 1.0, sgn * c], "norm": 4 * eps / (1 + 2 * eps)})
    return {"idempotents": idem, "square_zero": rays,
            "orthogonal_spectrum_f0": [Fraction(1, 2) - eps, Fraction(1, 2) + eps]}


def _match(found: list[np.ndarray], expected: list[list[float]], tol: float, rays: bool = False) -> bool:
    if len(found) != len(expected):
        return False
    used = set()
    for ex in expected:
        ex = np.asarray(ex)
        if rays:
            ex = ex / np.linalg.norm(ex)
        hit = None
        for k, f in enumerate(found):
            if k in used:
                continue
            cands = (f, -f) if rays else (f,)
            if any(np.abs(c - ex).max() <= tol for c in cands):
                hit = k
                break
        if hit is None:
            return False
        used.add(hit)
    return True


def table1(eps=Fraction(1), cfg: sp.SearchConfig | None = None) -> dict:
    eps = Fraction(eps)
    exp = table1_expected(eps)
    M = presets.c_epsilon(eps)
    checks = []
    idem = sp.find_idempotents(M, cfg)
    checks.append(check("idempotent count", len(idem) == len(exp["idempotents"]),
                        len(exp["idempotents"]), len(idem)))
    checks.append(check("idempotent coordinates", _match(idem.elements, [d["x"] for d in exp["idempotents"]], 1e-9),
                        [d["x"] for d in exp["idempotents"]], [e.tolist() for e in idem.elements]))
    exp_norms = sorted(d["norm"] for d in exp["idempotents"])
    obs_norms = sorted((n for n in idem.exact_norms if n is not None))
    checks.append(check("idempotent norms (exact after snapping)",
                        None not in idem.exact_norms and obs_norms == exp_norms, exp_norms, idem.exact_norms))
    checks.append(check("idempotent residuals", all(r <= TOL for r in idem.residuals), f"<= {TOL}", idem.residuals))
    spec_ok = True
    for d in exp["idempotents"]:
        for e, spec in zip(idem.elements, idem.spectra):
            if np.abs(e - np.asarray(d["x"])).max() <= 1e-9:
                distinct = sorted({round(float(np.real(v)), 9) for v in spec})
                spec_ok &= _close_sets(distinct, d["spectrum"], 1e-8)
    checks.append(check("spectra of L(x)", spec_ok, [d["spectrum"] for d in exp["idempotents"]], idem.spectra))

    sqz = sp.find_square_zero(M, cfg)
    checks.append(check("square-zero ray count", len(sqz) == len(exp["square_zero"]), len(exp["square_zero"]), len(sqz)))
    checks.append(check("square-zero rays", _match(sqz.elements, [d["x"] for d in exp["square_zero"]], 1e-9, rays=True),
                        [d["x"] for d in exp["square_zero"]], [e.tolist() for e in sqz.elements]))
    exp_sz = sorted(d["norm"] for d in exp["square_zero"])
    checks.append(check("square-zero norm with unit f1 coefficient",
                        None not in sqz.exact_norms and sorted(sqz.exact_norms) == exp_sz, exp_sz, sqz.exact_norms))

    spec = sp.orthogonal_spectrum(M, [1, 0, 0])
    snapped = [snap_rational(v) for v in spec]
    checks.append(check("orthogonal spectrum of f0", snapped == sorted(exp["orthogonal_spectrum_f0"]),
                        exp["orthogonal_spectrum_f0"], snapped))
    return summarize("table1", checks, {"eps": eps})


# --- Hermitian bounds ---------------------------------------------------------------------

def herm_witness(n: int, level: int):
    M = presets.herm(n, level)
    x = presets.herm_element(M, {(1, 1): 1, (n, n): -1})
    y = presets.herm_element(M, {(1, n): 1})
    return M, x, y


def herm_bounds(n: int = 3, level: int = 0, cfg: sec.OptimizerConfig | None = None, samples: int = 100_000) -> dict:
    cfg = cfg or sec.OptimizerConfig()
    M, x, y = herm_witness(n, level)
    half = Fraction(n, 2)
    checks = []
    s = sec.sect(M, x, y)
    checks.append(check("sect(e11 - enn, e1n + en1) = n/2 exactly", s == half, half, s))
    rep = sec.estimate_extrema(M, cfg)
    checks.append(check("bwl in [-1e-9, 1e-3]", -TOL <= rep.bwl <= 1e-3, [-TOL, 1e-3], rep.bwl))
    checks.append(check("bwu in [n/2 - 1e-3, n/2 + 1e-9]", float(half) - 1e-3 <= rep.bwu <= float(half) + TOL,
                        [float(half) - 1e-3, float(half) + TOL], rep.bwu))
    vals = sec.sample_sect(M, samples, cfg.seed)
    checks.append(check("sampled sect >= -1e-9 (Norton lower bound)", float(vals.min()) >= -TOL, -TOL, float(vals.min())))
    checks.append(check("sampled sect <= n/2 + 1e-9", float(vals.max()) <= float(half) + TOL,
                        float(half) + TOL, float(vals.max())))
    return summarize("herm-bounds", checks, {"n": n, "level": level, "samples": samples, "config": _cfg_echo(cfg)},
                     [{"extrema": rep.as_dict()}])


def _cfg_echo(cfg: sec.OptimizerConfig) -> dict:
    d = cfg.as_dict()
    d.pop("threads", None)
    return d


# --- Boettcher-Wenzel constants --------------------------------------------------------------

def bw_expected(n: int, level: int) -> int:
    return presets.REGISTRY["matrix_lie"].expected({"n": n, "level": level})["bw"]


def bw_mat(n: int = 2, level: int = 1, cfg: sec.OptimizerConfig | None = None) -> dict:
    cfg = cfg or sec.OptimizerConfig()
    M = presets.matrix_lie(n, level)
    bw = bw_expected(n, level)
    rep = sec.bw_constant(M.algebra, M.form, cfg)
    ex = rep.extra
    checks = [
        check("sup ratio attains bw within 1e-3", rep.bwu >= bw - 1e-3, bw, rep.bwu),
        check("optimized ratio never exceeds bw + 1e-9", ex["optimized_ratio"] <= bw + TOL, bw, ex["optimized_ratio"]),
        check("sampled ratio never exceeds bw + 1e-9",
              ex["sampled_max_ratio"] is None or ex["sampled_max_ratio"] <= bw + TOL, bw, ex["sampled_max_ratio"]),
        check("both sup forms agree within 1e-6", ex["gap"] <= 1e-6, 0.0, ex["gap"]),
    ]
    if level >= 2:
        x = [0] * M.dim
        y = [0] * M.dim
        d = 2**level
        for i in range(n):
            x[(i * n + i) * d + 1] = 1
            y[(i * n + i) * d + 2] = 1
        r1, r2 = sec.bracket_ratio(M.algebra, M.form, x, y)
        checks.append(check("witness (iI, jI) ratio = 4", r1 == 4 and r2 == 4, 4, [r1, r2]))
    return summarize("bw-mat", checks, {"n": n, "level": level, "config": _cfg_echo(cfg)}, [{"bw": rep.as_dict()}])


def bw_lie(M, expected, cfg: sec.OptimizerConfig | None = None, tol: float = 1e-3) -> dict:
    """bw of a preset bracket algebra against an expected value."""
    cfg = cfg or sec.OptimizerConfig()
    rep = sec.bw_constant(M.algebra, M.form, cfg)
    checks = [
        check("sup ratio equals expected value", abs(rep.bwu - float(expected)) <= tol, expected, rep.bwu),
        check("both sup forms agree within 1e-6", rep.extra["gap"] <= 1e-6, 0.0, rep.extra["gap"]),
    ]
    return summarize("bw", checks, {"algebra": M.meta.get("name"), "config": _cfg_echo(cfg)}, [{"bw": rep.as_dict()}])


# --- symmetric composition algebras -------------------------------------------------------

def symmetric_composition(samples: int = 100_000, seed: int = sec.DEFAULT_SEED, points: int = 100) -> dict:
    checks = []
    rng = np.random.default_rng(np.random.SeedSequence([seed, 51]))
    for name in ("para_hurwitz", "okubo_compact"):
        M = presets.build(name)
        comp = presets.composition_check(M.algebra, M.form, check_invariance=True)
        checks.append(check(f"{name}: composition law and invariance", comp.passed and float(comp.max_defect) <= TOL,
                            f"<= {TOL}", float(comp.max_defect)))
        vals = sec.sample_sect(M, samples, seed)
        checks.append(check(f"{name}: sampled sect in [-1, 1]",
                            float(vals.min()) >= -1 - TOL and float(vals.max()) <= 1 + TOL,
                            [-1, 1], [float(vals.min()), float(vals.max())]))
    M = presets.para_hurwitz(3).to_float()
    H = M.form.float_array
    e = np.asarray(M.meta["idempotent"], dtype=float)
    worst = 0.0
    for _ in range(points):
        x = rng.standard_normal(M.dim)
        x = x - (x @ H @ e) / (e @ H @ e) * e
        worst = max(worst, abs(sec.sect(M, e, x) + 1))
    checks.append(check("para-octonions: sect(e, x) = -1 for x orthogonal to e", worst <= TOL, -1, f"max |sect + 1| = {worst:.3g}"))
    M = presets.okubo_compact()
    A, H = M.algebra, M.form.float_array
    worst_id = worst_flex = 0.0
    for _ in range(points):
        x, y = rng.standard_normal(8), rng.standard_normal(8)
        b = A.mul_w(x, y) - A.mul_w(y, x)
        gram = (x @ H @ x) * (y @ H @ y) - (x @ H @ y) ** 2
        worst_id = max(worst_id, abs(sec.sect(M, x, y) + 1 - (b @ H @ b) / gram))
        worst_flex = max(worst_flex, float(np.abs(A.mul_w(A.mul_w(x, y), x) - 0.5 * (x @ H @ x) * y).max()))
    checks.append(check("Okubo: sect + 1 = |[x,y]|^2 / gram", worst_id <= TOL, 0.0, worst_id))
    checks.append(check("Okubo: (x y) x = h(x,x) y / 2", worst_flex <= TOL, 0.0, worst_flex))
    return summarize("symmetric-composition", checks, {"samples": samples, "seed": seed, "points": points})


# --- identity battery -----------------------------------------------------------------------

IDENTITY_BATTERY = (
    ("octonions", lambda: presets.hurwitz(3).algebra, {"alternative": True, "flexible": True, "associative": False}),
    ("kosier", lambda: presets.kosier().algebra, {"antiflexible": True, "fourth_power_associative": False}),
    ("herm(3, O)", lambda: presets.herm(3, 3).algebra, {"jordan": True}),
    ("Im O commutator", presets.imaginary_octonion_bracket, {"malcev": True, "lie_admissible": False}),
)


def identity_battery(battery=IDENTITY_BATTERY) -> dict:
    checks = []
    for label, make, expect in battery:
        A = make()
        for name, want in expect.items():
            rep = ident.check_identity(A, name)
            exact = A.mode == RATIONAL
            ok = rep.passed == want and exact and (want or rep.witness is not None)
            checks.append(check(f"{label}: {'passes' if want else 'fails'} {name}", ok,
                                want, rep.passed, defect=rep.max_defect, witness=rep.witness,
                                element_witness=rep.element_witness))
    return summarize("identities", checks)


# --- curvature property suite ----------------------------------------------------------------

def _rational_plane(rng, n):
    while True:
        x = [Fraction(int(v)) for v in rng.integers(-3, 4, size=n)]
        y = [Fraction(int(v)) for v in rng.integers(-3, 4, size=n)]
        if any(x[i] * y[j] != x[j] * y[i] for i in range(n) for j in range(n)):
            return x, y


def bianchi(count: int = 20, seed: int = sec.DEFAULT_SEED, n: int = 3) -> dict:
    """Curvature identities on ``count`` seeded random rational algebras, all exact."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, 61]))
    fails: dict[str, list] = {k: [] for k in
                              ("bianchi", "projection", "flexible_symmetric", "lie_admissible_projection",
                               "prepoisson", "sect_split")}
    for t in range(count):
        s = seed + t
        A = presets.random_algebra(s, n)
        if max(ident.bianchi_defects(A)) != 0:
            fails["bianchi"].append(s)
        if ident.prepoisson_defect(A) != 0:
            fails["prepoisson"].append(s)
        kind = presets.RANDOM_KINDS[t % 3]
        M = presets.random_metrized(s, n, kind)
        flat = ident.curvature_flat(M)
        P, Q = ident.project_curvature(flat)
        P2, Q2 = ident.project_curvature(P)
        if not ((P + Q).equals(flat) and P2.equals(P) and Q2.is_zero()):
            fails["projection"].append(s)
        if ident.check_identity(M.algebra, "flexible").passed:
            Rl, Rr = ident.curvature_tensors(M.algebra)
            if not (Rl - Rr).is_zero():
                fails["flexible_symmetric"].append(s)
        if ident.check_identity(M.algebra, "lie_admissible").passed != Q.is_zero():
            fails["lie_admissible_projection"].append(s)
        x, y = _rational_plane(rng, n)
        try:
            lhs = 4 * sec.sect(M, x, y)
            sym, br = sec.sect_split(M, x, y)
            if lhs != sym + br:
                fails["sect_split"].append(s)
        except sec.DegeneratePlane:
            pass
    labels = {
        "bianchi": "differential Bianchi analogues vanish",
        "projection": "P + Q = Id and P^2 = P on the curvature tensor",
        "flexible_symmetric": "flexible implies R = Rbar",
        "lie_admissible_projection": "Lie-admissible iff Q(R + Rbar) = 0",
        "prepoisson": "prepoisson identity",
        "sect_split": "4 sect = sect_sym + sect_bracket",
    }
    checks = [check(labels[k], not v, "exact zero on every sample", {"failing_seeds": v}) for k, v in fails.items()]
    return summarize("bianchi", checks, {"count": count, "seed": seed, "n": n})


# --- consequences of nonnegative / nonpositive sect -------------------------------------------

def _sect_against(C: np.ndarray, H: np.ndarray, e: np.ndarray, X: np.ndarray) -> np.ndarray:
    """sect(e, x) for each row x of X (float)."""
    ee = np.einsum("i,j,ijk->k", e, e, C)
    XX = np.einsum("si,sj,ijk->sk", X, X, C)
    EX = np.einsum("i,sj,ijk->sk", e, X, C)
    XE = np.einsum("si,j,ijk->sk", X, e, C)
    num = XX @ H @ ee - np.einsum("sk,kl,sl->s", EX, H, XE)
    gram = (e @ H @ e) * np.einsum("si,ij,sj->s", X, H, X) - (X @ H @ e) ** 2
    return num / gram


def _eigensect_check(M, e, rng, count: int) -> float:
    """Largest ``4 sect(e, x) - 1/h(e, e)`` over random x."""
    C, H = M.algebra.float_tensor, M.form.float_array
    X = rng.standard_normal((count, M.dim))
    return float((4 * _sect_against(C, H, e, X) - 1.0 / float(e @ H @ e)).max())


def norton(herm_cases=((2, 0), (3, 0), (3, 1)), e_dims=(4, 5, 6), seed: int = sec.DEFAULT_SEED,
           points: int = 200, cfg: sp.SearchConfig | None = None) -> dict:
    """Structure consequences for nonnegative (Herm) and nonpositive (E-algebra) sect."""
    cfg = cfg or sp.SearchConfig(seed=seed)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 71]))
    checks = []
    for n, level in herm_cases:
        M = presets.herm(n, level)
        idem = sp.find_idempotents(M, cfg)
        spec_lo, spec_hi, eig = np.inf, -np.inf, -np.inf
        for e in idem.elements:
            spec = sp.orthogonal_spectrum(M, e)
            re = [float(np.real(v)) for v in spec]
            if re:
                spec_lo, spec_hi = min(spec_lo, min(re)), max(spec_hi, max(re))
            eig = max(eig, _eigensect_check(M, e, rng, points))
        label = f"herm({n},{level})"
        checks.append(check(f"{label}: idempotents found", len(idem) > 0, "> 0", len(idem)))
        checks.append(check(f"{label}: orthogonal spectra in [0, 1]", spec_lo >= -TOL and spec_hi <= 1 + TOL,
                            [0, 1], [spec_lo, spec_hi]))
        checks.append(check(f"{label}: 4 sect(e, x) <= 1/h(e, e)", eig <= TOL, f"<= {TOL}", eig))
    sqz = sp.find_square_zero(presets.herm(3, 0), cfg)
    checks.append(check("herm(3,0): no square-zero elements", len(sqz) == 0, 0, len(sqz)))
    for n in e_dims:
        M = presets.e_algebra(n)
        st = sp.structural_report(M)
        c = sec.constant_sect(M)
        checks.append(check(f"e_algebra({n}): exact", st.exact, True, st.exact))
        checks.append(check(f"e_algebra({n}): certified constant negative sect", c is not None and c < 0,
                            "c < 0", c))
        idem = sp.find_idempotents(M, cfg)
        inside = []
        for e in idem.elements:
            try:
                spec = sp.orthogonal_spectrum(M, e)
            except AlgebraError:
                continue
            inside += [v for v in spec if isinstance(v, float) and 1e-6 < v < 1 - 1e-6]
        checks.append(check(f"e_algebra({n}): orthogonal spectra avoid (0, 1)", not inside, [], inside))
        sqz = sp.find_square_zero(M, cfg)
        checks.append(check(f"e_algebra({n}): square-zero z has sect(z, y) <= 0", _square_zero_ok(M, sqz, rng, points),
                            "sect <= 1e-9, zero iff z y = 0", len(sqz)))
    return summarize("norton", checks, {"herm": [list(c) for c in herm_cases], "e_algebra": list(e_dims),
                                        "seed": seed, "points": points})


def _square_zero_ok(M, sqz, rng, points: int) -> bool:
    C, H = M.algebra.float_tensor, M.form.float_array
    for z in sqz.elements:
        X = rng.standard_normal((points, M.dim))
        s = _sect_against(C, H, z, X)
        zy = np.linalg.norm(np.einsum("i,sj,ijk->sk", z, X, C), axis=1)
        if s.max() > TOL or np.any((np.abs(s) <= 1e-12) != (zy <= 1e-6)):
            return False
    return True


# --- Chern-do Carmo-Kobayashi ---------------------------------------------------------------

def cdk(samples: int = 10_000, seed: int = sec.DEFAULT_SEED, exploratory_samples: int = 2000) -> dict:
    checks = []
    lhs, mid = sec.cdk_equality_witness(3, 0)
    checks.append(check("herm(3,R): equality at e11 - e33, e13 + e31", lhs == 8 and mid == 8, [8, 8], [lhs, mid]))
    X = np.zeros((1, 3, 3, 1))
    Y = np.zeros((1, 3, 3, 1))
    X[0, [0, 1, 2], [0, 1, 2], 0] = [1, 2, 3]
    Y[0, [0, 1, 2], [0, 1, 2], 0] = [-1, 0, 5]
    l, m, r = sec.cdk_terms(X, Y, 0)
    checks.append(check("commuting diagonal pair", l[0] == 0 and 0 <= m[0] <= r[0], "0 <= bound",
                        [float(l[0]), float(m[0])]))
    for level in (0, 1, 2):
        rep = sec.cdk_verify(3, level, samples, seed)
        checks.append(check(f"herm(3, level {level}): inequality on samples", rep.passed, 0, rep.violations,
                            max_ratio=rep.max_ratio))
    rep = sec.cdk_verify(3, 3, samples, seed)
    checks.append(check("herm(3,O) with diagonal x: inequality on samples", rep.passed, 0, rep.violations,
                        max_ratio=rep.max_ratio))
    notes = []
    if exploratory_samples:
        ex = sec.cdk_verify(3, 3, exploratory_samples, seed, diagonal=False)
        notes.append({"exploratory": "herm(3,O) with non-diagonal x; no claim either way",
                      "violations": ex.violations, "max_ratio": ex.max_ratio, "samples": exploratory_samples})
    return summarize("cdk", checks, {"samples": samples, "seed": seed}, notes)


SUITES: dict[str, Callable[..., dict]] = {
    "table1": table1,
    "herm-bounds": herm_bounds,
    "bw-mat": bw_mat,
    "symmetric-composition": symmetric_composition,
    "identities": identity_battery,
    "bianchi": bianchi,
    "norton": norton,
    "cdk": cdk,
}
