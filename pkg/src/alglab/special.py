"""Idempotents, square-zero elements, orthogonal spectra, and structural checks."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .core import AlgebraError, MetrizedAlgebra
from .numeric import FLOAT, FLOAT_TOL, RATIONAL, QArray, as_mode_array, einsum, snap_rational
from .sectional import DEFAULT_SEED, NotEuclidean, sect

ZERO_TOL = 1e-8
DEDUP_TOL = 1e-6
SNAP_TOLS = (1e-10, 1e-6)


@dataclass
class SearchConfig:
    starts: int = 256
    iterations: int = 100
    seed: int = DEFAULT_SEED
    tol: float = 1e-13
    descent_iterations: int = 60


@dataclass
class SpecialElementSet:
    kind: str
    elements: list
    residuals: list
    spectra: list
    norms: list
    exact_norms: list = field(default_factory=list)
    exact_elements: list = field(default_factory=list)
    histories: list = field(default_factory=list)
    exhaustive: bool = False

    def __len__(self) -> int:
        return len(self.elements)

    def as_dict(self) -> dict:
        conv = lambda v: v.tolist() if isinstance(v, np.ndarray) else v  # noqa: E731
        return {
            "kind": self.kind,
            "count": len(self.elements),
            "elements": [conv(e) if not isinstance(e, tuple) else [conv(p) for p in e] for e in self.elements],
            "residuals": self.residuals,
            "spectra": [conv(s) for s in self.spectra],
            "norms": self.norms,
            "exact_norms": self.exact_norms,
            "exact_elements": self.exact_elements,
            "exhaustive": self.exhaustive,
        }


class _FloatModel:
    """Float structure tensor and metric of a metrized algebra."""

    def __init__(self, M: MetrizedAlgebra):
        self.M = M
        self.C = M.algebra.float_tensor
        self.H = M.form.float_array
        self.n = M.dim

    def mul(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.C)

    def L(self, x):
        return np.einsum("i,ijk->kj", x, self.C)

    def R(self, y):
        return np.einsum("j,ijk->ki", y, self.C)

    def h(self, x, y):
        return float(x @ self.H @ y)

    def hnorm(self, x):
        return float(np.sqrt(abs(self.h(x, x))))


def _starts(model: _FloatModel, cfg: SearchConfig, rng, radii=(0.25, 0.5, 1.0, 2.0, 4.0)) -> list[np.ndarray]:
    """Points on the h-unit sphere (Euclidean) or the coordinate unit sphere, plus a grid when dim <= 3."""
    out = []
    for _ in range(cfg.starts):
        v = rng.standard_normal(model.n)
        s = model.h(v, v)
        out.append(v / np.sqrt(s) if s > 0 else v / np.linalg.norm(v))
    if model.n <= 3:
        out.extend(_sphere_grid(model, radii=radii))
    return out


def _sphere_grid(model: _FloatModel, count: int = 400, radii=(0.25, 0.5, 1.0, 2.0, 4.0)) -> list[np.ndarray]:
    """Fibonacci points on h-spheres of several radii, used for dim <= 3 completeness."""
    n = model.n
    if n == 1:
        base = [np.array([1.0]), np.array([-1.0])]
    elif n == 2:
        t = np.linspace(0, 2 * np.pi, count, endpoint=False)
        base = list(np.stack([np.cos(t), np.sin(t)], axis=1))
    else:
        k = np.arange(count) + 0.5
        phi = np.arccos(1 - 2 * k / count)
        theta = np.pi * (1 + 5**0.5) * k
        base = list(np.stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1))
    try:
        B = np.linalg.inv(np.linalg.cholesky(model.H).T)
    except np.linalg.LinAlgError:
        B = np.eye(n)
    return [r * (B @ p) for r in radii for p in base]


def _newton(F, J, x, cfg: SearchConfig):
    hist = []
    prev_step = None
    for _ in range(cfg.iterations):
        f = F(x)
        r = float(np.linalg.norm(f))
        hist.append(r)
        if not np.isfinite(r) or r > 1e8:
            return None, hist
        # minimum-norm step: equals the Newton step at regular roots and stays bounded on solution manifolds
        dx = -np.linalg.lstsq(J(x), f, rcond=1e-13)[0]
        t = 1.0
        while t > 1e-4 and not np.linalg.norm(F(x + t * dx)) < max(r, 1e-300) * (1 + 1e-12) and r > cfg.tol:
            t *= 0.5
        if t <= 1e-4:
            t = 1.0
        dx = t * dx
        scale = max(1.0, float(np.linalg.norm(x)))
        # at singular roots the residual is tiny long before the iterate is; also require a small step
        step = float(np.linalg.norm(dx))
        if r <= cfg.tol * scale and step <= 1e-12 * scale:
            return x, hist
        # step ratios near 1/2 signal a double root; the doubled step restores fast convergence
        if prev_step and 0.4 < step / prev_step < 0.6:
            x2 = x + 2 * dx
            if np.linalg.norm(F(x2)) < r:
                x, prev_step = x2, None
                continue
        prev_step = step
        x = x + dx
    return None, hist


def _dedup(points: list, model: _FloatModel, rays: bool = False) -> list:
    """Sort lexicographically then drop points within ``DEDUP_TOL`` (h-distance, or up to sign for rays)."""
    if rays:
        points = [_sign_normalize(p) for p in points]
    points = sorted(points, key=lambda p: tuple(np.round(p, 9)))
    kept: list = []
    for p in points:
        if all(_hdist(model, p, q) > DEDUP_TOL for q in kept):
            kept.append(p)
    return kept


def _hdist(model, p, q) -> float:
    d = p - q
    val = model.h(d, d) if _is_pd(model) else float(d @ d)
    return float(np.sqrt(max(val, 0.0)))


def _is_pd(model) -> bool:
    pd = getattr(model, "_pd", None)
    if pd is None:
        pd = model._pd = bool(np.all(np.linalg.eigvalsh(model.H) > 0))
    return pd


def _sign_normalize(p: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(p) > 1e-9))
    return -p if p[idx] < 0 else p


def _spectrum(model: _FloatModel, x) -> list:
    ev = np.linalg.eigvals(model.L(x))
    if np.abs(ev.imag).max(initial=0.0) <= 1e-9:
        return sorted(float(v) for v in ev.real)
    return sorted((complex(v) for v in ev), key=lambda z: (z.real, z.imag))


def _exact_check(M: MetrizedAlgebra, x: np.ndarray, square_zero: bool):
    """Snap coordinates to small rationals and re-verify exactly; None if not recognized."""
    if M.mode != RATIONAL:
        return None
    # double roots are only located to about sqrt(machine eps); exact verification guards the looser pass
    for tol in SNAP_TOLS:
        snapped = [snap_rational(v, tol=tol) for v in x]
        if any(s is None for s in snapped):
            continue
        xs = M.algebra.vec(snapped)
        sq = M.algebra.mul_w(xs, xs)
        target = QArray.zeros((M.dim,)) if square_zero else xs
        if (sq - target).is_zero():
            return snapped
    return None


def find_idempotents(M: MetrizedAlgebra, cfg: SearchConfig | None = None) -> SpecialElementSet:
    """Newton on ``F(x) = x x - x`` with Jacobian ``L(x) + R(x) - Id`` from seeded starts; 0 excluded."""
    cfg = cfg or SearchConfig()
    model = _FloatModel(M)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 21]))
    I = np.eye(model.n)
    F = lambda x: model.mul(x, x) - x  # noqa: E731
    J = lambda x: model.L(x) + model.R(x) - I  # noqa: E731
    found, hists = [], {}
    for x0 in _starts(model, cfg, rng):
        x, hist = _newton(F, J, x0, cfg)
        if x is None or np.linalg.norm(x) < ZERO_TOL:
            continue
        if np.linalg.norm(F(x)) <= 1e-9:
            exact = _exact_check(M, x, False)
            if exact is not None:
                x = np.array([float(v) for v in exact])
            found.append(x)
            hists[id(x)] = hist
    kept = _dedup(found, model)
    return _assemble("idempotent", M, model, kept, square_zero=False, hists=[hists.get(id(k), []) for k in kept],
                     exhaustive=model.n <= 3)


def _assemble(kind, M, model, kept, square_zero, hists=None, exhaustive=False) -> SpecialElementSet:
    residuals, spectra, norms, exact_norms, exact_elems = [], [], [], [], []
    for x in kept:
        exact = _exact_check(M, x, square_zero)
        sq = model.mul(x, x)
        res = sq if square_zero else sq - x
        residuals.append(float(np.linalg.norm(res)))
        spectra.append(_spectrum(model, x))
        nv = model.h(x, x)
        norms.append(nv)
        if square_zero:
            # rays: report the norm of the representative whose leading coordinate is 1
            lead = x[int(np.argmax(np.abs(x) > 1e-9))]
            nv = nv / lead**2
        exact_norms.append(snap_rational(nv))
        exact_elems.append(exact)
    return SpecialElementSet(kind, kept, residuals, spectra, norms, exact_norms, exact_elems, hists or [], exhaustive)


def _project_sphere(model: _FloatModel, x, euclid: bool):
    s = model.h(x, x) if euclid else float(x @ x)
    return x / np.sqrt(s)


def find_square_zero(M: MetrizedAlgebra, cfg: SearchConfig | None = None) -> SpecialElementSet:
    """Minimize ``|x x|^2`` on the unit sphere, then polish with constrained Gauss-Newton.

    Elements are reported as rays normalized to unit length.
    """
    cfg = cfg or SearchConfig()
    model = _FloatModel(M)
    euclid = bool(np.all(np.linalg.eigvalsh(model.H) > 1e-10))
    G = model.H if euclid else np.eye(model.n)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 22]))

    def phi(x):
        sq = model.mul(x, x)
        return float(sq @ G @ sq), sq

    found = []
    for x0 in _starts(model, cfg, rng, radii=(1.0,)):
        x = _project_sphere(model, x0, euclid)
        val, sq = phi(x)
        step = 1.0
        for _ in range(cfg.descent_iterations):
            if val <= 1e-24:
                break
            grad = 2 * (model.L(x) + model.R(x)).T @ (G @ sq)
            grad = grad - (x @ G @ grad) * x  # tangent to the sphere in the G metric (approximately)
            gn = float(grad @ grad)
            if gn < 1e-30:
                break
            t = step
            while t > 1e-16:
                nx = _project_sphere(model, x - t * grad, euclid)
                nval, nsq = phi(nx)
                if nval <= val - 0.3 * t * gn:
                    break
                t *= 0.5
            else:
                break
            x, val, sq, step = nx, nval, nsq, min(2 * t, 1e3)
        if val > 1e-2:
            continue
        # Gauss-Newton on (x x = 0, x^T G x = 1)
        for _ in range(cfg.iterations):
            sq = model.mul(x, x)
            r = np.concatenate([sq, [x @ G @ x - 1.0]])
            if np.linalg.norm(r) <= cfg.tol:
                break
            Jm = np.vstack([model.L(x) + model.R(x), 2 * (G @ x)[None, :]])
            dx = -np.linalg.lstsq(Jm, r, rcond=None)[0]
            x = x + dx
        x = _project_sphere(model, x, euclid)
        if np.linalg.norm(model.mul(x, x)) <= 1e-9:
            found.append(x)
    kept = _dedup(found, model, rays=True)
    return _assemble("square_zero", M, model, kept, square_zero=True)


def orthogonal_spectrum(M: MetrizedAlgebra, e) -> list:
    """Eigenvalues of ``L(e)`` on the h-orthogonal complement of ``e``."""
    model = _FloatModel(M)
    e = np.asarray(as_mode_array(e, FLOAT), dtype=float)
    hee = model.h(e, e)
    if abs(hee) <= 1e-12:
        raise AlgebraError("e is h-isotropic")
    res = float(np.linalg.norm(model.mul(e, e) - e))
    if res > FLOAT_TOL:
        warnings.warn(f"element is not idempotent (residual {res:.3g}); spectrum of the compressed operator")
    He = model.H @ e
    # basis of e-perp: null space of the row He
    _, _, vt = np.linalg.svd(He[None, :])
    N = vt[1:].T
    Lr = np.linalg.pinv(N) @ model.L(e) @ N
    ev = np.linalg.eigvals(Lr)
    if np.abs(ev.imag).max(initial=0.0) <= 1e-9:
        return sorted(float(v) for v in ev.real)
    return sorted((complex(v) for v in ev), key=lambda z: (z.real, z.imag))


@dataclass
class StructReport:
    exact: bool
    trace_form: list
    faithful: bool
    faithful_rank: int
    psd: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"exact": self.exact, "trace_form": self.trace_form, "faithful": self.faithful,
                "faithful_rank": self.faithful_rank, "psd": self.psd}


def _exact_rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        p = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if p is None:
            col += 1
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def structural_report(M: MetrizedAlgebra, elements: dict | None = None) -> StructReport:
    """Exactness (``tr L(e_i) = 0``), faithfulness (``x -> L(x)`` injective), and PSD tests of ``L(x)``."""
    A = M.algebra
    tr = einsum("ijj->i", A.tensor)
    n = A.dim
    if M.mode == RATIONAL:
        trace = [Fraction(v) for v in tr.to_fractions()]
        exact = all(v == 0 for v in trace)
        rows = [list(r) for r in A.tensor.reshape(n, n * n).to_fractions()]
        rank = _exact_rank(rows)
    else:
        trace = [float(v) for v in tr]
        exact = all(abs(v) <= FLOAT_TOL for v in trace)
        rank = int(np.linalg.matrix_rank(A.tensor.reshape(n, n * n), tol=1e-9))
    psd = {}
    model = _FloatModel(M)
    for name, x in (elements or {}).items():
        xv = np.asarray(as_mode_array(x, FLOAT), dtype=float)
        Lx = model.L(xv)
        # L(x) is h-self-adjoint when the product is commutative; symmetrize in h-orthonormal form
        try:
            Lc = np.linalg.cholesky(model.H)
            S = Lc.T @ Lx @ np.linalg.inv(Lc.T)
        except np.linalg.LinAlgError:
            S = Lx
        ev = np.linalg.eigvalsh(0.5 * (S + S.T))
        psd[name] = bool(ev.min() >= -1e-9)
    return StructReport(exact, trace, rank == n, rank, psd)


# --- complexified search ---------------------------------------------------------------

def complexified_search(M: MetrizedAlgebra, kind: str, cfg: SearchConfig | None = None) -> SpecialElementSet:
    """Solve ``(a + ib)(a + ib) = 0`` or ``= a + ib`` over the reals from seeded starts.

    For each solution with ``a, b`` independent the sectional nonassociativity is
    compared with ``|a a|^2 / gram`` (square-zero) or ``(4|b b|^2 + |b|^2) / (4 gram)`` (idempotent).
    """
    if kind not in ("complex_square_zero", "complex_idempotent", "square_zero", "idempotent"):
        raise AlgebraError(f"unknown complexified search kind {kind!r}")
    kind = kind if kind.startswith("complex_") else "complex_" + kind
    if not M.euclidean:
        raise NotEuclidean("complexified search needs a Euclidean metric")
    cfg = cfg or SearchConfig()
    model = _FloatModel(M)
    n = model.n
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 23]))
    idem = kind == "complex_idempotent"

    def F(v):
        a, b = v[:n], v[n:]
        aa, bb, ab, ba = model.mul(a, a), model.mul(b, b), model.mul(a, b), model.mul(b, a)
        re, im = aa - bb, ab + ba
        if idem:
            re, im = re - a, im - b
        return np.concatenate([re, im])

    def J(v):
        a, b = v[:n], v[n:]
        Sa, Sb = model.L(a) + model.R(a), model.L(b) + model.R(b)
        top = np.hstack([Sa, -Sb])
        bot = np.hstack([Sb, Sa])
        Jm = np.vstack([top, bot])
        if idem:
            Jm = Jm - np.eye(2 * n)
        return Jm

    sols = []
    for _ in range(cfg.starts):
        v = rng.standard_normal(2 * n)
        v = v / np.linalg.norm(v)
        if idem:
            v = v * 4.0 ** rng.uniform(-1, 1)
        if idem:
            v, _ = _newton(F, J, v, cfg)
        else:
            for _ in range(cfg.iterations):
                r = np.concatenate([F(v), [v @ v - 1.0]])
                if np.linalg.norm(r) <= cfg.tol:
                    break
                Jm = np.vstack([J(v), 2 * v[None, :]])
                v = v - np.linalg.lstsq(Jm, r, rcond=None)[0]
        if v is None or np.linalg.norm(v) < ZERO_TOL or np.linalg.norm(F(v)) > 1e-9:
            continue
        sols.append(v)
    if not idem:
        sols = [_phase_normalize(v, n) for v in sols]
    kept = _dedup(sols, _PairModel(model))
    elements, residuals, spectra, norms, extras = [], [], [], [], []
    for v in kept:
        a, b = v[:n], v[n:]
        independent = float(np.linalg.norm(np.outer(a, b) - np.outer(b, a))) > 1e-6
        s = pred = None
        if independent:
            Mf = M.to_float()
            s = sect(Mf, a, b)
            gram = model.h(a, a) * model.h(b, b) - model.h(a, b) ** 2
            if idem:
                bb = model.mul(b, b)
                pred = (4 * model.h(bb, bb) + model.h(b, b)) / (4 * gram)
            else:
                aa = model.mul(a, a)
                pred = model.h(aa, aa) / gram
        elements.append((a, b))
        residuals.append(float(np.linalg.norm(F(v))))
        spectra.append([])
        norms.append(model.h(a, a) + model.h(b, b))
        extras.append({"independent": independent, "sect": s, "predicted": pred})
    out = SpecialElementSet(kind, elements, residuals, spectra, norms)
    out.exact_elements = extras
    return out


def _phase_normalize(v: np.ndarray, n: int) -> np.ndarray:
    """Rotate ``a + ib`` by a unit complex scalar so its largest coordinate is real positive."""
    z = v[:n] + 1j * v[n:]
    k = int(np.argmax(np.round(np.abs(z), 9)))
    z = z * (abs(z[k]) / z[k])
    return np.concatenate([z.real, z.imag])


class _PairModel:
    """Distance model on pairs (a, b) for deduplication."""

    def __init__(self, model: _FloatModel):
        n = model.n
        self.H = np.block([[model.H, np.zeros((n, n))], [np.zeros((n, n)), model.H]])

    def h(self, x, y):
        return float(x @ self.H @ y)
