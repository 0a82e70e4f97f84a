"""Sectional nonassociativity, constant-sect certification, and extremal bounds.

Optimization runs in float mode in h-orthonormal coordinates, where
``sect(x, y) = (<xx, yy> - <xy, yx>) / (|x|^2 |y|^2 - <x, y>^2)``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .core import AlgebraError, BilinearForm, MetrizedAlgebra, Algebra, check_metric
from .identities import Rank4Tensor, curvature_flat, project_curvature
from .numeric import FLOAT, FLOAT_TOL, RATIONAL, QArray, einsum, to_output

DEFAULT_SEED = 0x5EC7
ARMIJO_C = 0.3


class DegeneratePlane(AlgebraError):
    """span{x, y} is h-degenerate."""


class LinearDependence(AlgebraError):
    """x and y are linearly dependent."""


class NotEuclidean(AlgebraError):
    """The metric is not positive definite."""


class NotPositiveDefinite(AlgebraError):
    """The norm form is not positive definite."""


@dataclass
class Plane:
    x: Any
    y: Any
    gram: Any

    def as_dict(self) -> dict:
        return {"x": _listify(self.x), "y": _listify(self.y), "gram": self.gram}


def _listify(v):
    return [x for x in (v.tolist() if isinstance(v, np.ndarray) else list(v))]


def _wedge_zero(x, y, mode) -> bool:
    if mode == RATIONAL:
        xf, yf = x.to_fractions(), y.to_fractions()
        n = len(xf)
        return all(xf[i] * yf[j] - xf[j] * yf[i] == 0 for i in range(n) for j in range(i + 1, n))
    w = np.outer(x, y) - np.outer(y, x)
    return float(np.abs(w).max()) <= 1e-12 * max(float(np.abs(x).max() * np.abs(y).max()), 1e-300)


def make_plane(M: MetrizedAlgebra, x, y) -> Plane:
    A = M.algebra
    xw, yw = A.vec(x), A.vec(y)
    if _wedge_zero(xw, yw, M.mode):
        raise LinearDependence("x and y are linearly dependent")
    hxx, hyy, hxy = M.form.w(xw, xw), M.form.w(yw, yw), M.form.w(xw, yw)
    gram = hxx * hyy - hxy * hxy
    if M.mode == RATIONAL:
        if gram == 0:
            raise DegeneratePlane("span{x, y} is h-degenerate")
    else:
        scale = max(abs(hxx * hyy), hxy * hxy)
        if abs(gram) <= 1e-12 * scale or scale == 0:
            raise DegeneratePlane("span{x, y} is h-degenerate")
    return Plane(xw, yw, gram)


def _sect_numerator(A: Algebra, H, x, y):
    xx, yy, xy, yx = A.mul_w(x, x), A.mul_w(y, y), A.mul_w(x, y), A.mul_w(y, x)
    return einsum("i,ij,j->", xx, H, yy) - einsum("i,ij,j->", xy, H, yx)


def sect(M: MetrizedAlgebra, x, y):
    """Sectional nonassociativity ``(h(xx, yy) - h(xy, yx)) / gram``."""
    if not M.metric_invariant:
        raise AlgebraError("sect needs an invariant nondegenerate metric")
    p = make_plane(M, x, y)
    val = _sect_numerator(M.algebra, M.form.array, p.x, p.y) / p.gram
    return Fraction(val) if M.mode == RATIONAL else float(val)


def sect_split(M: MetrizedAlgebra, x, y) -> tuple:
    """``(sect_sym, sect_bracket)`` for ``x o y = xy + yx`` and ``[x, y] = xy - yx`` with the same metric."""
    p = make_plane(M, x, y)
    A, H = M.algebra, M.form.array
    x, y = p.x, p.y
    xx, yy, xy, yx = A.mul_w(x, x), A.mul_w(y, y), A.mul_w(x, y), A.mul_w(y, x)
    s = xy + yx
    b = xy - yx
    num_sym = einsum("i,ij,j->", xx, H, yy) * 4 - einsum("i,ij,j->", s, H, s)
    num_br = einsum("i,ij,j->", b, H, b)
    if M.mode == RATIONAL:
        return Fraction(num_sym / p.gram), Fraction(num_br / p.gram)
    return float(num_sym / p.gram), float(num_br / p.gram)


def kulkarni(form: BilinearForm) -> Rank4Tensor:
    """``(h ^ h)(x, y, z, w) = h(x, z) h(y, w) - h(x, w) h(y, z)``."""
    H = form.array
    K = einsum("ik,jl->ijkl", H, H) - einsum("il,jk->ijkl", H, H)
    return Rank4Tensor(K, "CurvatureType", form.mode)


def constant_sect(M: MetrizedAlgebra):
    """Return ``c`` when ``P(R + Rbar) = -2c (h ^ h)`` entrywise, else ``None``.

    The sign follows ``sect(x, y) (h ^ h)(x, y, x, y) = -(R + Rbar)(x, y, x, y) / 2``.
    """
    if M.dim < 2:
        raise AlgebraError("constant_sect needs dim >= 2")
    P, _ = project_curvature(curvature_flat(M))
    K = kulkarni(M.form)
    idx = _first_nonzero(K.entries, M.mode)
    if idx is None:
        return None
    pk, kk = P.entries[idx], K.entries[idx]
    if M.mode == RATIONAL:
        c = -Fraction(pk) / (2 * Fraction(kk))
        return c if (P.entries + K.entries * (2 * c)).is_zero() else None
    c = -float(pk) / (2 * float(kk))
    defect = float(np.abs(P.entries + 2 * c * K.entries).max())
    return c if defect <= FLOAT_TOL else None


def _first_nonzero(arr, mode):
    if isinstance(arr, QArray):
        nz = np.argwhere(arr.num != 0)
    else:
        nz = np.argwhere(np.abs(arr) > FLOAT_TOL)
    return tuple(int(i) for i in nz[0]) if len(nz) else None


# --- float kernels in orthonormal coordinates -------------------------------------

@dataclass
class OrthoFrame:
    """Structure tensor in an h-orthonormal basis plus the change of coordinates."""

    C: np.ndarray   # C[a, b, c]
    B: np.ndarray   # original coordinates = B @ orthonormal coordinates

    @property
    def n(self) -> int:
        return self.C.shape[0]

    def to_original(self, u: np.ndarray) -> np.ndarray:
        return self.B @ u


def orthonormalize(M_or_alg, form: BilinearForm | None = None) -> OrthoFrame:
    """Cholesky change of basis making a positive definite form the identity."""
    if isinstance(M_or_alg, MetrizedAlgebra):
        A, form = M_or_alg.algebra, M_or_alg.form
    else:
        A = M_or_alg
    H = form.float_array
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise NotEuclidean("metric is not positive definite") from exc
    B = np.linalg.inv(L.T)
    C = np.einsum("ia,jb,ijk,ck->abc", B, B, A.float_tensor, L.T, optimize=True)
    return OrthoFrame(C, B)


def sect_value_and_grad(C: np.ndarray, x: np.ndarray, y: np.ndarray):
    """sect and its gradient in (x, y) for an orthonormal structure tensor."""
    xx = np.einsum("i,j,ijk->k", x, x, C)
    yy = np.einsum("i,j,ijk->k", y, y, C)
    xy = np.einsum("i,j,ijk->k", x, y, C)
    yx = np.einsum("i,j,ijk->k", y, x, C)
    a = xx @ yy
    b = xy @ yx
    nx, ny, d = x @ x, y @ y, x @ y
    g = nx * ny - d * d
    s = (a - b) / g
    Cl = lambda u, w: np.einsum("mjk,j,k->m", C, u, w)   # noqa: E731 - d/dx_m of <x u, w>
    Cr = lambda u, w: np.einsum("imk,i,k->m", C, u, w)   # noqa: E731 - d/dx_m of <u x, w>
    da_x = Cl(x, yy) + Cr(x, yy)
    da_y = Cl(y, xx) + Cr(y, xx)
    db_x = Cl(y, yx) + Cr(y, xy)
    db_y = Cr(x, yx) + Cl(x, xy)
    dg_x = 2 * x * ny - 2 * d * y
    dg_y = 2 * y * nx - 2 * d * x
    gx = (da_x - db_x - s * dg_x) / g
    gy = (da_y - db_y - s * dg_y) / g
    return float(s), gx, gy


def bw_value_and_grad(C: np.ndarray, x: np.ndarray, y: np.ndarray, gram: bool):
    """``|xy|^2 / (|x|^2|y|^2 [- <x,y>^2])`` and its gradient (product = the bracket)."""
    z = np.einsum("i,j,ijk->k", x, y, C)
    N = z @ z
    nx, ny, d = x @ x, y @ y, x @ y
    den = nx * ny - (d * d if gram else 0.0)
    r = N / den
    dN_x = 2 * np.einsum("mjk,j,k->m", C, y, z)
    dN_y = 2 * np.einsum("imk,i,k->m", C, x, z)
    dd_x = 2 * x * ny - (2 * d * y if gram else 0.0)
    dd_y = 2 * y * nx - (2 * d * x if gram else 0.0)
    return float(r), (dN_x - r * dd_x) / den, (dN_y - r * dd_y) / den


def batch_sect(C: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    n = C.shape[0]
    Cm = C.reshape(n * n, n)
    pair = lambda U, W: (U[:, :, None] * W[:, None, :]).reshape(len(U), n * n) @ Cm  # noqa: E731
    xx, yy, xy, yx = pair(X, X), pair(Y, Y), pair(X, Y), pair(Y, X)
    num = np.einsum("ak,ak->a", xx, yy) - np.einsum("ak,ak->a", xy, yx)
    nx, ny, d = np.einsum("ai,ai->a", X, X), np.einsum("ai,ai->a", Y, Y), np.einsum("ai,ai->a", X, Y)
    return num / (nx * ny - d * d)


def batch_bw(C: np.ndarray, X: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = C.shape[0]
    Z = (X[:, :, None] * Y[:, None, :]).reshape(len(X), n * n) @ C.reshape(n * n, n)
    N = np.einsum("ak,ak->a", Z, Z)
    nx, ny, d = np.einsum("ai,ai->a", X, X), np.einsum("ai,ai->a", Y, Y), np.einsum("ai,ai->a", X, Y)
    return N / (nx * ny), N / (nx * ny - d * d)


# --- multi-start optimization ----------------------------------------------------------

@dataclass
class OptimizerConfig:
    starts: int = 64
    iterations: int = 500
    tol: float = 1e-10
    seed: int = DEFAULT_SEED
    threads: int = 1
    samples: int = 1_000_000
    chunk: int = 10_000

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class BoundsReport:
    bwl: float
    bwu: float
    witness_low: Plane | None
    witness_high: Plane | None
    starts: int
    seed: int
    iterations: int
    samples: int = 0
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "bwl": self.bwl,
            "bwu": self.bwu,
            "witness_low": self.witness_low.as_dict() if self.witness_low else None,
            "witness_high": self.witness_high.as_dict() if self.witness_high else None,
            "starts": self.starts,
            "seed": self.seed,
            "iterations": self.iterations,
            "samples": self.samples,
            **self.extra,
        }


def _rng(seed: int, idx: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), idx]))


def _gram_schmidt(x, y, rng):
    x = x / np.linalg.norm(x)
    for _ in range(100):
        y2 = y - (x @ y) * x
        ny = np.linalg.norm(y2)
        if ny >= 1e-10:
            return x, y2 / ny
        y = rng.standard_normal(len(x))
    raise AlgebraError("could not complete a 2-frame")


def _retract(x, y, rng, mode):
    if mode == "grassmann":
        return _gram_schmidt(x, y, rng)
    return x / np.linalg.norm(x), y / np.linalg.norm(y)


def _ascend(fun, n, rng, sign, cfg: OptimizerConfig, mode: str):
    """Armijo gradient ascent of ``sign * fun`` with retraction; returns (value, x, y, iterations)."""
    x, y = _retract(rng.standard_normal(n), rng.standard_normal(n), rng, mode)
    val, gx, gy = fun(x, y)
    step = 1.0
    it = 0
    for it in range(1, cfg.iterations + 1):
        if mode == "grassmann":
            # tangent part: remove components inside the span, which leave the plane fixed
            gx = gx - (gx @ x) * x - (gx @ y) * y
            gy = gy - (gy @ x) * x - (gy @ y) * y
        else:
            gx = gx - (gx @ x) * x
            gy = gy - (gy @ y) * y
        gnorm2 = gx @ gx + gy @ gy
        if gnorm2 < cfg.tol**2:
            break
        t = step
        accepted = False
        for _ in range(40):
            nx, ny = _retract(x + sign * t * gx, y + sign * t * gy, rng, mode)
            nval, ngx, ngy = fun(nx, ny)
            if sign * (nval - val) >= ARMIJO_C * t * gnorm2:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        # an overshooting step can pass the test; keep halving while it still helps
        while t > 1e-12:
            hx, hy = _retract(x + sign * 0.5 * t * gx, y + sign * 0.5 * t * gy, rng, mode)
            hval, hgx, hgy = fun(hx, hy)
            if sign * (hval - nval) <= 0:
                break
            t *= 0.5
            nx, ny, nval, ngx, ngy = hx, hy, hval, hgx, hgy
        x, y, val, gx, gy = nx, ny, nval, ngx, ngy
        step = min(2.0 * t, 1e3)
    return val, x, y, it


def _multistart(fun, n, cfg: OptimizerConfig, sign: float, mode: str, salt: int):
    def one(idx):
        return _ascend(fun, n, _rng(cfg.seed, salt * 1_000_003 + idx), sign, cfg, mode)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(one, range(cfg.starts)))
    else:
        results = [one(i) for i in range(cfg.starts)]
    best = 0
    for i, r in enumerate(results):
        if sign * r[0] > sign * results[best][0]:
            best = i
    total_iters = sum(r[3] for r in results)
    return results[best], total_iters


def _require_float_euclidean(M: MetrizedAlgebra) -> MetrizedAlgebra:
    if not M.metric_invariant:
        raise AlgebraError("estimate_extrema needs an invariant metric")
    if not M.euclidean:
        raise NotEuclidean("extremal bounds are only defined for positive definite metrics")
    return M.to_float()


def estimate_extrema(M: MetrizedAlgebra, cfg: OptimizerConfig | None = None) -> BoundsReport:
    """Multi-start ascent/descent of sect over Gr(2, n); witnesses in original coordinates."""
    cfg = cfg or OptimizerConfig()
    Mf = _require_float_euclidean(M)
    frame = orthonormalize(Mf)
    fun = lambda x, y: sect_value_and_grad(frame.C, x, y)  # noqa: E731
    (vhi, xh, yh, _), it_hi = _multistart(fun, frame.n, cfg, +1.0, "grassmann", 1)
    (vlo, xl, yl, _), it_lo = _multistart(fun, frame.n, cfg, -1.0, "grassmann", 2)
    wh = _plane_from_frame(Mf, frame, xh, yh)
    wl = _plane_from_frame(Mf, frame, xl, yl)
    hi = sect(Mf, wh.x, wh.y)
    lo = sect(Mf, wl.x, wl.y)
    return BoundsReport(lo, hi, wl, wh, cfg.starts, cfg.seed, it_hi + it_lo)


def _plane_from_frame(Mf, frame: OrthoFrame, u, w) -> Plane:
    x, y = frame.to_original(u), frame.to_original(w)
    return make_plane(Mf, x, y)


def sample_sect(M: MetrizedAlgebra, count: int, seed: int = DEFAULT_SEED, chunk: int = 10_000) -> np.ndarray:
    """sect on ``count`` Gaussian random planes (orthonormal coordinates, Euclidean metric)."""
    frame = orthonormalize(M.to_float())
    rng = np.random.default_rng(np.random.SeedSequence([seed, 7]))
    out = []
    done = 0
    while done < count:
        m = min(chunk, count - done)
        X = rng.standard_normal((m, frame.n))
        Y = rng.standard_normal((m, frame.n))
        out.append(batch_sect(frame.C, X, Y))
        done += m
    return np.concatenate(out) if out else np.zeros(0)


def _is_positive_definite(form: BilinearForm) -> bool:
    from .core import _definiteness, _exact_inertia, _leading_minor_class

    if form.mode == RATIONAL:
        mat = form.array.to_fractions()
        return (_leading_minor_class(mat) or _definiteness(_exact_inertia(mat))) == "positive"
    return bool(np.linalg.eigvalsh(form.array).min() > 1e-10)


def bw_constant(algebra: Algebra, form: BilinearForm, cfg: OptimizerConfig | None = None) -> BoundsReport:
    """Estimate ``sup |[x, y]|^2 / (|x|^2 |y|^2)`` and its Gram-normalized variant.

    ``algebra`` is taken to be the bracket itself (its product is ``[x, y]``).
    ``bwu`` carries the overall estimate; ``bwl`` is the smallest sampled ratio.
    """
    cfg = cfg or OptimizerConfig()
    if not _is_positive_definite(form):
        raise NotPositiveDefinite("bw needs a positive definite norm form")
    frame = orthonormalize(algebra.to_float(), BilinearForm(form.float_array, FLOAT))
    C, n = frame.C, frame.n
    f_plain = lambda x, y: bw_value_and_grad(C, x, y, False)  # noqa: E731
    f_gram = lambda x, y: bw_value_and_grad(C, x, y, True)  # noqa: E731
    (v1, x1, y1, _), it1 = _multistart(f_plain, n, cfg, +1.0, "spheres", 3)
    (v2, x2, y2, _), it2 = _multistart(f_gram, n, cfg, +1.0, "grassmann", 4)

    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 11]))
    smax1 = smax2 = -np.inf
    smin = np.inf
    sx = sy = None
    done = 0
    while done < cfg.samples:
        m = min(cfg.chunk, cfg.samples - done)
        X = rng.standard_normal((m, n))
        Y = rng.standard_normal((m, n))
        r1, r2 = batch_bw(C, X, Y)
        i = int(np.argmax(r1))
        if r1[i] > smax1:
            smax1, sx, sy = float(r1[i]), X[i], Y[i]
        smax2 = max(smax2, float(r2.max()))
        smin = min(smin, float(r1.min()))
        done += m

    sup_plain = max(v1, smax1)
    sup_gram = max(v2, smax2)
    hi_x, hi_y = (x1, y1) if v1 >= smax1 else (sx, sy)
    Bx, By = frame.to_original(hi_x), frame.to_original(hi_y)
    witness = Plane(Bx, By, float(form.float_array.dot(Bx) @ Bx * (form.float_array.dot(By) @ By)))
    extra = {
        "sup_ratio": sup_plain,
        "sup_gram_ratio": sup_gram,
        "gap": abs(sup_plain - sup_gram),
        "optimized_ratio": v1,
        "optimized_gram_ratio": v2,
        "sampled_max_ratio": smax1 if cfg.samples else None,
        "sampled_max_gram_ratio": smax2 if cfg.samples else None,
    }
    return BoundsReport(smin if cfg.samples else 0.0, sup_plain, None, witness, cfg.starts, cfg.seed,
                        it1 + it2, cfg.samples, extra)


def bracket_ratio(algebra: Algebra, form: BilinearForm, x, y) -> tuple:
    """``(|[x,y]|^2/(|x|^2|y|^2), |[x,y]|^2/(|x|^2|y|^2 - f(x,y)^2))`` at a given pair."""
    xw, yw = algebra.vec(x), algebra.vec(y)
    z = algebra.mul_w(xw, yw)
    N = form.w(z, z)
    nx, ny, d = form.w(xw, xw), form.w(yw, yw), form.w(xw, yw)
    return N / (nx * ny), N / (nx * ny - d * d)


# --- Chern-do Carmo-Kobayashi inequality on Hermitian matrices ----------------------

@dataclass
class VerificationReport:
    name: str
    passed: bool
    checks: int
    max_ratio: float
    min_slack: float
    violations: int
    witnesses: list = field(default_factory=list)
    exploratory: bool = False
    params: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def _k_table(level: int) -> np.ndarray:
    from .presets import _hurwitz_tensor

    return _hurwitz_tensor(level).astype(float)


def _random_herm(rng, count, n, d, diagonal: bool) -> np.ndarray:
    X = np.zeros((count, n, n, d))
    idx = np.arange(n)
    X[:, idx, idx, 0] = rng.standard_normal((count, n))
    if diagonal:
        return X
    conj = -np.ones(d)
    conj[0] = 1
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.standard_normal((count, d))
            X[:, i, j, :] = v
            X[:, j, i, :] = v * conj
    return X


def _herm_commutator_sq(X, Y, K):
    XY = np.einsum("sija,sjkb,abc->sikc", X, Y, K, optimize=True)
    YX = np.einsum("sija,sjkb,abc->sikc", Y, X, K, optimize=True)
    Z = XY - YX
    return np.einsum("sija,sija->s", Z, Z)


def cdk_terms(X, Y, level: int):
    """``(|[x,y]|^2, 2(|x|^2|y|^2 - f^2), 2|x|^2|y|^2)`` for stacks of Hermitian matrices."""
    K = _k_table(level)
    lhs = _herm_commutator_sq(X, Y, K)
    nx = np.einsum("sija,sija->s", X, X)
    ny = np.einsum("sija,sija->s", Y, Y)
    f = np.einsum("sija,sija->s", X, Y)
    return lhs, 2 * (nx * ny - f * f), 2 * nx * ny


def cdk_verify(n: int, level: int, samples: int = 10_000, seed: int = DEFAULT_SEED,
               diagonal: bool | None = None, tol: float = 1e-9) -> VerificationReport:
    """Sample ``|[x, y]|^2 <= 2(|x|^2|y|^2 - f(x,y)^2) <= 2|x|^2|y|^2`` on ``Herm(n, K)``.

    Over the octonions (level 3) only ``n = 3`` is allowed and ``x`` must be
    diagonal; ``diagonal=False`` there is an exploratory mode making no claim.
    """
    if level not in (0, 1, 2, 3) or n < 2:
        raise AlgebraError(f"invalid (n, level) = ({n}, {level})")
    if level == 3 and n != 3:
        raise AlgebraError("the octonionic case requires n = 3")
    exploratory = False
    if diagonal is None:
        diagonal = level == 3
    if level == 3 and not diagonal:
        exploratory = True
    d = 2**level
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, level]))
    max_ratio, min_slack, violations, witnesses = 0.0, np.inf, 0, []
    done = 0
    while done < samples:
        m = min(2000, samples - done)
        X = _random_herm(rng, m, n, d, diagonal)
        Y = _random_herm(rng, m, n, d, False)
        lhs, mid, rhs = cdk_terms(X, Y, level)
        scale = rhs
        bad = (lhs > mid + tol * scale) | (mid > rhs + tol * scale)
        violations += int(bad.sum())
        for i in np.nonzero(bad)[0][: 5 - len(witnesses)]:
            witnesses.append({"x": X[i].tolist(), "y": Y[i].tolist(), "lhs": float(lhs[i]), "bound": float(mid[i])})
        ratio = lhs / mid
        max_ratio = max(max_ratio, float(ratio.max()))
        min_slack = min(min_slack, float(((mid - lhs) / scale).min()))
        done += m
    return VerificationReport(
        "cdk", violations == 0, samples, max_ratio, float(min_slack), violations, witnesses, exploratory,
        {"n": n, "level": level, "diagonal": diagonal, "seed": seed},
    )


def cdk_equality_witness(n: int, level: int = 0):
    """``x = e11 - enn``, ``y = e1n + en1``: returns (lhs, 2(|x|^2|y|^2 - f^2))."""
    d = 2**level
    X = np.zeros((1, n, n, d))
    Y = np.zeros((1, n, n, d))
    X[0, 0, 0, 0], X[0, n - 1, n - 1, 0] = 1, -1
    Y[0, 0, n - 1, 0] = Y[0, n - 1, 0, 0] = 1
    lhs, mid, _ = cdk_terms(X, Y, level)
    return float(lhs[0]), float(mid[0])


def default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))
