"""Catalog of concrete metrized algebras.

Rational presets are built exactly.  The compact Okubo algebra needs sqrt(3)
and is built in float mode from complex 3 x 3 matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from .core import (
    Algebra,
    AlgebraError,
    BilinearForm,
    MetrizedAlgebra,
    derived_algebra,
    killing_form,
)
from .identities import DefectReport, _passes
from .numeric import FLOAT, FLOAT_TOL, RATIONAL, QArray, argmax_abs, einsum, parse_rational, scalar_abs_max

HURWITZ_NAMES = ("R", "C", "H", "O")


# --- Cayley-Dickson doubling ------------------------------------------------------

def _cd_conj(a: list) -> list:
    if len(a) == 1:
        return list(a)
    h = len(a) // 2
    return _cd_conj(a[:h]) + [-v for v in a[h:]]


def _cd_mul(a: list, b: list) -> list:
    """(p, q)(r, s) = (p r - conj(s) q, s p + q conj(r))."""
    if len(a) == 1:
        return [a[0] * b[0]]
    h = len(a) // 2
    p, q, r, s = a[:h], a[h:], b[:h], b[h:]
    left = [u - v for u, v in zip(_cd_mul(p, r), _cd_mul(_cd_conj(s), q))]
    right = [u + v for u, v in zip(_cd_mul(s, p), _cd_mul(q, _cd_conj(r)))]
    return left + right


@lru_cache(maxsize=None)
def cayley_dickson_table(level: int) -> tuple:
    """Integer structure tensor of the level-``level`` Hurwitz algebra (dim 2**level)."""
    if level not in (0, 1, 2, 3):
        raise AlgebraError(f"Hurwitz level must be 0..3, got {level}")
    d = 2**level
    eye = np.eye(d, dtype=int).tolist()
    return tuple(tuple(tuple(_cd_mul(eye[i], eye[j])) for j in range(d)) for i in range(d))


def _hurwitz_tensor(level: int) -> np.ndarray:
    return np.array(cayley_dickson_table(level), dtype=np.int64)


def _conj_diag(d: int) -> np.ndarray:
    c = -np.ones(d, dtype=np.int64)
    c[0] = 1
    return c


# --- descriptors --------------------------------------------------------------------

@dataclass
class PresetDescriptor:
    name: str
    params: dict = field(default_factory=dict)
    provenance: str = ""
    expected: dict = field(default_factory=dict)

    def spec_string(self) -> str:
        if not self.params:
            return f"preset:{self.name}"
        return "preset:" + ":".join([self.name] + [f"{k}={v}" for k, v in self.params.items()])


@dataclass
class _Entry:
    builder: Callable[..., MetrizedAlgebra]
    params: dict           # name -> (parser, default)
    provenance: str
    expected: Callable[[dict], dict] = lambda p: {}
    positional: tuple = ()


REGISTRY: dict[str, _Entry] = {}


def _register(name, params, provenance, expected=None, positional=None):
    def deco(fn):
        REGISTRY[name] = _Entry(fn, params, provenance, expected or (lambda p: {}), tuple(positional or params))
        return fn
    return deco


def _int(v) -> int:
    return int(v)


def _rat(v) -> Fraction:
    return parse_rational(v if not isinstance(v, str) or "/" in v or "." not in v else Fraction(v))


def _meta(name, params, **extra):
    d = {"name": name, "params": {k: str(v) for k, v in params.items()}}
    d.update(extra)
    return d


# --- Hurwitz family --------------------------------------------------------------------

@_register("hurwitz", {"level": (_int, 3)}, "unital composition algebras by doubling",
           lambda p: {"constant_sect": Fraction(0), "identities": ["alternative", "flexible"]})
def hurwitz(level: int = 3) -> MetrizedAlgebra:
    """Hurwitz algebra R, C, H, or O metrized by the invariant trace form ``t(x, y) = h(x, conj y)``.

    The norm polarization ``h`` (with ``h(e, e) = 2``) is not invariant once
    ``level > 0``, so it travels as ``meta['norm_form']`` for composition checks.
    """
    C = _hurwitz_tensor(level)
    d = C.shape[0]
    alg = Algebra.from_tensor(C.astype(object), RATIONAL, _cd_labels(d))
    conj = _conj_diag(d)
    norm = BilinearForm((2 * np.eye(d, dtype=np.int64)).tolist(), RATIONAL)
    trace = BilinearForm(np.diag(2 * conj).tolist(), RATIONAL)
    unit = [1] + [0] * (d - 1)
    meta = _meta("hurwitz", {"level": level}, unit=unit, conjugation=conj.tolist(), norm_form=norm,
                 hurwitz=HURWITZ_NAMES[level])
    return MetrizedAlgebra(alg, trace, meta)


def _cd_labels(d: int) -> list[str]:
    return [f"e{i}" for i in range(d)]


@_register("para_hurwitz", {"level": (_int, 3)}, "para-Hurwitz symmetric composition algebras",
           lambda p: {"constant_sect": Fraction(-1)} if p["level"] <= 1 else {"bounds": (-1, 1)})
def para_hurwitz(level: int = 3) -> MetrizedAlgebra:
    """``x o y = conj(x) conj(y)`` with the norm polarization, which is invariant here."""
    C = _hurwitz_tensor(level)
    d = C.shape[0]
    conj = _conj_diag(d)
    P = np.einsum("i,j,ijk->ijk", conj, conj, C)
    alg = Algebra.from_tensor(P.astype(object), RATIONAL, _cd_labels(d))
    norm = BilinearForm((2 * np.eye(d, dtype=np.int64)).tolist(), RATIONAL)
    meta = _meta("para_hurwitz", {"level": level}, idempotent=[1] + [0] * (d - 1), norm_form=norm)
    return MetrizedAlgebra(alg, norm, meta)


@_register("cross", {"dim": (_int, 7)}, "cross product algebras on imaginary quaternions/octonions",
           lambda p: {"constant_sect": Fraction(1)})
def cross(dim: int = 7) -> MetrizedAlgebra:
    """``x x y = (xy - yx)/2`` on Im H or Im O with the Euclidean dot product."""
    if dim not in (3, 7):
        raise AlgebraError(f"cross products exist only in dimensions 3 and 7, got {dim}")
    C = _hurwitz_tensor(2 if dim == 3 else 3)[1:, 1:, 1:]
    X = (C - C.transpose(1, 0, 2)).astype(object)
    alg = Algebra.from_tensor(X * Fraction(1, 2), RATIONAL, [f"e{i}" for i in range(1, dim + 1)])
    return MetrizedAlgebra(alg, BilinearForm.identity(dim), _meta("cross", {"dim": dim}))


def imaginary_octonion_bracket() -> Algebra:
    """Im O under the commutator ``xy - yx`` (twice the 7-dimensional cross product)."""
    C = _hurwitz_tensor(3)[1:, 1:, 1:]
    return Algebra.from_tensor((C - C.transpose(1, 0, 2)).astype(object), RATIONAL)


# --- matrices over Hurwitz algebras ----------------------------------------------

class _KMatrices:
    """n x n matrices with entries in a Hurwitz algebra, stored as (n, n, d) arrays."""

    def __init__(self, n: int, level: int):
        self.n, self.level = n, level
        self.d = 2**level
        self.K = QArray(_hurwitz_tensor(level))
        self.conj = _conj_diag(self.d)

    def unit(self, i, j, u, coef=1):
        m = np.zeros((self.n, self.n, self.d), dtype=np.int64)
        m[i, j, u] = coef
        return m

    def matmul(self, x: QArray, y: QArray) -> QArray:
        return einsum("ija,jkb,abc->ikc", x, y, self.K)

    def star(self, x: QArray, y: QArray) -> QArray:
        return (self.matmul(x, y) + self.matmul(y, x)) * Fraction(1, 2)

    def commutator(self, x: QArray, y: QArray) -> QArray:
        return self.matmul(x, y) - self.matmul(y, x)

    def conj_transpose(self, x: QArray) -> QArray:
        return QArray(np.einsum("jia,a->ija", x.num, self.conj), x.den)

    def re_trace_pair(self, x: QArray, y: QArray):
        """``Re tr(conj(x)^t y) = sum of coordinatewise products``."""
        return einsum("ija,ija->", x, y)


def _constants_in_basis(basis: list[QArray], product, form_diag: list[Fraction]) -> list:
    """Expand products of an orthogonal basis back in that basis, asserting closure."""
    consts = []
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            z = product(bi, bj)
            if z.is_zero():
                continue
            recon = None
            for k, bk in enumerate(basis):
                c = einsum("ija,ija->", z, bk) / form_diag[k]
                if c != 0:
                    consts.append((i, j, k, c))
                    term = bk * c
                    recon = term if recon is None else recon + term
            if recon is None or not (z - recon).is_zero():
                raise AlgebraError(f"basis is not closed under the product at ({i}, {j})")
    return consts


def herm_basis(n: int, level: int) -> tuple[list[np.ndarray], list[str], dict]:
    """Diagonal units, then ``u E_ij + conj(u) E_ji`` for ``i < j`` and each unit ``u``."""
    km = _KMatrices(n, level)
    basis, labels, index = [], [], {}
    for i in range(n):
        index[("diag", i)] = len(basis)
        basis.append(km.unit(i, i, 0))
        labels.append(f"E{i + 1}{i + 1}")
    for i in range(n):
        for j in range(i + 1, n):
            for u in range(km.d):
                m = km.unit(i, j, u)
                m[j, i, u] = km.conj[u]
                index[("off", i, j, u)] = len(basis)
                basis.append(m)
                labels.append(f"{'' if u == 0 else f'e{u}'}E{i + 1}{j + 1}")
    return basis, labels, index


@_register("herm", {"n": (_int, 3), "level": (_int, 0)}, "Hermitian matrices over a Hurwitz algebra, Jordan product",
           lambda p: {"sect_bounds": (Fraction(0), Fraction(p["n"], 2)), "identities": ["commutative"]})
def herm(n: int = 3, level: int = 0) -> MetrizedAlgebra:
    """``Herm(n, K)`` with ``x * y = (xy + yx)/2`` and ``h(x, y) = Re tr(x * y) / n``."""
    if n < 1 or level not in (0, 1, 2, 3):
        raise AlgebraError(f"invalid herm parameters n={n}, level={level}")
    if level == 3 and n > 3:
        raise AlgebraError("Herm(n, O) is only supported for n <= 3")
    km = _KMatrices(n, level)
    raw, labels, index = herm_basis(n, level)
    basis = [QArray(b) for b in raw]
    norms = [einsum("ija,ija->", b, b) for b in basis]
    consts = _constants_in_basis(basis, km.star, norms)
    alg = Algebra(len(basis), consts, RATIONAL, labels)
    H = np.empty((len(basis), len(basis)), dtype=object)
    H.fill(Fraction(0))
    for k, nk in enumerate(norms):
        H[k, k] = nk / n
    dim_expected = n + km.d * n * (n - 1) // 2
    assert alg.dim == dim_expected
    meta = _meta("herm", {"n": n, "level": level}, herm_n=n, herm_level=level, basis_index=index,
                 unit=[1 if k < n else 0 for k in range(alg.dim)])
    return MetrizedAlgebra(alg, BilinearForm(H, RATIONAL), meta)


def herm_element(M: MetrizedAlgebra, entries: dict) -> list:
    """Coordinates of a Hermitian matrix from ``{(i, j): coefficient}`` on the real units (1-based)."""
    index = M.meta["basis_index"]
    x = [Fraction(0)] * M.dim
    for (i, j), c in entries.items():
        i, j = i - 1, j - 1
        if i == j:
            x[index[("diag", i)]] += parse_rational(c)
        else:
            a, b = min(i, j), max(i, j)
            x[index[("off", a, b, 0)]] += parse_rational(c)
    return x


def herm_matrices(M: MetrizedAlgebra, x) -> np.ndarray:
    """Float (n, n, d) array of the Hermitian matrix with coordinates ``x``."""
    n, level = M.meta["herm_n"], M.meta["herm_level"]
    raw, _, _ = herm_basis(n, level)
    return np.einsum("k,kija->ija", np.asarray(x, dtype=float), np.array(raw, dtype=float))


def _matrix_algebra(basis_raw, labels, n, level, name, params, meta_extra=None):
    km = _KMatrices(n, level)
    basis = [QArray(b) for b in basis_raw]
    norms = [einsum("ija,ija->", b, b) for b in basis]
    consts = _constants_in_basis(basis, km.commutator, norms)
    alg = Algebra(len(basis), consts, RATIONAL, labels)
    F = np.empty((len(basis), len(basis)), dtype=object)
    F.fill(Fraction(0))
    for k, nk in enumerate(norms):
        F[k, k] = nk
    meta = _meta(name, params, frobenius=True, **(meta_extra or {}))
    M = MetrizedAlgebra(alg, BilinearForm(F, RATIONAL), meta, strict=False)
    M.meta["metric_invariant"] = M.metric_invariant
    return M


@_register("matrix_lie", {"n": (_int, 2), "level": (_int, 1)}, "mat(n, K) under the commutator with the Frobenius form",
           lambda p: {"bw": 0 if p["n"] == 1 and p["level"] <= 1 else (2 if p["level"] <= 1 else 4)})
def matrix_lie(n: int = 2, level: int = 1) -> MetrizedAlgebra:
    """Real span of ``mat(n, K)`` under ``[x, y]`` with ``f = Re tr conj(x)^t y``.

    Over the octonions (level 3) the commutator is not a Lie bracket but bw is still defined.
    """
    if level not in (0, 1, 2, 3) or n < 1:
        raise AlgebraError(f"invalid matrix_lie parameters n={n}, level={level}")
    km = _KMatrices(n, level)
    raw, labels = [], []
    for i in range(n):
        for j in range(n):
            for u in range(km.d):
                raw.append(km.unit(i, j, u))
                labels.append(f"{'' if u == 0 else f'e{u}'}E{i + 1}{j + 1}")
    return _matrix_algebra(raw, labels, n, level, "matrix_lie", {"n": n, "level": level})


@_register("su", {"n": (_int, 3)}, "su(n) under the commutator with the Frobenius form")
def su(n: int = 3) -> MetrizedAlgebra:
    km = _KMatrices(n, 1)
    raw, labels = [], []
    for i in range(n):
        for j in range(i + 1, n):
            m = km.unit(i, j, 1)
            m[j, i, 1] = 1
            raw.append(m)
            labels.append(f"iS{i + 1}{j + 1}")
            m = km.unit(i, j, 0)
            m[j, i, 0] = -1
            raw.append(m)
            labels.append(f"A{i + 1}{j + 1}")
    for l in range(1, n):
        m = np.zeros((n, n, 2), dtype=np.int64)
        for i in range(l):
            m[i, i, 1] = 1
        m[l, l, 1] = -l
        raw.append(m)
        labels.append(f"iD{l}")
    return _matrix_algebra(raw, labels, n, 1, "su", {"n": n})


@_register("so", {"n": (_int, 4)}, "so(n) under the commutator with the Frobenius form",
           lambda p: {"bw": 1 if p["n"] >= 4 else Fraction(1, 2)})
def so(n: int = 4) -> MetrizedAlgebra:
    km = _KMatrices(n, 0)
    raw, labels = [], []
    for i in range(n):
        for j in range(i + 1, n):
            m = km.unit(i, j, 0)
            m[j, i, 0] = -1
            raw.append(m)
            labels.append(f"A{i + 1}{j + 1}")
    return _matrix_algebra(raw, labels, n, 0, "so", {"n": n})


# --- compact Okubo algebra -------------------------------------------------------------

def _gell_mann() -> list[np.ndarray]:
    s3 = np.sqrt(3.0)
    L = np.zeros((8, 3, 3), dtype=complex)
    L[0][0, 1] = L[0][1, 0] = 1
    L[1][0, 1], L[1][1, 0] = -1j, 1j
    L[2][0, 0], L[2][1, 1] = 1, -1
    L[3][0, 2] = L[3][2, 0] = 1
    L[4][0, 2], L[4][2, 0] = -1j, 1j
    L[5][1, 2] = L[5][2, 1] = 1
    L[6][1, 2], L[6][2, 1] = -1j, 1j
    L[7] = np.diag([1, 1, -2]) / s3
    return list(L)


def okubo_basis() -> list[np.ndarray]:
    """Orthonormal basis ``i lambda_a / sqrt 2`` of su(3) for ``h(x, y) = -tr(xy)``."""
    return [1j * g / np.sqrt(2.0) for g in _gell_mann()]


def okubo_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    w = np.exp(2j * np.pi / 3)
    h = -np.trace(x @ y)
    return w * x @ y - w**2 * y @ x + (w - w**2) / 3 * h * np.eye(3)


@_register("okubo_compact", {}, "compact real form of the Okubo algebra on su(3)",
           lambda p: {"bounds": (-1, 1)})
def okubo_compact() -> MetrizedAlgebra:
    basis = okubo_basis()
    C = np.zeros((8, 8, 8))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            z = okubo_product(bi, bj)
            coords = np.array([-np.trace(bk @ z) for bk in basis])
            if np.abs(coords.imag).max() > FLOAT_TOL:
                raise AlgebraError("Okubo product left su(3): imaginary coordinate residue")
            if np.abs(z - sum(c * b for c, b in zip(coords.real, basis))).max() > FLOAT_TOL:
                raise AlgebraError("Okubo product left su(3): reconstruction residue")
            C[i, j] = coords.real
    C[np.abs(C) < 1e-15] = 0.0
    alg = Algebra.from_tensor(C, FLOAT, [f"u{a + 1}" for a in range(8)])
    meta = _meta("okubo_compact", {}, matrices=basis)
    return MetrizedAlgebra(alg, BilinearForm.identity(8, FLOAT), meta)


def su3_commutator_float() -> Algebra:
    """su(3) commutator in the Okubo basis, for the Lie-admissibility check."""
    basis = okubo_basis()
    C = np.zeros((8, 8, 8))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            z = bi @ bj - bj @ bi
            C[i, j] = np.array([-np.trace(bk @ z) for bk in basis]).real
    return Algebra.from_tensor(C, FLOAT)


# --- low-dimensional examples ---------------------------------------------------------

@_register("c_epsilon", {"epsilon": (_rat, Fraction(0))}, "three-dimensional family C_eps",
           lambda p: {"constant_sect": Fraction(1, 4) - p["epsilon"] ** 2})
def c_epsilon(epsilon=Fraction(0)) -> MetrizedAlgebra:
    e = parse_rational(epsilon)
    if e < 0:
        raise AlgebraError("epsilon must be nonnegative")
    a, b = Fraction(1, 2) - e, Fraction(1, 2) + e
    consts = [
        (0, 0, 0, 1),
        (0, 1, 1, a), (1, 0, 1, a),
        (0, 2, 2, b), (2, 0, 2, b),
        (1, 1, 0, a),
        (2, 2, 0, b),
    ]
    alg = Algebra(3, consts, RATIONAL, ["f0", "f1", "f2"])
    return MetrizedAlgebra(alg, BilinearForm.identity(3), _meta("c_epsilon", {"epsilon": e}))


@_register("e_algebra", {"n": (_int, 4)}, "coordinatewise product modified by the sum functional",
           lambda p: {"exact": True, "sect_sign": -1})
def e_algebra(n: int = 4) -> MetrizedAlgebra:
    """``x * y = ((n+1)/(n-1)) x.y - (l(x) y + l(y) x)/(n-1)`` with its Killing form."""
    if n < 2:
        raise AlgebraError("e_algebra needs n >= 2")
    a, b = Fraction(n + 1, n - 1), Fraction(1, n - 1)
    consts = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                v = (a if i == j == k else 0) - b * ((k == j) + (k == i))
                if v:
                    consts.append((i, j, k, v))
    alg = Algebra(n, consts, RATIONAL)
    return MetrizedAlgebra(alg, killing_form(alg), _meta("e_algebra", {"n": n}))


def e_algebra_killing_formula(n: int) -> BilinearForm:
    a, b = Fraction(n + 1, n - 1), Fraction(1, n - 1)
    H = [[(a if i == j else 0) - b for j in range(n)] for i in range(n)]
    return BilinearForm(H)


def _kosier_algebra() -> Algebra:
    # x * y = (2 x1 y1 + x2 y3, 2 x1 y2, 2 x3 y1)
    return Algebra(3, [(0, 0, 0, 2), (1, 2, 0, 1), (0, 1, 1, 2), (2, 0, 2, 2)], RATIONAL, ["p", "q", "r"])


_KOSIER_H = [[1, 0, 0], [0, 0, Fraction(1, 2)], [0, Fraction(1, 2), 0]]


@_register("kosier", {}, "antiflexible, not power-associative",
           lambda p: {"constant_sect": Fraction(0), "identities": ["antiflexible", "lie_admissible"]})
def kosier() -> MetrizedAlgebra:
    return MetrizedAlgebra(_kosier_algebra(), BilinearForm(_KOSIER_H), _meta("kosier", {}))


@_register("sl2_kosier_bracket", {}, "sl(2) as the bracket of the Kosier product, Killing metric")
def sl2_kosier_bracket() -> MetrizedAlgebra:
    br = derived_algebra(_kosier_algebra(), "bracket")
    return MetrizedAlgebra(br, killing_form(br), _meta("sl2_kosier_bracket", {}))


@_register("r3_star", {}, "x * y = (x2 y3, x3 y1, x1 y2) with the dot product",
           lambda p: {"constant_sect": Fraction(0), "split": (Fraction(-1), Fraction(1))})
def r3_star() -> MetrizedAlgebra:
    alg = Algebra(3, [(1, 2, 0, 1), (2, 0, 1, 1), (0, 1, 2, 1)], RATIONAL)
    return MetrizedAlgebra(alg, BilinearForm.identity(3), _meta("r3_star", {}))


@_register("so3_killing", {}, "so(3) (cross product) metrized by minus its Killing form",
           lambda p: {"constant_sect": Fraction(1, 2)})
def so3_killing() -> MetrizedAlgebra:
    alg = Algebra(3, [(0, 1, 2, 1), (1, 0, 2, -1), (1, 2, 0, 1), (2, 1, 0, -1), (2, 0, 1, 1), (0, 2, 1, -1)], RATIONAL)
    return MetrizedAlgebra(alg, killing_form(alg).scaled(-1), _meta("so3_killing", {}))


@_register("two_step_double", {}, "free 2-step nilpotent Lie algebra on 2 generators doubled by its dual",
           lambda p: {"constant_sect": Fraction(0)})
def two_step_double() -> MetrizedAlgebra:
    """``g + g*`` with ``[(a, f), (b, g)] = ([a, b], ad*_a g - ad*_b f)`` and the pairing metric."""
    g = {(0, 1, 2): 1, (1, 0, 2): -1}  # [X, Y] = Z
    consts = [(i, j, k, v) for (i, j, k), v in g.items()]
    for (i, kk, j), v in g.items():
        # [e_i, phi_j] = -sum_k c_{ik}^j phi_k
        consts.append((i, 3 + j, 3 + kk, -v))
        consts.append((3 + j, i, 3 + kk, v))
    alg = Algebra(6, consts, RATIONAL, ["X", "Y", "Z", "X*", "Y*", "Z*"])
    P = [[1 if abs(i - j) == 3 else 0 for j in range(6)] for i in range(6)]
    return MetrizedAlgebra(alg, BilinearForm(P), _meta("two_step_double", {}))


@_register("zero", {"n": (_int, 3)}, "trivial product with the Euclidean metric",
           lambda p: {"constant_sect": Fraction(0)})
def zero(n: int = 3) -> MetrizedAlgebra:
    return MetrizedAlgebra(Algebra(n, [], RATIONAL), BilinearForm.identity(n), _meta("zero", {"n": n}))


# --- construction entry points --------------------------------------------------------

def parse_params(name: str, tokens: list[str]) -> dict:
    if name not in REGISTRY:
        raise AlgebraError(f"unknown preset {name!r}; known: {', '.join(sorted(REGISTRY))}")
    entry = REGISTRY[name]
    out: dict = {}
    positional = list(entry.positional)
    for tok in tokens:
        if tok == "":
            continue
        if "=" in tok:
            key, val = tok.split("=", 1)
        else:
            if not positional:
                raise AlgebraError(f"too many parameters for preset {name!r}")
            key, val = positional[0], tok
        if key not in entry.params:
            raise AlgebraError(f"preset {name!r} has no parameter {key!r}")
        if key in positional:
            positional.remove(key)
        try:
            out[key] = entry.params[key][0](val)
        except (ValueError, TypeError) as exc:
            raise AlgebraError(f"bad value {val!r} for {name}.{key}: {exc}") from exc
    for key, (_, default) in entry.params.items():
        out.setdefault(key, default)
    return out


def descriptor(spec: str) -> PresetDescriptor:
    """Parse ``preset:name:p1:p2`` (or ``name:p1``) into a descriptor; ``key=value`` tokens allowed."""
    parts = spec.split(":")
    if parts[0] == "preset":
        parts = parts[1:]
    if not parts or not parts[0]:
        raise AlgebraError(f"empty preset specification {spec!r}")
    name = parts[0]
    params = parse_params(name, parts[1:])
    entry = REGISTRY[name]
    return PresetDescriptor(name, params, entry.provenance, entry.expected(params))


def build(desc: PresetDescriptor | str, **params) -> MetrizedAlgebra:
    if isinstance(desc, str):
        desc = descriptor(desc) if ":" in desc or not params else PresetDescriptor(desc, params)
    entry = REGISTRY.get(desc.name)
    if entry is None:
        raise AlgebraError(f"unknown preset {desc.name!r}")
    M = entry.builder(**desc.params)
    M.meta.setdefault("provenance", entry.provenance)
    M.meta["expected"] = entry.expected({**{k: d for k, (_, d) in entry.params.items()}, **desc.params})
    return M


def list_presets() -> list[dict]:
    return [
        {"name": name, "params": {k: str(d) for k, (_, d) in e.params.items()}, "provenance": e.provenance}
        for name, e in sorted(REGISTRY.items())
    ]


def with_product(M: MetrizedAlgebra, kind: str) -> MetrizedAlgebra:
    """The derived algebra of ``kind`` carrying the same metric."""
    meta = dict(M.meta)
    meta["name"] = f"{M.meta.get('name', '?')}[{kind}]"
    return MetrizedAlgebra(derived_algebra(M.algebra, kind), M.form, meta)


# --- composition law ------------------------------------------------------------------

def composition_check(algebra: Algebra, form: BilinearForm, check_invariance: bool = False) -> DefectReport:
    """Linearized ``q(xy) = q(x)q(y)``: ``h(xy, wz) + h(wy, xz) = h(x, w)h(y, z)`` on basis 4-tuples.

    Axes of the defect tensor are (x, y, w, z).  With ``check_invariance`` the
    defect also includes ``h(xy, z) - h(x, yz)``.
    """
    C, H = algebra.tensor, form.array
    prod = einsum("xym,wzn,mn->xywz", C, C, H)
    lhs = prod + einsum("wyxz->xywz", prod)
    rhs = einsum("xw,yz->xywz", H, H)
    D = lhs - rhs
    defect = scalar_abs_max(D)
    witness = argmax_abs(D)
    name = "composition"
    if check_invariance:
        from .core import invariance_defect

        I = invariance_defect(algebra, form)
        di = scalar_abs_max(I)
        name = "symmetric_composition"
        if di > defect:
            defect, witness = di, ("invariance",) + argmax_abs(I)
    passed = _passes(defect, algebra.mode)
    return DefectReport(name, defect, None if passed else witness, passed)


# --- random rational algebras -----------------------------------------------------------

RANDOM_KINDS = ("generic", "commutative", "anticommutative")


def random_algebra(seed: int, n: int = 3, span: int = 3, den: int = 2) -> Algebra:
    """Structure constants drawn uniformly from ``{-span/den, ..., span/den}``."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, 31]))
    raw = rng.integers(-span, span + 1, size=(n, n, n))
    return Algebra(n, [(i, j, k, Fraction(int(v), den)) for (i, j, k), v in np.ndenumerate(raw) if v], RATIONAL)


def random_metrized(seed: int, n: int = 3, kind: str = "generic", span: int = 3) -> MetrizedAlgebra:
    """Random rational algebra with an invariant positive diagonal metric.

    ``h(e_i e_j, e_k) = mu[i, j, k]`` for a cyclically invariant ``mu``; it is
    fully symmetric for ``commutative`` and fully antisymmetric for ``anticommutative``.
    """
    if kind not in RANDOM_KINDS:
        raise AlgebraError(f"unknown random kind {kind!r}; known: {', '.join(RANDOM_KINDS)}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, RANDOM_KINDS.index(kind), 37]))
    raw = rng.integers(-span, span + 1, size=(n, n, n)).astype(object)
    mu = raw + raw.transpose(1, 2, 0) + raw.transpose(2, 0, 1)
    if kind == "commutative":
        mu = mu + mu.transpose(1, 0, 2)
    elif kind == "anticommutative":
        mu = mu - mu.transpose(1, 0, 2)
    d = [Fraction(int(v)) for v in rng.integers(1, 4, size=n)]
    consts = [(i, j, k, Fraction(int(v)) / d[k]) for (i, j, k), v in np.ndenumerate(mu) if v]
    H = np.empty((n, n), dtype=object)
    H.fill(Fraction(0))
    for k in range(n):
        H[k, k] = d[k]
    return MetrizedAlgebra(Algebra(n, consts, RATIONAL), BilinearForm(H, RATIONAL),
                           _meta("random", {"seed": seed, "n": n, "kind": kind}))
