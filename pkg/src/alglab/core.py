"""Algebras given by structure constants, their metrics, and basic operators.

Conventions: ``C[i, j, k]`` is the coefficient of ``e_k`` in ``e_i * e_j``.
Matrices act on column vectors, so ``L(x)[k, j] = sum_i x_i C[i, j, k]`` and
``R(x)[k, i] = sum_j x_j C[i, j, k]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

from .numeric import (
    FLOAT,
    FLOAT_TOL,
    MODES,
    RATIONAL,
    QArray,
    argmax_abs,
    as_mode_array,
    einsum,
    parse_rational,
    scalar_abs_max,
    to_float_array,
    to_output,
)


class AlgebraError(ValueError):
    """Malformed presentation, dimension mismatch, or mode mismatch."""


class MetricError(AlgebraError):
    """A form that fails to be an invariant nondegenerate metric."""


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise AlgebraError(f"unknown numeric mode {mode!r}")
    return mode


class Algebra:
    """Finite-dimensional algebra on a fixed basis, stored as sparse constants.

    ``constants`` is an iterable of ``(i, j, k, value)`` meaning that
    ``e_i * e_j`` has ``value`` as its ``e_k`` coordinate.  Zero entries are
    dropped.  The dense ``n x n x n`` tensor is built lazily once.
    """

    def __init__(
        self,
        dim: int,
        constants: Iterable[tuple[int, int, int, Any]],
        mode: str = RATIONAL,
        labels: Sequence[str] | None = None,
    ):
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise AlgebraError(f"dimension must be a positive integer, got {dim!r}")
        self.dim = int(dim)
        self.mode = _check_mode(mode)
        entries: dict[tuple[int, int, int], Any] = {}
        for entry in constants:
            i, j, k, value = entry
            for idx in (i, j, k):
                if not isinstance(idx, (int, np.integer)) or not 0 <= idx < self.dim:
                    raise AlgebraError(f"index {idx!r} out of range [0, {self.dim}) in {entry!r}")
            key = (int(i), int(j), int(k))
            if key in entries:
                raise AlgebraError(f"duplicate structure constant {key}")
            value = parse_rational(value) if mode == RATIONAL else float(value)
            if value != 0:
                entries[key] = value
        self.constants: tuple[tuple[int, int, int, Any], ...] = tuple(
            (i, j, k, v) for (i, j, k), v in sorted(entries.items())
        )
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != self.dim:
                raise AlgebraError("label count differs from dimension")
        self.labels = labels

    @classmethod
    def from_tensor(cls, tensor, mode: str = RATIONAL, labels=None) -> "Algebra":
        if isinstance(tensor, QArray):
            tensor = tensor.to_fractions()
        arr = np.asarray(tensor, dtype=object if mode == RATIONAL else float)
        if arr.ndim != 3 or not arr.shape[0] == arr.shape[1] == arr.shape[2]:
            raise AlgebraError(f"structure tensor must be n x n x n, got {arr.shape}")
        consts = [(i, j, k, v) for (i, j, k), v in np.ndenumerate(arr) if v != 0]
        return cls(arr.shape[0], consts, mode, labels)

    @cached_property
    def tensor(self):
        """Dense structure tensor in the working representation of the mode."""
        n = self.dim
        if self.mode == RATIONAL:
            dense = np.empty((n, n, n), dtype=object)
            dense.fill(Fraction(0))
            for i, j, k, v in self.constants:
                dense[i, j, k] = v
            return QArray.from_values(dense)
        dense = np.zeros((n, n, n))
        for i, j, k, v in self.constants:
            dense[i, j, k] = v
        return dense

    @cached_property
    def float_tensor(self) -> np.ndarray:
        return to_float_array(self.tensor)

    def to_float(self) -> "Algebra":
        if self.mode == FLOAT:
            return self
        return Algebra(self.dim, [(i, j, k, float(v)) for i, j, k, v in self.constants], FLOAT, self.labels)

    def vec(self, x) -> Any:
        """Coerce an element to the working representation, checking its length."""
        w = as_mode_array(x, self.mode)
        if w.shape != (self.dim,):
            raise AlgebraError(f"element has shape {w.shape}, expected ({self.dim},)")
        return w

    def basis(self, i: int):
        e = [0] * self.dim
        e[i] = 1
        return self.vec(e)

    def mul_w(self, x, y):
        return einsum("i,j,ijk->k", x, y, self.tensor)

    def left_w(self, x):
        return einsum("i,ijk->kj", x, self.tensor)

    def right_w(self, y):
        return einsum("j,ijk->ki", y, self.tensor)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.mode == other.mode
            and self.constants == other.constants
        )

    def __hash__(self):
        return hash((self.dim, self.mode, self.constants))

    def __repr__(self):
        return f"Algebra(dim={self.dim}, mode={self.mode!r}, nnz={len(self.constants)})"


class BilinearForm:
    """Symmetric bilinear form given by its Gram matrix on the basis."""

    def __init__(self, entries, mode: str = RATIONAL):
        self.mode = _check_mode(mode)
        arr = as_mode_array(entries, mode)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise AlgebraError(f"form must be square, got shape {arr.shape}")
        sym = arr - arr.T
        if mode == RATIONAL:
            if not sym.is_zero():
                raise AlgebraError("bilinear form is not symmetric")
        elif np.any(sym != 0):
            raise AlgebraError("bilinear form is not exactly symmetric")
        self.array = arr
        self.dim = arr.shape[0]

    @classmethod
    def identity(cls, n: int, mode: str = RATIONAL) -> "BilinearForm":
        return cls(np.eye(n, dtype=int).tolist(), mode)

    @cached_property
    def float_array(self) -> np.ndarray:
        return to_float_array(self.array)

    def entries(self) -> np.ndarray:
        return to_output(self.array, self.mode)

    def w(self, x, y):
        return einsum("i,ij,j->", x, self.array, y)

    def __call__(self, x, y):
        return self.w(as_mode_array(x, self.mode), as_mode_array(y, self.mode))

    def scaled(self, c) -> "BilinearForm":
        if self.mode == RATIONAL:
            return BilinearForm(self.array * parse_rational(c), self.mode)
        return BilinearForm(self.array * float(c), self.mode)

    def __eq__(self, other):
        if not isinstance(other, BilinearForm) or other.mode != self.mode or other.dim != self.dim:
            return NotImplemented
        if self.mode == RATIONAL:
            return (self.array - other.array).is_zero()
        return bool(np.array_equal(self.array, other.array))

    def __repr__(self):
        return f"BilinearForm(dim={self.dim}, mode={self.mode!r})"


@dataclass
class MetricReport:
    invariant: bool
    max_defect: Any
    witness: tuple[int, int, int] | None
    nondegenerate: bool
    determinant: Any
    signature: tuple[int, int, int]
    definiteness: str

    def as_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "max_defect": self.max_defect,
            "witness": list(self.witness) if self.witness else None,
            "nondegenerate": self.nondegenerate,
            "determinant": self.determinant,
            "signature": list(self.signature),
            "definiteness": self.definiteness,
        }


def _exact_det(mat: np.ndarray) -> Fraction:
    a = [[Fraction(v) for v in row] for row in mat]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _exact_inertia(mat: np.ndarray) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by symmetric congruence elimination."""
    a = [[Fraction(v) for v in row] for row in mat]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j makes the (i, i) entry 2 a_ij != 0
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        d = a[piv][piv]
        pos += d > 0
        neg += d < 0
        rest = [i for i in active if i != piv]
        for r in rest:
            f = a[r][piv] / d
            if f:
                for k in range(n):
                    a[r][k] -= f * a[piv][k]
                for k in range(n):
                    a[k][r] -= f * a[k][piv]
        active = rest
    return pos, neg, n - pos - neg


def _leading_minor_class(mat: np.ndarray) -> str | None:
    minors = [_exact_det(mat[:k, :k]) for k in range(1, mat.shape[0] + 1)]
    if all(m > 0 for m in minors):
        return "positive"
    if all((m > 0) if k % 2 == 0 else (m < 0) for k, m in zip(range(1, len(minors) + 1), minors)):
        return "negative"
    return None


def _definiteness(sig: tuple[int, int, int]) -> str:
    p, q, z = sig
    if z:
        return "degenerate"
    if q == 0:
        return "positive"
    if p == 0:
        return "negative"
    return "indefinite"


def invariance_defect(algebra: Algebra, form: BilinearForm):
    """Tensor ``h(e_i e_j, e_k) - h(e_i, e_j e_k)`` over all basis triples."""
    C, H = algebra.tensor, form.array
    return einsum("ijm,mk->ijk", C, H) - einsum("im,jkm->ijk", H, C)


def check_metric(algebra: Algebra, form: BilinearForm) -> MetricReport:
    if algebra.dim != form.dim:
        raise AlgebraError("form and algebra dimensions differ")
    if algebra.mode != form.mode:
        raise AlgebraError("form and algebra numeric modes differ")
    D = invariance_defect(algebra, form)
    defect = scalar_abs_max(D)
    if algebra.mode == RATIONAL:
        invariant = defect == 0
        mat = form.array.to_fractions()
        det = _exact_det(mat)
        nondeg = det != 0
        sig = _exact_inertia(mat)
        definiteness = _leading_minor_class(mat) or _definiteness(sig)
    else:
        invariant = defect <= FLOAT_TOL
        H = form.array
        det = float(np.linalg.det(H))
        scale = float(np.abs(H).max()) if H.size else 0.0
        nondeg = abs(det) > 1e-12 * scale ** H.shape[0] if scale > 0 else False
        ev = np.linalg.eigvalsh(H)
        sig = (int(np.sum(ev > 1e-10)), int(np.sum(ev < -1e-10)), int(np.sum(np.abs(ev) <= 1e-10)))
        definiteness = _definiteness(sig)
    witness = None if invariant else argmax_abs(D)
    return MetricReport(invariant, defect, witness, nondeg, det, sig, definiteness)


class MetrizedAlgebra:
    """An algebra paired with a symmetric bilinear form.

    With ``strict=True`` (default) the form must be invariant and
    nondegenerate.  ``strict=False`` admits forms such as the Frobenius
    product on ``mat(n, C)`` under the commutator, which are used only as norms;
    such objects report ``metric_invariant == False``.
    """

    def __init__(self, algebra: Algebra, form: BilinearForm, meta: dict | None = None, strict: bool = True):
        if algebra.mode != form.mode:
            raise AlgebraError("algebra and form numeric modes differ")
        if algebra.dim != form.dim:
            raise AlgebraError("algebra and form dimensions differ")
        self.algebra = algebra
        self.form = form
        self.meta = dict(meta or {})
        if strict:
            rep = self.report
            if not rep.invariant:
                raise MetricError(f"form is not invariant (defect {rep.max_defect} at {rep.witness})")
            if not rep.nondegenerate:
                raise MetricError("form is degenerate")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def mode(self) -> str:
        return self.algebra.mode

    @cached_property
    def report(self) -> MetricReport:
        return check_metric(self.algebra, self.form)

    @property
    def metric_invariant(self) -> bool:
        return self.report.invariant and self.report.nondegenerate

    @property
    def euclidean(self) -> bool:
        return self.report.definiteness == "positive"

    @cached_property
    def form_inverse(self):
        if self.mode == RATIONAL:
            return QArray.from_values(_exact_inverse(self.form.array.to_fractions()))
        return np.linalg.inv(self.form.array)

    def to_float(self) -> "MetrizedAlgebra":
        if self.mode == FLOAT:
            return self
        return MetrizedAlgebra(
            self.algebra.to_float(), BilinearForm(self.form.float_array, FLOAT), self.meta, strict=False
        )

    def __repr__(self):
        name = self.meta.get("name", "")
        return f"MetrizedAlgebra({name!r}, dim={self.dim}, mode={self.mode!r})"


def _exact_inverse(mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise MetricError("form is singular")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [v / pv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = a[i][n + j]
    return out


def multiply(algebra: Algebra, x, y):
    return to_output(algebra.mul_w(algebra.vec(x), algebra.vec(y)), algebra.mode)


def mult_operators(algebra: Algebra, x):
    """Return ``(L(x), R(x))`` as matrices acting on coordinate columns."""
    xw = algebra.vec(x)
    return to_output(algebra.left_w(xw), algebra.mode), to_output(algebra.right_w(xw), algebra.mode)


def associator_w(algebra: Algebra, x, y, z):
    return algebra.mul_w(algebra.mul_w(x, y), z) - algebra.mul_w(x, algebra.mul_w(y, z))


def associator(algebra: Algebra, x, y, z):
    xw, yw, zw = algebra.vec(x), algebra.vec(y), algebra.vec(z)
    return to_output(associator_w(algebra, xw, yw, zw), algebra.mode)


def associator_tensor(algebra: Algebra):
    """``T[i, j, k, l]``: coordinate ``l`` of ``[e_i, e_j, e_k]``."""
    C = algebra.tensor
    return einsum("ijm,mkl->ijkl", C, C) - einsum("jkm,iml->ijkl", C, C)


DERIVED_KINDS = ("bracket", "symmetrized", "adjoint")


def derived_algebra(algebra: Algebra, kind: str) -> Algebra:
    """Commutator, anticommutator, or adjoint product ``x # y = -y * x``."""
    C = algebra.tensor
    Ct = C.transpose(1, 0, 2)
    if kind == "bracket":
        D = C - Ct
    elif kind == "symmetrized":
        D = C + Ct
    elif kind == "adjoint":
        D = -Ct
    else:
        raise AlgebraError(f"unknown derived algebra kind {kind!r}")
    return Algebra.from_tensor(D, algebra.mode, algebra.labels)


def killing_form(algebra: Algebra) -> BilinearForm:
    """``tau(e_i, e_j) = tr L(e_i) L(e_j)``."""
    C = algebra.tensor
    return BilinearForm(einsum("iba,jab->ij", C, C), algebra.mode)


def _block(a, b, mode):
    na, nb = a.shape[0], b.shape[0]
    if mode == RATIONAL:
        fa, fb = a.to_fractions(), b.to_fractions()
        out = np.full((na + nb, na + nb), Fraction(0), dtype=object)
        out[:na, :na] = fa
        out[na:, na:] = fb
        return out
    out = np.zeros((na + nb, na + nb))
    out[:na, :na] = a
    out[na:, na:] = b
    return out


COMPOSE_KINDS = ("direct_sum", "tensor_product")


def compose(kind: str, first: MetrizedAlgebra, second: MetrizedAlgebra) -> MetrizedAlgebra:
    if first.mode != second.mode:
        raise AlgebraError("cannot compose algebras in different numeric modes")
    mode = first.mode
    A, B = first.algebra, second.algebra
    na, nb = A.dim, B.dim
    if kind == "direct_sum":
        consts = list(A.constants) + [(i + na, j + na, k + na, v) for i, j, k, v in B.constants]
        alg = Algebra(na + nb, consts, mode)
        form = BilinearForm(_block(first.form.array, second.form.array, mode), mode)
    elif kind == "tensor_product":
        consts = [
            (a * nb + b, c * nb + d, e * nb + f, v * w)
            for a, c, e, v in A.constants
            for b, d, f, w in B.constants
        ]
        alg = Algebra(na * nb, consts, mode)
        H = einsum("ac,bd->abcd", first.form.array, second.form.array).reshape(na * nb, na * nb)
        form = BilinearForm(H, mode)
    else:
        raise AlgebraError(f"unknown composition kind {kind!r}")
    name = f"{kind}({first.meta.get('name', '?')},{second.meta.get('name', '?')})"
    return MetrizedAlgebra(alg, form, {"name": name})


def trace_form_of_left(algebra: Algebra):
    """Vector ``tr L(e_i)``, the linear form whose vanishing means exactness."""
    return einsum("ijj->i", algebra.tensor)
