"""Polynomial identities, curvature operators, and the S^2 Lambda^2 tensor calculus.

Every identity is checked in fully multilinearized form on all basis tuples,
which is exact in rational mode and valid in characteristic zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Any, Callable

import numpy as np

from .core import Algebra, AlgebraError, MetrizedAlgebra, associator_tensor
from .numeric import (
    FLOAT_TOL,
    RATIONAL,
    QArray,
    argmax_abs,
    einsum,
    scalar_abs_max,
    to_output,
)


class SymmetryError(AlgebraError):
    """A rank-4 tensor violates its declared symmetry class."""


@dataclass
class DefectReport:
    identity: str
    max_defect: Any
    witness: tuple | None
    passed: bool
    element_witness: list | None = None

    def as_dict(self) -> dict:
        return {
            "identity": self.identity,
            "max_defect": self.max_defect,
            "witness": list(self.witness) if self.witness is not None else None,
            "element_witness": self.element_witness,
            "passed": self.passed,
        }


def _passes(defect, mode: str) -> bool:
    return defect == 0 if mode == RATIONAL else float(defect) <= FLOAT_TOL


def _perm(spec_in: str, spec_out: str, arr):
    return einsum(f"{spec_in}->{spec_out}", arr)


def _sign(p: tuple[int, ...]) -> int:
    s, p = 1, list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def _sum(terms):
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return out


def at_full(algebra: Algebra):
    """``AT[i, j, k, l]``: signed sum of associators over permutations of ``(e_i, e_j, e_k)``."""
    T = associator_tensor(algebra)
    terms = []
    for p in permutations(range(3)):
        src = "".join("ijk"[q] for q in p) + "l"
        t = _perm(src, "ijkl", T)
        terms.append(t if _sign(p) > 0 else -t)
    return _sum(terms)


def _commutative(A):
    C = A.tensor
    return C - C.transpose(1, 0, 2)


def _anticommutative(A):
    C = A.tensor
    return C + C.transpose(1, 0, 2)


def _associative(A):
    return associator_tensor(A)


def _flexible(A):
    T = associator_tensor(A)
    return T + _perm("kjil", "ijkl", T)


def _antiflexible(A):
    T = associator_tensor(A)
    return T - _perm("kjil", "ijkl", T)


def _alternative(A):
    T = associator_tensor(A)
    left = T + _perm("jikl", "ijkl", T)
    right = T + _perm("ikjl", "ijkl", T)
    return _stack(left, right)


def _left_symmetric(A):
    T = associator_tensor(A)
    return T - _perm("jikl", "ijkl", T)


def _associator_cyclic(A):
    T = associator_tensor(A)
    return T + _perm("kijl", "ijkl", T) + _perm("jkil", "ijkl", T)


def _stack(a, b):
    if isinstance(a, QArray):
        fa, fb = a.to_fractions(), b.to_fractions()
        return QArray.from_values(np.stack([fa, fb]))
    return np.stack([a, b])


def _jordan_slices(A) -> Callable[[int], Any]:
    """Slice ``a`` of the full linearization of ``[x x, y, x]`` (x -> e_a, e_b, e_c)."""
    C = A.tensor
    T = associator_tensor(A)

    def part(a):
        Ca = C[a]            # (b, m) = e_a e_b
        Cta = C[:, a, :]     # (b, m) = e_b e_a
        Ta = T[:, :, a, :]   # (m, y, l) with e_a in the third slot
        j_first = einsum("bm,mycl->bycl", Ca, T)          # J0[a,b,y,c]
        j_second = einsum("bm,mycl->bycl", Cta, T)        # J0[b,a,y,c]
        j_third = einsum("bcm,myl->bycl", C, Ta)          # J0[b,c,y,a]
        return (
            j_first + _perm("cybl", "bycl", j_first)
            + j_second + _perm("cybl", "bycl", j_second)
            + j_third + _perm("cybl", "bycl", j_third)
        )

    return part


def _malcev_slices(A) -> Callable[[int], Any]:
    """Slice over the first copy of ``x`` of the linearized Malcev identity.

    Identity: (xy)(xz) - ((xy)z)x - ((yz)x)x - ((zx)x)y, with x -> (e_a, e_b).
    Output indices (b, y, z, l).
    """
    C = A.tensor
    YZ = C  # (y, z, m)

    def part(a):
        Ca_l = C[a]          # (t, m): e_a e_t
        Ca_r = C[:, a, :]    # (t, m): e_t e_a
        # (x1 y)(x2 z) + (x2 y)(x1 z)
        ay = Ca_l                                  # (y, p) = e_a e_y
        by = C                                     # (b, y, p)
        t1 = einsum("yp,bzq,pql->byzl", ay, C, C)  # (e_a y)(e_b z)
        t2 = einsum("byp,zq,pql->byzl", by, Ca_l, C)  # (e_b y)(e_a z)
        # ((x1 y) z) x2 + ((x2 y) z) x1
        ayz = einsum("yp,pzq->yzq", ay, C)         # ((e_a y) z)
        t3 = einsum("yzq,bql->byzl", ayz, _perm("qbl", "bql", C))  # ... x2 = e_b on the right
        byz = einsum("byp,pzq->byzq", by, C)
        t4 = einsum("byzq,ql->byzl", byz, Ca_r)    # ... e_a on the right
        # ((y z) x1) x2 + ((y z) x2) x1
        yza = einsum("yzm,mq->yzq", YZ, Ca_r)      # (yz) e_a
        t5 = einsum("yzq,qbl->byzl", yza, C)       # ((yz) e_a) e_b
        yzb = einsum("yzm,mbq->byzq", YZ, C)       # (yz) e_b
        t6 = einsum("byzq,ql->byzl", yzb, Ca_r)
        # ((z x1) x2) y + ((z x2) x1) y
        za = Ca_r                                   # (z, q) = z e_a
        zab = einsum("zq,qbr->bzr", za, C)          # (z e_a) e_b
        t7 = einsum("bzr,ryl->byzl", zab, C)
        zb = einsum("zbq->bzq", C)                  # z e_b
        zba = einsum("bzq,qr->bzr", zb, Ca_r)
        t8 = einsum("bzr,ryl->byzl", zba, C)
        return t1 + t2 - t3 - t4 - t5 - t6 - t7 - t8

    return part


def _power4_slices(A) -> Callable[[int], Any]:
    """Slice of the linearized degree-4 power-associativity conditions.

    Output axes: (condition, b, c, d, l), x -> (e_a, e_b, e_c, e_d).
    Conditions compare (x^2)(x^2), ((x^2)x)x, (x(x^2))x, x((x^2)x), x(x(x^2)).
    """
    C = A.tensor

    def words():
        # all five words as 5-index tensors over (a, b, c, d, l) with letters in order
        w0 = einsum("abm,cdp,mpl->abcdl", C, C, C)           # (ab)(cd)
        w1 = einsum("abm,mcp,pdl->abcdl", C, C, C)           # ((ab)c)d
        w2 = einsum("bcm,amp,pdl->abcdl", C, C, C)           # (a(bc))d
        w3 = einsum("bcm,mdp,apl->abcdl", C, C, C)           # a((bc)d)
        w4 = einsum("cdm,bmp,apl->abcdl", C, C, C)           # a(b(cd))
        return [w0, w1, w2, w3, w4]

    cache: dict = {}

    def symmetrized(k):
        if k not in cache:
            w = words()
            for i, wi in enumerate(w):
                terms = [_perm("".join("abcd"[q] for q in p) + "l", "abcdl", wi) for p in permutations(range(4))]
                cache[i] = _sum(terms)
        return cache[k]

    def part(a):
        base = symmetrized(0)
        diffs = [symmetrized(k)[a] - base[a] for k in range(1, 5)]
        return _stack_many(diffs)

    return part


def _stack_many(arrs):
    if isinstance(arrs[0], QArray):
        return QArray.from_values(np.stack([x.to_fractions() for x in arrs]))
    return np.stack(arrs)


def _power3(A):
    """Linearized ``(x x) x - x (x x)``."""
    C = A.tensor
    w = einsum("abm,mcl->abcl", C, C) - einsum("bcm,aml->abcl", C, C)
    return _sum([_perm("".join("abc"[q] for q in p) + "l", "abcl", w) for p in permutations(range(3))])


TENSOR_IDENTITIES: dict[str, Callable[[Algebra], Any]] = {
    "commutative": _commutative,
    "anticommutative": _anticommutative,
    "associative": _associative,
    "flexible": _flexible,
    "antiflexible": _antiflexible,
    "alternative": _alternative,
    "left_symmetric": _left_symmetric,
    "lie_admissible": at_full,
    "associator_cyclic": _associator_cyclic,
}

SLICED_IDENTITIES = {
    "jordan": (_jordan_slices, _commutative),
    "malcev": (_malcev_slices, _anticommutative),
}

IDENTITY_NAMES = tuple(TENSOR_IDENTITIES) + ("jordan", "malcev", "fourth_power_associative")


def _better(a, b) -> bool:
    return a > b


def _scan_slices(A: Algebra, part: Callable[[int], Any]):
    best, witness = None, None
    for a in range(A.dim):
        D = part(a)
        m = scalar_abs_max(D)
        if best is None or _better(m, best):
            best, witness = m, (a,) + argmax_abs(D)
    return best, witness


def _element_witness(A: Algebra, name: str) -> list | None:
    """Smallest 0/1 coordinate vector violating the unlinearized identity, if cheap."""
    if A.dim > 8:
        return None
    mul = A.mul_w
    for bits in product((0, 1), repeat=A.dim):
        if not any(bits):
            continue
        x = A.vec(list(bits))
        if name == "fourth_power_associative":
            x2 = mul(x, x)
            vals = [mul(x2, x) - mul(x, x2)]
            x4 = mul(x2, x2)
            vals += [mul(mul(x2, x), x) - x4, mul(mul(x, x2), x) - x4,
                     mul(x, mul(x2, x)) - x4, mul(x, mul(x, x2)) - x4]
            if any(scalar_abs_max(v) != 0 if A.mode == RATIONAL else scalar_abs_max(v) > FLOAT_TOL for v in vals):
                return list(bits)
    return None


def check_identity(algebra: Algebra, name: str) -> DefectReport:
    mode = algebra.mode
    if name in TENSOR_IDENTITIES:
        D = TENSOR_IDENTITIES[name](algebra)
        defect = scalar_abs_max(D)
        passed = _passes(defect, mode)
        return DefectReport(name, defect, None if passed else argmax_abs(D), passed)
    if name in SLICED_IDENTITIES:
        slicer, prereq = SLICED_IDENTITIES[name]
        pre = prereq(algebra)
        pre_defect = scalar_abs_max(pre)
        defect, witness = _scan_slices(algebra, slicer(algebra))
        if pre_defect > defect:
            defect, witness = pre_defect, ("prerequisite",) + argmax_abs(pre)
        passed = _passes(defect, mode)
        return DefectReport(name, defect, None if passed else witness, passed)
    if name == "fourth_power_associative":
        D3 = _power3(algebra)
        d3 = scalar_abs_max(D3)
        d4, w4 = _scan_slices(algebra, _power4_slices(algebra))
        if d3 >= d4:
            defect, witness = d3, ("degree3",) + argmax_abs(D3)
        else:
            defect, witness = d4, ("degree4",) + w4
        passed = _passes(defect, mode)
        elem = None if passed else _element_witness(algebra, name)
        return DefectReport(name, defect, None if passed else witness, passed, elem)
    raise AlgebraError(f"unknown identity {name!r}; known: {', '.join(IDENTITY_NAMES)}")


# --- curvature operators -----------------------------------------------------

def curvature_w(algebra: Algebra, side: str, x, y):
    Lx, Ly = (algebra.left_w(x), algebra.left_w(y)) if side == "left" else (algebra.right_w(x), algebra.right_w(y))
    br = algebra.mul_w(x, y) - algebra.mul_w(y, x)
    comm = einsum("ab,bc->ac", Lx, Ly) - einsum("ab,bc->ac", Ly, Lx)
    if side == "left":
        return comm - algebra.left_w(br)
    if side == "right":
        return comm + algebra.right_w(br)
    raise AlgebraError(f"side must be 'left' or 'right', got {side!r}")


def curvature(algebra: Algebra, side: str, x, y):
    """``R(x, y) = [L(x), L(y)] - L([x, y])`` or ``Rbar(x, y) = [R(x), R(y)] + R([x, y])``."""
    return to_output(curvature_w(algebra, side, algebra.vec(x), algebra.vec(y)), algebra.mode)


def curvature_tensors(algebra: Algebra):
    """Return ``(Rl, Rr)`` with ``Rl[i, j, k, l]`` the ``l``-th coordinate of ``R(e_i, e_j) e_k``."""
    T = associator_tensor(algebra)
    Rl = -T + _perm("jikl", "ijkl", T)
    Rr = -_perm("kijl", "ijkl", T) + _perm("kjil", "ijkl", T)
    return Rl, Rr


def at_tensor(algebra: Algebra, x, y, z):
    xs = [algebra.vec(v) for v in (x, y, z)]
    from .core import associator_w

    terms = []
    for p in permutations(range(3)):
        t = associator_w(algebra, xs[p[0]], xs[p[1]], xs[p[2]])
        terms.append(t if _sign(p) > 0 else -t)
    return to_output(_sum(terms), algebra.mode)


# --- rank-4 tensors ------------------------------------------------------------

SYMMETRY_CLASSES = ("none", "S2Lambda2", "CurvatureType", "FullyAntisymmetric")


@dataclass
class Rank4Tensor:
    entries: Any
    symmetry_class: str
    mode: str

    def __post_init__(self):
        if self.symmetry_class not in SYMMETRY_CLASSES:
            raise AlgebraError(f"unknown symmetry class {self.symmetry_class!r}")
        if len(self.entries.shape) != 4 or len(set(self.entries.shape)) != 1:
            raise AlgebraError("rank-4 tensor must be n x n x n x n")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def symmetry_defect(self, cls: str | None = None):
        cls = cls or self.symmetry_class
        a = self.entries
        parts = []
        if cls in ("S2Lambda2", "CurvatureType"):
            parts += [a + _perm("jikl", "ijkl", a), a + _perm("ijlk", "ijkl", a), a - _perm("klij", "ijkl", a)]
        if cls == "CurvatureType":
            parts.append(a + _perm("jkil", "ijkl", a) + _perm("kijl", "ijkl", a))
        if cls == "FullyAntisymmetric":
            for p in permutations(range(4)):
                if p == (0, 1, 2, 3):
                    continue
                src = "".join("ijkl"[q] for q in p)
                t = _perm(src, "ijkl", a)
                parts.append(a - t if _sign(p) > 0 else a + t)
        if not parts:
            return Fraction(0) if self.mode == RATIONAL else 0.0
        return max(scalar_abs_max(p) for p in parts)

    def validate(self) -> "Rank4Tensor":
        d = self.symmetry_defect()
        if not _passes(d, self.mode):
            raise SymmetryError(f"tensor is not {self.symmetry_class} (defect {d})")
        return self

    def value(self, x, y, z, w):
        return einsum("ijkl,i,j,k,l->", self.entries, x, y, z, w)

    def __add__(self, other: "Rank4Tensor") -> "Rank4Tensor":
        return Rank4Tensor(self.entries + other.entries, "none", self.mode)

    def __sub__(self, other: "Rank4Tensor") -> "Rank4Tensor":
        return Rank4Tensor(self.entries - other.entries, "none", self.mode)

    def scaled(self, c) -> "Rank4Tensor":
        return Rank4Tensor(self.entries * c, self.symmetry_class, self.mode)

    def is_zero(self) -> bool:
        return _passes(scalar_abs_max(self.entries), self.mode)

    def equals(self, other: "Rank4Tensor") -> bool:
        return _passes(scalar_abs_max(self.entries - other.entries), self.mode)


def curvature_flat(metrized: MetrizedAlgebra) -> Rank4Tensor:
    """``(R + Rbar)(x, y, z, w) = h(R(x, y) z, w) + h(Rbar(x, y) z, w)``, validated as S2Lambda2."""
    Rl, Rr = curvature_tensors(metrized.algebra)
    flat = einsum("ijkm,ml->ijkl", Rl + Rr, metrized.form.array)
    return Rank4Tensor(flat, "S2Lambda2", metrized.mode).validate()


def project_curvature(tensor: Rank4Tensor) -> tuple[Rank4Tensor, Rank4Tensor]:
    """Orthogonal projections of an S2Lambda2 tensor onto curvature type and Lambda^4."""
    if tensor.symmetry_class not in ("S2Lambda2", "CurvatureType", "FullyAntisymmetric"):
        raise AlgebraError(f"projection needs an S2Lambda2 tensor, got {tensor.symmetry_class}")
    tensor.validate()
    a = tensor.entries
    a1 = _perm("jkil", "ijkl", a)
    a2 = _perm("kijl", "ijkl", a)
    third = Fraction(1, 3) if tensor.mode == RATIONAL else 1.0 / 3.0
    P = (a * 2 - a1 - a2) * third
    Q = (a + a1 + a2) * third
    return (
        Rank4Tensor(P, "CurvatureType", tensor.mode).validate(),
        Rank4Tensor(Q, "FullyAntisymmetric", tensor.mode).validate(),
    )


def pairing(metrized: MetrizedAlgebra, s: Rank4Tensor, t: Rank4Tensor):
    """Complete contraction of two covariant rank-4 tensors with the inverse metric."""
    G = metrized.form_inverse
    raised = einsum("abcd,ai,bj,ck,dl->ijkl", t.entries, G, G, G, G)
    return einsum("ijkl,ijkl->", s.entries, raised)


# --- structural identity checks ---------------------------------------------------

def self_adjoint_defect(algebra: Algebra):
    """Largest entry of ``R(e_i, e_j) - Rbar(e_i, e_j)`` over basis pairs."""
    Rl, Rr = curvature_tensors(algebra)
    return scalar_abs_max(Rl - Rr)


def derivation_defect(algebra: Algebra):
    """Largest defect of ``A(x) = L(x) - R(x)`` being a derivation, over basis triples.

    ``A(x)(y z) - (A(x) y) z - y (A(x) z)`` with ``A(x) y = [x, y]``.
    """
    C = algebra.tensor
    B = C - C.transpose(1, 0, 2)
    lhs = einsum("jkm,xml->xjkl", C, B)
    t1 = einsum("xjm,mkl->xjkl", B, C)
    t2 = einsum("xkm,jml->xjkl", B, C)
    return scalar_abs_max(lhs - t1 - t2)


def bianchi_defects(algebra: Algebra) -> tuple[Any, Any]:
    """Defects of both differential Bianchi analogues over all basis triples.

    Left: cyc [L(x), R(y,z)] - R(L(x)y, z) - R(y, L(x)z) = L(AT(x,y,z)),
    right: the same with R(.) -> right multiplication and the adjoint curvature.
    Tensors are indexed (x, y, z, k, l): coordinate l of the operator applied to e_k.
    """
    C = algebra.tensor
    Rl, Rr = curvature_tensors(algebra)
    AT = at_full(algebra)

    # left multiplication: L(x) e_k = e_x e_k -> C[x, k, l]
    e_left = (
        einsum("yzkm,xml->xyzkl", Rl, C)
        - einsum("xkm,yzml->xyzkl", C, Rl)
        - einsum("xym,mzkl->xyzkl", C, Rl)
        - einsum("xzm,ymkl->xyzkl", C, Rl)
    )
    cyc_left = e_left + _perm("yzxkl", "xyzkl", e_left) + _perm("zxykl", "xyzkl", e_left)
    rhs_left = einsum("xyzm,mkl->xyzkl", AT, C)

    # right multiplication: R(x) e_k = e_k e_x -> C[k, x, l]
    e_right = (
        einsum("yzkm,mxl->xyzkl", Rr, C)
        - einsum("kxm,yzml->xyzkl", C, Rr)
        - einsum("yxm,mzkl->xyzkl", C, Rr)
        - einsum("zxm,ymkl->xyzkl", C, Rr)
    )
    cyc_right = e_right + _perm("yzxkl", "xyzkl", e_right) + _perm("zxykl", "xyzkl", e_right)
    rhs_right = einsum("xyzm,kml->xyzkl", AT, C)
    return scalar_abs_max(cyc_left - rhs_left), scalar_abs_max(cyc_right - rhs_right)


def prepoisson_defect(algebra: Algebra):
    """Defect of ``[x,y,z]_sym + [x,y,z]_bracket = 2[x,y,z] - 2[z,y,x]`` on basis triples."""
    from .core import derived_algebra

    T = associator_tensor(algebra)
    Ts = associator_tensor(derived_algebra(algebra, "symmetrized"))
    Tb = associator_tensor(derived_algebra(algebra, "bracket"))
    rhs = T * 2 - _perm("kjil", "ijkl", T) * 2
    return scalar_abs_max(Ts + Tb - rhs)


def lie_admissible_cyclic_agreement(algebra: Algebra) -> dict:
    """The three conditions whose equivalence is asserted for any algebra."""
    mode = algebra.mode
    flex = check_identity(algebra, "flexible").passed
    cyc = check_identity(algebra, "associator_cyclic").passed
    deriv = _passes(derivation_defect(algebra), mode)
    selfadj = _passes(self_adjoint_defect(algebra), mode)
    return {"flexible_and_cyclic": flex and cyc, "derivation": deriv, "self_adjoint": selfadj}
