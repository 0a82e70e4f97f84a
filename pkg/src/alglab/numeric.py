"""Dual numeric tower: exact rationals as scaled integer arrays, or float64.

A :class:`QArray` holds an integer numerator array and one positive common
denominator.  Contractions of several QArrays are integer einsums, so exact
tensor identities over dimension ~27 cost about as much as float ones.
Numerators live in int64 while a magnitude bound proves that safe and move
to Python-int object arrays otherwise.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable

import numpy as np

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)

FLOAT_TOL = 1e-9

_SAFE = 2**62


def _max_abs_int(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return max(abs(int(v)) for v in num.flat)
    return int(np.abs(num).max())


def _gcd_all(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return reduce(math.gcd, (int(v) for v in num.flat), 0)
    return int(np.gcd.reduce(np.abs(num).ravel()))


def _fit(num: np.ndarray, bound: int) -> np.ndarray:
    """Pick int64 storage when ``bound`` proves it cannot overflow."""
    if bound < _SAFE:
        if num.dtype != np.int64:
            return num.astype(np.int64)
        return num
    if num.dtype != object:
        return num.astype(object)
    return num


def parse_rational(value: Any) -> Fraction:
    """Parse ints, Fractions, and ``"p/q"`` strings; denominators must be reduced."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        m = re.fullmatch(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?", value)
        if not m:
            raise ValueError(f"not a rational literal: {value!r}")
        p = int(m.group(1))
        q = int(m.group(2)) if m.group(2) else 1
        if q == 0:
            raise ValueError(f"zero denominator in {value!r}")
        if math.gcd(p, q) != 1:
            raise ValueError(f"unreduced rational {value!r}")
        return Fraction(p, q)
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class QArray:
    """Exact rational array ``num / den`` with a shared denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: np.ndarray, den: int = 1, *, reduce_: bool = True):
        num = np.asarray(num)
        if num.dtype not in (np.int64, object):
            num = num.astype(np.int64)
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("QArray denominator is zero")
        if den < 0:
            num, den = -num, -den
        if reduce_ and den != 1:
            g = math.gcd(_gcd_all(num), den)
            if g > 1:
                num = num // g
                den //= g
        self.num = _fit(num, _max_abs_int(num))
        self.den = den

    @classmethod
    def from_values(cls, values: Any) -> "QArray":
        arr = np.asarray(values, dtype=object)
        fr = np.vectorize(parse_rational, otypes=[object])(arr) if arr.size else arr
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr.flat), 1)
        num = np.empty(arr.shape, dtype=object)
        for idx, f in np.ndenumerate(fr):
            num[idx] = f.numerator * (den // f.denominator)
        return cls(num, den)

    @classmethod
    def zeros(cls, shape) -> "QArray":
        return cls(np.zeros(shape, dtype=np.int64), 1)

    @classmethod
    def identity(cls, n: int) -> "QArray":
        return cls(np.eye(n, dtype=np.int64), 1)

    def to_fractions(self) -> np.ndarray:
        out = np.empty(self.num.shape, dtype=object)
        for idx, v in np.ndenumerate(self.num):
            out[idx] = Fraction(int(v), self.den)
        return out

    def to_float(self) -> np.ndarray:
        if self.num.dtype == object:
            return np.vectorize(lambda v: float(Fraction(int(v), self.den)), otypes=[float])(self.num)
        return self.num.astype(float) / self.den

    @property
    def shape(self):
        return self.num.shape

    @property
    def ndim(self):
        return self.num.ndim

    def __len__(self):
        return len(self.num)

    def __repr__(self):
        return f"QArray(shape={self.shape}, den={self.den})"

    def __getitem__(self, key) -> "QArray | Fraction":
        sub = self.num[key]
        if np.ndim(sub) == 0:
            return Fraction(int(sub), self.den)
        return QArray(np.array(sub), self.den)

    def transpose(self, *axes) -> "QArray":
        return QArray(self.num.transpose(*axes), self.den, reduce_=False)

    @property
    def T(self) -> "QArray":
        return self.transpose()

    def reshape(self, *shape) -> "QArray":
        return QArray(self.num.reshape(*shape), self.den, reduce_=False)

    def sum(self, axis=None) -> "QArray | Fraction":
        n = self.num.shape[axis] if axis is not None else self.num.size
        bound = _max_abs_int(self.num) * max(n, 1)
        s = _fit(self.num, bound).sum(axis=axis)
        if np.ndim(s) == 0:
            return Fraction(int(s), self.den)
        return QArray(s, self.den)

    def trace(self) -> Fraction:
        return einsum("ii->", self)

    def _combine(self, other: "QArray", sign: int) -> "QArray":
        lcm = self.den * other.den // math.gcd(self.den, other.den)
        fa, fb = lcm // self.den, lcm // other.den
        bound = _max_abs_int(self.num) * fa + _max_abs_int(other.num) * fb
        a = _fit(self.num, bound)
        b = _fit(other.num, bound)
        return QArray(a * fa + sign * (b * fb), lcm)

    def __add__(self, other):
        if not isinstance(other, QArray):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, QArray):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self):
        return QArray(-self.num, self.den, reduce_=False)

    def __mul__(self, other):
        if isinstance(other, QArray):
            bound = _max_abs_int(self.num) * _max_abs_int(other.num)
            return QArray(_fit(self.num, bound) * _fit(other.num, bound), self.den * other.den)
        c = parse_rational(other)
        bound = _max_abs_int(self.num) * abs(c.numerator)
        return QArray(_fit(self.num, bound) * c.numerator, self.den * c.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = parse_rational(other)
        return self * (1 / c)

    def is_zero(self) -> bool:
        return not np.any(self.num)

    def max_abs(self) -> Fraction:
        return Fraction(_max_abs_int(self.num), self.den)

    def argmax_abs(self) -> tuple[int, ...]:
        """Lexicographically smallest index of a largest-magnitude entry."""
        if self.num.dtype == object:
            absn = np.vectorize(lambda v: abs(int(v)), otypes=[object])(self.num)
            m = max(absn.flat) if absn.size else 0
            for idx, v in np.ndenumerate(absn):
                if v == m:
                    return tuple(int(i) for i in idx)
            return ()
        flat = int(np.argmax(np.abs(self.num)))
        return tuple(int(i) for i in np.unravel_index(flat, self.num.shape))

    def equals(self, other: "QArray") -> bool:
        return (self - other).is_zero()


def _parse_spec(spec: str, ops) -> tuple[list[str], str]:
    lhs, rhs = spec.replace(" ", "").split("->")
    terms = lhs.split(",")
    if len(terms) != len(ops):
        raise ValueError("einsum operand count mismatch")
    return terms, rhs


def _contracted_size(terms: list[str], rhs: str, ops) -> int:
    sizes: dict[str, int] = {}
    for t, op in zip(terms, ops):
        for c, s in zip(t, op.shape):
            sizes[c] = s
    size = 1
    for c, s in sizes.items():
        if c not in rhs:
            size *= s
    return size


def einsum(spec: str, *ops):
    """Einsum over either all-float arrays or all-QArray operands."""
    if any(isinstance(op, QArray) for op in ops):
        qops = [op if isinstance(op, QArray) else QArray.from_values(op) for op in ops]
        terms, rhs = _parse_spec(spec, qops)
        bound = _contracted_size(terms, rhs, qops)
        for op in qops:
            bound *= max(_max_abs_int(op.num), 1)
        nums = [_fit(op.num, bound) for op in qops]
        res = np.einsum(spec, *nums, optimize=len(nums) > 2)
        den = 1
        for op in qops:
            den *= op.den
        if np.ndim(res) == 0:
            return Fraction(int(res), den)
        return QArray(np.asarray(res), den)
    return np.einsum(spec, *ops, optimize=len(ops) > 2)


def as_mode_array(values: Any, mode: str):
    """Coerce array-like data into the working representation of ``mode``."""
    if mode == RATIONAL:
        if isinstance(values, QArray):
            return values
        return QArray.from_values(values)
    if isinstance(values, QArray):
        return values.to_float()
    arr = np.asarray(values)
    if arr.dtype == object:
        arr = np.vectorize(float, otypes=[float])(arr)
    return arr.astype(float)


def to_output(arr, mode: str):
    """Working representation -> user-facing ndarray (object Fractions or float)."""
    if isinstance(arr, QArray):
        return arr.to_fractions()
    if isinstance(arr, Fraction):
        return arr
    return np.asarray(arr, dtype=float) if np.ndim(arr) else float(arr)


def to_float_array(arr) -> np.ndarray:
    if isinstance(arr, QArray):
        return arr.to_float()
    return as_mode_array(arr, FLOAT)


def scalar_abs_max(arr) -> Any:
    if isinstance(arr, QArray):
        return arr.max_abs()
    arr = np.asarray(arr, dtype=float)
    return float(np.abs(arr).max()) if arr.size else 0.0


def argmax_abs(arr) -> tuple[int, ...]:
    if isinstance(arr, QArray):
        return arr.argmax_abs()
    arr = np.asarray(arr, dtype=float)
    flat = int(np.argmax(np.abs(arr)))
    return tuple(int(i) for i in np.unravel_index(flat, arr.shape))


def is_negligible(value, mode: str, tol: float = FLOAT_TOL) -> bool:
    if mode == RATIONAL:
        return value == 0
    return abs(float(value)) <= tol


def snap_rational(x: float, max_den: int = 10_000, tol: float = 1e-10) -> Fraction | None:
    """Nearest rational with denominator <= ``max_den`` if within ``tol``, else None."""
    f = Fraction(float(x)).limit_denominator(max_den)
    if abs(float(f) - float(x)) <= tol:
        return f
    return None


def iter_fraction_rows(values: Iterable) -> list[Fraction]:
    return [parse_rational(v) for v in values]
