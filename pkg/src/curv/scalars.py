"""Scalar types accepted by the double-form algebra.

Coefficient grids are numpy arrays. ``float64`` grids are the fast path;
``object`` grids hold exact :class:`fractions.Fraction` values or
:class:`Dual` numbers. Integer grids (e.g. powers of the metric) are exact and
promote to ``object`` as soon as they meet a non-integer rational factor.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np


class Dual:
    """Forward-mode dual number ``re + du * eps`` with ``eps**2 == 0``.

    ``re`` and ``du`` may themselves be duals (nesting gives higher mixed
    partials) and ``du`` may be a numpy vector, in which case it carries a
    whole gradient at once.
    """

    __slots__ = ("re", "du")

    def __init__(self, re, du=0.0):
        self.re = re
        self.du = du

    def __repr__(self):
        return f"Dual({self.re!r}, {self.du!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.re + other.re, self.du + other.du)
        return Dual(self.re + other, self.du)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.re, -self.du)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.re - other.re, self.du - other.du)
        return Dual(self.re - other, self.du)

    def __rsub__(self, other):
        return Dual(other - self.re, -self.du)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.re * other.re, self.re * other.du + self.du * other.re)
        return Dual(self.re * other, self.du * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            return Dual(self.re / other.re,
                        (self.du * other.re - self.re * other.du) / (other.re * other.re))
        return Dual(self.re / other, self.du / other)

    def __rtruediv__(self, other):
        return Dual(other / self.re, -(other * self.du) / (self.re * self.re))

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            raise TypeError("Dual only supports integer powers")
        if k == 0:
            return Dual(self.re * 0 + 1, self.du * 0)
        if k < 0:
            return 1 / (self ** (-k))
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def __bool__(self):
        return is_nonzero(self.re) or is_nonzero(self.du)

    def __float__(self):
        return float(value(self))


def is_nonzero(x) -> bool:
    if isinstance(x, Dual):
        return is_nonzero(x.re) or is_nonzero(x.du)
    if isinstance(x, np.ndarray):
        return any(is_nonzero(v) for v in x.flat) if x.dtype == object else bool(x.any())
    return bool(x != 0)


def value(x):
    """Strip all dual parts."""
    while isinstance(x, Dual):
        x = x.re
    return x


def sqrt(x):
    if isinstance(x, Dual):
        s = sqrt(x.re)
        return Dual(s, x.du / (2 * s))
    if isinstance(x, np.ndarray):
        return np.sqrt(x)
    return math.sqrt(x)


def sin(x):
    if isinstance(x, Dual):
        return Dual(sin(x.re), cos(x.re) * x.du)
    return math.sin(x)


def cos(x):
    if isinstance(x, Dual):
        return Dual(cos(x.re), -sin(x.re) * x.du)
    return math.cos(x)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.re)
        return Dual(e, e * x.du)
    return math.exp(x)


def is_exact_array(a: np.ndarray) -> bool:
    """True when arithmetic on ``a`` stays exact (integer or Fraction entries)."""
    if a.dtype.kind in "iub":
        return True
    if a.dtype == object:
        return all(isinstance(v, (int, Rational)) for v in a.flat)
    return False


def as_factor(c, a: np.ndarray):
    """Convert an exact constant ``c`` to the scalar kind of grid ``a``."""
    if a.dtype.kind in "fc":
        return float(c)
    c = Fraction(c)
    return int(c) if c.denominator == 1 else c


def to_exact(x):
    """Float or int to Fraction; other scalars unchanged."""
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return x


def to_float(x) -> float:
    return float(value(x))
