"""Scalar tower: exact rationals, float64, and forward-mode dual numbers.

Rationals are :class:`fractions.Fraction`. Floats are Python floats or numpy
float64 arrays (the flow integrator evaluates whole windows at once). Integers
are kind-neutral so that literal constants in formulas never force a kind.

Dual numbers carry a single derivative slot and a *tag*. Nested
differentiation (brackets of brackets) seeds a fresh tag for every seeding, and
a dual with a larger tag treats any dual with a smaller tag as a constant, which
rules out perturbation confusion.
"""

from __future__ import annotations

import itertools
import numbers
from math import isqrt
from fractions import Fraction

import numpy as np

from .errors import MixedKindError, PoleError, ZeroDenominator

__all__ = [
    "Dual",
    "dual_partial",
    "seed",
    "derivative",
    "rational_normalize",
    "kind_of",
    "check_kinds",
    "base_value",
    "safe_div",
    "as_rational",
    "format_scalar",
    "parse_scalar",
    "exact_sqrt",
]

_tags = itertools.count(1)

RATIONAL = "rational"
FLOAT = "float"


def kind_of(x):
    """Return ``"rational"``, ``"float"`` or None for kind-neutral values."""
    if isinstance(x, Dual):
        k = kind_of(x.value)
        return k if k is not None else kind_of(x.deriv)
    if isinstance(x, (bool, int, np.integer)):
        return None
    if isinstance(x, Fraction):
        return RATIONAL
    if isinstance(x, (float, np.floating)):
        return FLOAT
    if isinstance(x, np.ndarray):
        if x.dtype.kind == "f":
            return FLOAT
        return None
    if isinstance(x, numbers.Rational):
        return RATIONAL
    return None


def check_kinds(*values):
    """Raise :class:`MixedKindError` if exact and float values are mixed."""
    seen = None
    for v in values:
        k = kind_of(v)
        if k is None:
            continue
        if seen is None:
            seen = k
        elif k != seen:
            raise MixedKindError(f"cannot combine {seen} with {k} scalars")
    return seen


def base_value(x):
    """Strip every dual layer and return the underlying primal value."""
    while isinstance(x, Dual):
        x = x.value
    return x


def _is_zero(x):
    x = base_value(x)
    if isinstance(x, np.ndarray):
        return bool(np.any(x == 0))
    return x == 0


class Dual:
    """Dual number ``value + deriv*eps`` with ``eps**2 == 0``."""

    __slots__ = ("value", "deriv", "tag")
    # keep numpy from broadcasting its own operators over a Dual operand
    __array_ufunc__ = None

    def __init__(self, value, deriv=0, tag=0):
        check_kinds(value, deriv)
        self.value = value
        self.deriv = deriv
        self.tag = tag

    def __repr__(self):
        return f"Dual({self.value!r}, {self.deriv!r}, tag={self.tag})"

    # ``other`` is a constant in this dual's frame unless it is a dual
    # carrying the same tag; duals with a larger tag take precedence.
    def _split(self, other):
        if isinstance(other, Dual):
            if other.tag == self.tag:
                return other.value, other.deriv
            if other.tag > self.tag:
                return None
        check_kinds(self, other)
        return other, 0

    def __add__(self, other):
        s = self._split(other)
        if s is None:
            return other.__radd__(self)
        return Dual(self.value + s[0], self.deriv + s[1], self.tag)

    def __radd__(self, other):
        check_kinds(self, other)
        return Dual(other + self.value, self.deriv, self.tag)

    def __sub__(self, other):
        s = self._split(other)
        if s is None:
            return other.__rsub__(self)
        return Dual(self.value - s[0], self.deriv - s[1], self.tag)

    def __rsub__(self, other):
        check_kinds(self, other)
        return Dual(other - self.value, -self.deriv, self.tag)

    def __mul__(self, other):
        s = self._split(other)
        if s is None:
            return other.__rmul__(self)
        v, d = s
        return Dual(self.value * v, self.value * d + self.deriv * v, self.tag)

    def __rmul__(self, other):
        check_kinds(self, other)
        return Dual(other * self.value, other * self.deriv, self.tag)

    def __truediv__(self, other):
        s = self._split(other)
        if s is None:
            return other.__rtruediv__(self)
        v, d = s
        if _is_zero(v):
            raise PoleError("dual divisor")
        return Dual(self.value / v, (self.deriv * v - self.value * d) / (v * v), self.tag)

    def __rtruediv__(self, other):
        check_kinds(self, other)
        if _is_zero(self.value):
            raise PoleError("dual divisor")
        return Dual(other / self.value, -other * self.deriv / (self.value * self.value), self.tag)

    def __neg__(self):
        return Dual(-self.value, -self.deriv, self.tag)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            raise TypeError("Dual supports integer powers only")
        if k == 0:
            return Dual(1, 0, self.tag)
        if k < 0:
            return 1 / self ** (-k)
        return Dual(self.value**k, k * self.value ** (k - 1) * self.deriv, self.tag)


def seed(value):
    """Wrap ``value`` as an independent variable with a fresh tag."""
    return Dual(value, 1, next(_tags))


def derivative(result, seeded):
    """Extract d(result)/d(seeded) for a dual produced by :func:`seed`."""
    if isinstance(result, Dual) and result.tag == seeded.tag:
        return result.deriv
    # a result that never touched the seed is constant in it
    return 0


def dual_partial(f, at):
    """Return ``f'(at)``, exact when ``at`` is rational."""
    x = seed(at)
    return derivative(f(x), x)


def rational_normalize(n, d):
    """Canonical rational n/d: reduced, positive denominator."""
    if d == 0:
        raise ZeroDenominator(f"{n}/0")
    return Fraction(int(n), int(d))


def safe_div(num, den, what, where=None):
    """``num / den`` raising :class:`PoleError` naming ``what`` on a zero divisor."""
    if _is_zero(den):
        raise PoleError(what, where)
    return num / den


def as_rational(x):
    """Coerce ints, fraction strings and rationals to Fraction (never floats)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, float, np.floating)):
        raise MixedKindError(f"refusing to convert float {x!r} to an exact rational")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def exact_sqrt(q):
    """Exact square root of a non-negative rational, or None if irrational."""
    q = as_rational(q)
    if q < 0:
        return None
    p, r = q.numerator, q.denominator
    sp, sr = isqrt(p), isqrt(r)
    if sp * sp == p and sr * sr == r:
        return Fraction(sp, sr)
    return None


def format_scalar(x):
    """Serialize a scalar: rationals as ``"p/q"``, floats as shortest repr."""
    if isinstance(x, (bool,)):
        return x
    if isinstance(x, (int, np.integer)):
        return f"{int(x)}/1"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    raise TypeError(f"cannot serialize {x!r}")


def parse_scalar(text, kind=RATIONAL):
    """Parse ``"p/q"``, integers or decimals into the requested kind."""
    if kind == FLOAT:
        if isinstance(text, str) and "/" in text:
            return float(Fraction(text))
        return float(text)
    if isinstance(text, float):
        raise MixedKindError(f"float {text!r} given where an exact rational is required")
    return Fraction(str(text))
