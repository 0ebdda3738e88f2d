"""Exact Gaussian-rational scalars.

A :class:`GaussianRational` is ``re + i*im`` with both parts held as
:class:`fractions.Fraction`, so arithmetic between two of them is exact.
Mixing one with a ``float`` or ``complex`` degrades the result to a Python
``complex``.  Together the two form the ``ComplexScalar`` used by every
matrix in the package.
"""

from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Union

__all__ = ["GaussianRational", "ComplexScalar", "to_exact", "parse_fraction", "format_fraction"]

_RATIONAL = (int, Fraction)


class GaussianRational:
    """Immutable complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if not isinstance(re, Fraction):
            re = _as_fraction(re)
        if not isinstance(im, Fraction):
            im = _as_fraction(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    # conversions ------------------------------------------------------
    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "GaussianRational":
        if not self.im:
            return self
        return GaussianRational(self.re, -self.im)

    def __repr__(self) -> str:
        if not self.im:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONAL):
            return not self.im and self.re == other
        if isinstance(other, numbers.Complex):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # arithmetic -------------------------------------------------------
    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, _RATIONAL):
            return GaussianRational(self.re + other, self.im)
        if isinstance(other, numbers.Complex):
            return complex(self) + complex(other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re - other.re, self.im - other.im)
        if isinstance(other, _RATIONAL):
            return GaussianRational(self.re - other, self.im)
        if isinstance(other, numbers.Complex):
            return complex(self) - complex(other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _RATIONAL):
            return GaussianRational(other - self.re, -self.im)
        if isinstance(other, numbers.Complex):
            return complex(other) - complex(self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b:
                if not d:
                    return GaussianRational(a * c)
                return GaussianRational(a * c, a * d)
            if not d:
                return GaussianRational(a * c, b * c)
            return GaussianRational(a * c - b * d, a * d + b * c)
        if isinstance(other, _RATIONAL):
            return GaussianRational(self.re * other, self.im * other)
        if isinstance(other, numbers.Complex):
            return complex(self) * complex(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _RATIONAL):
            if not other:
                raise ZeroDivisionError("division by zero")
            return GaussianRational(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            if not other.im:
                return self / other.re
            den = other.abs2()
            if not den:
                raise ZeroDivisionError("division by zero")
            return (self * other.conjugate()) / den
        if isinstance(other, numbers.Complex):
            return complex(self) / complex(other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _RATIONAL):
            return GaussianRational(other) / self
        if isinstance(other, numbers.Complex):
            return complex(other) / complex(self)
        return NotImplemented


ComplexScalar = Union[GaussianRational, complex]


def _as_fraction(x) -> Fraction:
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, _RATIONAL):
        return Fraction(x)
    if isinstance(x, str):
        return parse_fraction(x)
    if isinstance(x, numbers.Integral):  # numpy integers
        return Fraction(int(x))
    raise TypeError(f"cannot represent {x!r} exactly as a rational")


def to_exact(x) -> GaussianRational:
    """Coerce ints, Fractions, numpy integers and rational strings.

    Floats are rejected: silently turning ``0.1`` into a 55-bit fraction is
    never what the caller meant.
    """
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return GaussianRational(_as_fraction(x[0]), _as_fraction(x[1]))
    return GaussianRational(_as_fraction(x))


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def format_fraction(x: Fraction) -> str:
    """Canonical ``"p/q"`` text, denominator always present."""
    return f"{x.numerator}/{x.denominator}"
