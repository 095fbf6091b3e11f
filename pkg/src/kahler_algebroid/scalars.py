"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Union


def _q(x) -> Fraction:
    if type(x) is Fraction:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class GaussianRational:
    """a + b*i with rational a, b.

    Mixed arithmetic with ``int`` and ``Fraction`` is supported on both sides.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def _coerce(other):
        if type(other) is GaussianRational:
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if type(other) is GaussianRational:
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("Gaussian rational division by zero")
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if type(other) is GaussianRational:
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Union[Fraction, GaussianRational]

I = GaussianRational(0, 1)
ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(x) -> Scalar:
    """Coerce ints/strings to ``Fraction``; leave exact scalars alone; reject floats."""
    if type(x) is GaussianRational:
        return x
    if isinstance(x, float):
        raise TypeError("floating-point values are not accepted; use 'p/q' strings")
    return _q(x)


def conj(x: Scalar) -> Scalar:
    if type(x) is GaussianRational:
        return x.conjugate()
    return x


def is_real(x: Scalar) -> bool:
    return type(x) is not GaussianRational or x.im == 0


def real_part(x: Scalar) -> Fraction:
    return x.re if type(x) is GaussianRational else x


def imag_part(x: Scalar) -> Fraction:
    return x.im if type(x) is GaussianRational else ZERO


def simplify(x: Scalar) -> Scalar:
    """Drop a zero imaginary part."""
    if type(x) is GaussianRational and x.im == 0:
        return x.re
    return x


def parse_scalar(obj) -> Scalar:
    """Parse the model-file scalar encoding: ``"p/q"``, an int, or ``{"re", "im"}``."""
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise ValueError(f"unexpected keys in complex scalar: {sorted(extra)}")
        re = parse_scalar(obj.get("re", "0"))
        im = parse_scalar(obj.get("im", "0"))
        if not (is_real(re) and is_real(im)):
            raise ValueError("re/im parts must be rational")
        return simplify(GaussianRational(real_part(re), real_part(im)))
    if isinstance(obj, bool) or isinstance(obj, float):
        raise ValueError(f"scalar must be a 'p/q' string or an integer, got {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {obj!r}") from exc
    raise ValueError(f"scalar must be a 'p/q' string or an integer, got {obj!r}")


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar):
    """Inverse of :func:`parse_scalar` (canonical form)."""
    x = simplify(x)
    if type(x) is GaussianRational:
        return {"re": _fmt_q(x.re), "im": _fmt_q(x.im)}
    return _fmt_q(_q(x))
