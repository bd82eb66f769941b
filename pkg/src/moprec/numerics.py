"""Scalar arithmetic: exact rationals plus precision-tagged reals.

All recursions in this package run over exact rationals (stdlib
``fractions.Fraction`` with arbitrary-size integers), so every identity the
algorithms promise can be tested with ``==`` instead of tolerances.  Floating
point enters only at the output boundary: square roots and decimal rendering.

The real mode is a thin value type, :class:`Real`, that pairs a
``decimal.Decimal`` with the number of significant decimal digits it is good
for.  Mixed-precision arithmetic adopts the minimum tag of its operands; an
exact rational operand does not lower the tag.  ``to_decimal`` renders any
scalar correctly rounded (round-half-even) to a requested number of
significant digits, and ``sqrt_real`` certifies its rounding against the
exact radicand, so printed tables are reproducible digit for digit.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from math import isqrt

from .errors import DomainError

#: Default significant digits for real-mode output.
DEFAULT_DIGITS = 25

Rational = Fraction


def as_fraction(x) -> Fraction:
    """Coerce an int, Fraction, or rational literal string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise DomainError(f"not an exact rational: {x!r}")


def _fraction_to_decimal(q: Fraction) -> Decimal:
    # correctly rounded in the *current* decimal context
    return Decimal(q.numerator) / Decimal(q.denominator)


@dataclass(frozen=True)
class Real:
    """A real number known to ``digits`` significant decimal digits."""

    value: Decimal
    digits: int

    def __post_init__(self):
        if self.digits < 1:
            raise DomainError("precision tag must be at least 1 digit")

    def _binop(self, other, fn):
        if isinstance(other, Real):
            tag = min(self.digits, other.digits)
            with decimal.localcontext() as ctx:
                ctx.prec = tag
                return Real(+fn(self.value, other.value), tag)
        if isinstance(other, (int, Fraction)):
            tag = self.digits
            with decimal.localcontext() as ctx:
                ctx.prec = tag
                return Real(+fn(self.value, _fraction_to_decimal(as_fraction(other))), tag)
        return NotImplemented

    def _rbinop(self, other, fn):
        if isinstance(other, (int, Fraction)):
            tag = self.digits
            with decimal.localcontext() as ctx:
                ctx.prec = tag
                return Real(+fn(_fraction_to_decimal(as_fraction(other)), self.value), tag)
        return NotImplemented

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._rbinop(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._rbinop(other, lambda a, b: a / b)

    def __neg__(self):
        return Real(-self.value, self.digits)

    def __str__(self):
        return f"{self.value} (to {self.digits} digits)"


#: A scalar is either an exact rational or a precision-tagged real.
Scalar = Fraction | Real


def _pad_significant(d: Decimal, digits: int) -> Decimal:
    """Extend ``d`` with trailing zeros so it shows ``digits`` significant digits."""
    if d == 0:
        return d
    have = len(d.as_tuple().digits)
    if have >= digits:
        return d
    with decimal.localcontext() as ctx:
        ctx.prec = digits + 2
        return d.quantize(Decimal(1).scaleb(d.adjusted() - digits + 1))


def to_decimal(s: Scalar | int, digits: int = DEFAULT_DIGITS) -> str:
    """Render a scalar correctly rounded to ``digits`` significant digits.

    Trailing zeros are kept, so the printed width always reflects the claimed
    precision: ``to_decimal(Fraction(1), 3) == "1.00"``.  Zero renders as
    ``"0"``.  Rounding is half-even.
    """
    if digits < 1:
        raise DomainError("need at least 1 significant digit")
    if isinstance(s, Real):
        if s.value == 0:
            return "0"
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            ctx.rounding = decimal.ROUND_HALF_EVEN
            rounded = +s.value
        return str(_pad_significant(rounded, digits))
    q = as_fraction(s)
    if q == 0:
        return "0"
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        rounded = _fraction_to_decimal(q)
    return str(_pad_significant(rounded, digits))


def sqrt_real(s: Scalar | int, digits: int = DEFAULT_DIGITS) -> Real:
    """Square root of a nonnegative scalar, correct to ``digits`` digits.

    For an exact rational radicand the result is *certified*: the rounded
    value ``r`` satisfies ``(r - ulp/2)**2 < s < (r + ulp/2)**2`` checked in
    exact arithmetic (perfect squares are taken exactly), so ``r`` is the
    correctly rounded square root, not merely a close one.
    """
    if digits < 1:
        raise DomainError("need at least 1 significant digit")
    if isinstance(s, Real):
        if s.value < 0:
            raise DomainError(f"square root of negative value {s.value}")
        tag = min(digits, s.digits)
        with decimal.localcontext() as ctx:
            ctx.prec = tag
            return Real(s.value.sqrt(), tag)
    q = as_fraction(s)
    if q < 0:
        raise DomainError(f"square root of negative rational {q}")
    if q == 0:
        return Real(Decimal(0), digits)
    p, den = q.numerator, q.denominator
    rp, rd = isqrt(p), isqrt(den)
    if rp * rp == p and rd * rd == den:
        # exact rational square root; one correctly rounded division
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            ctx.rounding = decimal.ROUND_HALF_EVEN
            return Real(Decimal(rp) / Decimal(rd), digits)
    guard = 10
    while True:
        with decimal.localcontext() as ctx:
            ctx.prec = digits + guard
            approx = _fraction_to_decimal(q).sqrt()
        with decimal.localcontext() as ctx:
            ctx.prec = digits
            ctx.rounding = decimal.ROUND_HALF_EVEN
            cand = +approx
        c = Fraction(cand)
        ulp = Fraction(10) ** (cand.adjusted() - digits + 1)
        lo = c - ulp / 2
        hi = c + ulp / 2
        # q is not a perfect rational square here, so equality cannot occur
        if lo * lo < q < hi * hi:
            return Real(cand, digits)
        guard *= 2
