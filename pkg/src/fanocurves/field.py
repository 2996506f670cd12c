"""Exact arithmetic in the Eisenstein-rational field Q(w), w^2 + w + 1 = 0.

An element ``a + b*w`` is stored as three integers ``(na, nb, d)`` meaning
``(na + nb*w) / d`` with ``d > 0`` and ``gcd(na, nb, d) == 1``.  That form is
canonical, so equality and hashing are structural.  The rational parts are
exposed as :class:`fractions.Fraction` through :attr:`FieldElement.a` and
:attr:`FieldElement.b`.

The textual coefficient grammar used by every file format is::

    coeff    := term ( ("+" | "-") wterm )? | wterm
    term     := rational
    wterm    := rational? "w"
    rational := "-"? digits ("/" digits)?
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

from .errors import DomainError, ParseError, ReductionError

Rational = Fraction

Scalar = Union[int, Fraction, "FieldElement"]


class FieldElement:
    __slots__ = ("_na", "_nb", "_d")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0):
        a = Fraction(a)
        b = Fraction(b)
        d = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        self._set(a.numerator * (d // a.denominator), b.numerator * (d // b.denominator), d)

    def _set(self, na: int, nb: int, d: int) -> None:
        g = gcd(gcd(na, nb), d)
        if g != 1:
            na //= g
            nb //= g
            d //= g
        self._na = na
        self._nb = nb
        self._d = d

    @classmethod
    def _raw(cls, na: int, nb: int, d: int) -> FieldElement:
        # d > 0 is the caller's responsibility
        obj = cls.__new__(cls)
        obj._set(na, nb, d)
        return obj

    @classmethod
    def coerce(cls, x: Scalar) -> FieldElement:
        if isinstance(x, FieldElement):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, Fraction):
            return cls._raw(x.numerator, 0, x.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to FieldElement")

    @property
    def a(self) -> Fraction:
        return Fraction(self._na, self._d)

    @property
    def b(self) -> Fraction:
        return Fraction(self._nb, self._d)

    @property
    def denominator(self) -> int:
        """Least common denominator of both rational parts."""
        return self._d

    def integer_parts(self) -> tuple[int, int, int]:
        """Return ``(na, nb, d)`` with ``self == (na + nb*w) / d``."""
        return self._na, self._nb, self._d

    def is_zero(self) -> bool:
        return self._na == 0 and self._nb == 0

    def is_rational(self) -> bool:
        return self._nb == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self._na == other._na and self._nb == other._nb and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == FieldElement.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._nb == 0:
            return hash(Fraction(self._na, self._d))
        return hash((self._na, self._nb, self._d))

    def __neg__(self) -> FieldElement:
        return FieldElement._raw(-self._na, -self._nb, self._d)

    def __add__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        if self._d == o._d:
            return FieldElement._raw(self._na + o._na, self._nb + o._nb, self._d)
        return FieldElement._raw(
            self._na * o._d + o._na * self._d,
            self._nb * o._d + o._nb * self._d,
            self._d * o._d,
        )

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Scalar) -> FieldElement:
        return FieldElement.coerce(other) - self

    def __mul__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, e = self._na, self._nb, o._na, o._nb
        # (a + bw)(c + ew) = ac - be + (ae + bc - be) w
        be = b * e
        return FieldElement._raw(a * c - be, a * e + b * c - be, self._d * o._d)

    __rmul__ = __mul__

    def inv(self) -> FieldElement:
        if self.is_zero():
            raise DomainError("inverse of zero in Q(w)")
        a, b = self._na, self._nb
        n = a * a - a * b + b * b
        # 1/x = conj(x) / norm(x); the d's cancel as d * conj(num) / norm(num)
        return FieldElement._raw((a - b) * self._d, -b * self._d, n)

    def __truediv__(self, other: Scalar) -> FieldElement:
        try:
            o = FieldElement.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other: Scalar) -> FieldElement:
        return FieldElement.coerce(other) * self.inv()

    def __pow__(self, n: int) -> FieldElement:
        if n < 0:
            return self.inv() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> FieldElement:
        """Complex conjugation, which swaps w and w^2."""
        return FieldElement._raw(self._na - self._nb, -self._nb, self._d)

    def norm(self) -> Fraction:
        """Field norm ``x * conj(x) = a^2 - ab + b^2``."""
        a, b = self._na, self._nb
        return Fraction(a * a - a * b + b * b, self._d * self._d)

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def __repr__(self) -> str:
        return f"FieldElement({format_coeff(self)!r})"

    def __str__(self) -> str:
        return format_coeff(self)


ZERO = FieldElement(0)
ONE = FieldElement(1)
OMEGA = FieldElement(0, 1)
OMEGA2 = FieldElement(-1, -1)
MU3 = (ONE, OMEGA, OMEGA2)


def fe(x: Scalar | str) -> FieldElement:
    """Convenience constructor accepting ints, fractions or coefficient strings."""
    if isinstance(x, str):
        return parse_coeff(x)
    return FieldElement.coerce(x)


def _fmt_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_coeff(x: FieldElement) -> str:
    a, b = x.a, x.b
    if b == 0:
        return _fmt_rational(a)
    if b == 1:
        wterm = "w"
    elif b == -1:
        wterm = "-w"
    else:
        wterm = _fmt_rational(b) + "w"
    if a == 0:
        return wterm
    if wterm.startswith("-"):
        return _fmt_rational(a) + wterm
    return _fmt_rational(a) + "+" + wterm


_RATIONAL = r"-?\d+(?:/\d+)?"
_COEFF_RE = re.compile(
    rf"^(?:(?P<a>{_RATIONAL})(?:(?P<sign>[+-])(?P<b1>{_RATIONAL})?w)?|(?P<b2>{_RATIONAL})?w|(?P<neg>-)w)$"
)


def _parse_rational(text: str, source: str) -> Fraction:
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ParseError(f"zero denominator in coefficient {source!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_coeff(text: str) -> FieldElement:
    """Parse a coefficient string such as ``"1/2+1/3w"`` or ``"-w"``."""
    s = text.strip()
    m = _COEFF_RE.match(s)
    if m is None:
        raise ParseError(f"malformed coefficient {text!r}")
    if m.group("neg"):
        return FieldElement(0, -1)
    if m.group("a") is not None:
        a = _parse_rational(m.group("a"), text)
        if m.group("sign") is None:
            return FieldElement(a)
        b = _parse_rational(m.group("b1"), text) if m.group("b1") else Fraction(1)
        if m.group("sign") == "-":
            b = -b
        return FieldElement(a, b)
    b = _parse_rational(m.group("b2"), text) if m.group("b2") else Fraction(1)
    return FieldElement(0, b)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def cube_root_of_unity(p: int) -> int:
    """Smallest ``r`` in F_p with ``r^3 = 1`` and ``r != 1``."""
    if not is_prime(p) or p % 3 != 1:
        raise ReductionError(f"prime must satisfy p = 1 mod 3, got {p}")
    for r in range(2, p):
        if pow(r, 3, p) == 1:
            return r
    raise AssertionError("unreachable for p = 1 mod 3")


def reduce_mod(x: Scalar, p: int) -> int:
    """Image of ``x`` under the homomorphism Q(w)_(p) -> F_p sending w to
    :func:`cube_root_of_unity` ``(p)``."""
    r = cube_root_of_unity(p)
    na, nb, d = FieldElement.coerce(x).integer_parts()
    if d % p == 0:
        raise ReductionError(f"denominator of {FieldElement.coerce(x)} not invertible mod {p}")
    return (na + nb * r) * pow(d, -1, p) % p
