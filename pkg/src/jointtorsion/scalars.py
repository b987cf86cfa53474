"""Exact arithmetic in the field of Gaussian rationals Q(i).

A scalar is a pair of rationals (real and imaginary part), each kept in
canonical form at all times: lowest terms, positive denominator, and zero
represented uniquely as 0/1.  Equality is therefore structural equality of
the four integers, and scalars are hashable and safe to share.

The textual form is ``p/q+r/s*i`` with parts omitted when zero, e.g. ``3``,
``-1/2*i``, ``1/2-2/3*i``.  ``parse`` accepts everything ``to_text`` emits
(plus bare ``i`` / ``-i``) and round-trips exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _norm(num: int, den: int) -> tuple[int, int]:
    """Normalize a rational pair: lowest terms, positive denominator."""
    if den == 0:
        raise ZeroDivisionError("zero divisor")
    if num == 0:
        return 0, 1
    if den < 0:
        num, den = -num, -den
    g = gcd(num, den)
    if g > 1:
        num //= g
        den //= g
    return num, den


def _as_pair(value) -> tuple[int, int]:
    if isinstance(value, int):
        return value, 1
    if isinstance(value, Fraction):
        return value.numerator, value.denominator
    if isinstance(value, tuple) and len(value) == 2:
        return _norm(int(value[0]), int(value[1]))
    raise TypeError(f"cannot build a rational part from {value!r}")


class QiScalar:
    """An exact Gaussian rational ``re + im*i``."""

    __slots__ = ("re_num", "re_den", "im_num", "im_den")

    def __init__(self, re=0, im=0):
        rn, rd = _as_pair(re)
        im_n, im_d = _as_pair(im)
        rn, rd = _norm(rn, rd)
        im_n, im_d = _norm(im_n, im_d)
        self.re_num = rn
        self.re_den = rd
        self.im_num = im_n
        self.im_den = im_d

    @classmethod
    def _raw(cls, rn: int, rd: int, im_n: int, im_d: int) -> "QiScalar":
        """Build from already-normalized parts (internal fast path)."""
        obj = object.__new__(cls)
        obj.re_num = rn
        obj.re_den = rd
        obj.im_num = im_n
        obj.im_den = im_d
        return obj

    # -- accessors ---------------------------------------------------------

    @property
    def re(self) -> Fraction:
        return Fraction(self.re_num, self.re_den)

    @property
    def im(self) -> Fraction:
        return Fraction(self.im_num, self.im_den)

    def is_zero(self) -> bool:
        return self.re_num == 0 and self.im_num == 0

    def is_real(self) -> bool:
        return self.im_num == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        rn, rd = _norm(self.re_num * other.re_den + other.re_num * self.re_den,
                       self.re_den * other.re_den)
        im_n, im_d = _norm(self.im_num * other.im_den + other.im_num * self.im_den,
                           self.im_den * other.im_den)
        return QiScalar._raw(rn, rd, im_n, im_d)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        rn, rd = _norm(self.re_num * other.re_den - other.re_num * self.re_den,
                       self.re_den * other.re_den)
        im_n, im_d = _norm(self.im_num * other.im_den - other.im_num * self.im_den,
                           self.im_den * other.im_den)
        return QiScalar._raw(rn, rd, im_n, im_d)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return QiScalar._raw(-self.re_num, self.re_den, -self.im_num, self.im_den)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a_n, a_d, b_n, b_d = self.re_num, self.re_den, self.im_num, self.im_den
        c_n, c_d, d_n, d_d = other.re_num, other.re_den, other.im_num, other.im_den
        if b_n == 0 and d_n == 0:
            rn, rd = _norm(a_n * c_n, a_d * c_d)
            return QiScalar._raw(rn, rd, 0, 1)
        # (a+bi)(c+di) = (ac - bd) + (ad + bc) i
        rn, rd = _norm(a_n * c_n * b_d * d_d - b_n * d_n * a_d * c_d,
                       a_d * c_d * b_d * d_d)
        im_n, im_d = _norm(a_n * d_n * b_d * c_d + b_n * c_n * a_d * d_d,
                           a_d * d_d * b_d * c_d)
        return QiScalar._raw(rn, rd, im_n, im_d)

    __rmul__ = __mul__

    def inverse(self) -> "QiScalar":
        if self.is_zero():
            raise ZeroDivisionError("zero divisor")
        if self.im_num == 0:
            rn, rd = _norm(self.re_den, self.re_num)
            return QiScalar._raw(rn, rd, 0, 1)
        # 1/(a+bi) = (a - bi) / (a^2 + b^2)
        m_n, m_d = self._modulus_sq_pair()
        rn, rd = _norm(self.re_num * m_d, self.re_den * m_n)
        im_n, im_d = _norm(-self.im_num * m_d, self.im_den * m_n)
        return QiScalar._raw(rn, rd, im_n, im_d)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = ONE
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def conjugate(self) -> "QiScalar":
        return QiScalar._raw(self.re_num, self.re_den, -self.im_num, self.im_den)

    def _modulus_sq_pair(self) -> tuple[int, int]:
        return _norm(self.re_num * self.re_num * self.im_den * self.im_den
                     + self.im_num * self.im_num * self.re_den * self.re_den,
                     self.re_den * self.re_den * self.im_den * self.im_den)

    def modulus_sq(self) -> Fraction:
        """|x|^2 as an exact rational."""
        n, d = self._modulus_sq_pair()
        return Fraction(n, d)

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self.re_num == other.re_num and self.re_den == other.re_den
                and self.im_num == other.im_num and self.im_den == other.im_den)

    def __hash__(self):
        return hash((self.re_num, self.re_den, self.im_num, self.im_den))

    # -- text --------------------------------------------------------------

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        real = _rat_text(self.re_num, self.re_den)
        imag = _rat_text(abs(self.im_num), self.im_den) + "*i"
        if self.im_num == 0:
            return real
        if self.re_num == 0:
            return ("-" if self.im_num < 0 else "") + imag
        sign = "-" if self.im_num < 0 else "+"
        return real + sign + imag

    @classmethod
    def parse(cls, text: str) -> "QiScalar":
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty scalar text")
        real_part, imag_part = _split_parts(s)
        re = _parse_rat(real_part) if real_part else (0, 1)
        im = _parse_imag(imag_part) if imag_part else (0, 1)
        return cls(re, im)

    def __repr__(self):
        return f"QiScalar({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    def to_complex(self) -> complex:
        return complex(self.re_num / self.re_den, self.im_num / self.im_den)


def _coerce(value):
    if isinstance(value, QiScalar):
        return value
    if isinstance(value, int):
        return QiScalar._raw(value, 1, 0, 1)
    if isinstance(value, Fraction):
        return QiScalar._raw(value.numerator, value.denominator, 0, 1)
    return None


def _rat_text(num: int, den: int) -> str:
    return f"{num}" if den == 1 else f"{num}/{den}"


def _split_parts(s: str) -> tuple[str, str]:
    """Split canonical text into (real, imaginary-with-i) pieces."""
    if not s.endswith("i"):
        return s, ""
    # the sign separating real from imaginary part is the last +/- beyond index 0
    split_at = -1
    for idx in range(1, len(s)):
        if s[idx] in "+-":
            split_at = idx
    if split_at <= 0:
        return "", s
    return s[:split_at], s[split_at:]


def _parse_rat(token: str) -> tuple[int, int]:
    if "/" in token:
        num_text, den_text = token.split("/", 1)
        return int(num_text), int(den_text)
    return int(token), 1


def _parse_imag(token: str) -> tuple[int, int]:
    if not token.endswith("i"):
        raise ValueError(f"bad imaginary part {token!r}")
    body = token[:-1]
    if body.endswith("*"):
        body = body[:-1]
    if body in ("", "+"):
        return 1, 1
    if body == "-":
        return -1, 1
    return _parse_rat(body)


ZERO = QiScalar._raw(0, 1, 0, 1)
ONE = QiScalar._raw(1, 1, 0, 1)
I = QiScalar._raw(0, 1, 1, 1)


def qi(re=0, im=0) -> QiScalar:
    """Shorthand constructor; accepts ints, Fractions, or (num, den) pairs."""
    return QiScalar(re, im)


def qi_arith(x: QiScalar, y: QiScalar, op: str) -> QiScalar:
    """Field arithmetic dispatcher: op is one of add|sub|mul|div."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def qi_modulus_cmp_one(x: QiScalar) -> str:
    """Exactly compare |x| with 1; returns 'less', 'equal', or 'greater'."""
    n, d = x._modulus_sq_pair()
    if n == d:
        return "equal"
    return "less" if n < d else "greater"
