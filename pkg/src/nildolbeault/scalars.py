"""Exact Gaussian rationals a + b*i with a, b in Q.

Rational parts are gmpy2.mpq; the class interoperates with int, Fraction
and mpq operands so real structure constants never need wrapping.
"""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

__all__ = ["Gauss", "as_rational", "as_gauss", "parse_rational", "parse_gauss",
           "fmt_rational", "to_json_scalar", "ZERO", "ONE", "I"]


def as_rational(x):
    if isinstance(x, Gauss):
        if x.im:
            raise ValueError(f"expected a real value, got {x}")
        return x.re
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class Gauss:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_Q0) else as_rational(re)
        self.im = im if type(im) is type(_Q0) else as_rational(im)

    # construction helpers stay allocation-light: most entries are real
    def __add__(self, o):
        if isinstance(o, Gauss):
            return Gauss(self.re + o.re, self.im + o.im)
        return Gauss(self.re + o, self.im)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Gauss):
            return Gauss(self.re - o.re, self.im - o.im)
        return Gauss(self.re - o, self.im)

    def __rsub__(self, o):
        return Gauss(o - self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, Gauss):
            a, b, c, d = self.re, self.im, o.re, o.im
            if not b:
                return Gauss(a * c, a * d)
            if not d:
                return Gauss(a * c, b * c)
            return Gauss(a * c - b * d, a * d + b * c)
        return Gauss(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Gauss):
            c, d = o.re, o.im
            if not d:
                return Gauss(self.re / c, self.im / c)
            den = c * c + d * d
            a, b = self.re, self.im
            return Gauss((a * c + b * d) / den, (b * c - a * d) / den)
        o = as_rational(o)
        return Gauss(self.re / o, self.im / o)

    def __rtruediv__(self, o):
        return Gauss(o) / self

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return ONE / (self ** (-k))
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return Gauss(self.re, -self.im)

    conj = conjugate

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def is_real(self):
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, Gauss):
            return self.re == o.re and self.im == o.im
        try:
            return not self.im and self.re == o
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gauss({fmt_rational(self.re)!r}, {fmt_rational(self.im)!r})"

    def __str__(self):
        if not self.im:
            return fmt_rational(self.re)
        im = fmt_rational(abs(self.im))
        im = "i" if im == "1" else f"{im}i"
        if not self.re:
            return im if self.im > 0 else f"-{im}"
        sign = "+" if self.im > 0 else "-"
        return f"{fmt_rational(self.re)}{sign}{im}"


_Q0 = mpq(0)
ZERO = Gauss(0, 0)
ONE = Gauss(1, 0)
I = Gauss(0, 1)


def as_gauss(x) -> Gauss:
    return x if isinstance(x, Gauss) else Gauss(x)


def fmt_rational(q) -> str:
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_RAT = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(s, field: str = "value"):
    """Parse an int or a "p/q" string into an mpq; ValueError names the field."""
    if isinstance(s, bool):
        raise ValueError(f"{field}: boolean is not a rational")
    if isinstance(s, int):
        return mpq(s)
    if not isinstance(s, str):
        raise ValueError(f"{field}: expected 'p/q' string or int, got {s!r}")
    m = _RAT.match(s)
    if not m:
        raise ValueError(f"{field}: malformed rational {s!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"{field}: zero denominator in {s!r}")
    return mpq(num, den)


_GAUSS = re.compile(
    r"^\s*(?:(?P<re>[+-]?\d+(?:/\d+)?)(?![\d/]*i))?\s*"
    r"(?:(?P<im>[+-]?\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*i)?\s*$")


def parse_gauss(s, field: str = "value") -> Gauss:
    """Parse "a/b+c/d i" style strings (either part optional) or {"re","im"}."""
    if isinstance(s, dict):
        return Gauss(parse_rational(s.get("re", 0), field + ".re"),
                     parse_rational(s.get("im", 0), field + ".im"))
    if isinstance(s, int) and not isinstance(s, bool):
        return Gauss(s)
    if not isinstance(s, str) or not s.strip():
        raise ValueError(f"{field}: malformed Gaussian rational {s!r}")
    m = _GAUSS.match(s.replace(" ", ""))
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"{field}: malformed Gaussian rational {s!r}")
    re_part = parse_rational(m.group("re"), field) if m.group("re") else mpq(0)
    im_s = m.group("im")
    if im_s is None:
        im_part = mpq(0)
    elif im_s in ("", "+"):
        im_part = mpq(1)
    elif im_s == "-":
        im_part = mpq(-1)
    else:
        im_part = parse_rational(im_s, field)
    return Gauss(re_part, im_part)


def to_json_scalar(x):
    """Rationals as "p/q"; Gaussian rationals as {"re": "p/q", "im": "p/q"}."""
    if isinstance(x, Gauss):
        return {"re": fmt_rational(x.re), "im": fmt_rational(x.im)}
    return fmt_rational(x)
