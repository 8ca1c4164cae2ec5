"""Dense univariate polynomials with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable

import mpmath

MAX_DEGREE = 32


def _coerce(c, like):
    """Cast a rational coefficient to the numeric type of ``like``."""
    if isinstance(like, (Fraction, int)):
        return Fraction(c)
    if isinstance(like, float):
        return float(c)
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def integrate_coeffs(coeffs, lo, hi):
    """Integral over [lo, hi] of sum coeffs[i] x^i, in the type of lo/hi."""
    acc_hi = _coerce(0, hi)
    acc_lo = _coerce(0, lo)
    for i in range(len(coeffs) - 1, -1, -1):
        term = coeffs[i] / (i + 1)
        acc_hi = (acc_hi + term) * hi
        acc_lo = (acc_lo + term) * lo
    return acc_hi - acc_lo


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, float):
        return Fraction(c).limit_denominator(10**12)
    return Fraction(c)


class Poly:
    """Polynomial c0 + c1 x + ... stored low degree first, trailing zeros stripped."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "Poly":
        return cls([0] * degree + [coeff])

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """``"c0,c1,..."`` low-degree first, entries like ``1``, ``-3/4``."""
        return cls(_frac(t) for t in text.split(",") if t.strip())

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({[str(x) for x in self.c]})"

    def __call__(self, x):
        acc = _coerce(0, x)
        for coef in reversed(self.c):
            acc = acc * x + _coerce(coef, x)
        return acc

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly([other])
        n = max(len(self.c), len(other.c))
        a = self.c + (Fraction(0),) * (n - len(self.c))
        b = other.c + (Fraction(0),) * (n - len(other.c))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.c)

    def __sub__(self, other):
        return self + (-(other if isinstance(other, Poly) else Poly([other])))

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = _frac(other)
            return Poly(x * other for x in self.c)
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out, base = Poly([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def integral(self) -> "Poly":
        """Antiderivative vanishing at 0."""
        return Poly([0] + [x / (i + 1) for i, x in enumerate(self.c)])

    def derivative(self) -> "Poly":
        return Poly(x * i for i, x in enumerate(self.c) if i)

    def shift_reflect(self) -> "Poly":
        """The polynomial x -> p(1 - x)."""
        out = [Fraction(0)] * len(self.c)
        for m, a in enumerate(self.c):
            if not a:
                continue
            for j in range(m + 1):
                out[j] += a * comb(m, j) * (-1) ** j
        return Poly(out)

    def divide_linear(self, root):
        """(q, r) with p(x) = (x - root) q(x) + r; q as a coefficient list in root's type."""
        acc = _coerce(0, root)
        q = []
        for coef in reversed(self.c):
            acc = acc * root + _coerce(coef, root)
            q.append(acc)
        rem = q.pop() if q else acc
        return q[::-1], rem

    def definite(self, lo, hi):
        F = self.integral()
        return F(hi) - F(lo)

    def coeff_strings(self) -> list[str]:
        return [str(x) for x in self.c]
