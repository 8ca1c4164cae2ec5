"""Numbers of the form q0 + sum_p q_p log p with rational q's.

Every J-integral of a rational polynomial lands in this set, so equality and
sign are decidable: the logs of distinct primes and 1 are linearly independent
over the rationals.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath

from .arith import factorize


class ExactConstant:
    __slots__ = ("rational", "logs")

    def __init__(self, rational=0, logs: dict | None = None):
        self.rational = Fraction(rational)
        self.logs: dict[int, Fraction] = {
            int(p): Fraction(c) for p, c in sorted((logs or {}).items()) if Fraction(c) != 0
        }

    @classmethod
    def log_of(cls, x, coeff=1) -> "ExactConstant":
        """coeff * log(x) for a positive rational x, expanded over prime logs."""
        x = Fraction(x)
        if x <= 0:
            raise ValueError(f"log of non-positive {x}")
        coeff = Fraction(coeff)
        logs: dict[int, Fraction] = {}
        for p, e in factorize(x.numerator).items() if x.numerator > 1 else ():
            logs[p] = logs.get(p, 0) + coeff * e
        for p, e in factorize(x.denominator).items() if x.denominator > 1 else ():
            logs[p] = logs.get(p, 0) - coeff * e
        return cls(0, logs)

    def is_rational(self) -> bool:
        return not self.logs

    def __add__(self, other):
        if not isinstance(other, ExactConstant):
            return ExactConstant(self.rational + Fraction(other), self.logs)
        logs = dict(self.logs)
        for p, c in other.logs.items():
            logs[p] = logs.get(p, 0) + c
        return ExactConstant(self.rational + other.rational, logs)

    __radd__ = __add__

    def __neg__(self):
        return ExactConstant(-self.rational, {p: -c for p, c in self.logs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, ExactConstant) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, q):
        if isinstance(q, ExactConstant):
            if q.is_rational():
                q = q.rational
            elif self.is_rational():
                return q * self.rational
            else:
                raise TypeError("product of two log-bearing constants leaves the log basis")
        q = Fraction(q)
        return ExactConstant(self.rational * q, {p: c * q for p, c in self.logs.items()})

    __rmul__ = __mul__

    def __truediv__(self, q):
        return self * (1 / Fraction(q))

    def __eq__(self, other):
        if not isinstance(other, ExactConstant):
            try:
                other = ExactConstant(Fraction(other))
            except (TypeError, ValueError):
                return NotImplemented
        return self.rational == other.rational and self.logs == other.logs

    def __hash__(self):
        return hash((self.rational, tuple(self.logs.items())))

    def _digits_needed(self) -> int:
        # enough digits to survive cancellation between the largest terms
        coeffs = [self.rational, *self.logs.values()]
        return max(len(str(c.numerator)) + len(str(c.denominator)) for c in coeffs) + 30

    def numeric(self, dps: int = 40):
        """High-precision value as an mpmath mpf (working precision grows with coefficient size)."""
        with mpmath.workdps(max(dps, self._digits_needed())):
            acc = mpmath.mpf(self.rational.numerator) / self.rational.denominator
            for p, c in self.logs.items():
                acc += mpmath.mpf(c.numerator) / c.denominator * mpmath.log(p)
            return +acc

    def __float__(self):
        return float(self.numeric())

    def sign(self) -> int:
        """Certified sign via interval arithmetic at increasing precision."""
        if self.is_rational():
            return (self.rational > 0) - (self.rational < 0)
        prec = 4 * self._digits_needed()
        iv = mpmath.iv
        saved = iv.prec
        try:
            while True:
                iv.prec = prec
                acc = iv.mpf(self.rational.numerator) / self.rational.denominator
                for p, c in self.logs.items():
                    acc += iv.mpf(c.numerator) / c.denominator * iv.log(p)
                if acc.a > 0:
                    return 1
                if acc.b < 0:
                    return -1
                prec *= 2
        finally:
            iv.prec = saved

    def __str__(self):
        parts = []
        if self.rational != 0 or not self.logs:
            parts.append(str(self.rational))
        for p, c in self.logs.items():
            parts.append(f"{c}*log({p})")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"ExactConstant({self})"

    def to_json(self) -> dict:
        return {
            "rational": str(self.rational),
            "logs": {str(p): str(c) for p, c in self.logs.items()},
            "text": str(self),
            "numeric": float(self),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExactConstant":
        return cls(Fraction(data["rational"]), {int(p): Fraction(c) for p, c in data["logs"].items()})
