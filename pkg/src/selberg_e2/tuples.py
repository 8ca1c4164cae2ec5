"""Admissible tuples of linear forms a*n + b.

Covers residue counts nu_p, admissibility, the constant A, the shift
normalization that makes nu_p equal to 0 or k at every prime, singular series
with a certified truncation bound, and root sets modulo squarefree d.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product

import numpy as np

from .arith import crt, is_squarefree, prime_factors, primes_up_to
from .errors import InadmissibleError, PreconditionError

DEFAULT_CUTOFF = 10**6


@dataclass(frozen=True)
class LinearForm:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1:
            raise PreconditionError(f"slope must be positive, got {self.a}")

    def __call__(self, n):
        return self.a * n + self.b

    def __str__(self):
        head = "n" if self.a == 1 else f"{self.a}*n"
        if self.b == 0:
            return head
        return f"{head}{'+' if self.b > 0 else '-'}{abs(self.b)}"


_FORM_RE = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?n\s*(?:([+-])\s*(\d+))?\s*$")


def parse_form(text: str) -> LinearForm:
    m = _FORM_RE.match(text)
    if not m:
        raise PreconditionError(f"cannot parse linear form {text!r}")
    a = int(m.group(1)) if m.group(1) else 1
    b = int(m.group(3)) if m.group(3) else 0
    return LinearForm(a, -b if m.group(2) == "-" else b)


@dataclass(frozen=True)
class LinearTuple:
    forms: tuple[LinearForm, ...]

    def __post_init__(self):
        object.__setattr__(self, "forms", tuple(self.forms))
        if not self.forms:
            raise PreconditionError("empty tuple")
        if len(set(self.forms)) != len(self.forms):
            raise PreconditionError("repeated linear form")
        for i, f in enumerate(self.forms):
            for g in self.forms[i + 1 :]:
                if f.a * g.b == g.a * f.b:
                    raise PreconditionError(f"proportional forms {f} and {g}")

    @classmethod
    def parse(cls, text: str) -> "LinearTuple":
        return cls(tuple(parse_form(t) for t in text.split(",")))

    @classmethod
    def from_shifts(cls, shifts) -> "LinearTuple":
        return cls(tuple(LinearForm(1, int(h)) for h in shifts))

    @property
    def k(self) -> int:
        return len(self.forms)

    def values(self, n):
        return [f(n) for f in self.forms]

    def product(self, n: int) -> int:
        return math.prod(f(n) for f in self.forms)

    def __str__(self):
        return ",".join(str(f) for f in self.forms)


def nu_p(t: LinearTuple, p: int) -> int:
    """Number of n mod p with prod(a_i n + b_i) = 0 mod p."""
    return sum(1 for n in range(p) if any((f.a * n + f.b) % p == 0 for f in t.forms))


def constant_A(t: LinearTuple) -> int:
    """prod a_i * prod_{i<j} |a_i b_j - a_j b_i|."""
    out = math.prod(f.a for f in t.forms)
    for i, f in enumerate(t.forms):
        for g in t.forms[i + 1 :]:
            out *= abs(f.a * g.b - g.a * f.b)
    return out


def _critical_primes(t: LinearTuple) -> list[int]:
    # for p > k each form has at most one root mod p unless p | gcd(a, b)
    ps = set(int(p) for p in primes_up_to(t.k))
    for f in t.forms:
        ps.update(prime_factors(math.gcd(f.a, f.b)))
    return sorted(ps)


def _irregular_primes(t: LinearTuple) -> list[int]:
    """Every prime where nu_p may differ from k."""
    ps = set(int(p) for p in primes_up_to(t.k))
    ps.update(prime_factors(constant_A(t)))
    return sorted(ps)


def is_admissible(t: LinearTuple) -> bool:
    return all(nu_p(t, p) < p for p in _critical_primes(t))


@dataclass(frozen=True)
class NormalizedTuple:
    """Forms L_i(scale*n + shift) satisfying the normalized hypothesis.

    ``A`` is the product of the new slopes; ``scale`` is the constant A of the
    source tuple and ``shift`` the CRT representative (the source's n is
    ``scale*n + shift``).
    """

    tuple: LinearTuple
    A: int
    scale: int
    shift: int
    source: LinearTuple

    @property
    def k(self) -> int:
        return self.tuple.k

    @property
    def forms(self):
        return self.tuple.forms

    @property
    def primes_of_A(self) -> list[int]:
        return prime_factors(self.A)

    def source_n(self, n: int) -> int:
        return self.scale * n + self.shift


def normalize(t: LinearTuple) -> NormalizedTuple:
    A = constant_A(t)
    residues, moduli = [], []
    for p in prime_factors(A):
        n_p = next((n for n in range(p) if t.product(n) % p != 0), None)
        if n_p is None:
            raise InadmissibleError(f"inadmissible: every residue mod {p} is a root")
        residues.append(n_p)
        moduli.append(p)
    shift = crt(residues, moduli)
    forms = tuple(LinearForm(f.a * A, f.a * shift + f.b) for f in t.forms)
    nt = NormalizedTuple(LinearTuple(forms), math.prod(f.a for f in forms), A, shift, t)
    check_hypothesis_a(nt)
    return nt


def check_hypothesis_a(nt: NormalizedTuple, sample_bound: int = 200) -> None:
    """Raise if any clause of the normalized hypothesis fails."""
    forms = nt.forms
    ps = set(nt.primes_of_A)
    for f in forms:
        if set(prime_factors(f.a)) != ps:
            raise InadmissibleError("slopes are not composed of the same primes")
        if any(f.b % p == 0 for p in ps):
            raise InadmissibleError("a prime of A divides an intercept")
    for i, f in enumerate(forms):
        for g in forms[i + 1 :]:
            if not set(prime_factors(abs(f.a * g.b - g.a * f.b))) <= ps:
                raise InadmissibleError("cross term has a prime outside A")
    for p in primes_up_to(max(sample_bound, nt.k)):
        p = int(p)
        want = 0 if p in ps else nt.k
        if p <= nt.k and p not in ps:
            raise InadmissibleError(f"prime {p} <= k does not divide A")
        if _nu_p_fast(nt.tuple, p) != want:
            raise InadmissibleError(f"nu_{p} != {want}")


def _nu_p_fast(t: LinearTuple, p: int) -> int:
    roots = set()
    for f in t.forms:
        if f.a % p:
            roots.add((-f.b * pow(f.a, -1, p)) % p)
        elif f.b % p == 0:
            return p
    return len(roots)


@dataclass(frozen=True)
class SingularSeriesValue:
    value: float
    error_bound: float
    cutoff: int

    def to_json(self) -> dict:
        return {"value": self.value, "error": self.error_bound, "cutoff": self.cutoff}


def _tail_log_bound(k: int, cutoff: int) -> float:
    # |log((1-k/p)(1-1/p)^-k)| <= 2k(k-1)/p^2 for p >= 2k; sum over n > cutoff of 1/n^2 < 1/cutoff
    return 2.0 * k * (k - 1) / cutoff


def _euler_product(k: int, cutoff: int, special: dict[int, float]) -> SingularSeriesValue:
    if cutoff < 2 * k:
        raise PreconditionError(f"cutoff {cutoff} must be at least 2k = {2 * k}")
    ps = primes_up_to(cutoff).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        # primes p <= k are always overwritten by ``special`` below
        logs = np.log1p(-k / ps) - k * np.log1p(-1.0 / ps)
    for p, log_factor in special.items():
        if p <= cutoff:
            logs[np.searchsorted(ps, p)] = log_factor
    total = math.fsum(logs.tolist())
    value = math.exp(total)
    tail = _tail_log_bound(k, cutoff)
    return SingularSeriesValue(value, value * math.expm1(tail), cutoff)


def singular_series(nt: NormalizedTuple, cutoff: int = DEFAULT_CUTOFF) -> SingularSeriesValue:
    """prod_{p|A} (1-1/p)^-k * prod_{p not | A} (1-k/p)(1-1/p)^-k, truncated at cutoff."""
    k = nt.k
    if cutoff < k:
        raise PreconditionError("cutoff must be at least k")
    special = {p: -k * math.log1p(-1.0 / p) for p in nt.primes_of_A}
    return _euler_product(k, max(cutoff, 2 * k), special)


def raw_singular_series(t: LinearTuple, cutoff: int = DEFAULT_CUTOFF) -> SingularSeriesValue:
    """prod_p (1 - nu_p/p)(1-1/p)^-k for an arbitrary admissible tuple."""
    k = t.k
    if cutoff < k:
        raise PreconditionError("cutoff must be at least k")
    if not is_admissible(t):
        return SingularSeriesValue(0.0, 0.0, cutoff)
    special = {}
    for p in _irregular_primes(t):
        special[p] = math.log1p(-nu_p(t, p) / p) - k * math.log1p(-1.0 / p)
    return _euler_product(k, max(cutoff, 2 * k), special)


def roots_mod(nt: NormalizedTuple, d: int) -> list[int]:
    """All n mod d with P(n) = 0 mod d, for squarefree d coprime to A."""
    if d < 1 or not is_squarefree(d):
        raise PreconditionError(f"{d} is not squarefree")
    if math.gcd(d, nt.A) != 1:
        raise PreconditionError(f"gcd({d}, A) > 1")
    if d == 1:
        return [0]
    ps = prime_factors(d)
    per_prime = []
    for p in ps:
        per_prime.append(sorted({(-f.b * pow(f.a, -1, p)) % p for f in nt.forms}))
    return sorted(crt(list(combo), ps) for combo in product(*per_prime))


def roots_by_prime(nt: NormalizedTuple, p: int) -> list[int]:
    return sorted({(-f.b * pow(f.a, -1, p)) % p for f in nt.forms})


def tuple_report(t: LinearTuple, cutoff: int = DEFAULT_CUTOFF) -> dict:
    adm = is_admissible(t)
    out = {
        "forms": [str(f) for f in t.forms],
        "k": t.k,
        "A": constant_A(t),
        "admissible": adm,
        "singular_series": {"raw": raw_singular_series(t, cutoff).to_json()},
    }
    if adm:
        nt = normalize(t)
        out["normalized"] = {
            "forms": [str(f) for f in nt.forms],
            "A": nt.A,
            "scale": nt.scale,
            "shift": nt.shift,
        }
        out["singular_series"]["normalized"] = singular_series(nt, cutoff).to_json()
    return out
