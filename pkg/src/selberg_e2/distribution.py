"""Empirical equidistribution in arithmetic progressions.

Counts over (y, 2y] change only when y or 2y crosses an element, so they are
constant on every interval [m/2, (m+1)/2).  Evaluating at y = m/2 for all m
therefore gives the exact maximum over y; above ``EXACT_LIMIT`` a 64-point
subset of those y is used and the result is flagged as a lower bound.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, field

import numpy as np

from .arith import is_squarefree, prime_factors, primes_up_to, totient
from .e2 import BetaConfig, beta_mask, build_factor_table
from .errors import PreconditionError, ResourceGuardError
from .kernels import class_counts

EXACT_LIMIT = 10**4
GRID_POINTS = 64
CHUNK = 1 << 18
X_GUARD = 10**8
WORK_GUARD = 10**10


@dataclass
class CountingSet:
    """Sorted elements up to 2x that Delta is measured on."""

    x: int
    values: np.ndarray
    which: str
    coprime_total: bool

    @classmethod
    def primes(cls, x: int) -> "CountingSet":
        return cls(x, primes_up_to(2 * x).astype(np.int64), "primes", False)

    @classmethod
    def beta(cls, x: int, cfg: BetaConfig) -> "CountingSet":
        table = build_factor_table(1, 2 * x + 1)
        vals = table.values()[beta_mask(table, cfg)]
        return cls(x, vals.astype(np.int64), "beta", True)


def _grid(cs: CountingSet, exact: bool) -> np.ndarray:
    """Sample points as integers m = 2y."""
    x = cs.x
    if exact:
        return np.arange(1, 2 * x + 1, dtype=np.int64)
    # geometric points x/2^i down to y = 1, then jump points near the top
    pts = {round(2 * x / 2**i) for i in range((2 * x).bit_length())}
    pts.discard(0)
    v = cs.values
    jumps = np.union1d(2 * v[(v >= x // 2) & (v <= x)], v[(v >= x) & (v <= 2 * x)])
    budget = (GRID_POINTS - len(pts)) // 2
    if jumps.size:
        chosen = jumps[np.linspace(0, jumps.size - 1, min(budget, jumps.size)).astype(np.int64)]
        for m in chosen.tolist():
            # value just after and just before the jump
            pts.update(m2 for m2 in (m, m - 1) if 1 <= m2 <= 2 * x)
    return np.array(sorted(pts), dtype=np.int64)


@dataclass
class DeltaStar:
    value: float
    y: float
    a: int
    lower_bound: bool


def _delta_star(cs: CountingSet, q: int, grid: np.ndarray, lower_bound: bool) -> DeltaStar:
    if q < 1:
        raise PreconditionError("q must be >= 1")
    reduced = np.array([a for a in range(q) if math.gcd(a, q) == 1], dtype=np.int64)
    phi = totient(q)
    best = DeltaStar(0.0, 0.0, int(reduced[0]), lower_bound)
    for start in range(0, grid.size, CHUNK):
        part = grid[start : start + CHUNK]
        lo_t = part // 2
        thresholds = np.union1d(lo_t, part)
        cc = class_counts(cs.values, q, thresholds)
        per = cc[np.searchsorted(thresholds, part)] - cc[np.searchsorted(thresholds, lo_t)]
        total = per[:, reduced].sum(axis=1) if cs.coprime_total else per.sum(axis=1)
        dev = np.abs(per[:, reduced] - total[:, None] / phi)
        i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
        if dev[i, j] > best.value:
            best = DeltaStar(float(dev[i, j]), part[i] / 2, int(reduced[j]), lower_bound)
    return best


def _checked_set(x: int, which: str, cfg: BetaConfig | None) -> CountingSet:
    if x < 1:
        raise PreconditionError("x must be positive")
    if x > X_GUARD:
        raise ResourceGuardError(f"x = {x} exceeds guard {X_GUARD}")
    if which == "primes":
        return CountingSet.primes(x)
    if which == "beta":
        return CountingSet.beta(x, cfg or BetaConfig(x, 1))
    raise PreconditionError(f"unknown set {which!r}")


def delta_star(x: int, q: int, *, exact: bool | None = None, data: CountingSet | None = None) -> DeltaStar:
    """max over y <= x and reduced a of |pi(y; q, a) - pi(y)/phi(q)|, counting primes in (y, 2y]."""
    cs = data or _checked_set(x, "primes", None)
    exact = x <= EXACT_LIMIT if exact is None else exact
    return _delta_star(cs, q, _grid(cs, exact), not exact)


def delta_beta_star(x: int, q: int, cfg: BetaConfig, *, exact: bool | None = None,
                    data: CountingSet | None = None) -> DeltaStar:
    """As delta_star for beta-numbers; the average runs over n coprime to q."""
    cs = data or _checked_set(x, "beta", cfg)
    exact = x <= EXACT_LIMIT if exact is None else exact
    return _delta_star(cs, q, _grid(cs, exact), not exact)


@dataclass
class BVReport:
    x: int
    Q: float
    h: int
    which: str
    sum: float
    lower_bound: bool
    per_q: list[tuple[int, float]] = field(default_factory=list)
    log_power: float | None = None

    @property
    def normalized(self) -> float:
        return self.sum / self.x

    def normalized_log(self, A: float) -> float:
        """sum / (x (log x)^-A)."""
        return self.sum * math.log(self.x) ** A / self.x

    def to_json(self) -> dict:
        out = {
            "x": self.x,
            "Q": self.Q,
            "h": self.h,
            "which": self.which,
            "sum": self.sum,
            "normalized": self.normalized,
            "lower_bound": self.lower_bound,
            "q_count": len(self.per_q),
        }
        if self.log_power is not None:
            out["log_power"] = self.log_power
            out["normalized_log"] = self.normalized_log(self.log_power)
        return out

    def per_q_csv(self) -> str:
        return "q,delta_star\n" + "".join(f"{q},{d!r}\n" for q, d in self.per_q)


def bv_sum(x: int, Q: float, h: int, which: str = "primes", cfg: BetaConfig | None = None, *,
           exact: bool | None = None, log_power: float | None = None) -> BVReport:
    """sum_{q <= Q} mu^2(q) h^omega(q) Delta*(x; q), with 0^0 = 1."""
    if Q > x:
        raise PreconditionError("need Q <= x")
    if h < 0:
        raise PreconditionError("h must be nonnegative")
    qmax = int(math.floor(Q)) if Q >= 1 else 0
    if qmax * x > WORK_GUARD:
        raise ResourceGuardError("residue scan cost exceeds guard")
    cs = _checked_set(x, which, cfg)
    exact = x <= EXACT_LIMIT if exact is None else exact
    grid = _grid(cs, exact)
    terms = []
    for q in range(1, qmax + 1):
        if not is_squarefree(q):
            continue
        w = h ** len(prime_factors(q))  # Python gives 0**0 == 1
        if w == 0:
            continue
        terms.append((q, w * _delta_star(cs, q, grid, not exact).value))
    total = math.fsum(t for _, t in terms)
    return BVReport(x, Q, h, which, total, not exact, terms, log_power)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"sqrt": math.sqrt, "log": math.log, "exp": math.exp}


def eval_q_expr(expr: str, x: float) -> float:
    """Evaluate an arithmetic expression in x such as ``sqrt(x)/log(x)^5``."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id == "x":
            return x
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS and len(node.args) == 1:
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise PreconditionError(f"unsupported expression element in {expr!r}")

    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PreconditionError(f"cannot parse {expr!r}") from exc
    return float(ev(tree))
