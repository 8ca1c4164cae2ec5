"""Command-line entry point.

Every subcommand prints one JSON document (``"schema": "v1"``) unless a CSV
view is requested.  Exit codes: 0 success, 2 precondition error, 3 resource
guard.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction

from . import _accel
from .errors import PreconditionError, ResourceGuardError

SCHEMA = "v1"


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _number(text: str) -> float:
    """Accepts ``1e5``, ``100000`` or ``10**5``."""
    try:
        if "**" in text:
            base, exp = text.split("**")
            return float(int(base) ** int(exp))
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _integer(text: str) -> int:
    v = _number(text)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(v)


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _poly(text: str):
    from .poly import Poly

    return Poly.parse(text)


def _tuple(text: str):
    from .tuples import LinearTuple

    return LinearTuple.parse(text)


# ---- subcommands ------------------------------------------------------------------


def cmd_admissible(args):
    from .tuples import tuple_report

    return tuple_report(args.tuple, args.cutoff)


def cmd_singular_series(args):
    from .tuples import normalize, raw_singular_series, singular_series

    out = {"tuple": str(args.tuple), "raw": raw_singular_series(args.tuple, args.cutoff).to_json()}
    nt = normalize(args.tuple)
    out["normalized_tuple"] = str(nt.tuple)
    out["normalized"] = singular_series(nt, args.cutoff).to_json()
    return out


def cmd_weights(args):
    from .tuples import normalize
    from .weights import (SieveParams, T_delta_bilinear, T_delta_diagonal, lambda_from_y, lambda_table,
                          random_rational_y, y_from_lambda)

    nt = normalize(args.tuple)
    params = SieveParams(nt, args.R, args.poly)
    out = lambda_table(params).to_json()
    out["tuple"] = str(nt.tuple)
    if args.check_identities:
        rng = random.Random(args.seed)
        exact = lambda_from_y(nt, args.R, random_rational_y(nt, args.R, rng))
        deltas = [d for d in range(1, 31) if _valid_delta(nt, d)]
        out["identities"] = {
            "seed": args.seed,
            "roundtrip": y_from_lambda(exact) == exact.y,
            "diagonal": all(T_delta_bilinear(exact, d) == T_delta_diagonal(exact, d) for d in deltas),
            "deltas": deltas,
        }
    return out


def _valid_delta(nt, d: int) -> bool:
    from .arith import is_squarefree

    return is_squarefree(d) and math.gcd(d, nt.A) == 1


def cmd_sums(args):
    from .e2 import BetaConfig
    from .sums import M_count, S0_exact, S1_exact, S_combined, Spi_exact, winners_csv
    from .tuples import normalize
    from .weights import SieveParams

    nt = normalize(args.tuple)
    N = args.N
    R = args.R if args.R is not None else N ** (float(args.theta) / 2) * math.log(N) ** (-args.C)
    params = SieveParams(nt, R, args.poly)
    Y = N ** float(args.eta) if args.Y is None else args.Y
    cfg = BetaConfig(N, Y, "mod4" if args.mod4 else "plain")
    if args.kind == "S0":
        return S0_exact(params, N, exact=args.exact).to_json()
    if args.kind == "S1":
        return S1_exact(params, N, args.form, cfg, exact=args.exact).to_json()
    if args.kind == "Spi":
        return Spi_exact(params, N, args.form, exact=args.exact).to_json()
    if args.kind == "M":
        return {"kind": "M", "N": N, "u": args.u, "form": args.form, "count": M_count(params, args.form, args.u, N, cfg)}
    report, winners = S_combined(params, N, args.nu, cfg, args.with_primes, exact=args.exact)
    if args.csv:
        return winners_csv(winners)
    out = report.to_json()
    out["winners"] = [{"n": w.n, "source_n": w.source_n, "forms": w.forms} for w in winners[: args.max_winners]]
    return out


def cmd_jint(args):
    from .jint import JInputs, evaluate

    return evaluate(JInputs(args.k, args.B, args.eta, args.poly, args.nu), args.with_primes).to_json()


def cmd_bounds(args):
    from .bounds import BoundQuery, leading_constant

    return leading_constant(BoundQuery(args.nu, args.B, args.variant)).to_json()


def cmd_min_k(args):
    from .bounds import min_k

    family = "fixed" if args.poly is not None else "monomial_sqrt_k"
    res = min_k(args.nu, args.B, args.eta, family, args.poly, k_max=args.k_max, two_squares=args.two_squares)
    return res.to_json()


def cmd_e2(args):
    from .e2 import E2Options, e2_gaps, find_patterns

    opts = E2Options(args.min_factor, args.mod4, args.allow_squares)
    out = {"limit": args.limit}
    if args.gaps or args.instances:
        rep = e2_gaps(args.limit, opts, instances_for=tuple(args.instances or ()), max_instances=args.max_instances,
                      block_nu=args.block_nu, block_window=args.block_window)
        out.update(rep.to_json())
    else:
        from .e2 import e2_arrays

        ns, _, _ = e2_arrays(args.limit, opts)
        out["count"] = int(ns.size)
        out["first"] = ns[:20].tolist()
    if args.find_triples:
        out["patterns"] = {"shifts": args.find_triples,
                           "hits": find_patterns(args.limit, tuple(args.find_triples), opts, args.max_instances)}
    if args.csv:
        rows = ["gap,n"] + [f"{g},{n}" for g, ns_ in out.get("instances", {}).items() for n in ns_]
        return "\n".join(rows) + "\n"
    return out


def cmd_bv(args):
    from .distribution import bv_sum, eval_q_expr
    from .e2 import BetaConfig

    Q = eval_q_expr(args.Q_expr, args.x)
    cfg = BetaConfig(args.x, args.Y) if args.which == "beta" else None
    exact = True if args.exact else None
    rep = bv_sum(args.x, Q, args.h, args.which, cfg, exact=exact, log_power=args.log_power)
    if args.csv:
        return rep.per_q_csv()
    out = rep.to_json()
    out["Q_expr"] = args.Q_expr
    return out


def cmd_wirsing(args):
    from .tuples import normalize
    from .wirsing import GammaSpec, wirsing_sum, wirsing_weighted

    excluded = args.excluded
    if args.tuple is not None:
        excluded = normalize(args.tuple).A
    spec = GammaSpec(args.spec, args.k, excluded)
    res = wirsing_weighted(spec, args.z, args.F) if args.F is not None else wirsing_sum(spec, args.z)
    out = res.to_json()
    out["spec"] = spec.to_json()
    return out


# ---- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--threads", type=int, default=0, help="numba thread count (0 = default)")
    common.add_argument("--seed", type=int, default=42, help="seed for randomized oracles")

    p = argparse.ArgumentParser(prog="selberg-e2", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("admissible", cmd_admissible, "admissibility, A, normalization of a tuple")
    sp.add_argument("--tuple", type=_tuple, required=True, help='e.g. "n,n+2,n+6" or "2*n+1,2*n+3"')
    sp.add_argument("--cutoff", type=_integer, default=10**6)

    sp = add("singular-series", cmd_singular_series, "singular series with truncation bound")
    sp.add_argument("--tuple", type=_tuple, required=True)
    sp.add_argument("--cutoff", type=_integer, default=10**6)

    sp = add("weights", cmd_weights, "sieve weights of the normalized tuple")
    sp.add_argument("--tuple", type=_tuple, required=True)
    sp.add_argument("--R", type=_number, required=True)
    sp.add_argument("--poly", type=_poly, required=True, help='"c0,c1,..." low degree first')
    sp.add_argument("--check-identities", action="store_true", help="verify exact identities on random rational y")

    sp = add("sums", cmd_sums, "weighted detection sums over (N, 2N]")
    sp.add_argument("--tuple", type=_tuple, required=True)
    sp.add_argument("--N", type=_integer, required=True)
    sp.add_argument("--R", type=_number, help="sieve level (default N^(theta/2) (log N)^-C)")
    sp.add_argument("--theta", type=_rational, default=Fraction(1, 2))
    sp.add_argument("--C", type=float, default=0.0)
    sp.add_argument("--poly", type=_poly, required=True)
    sp.add_argument("--kind", choices=("S0", "S1", "Spi", "S", "M"), default="S")
    sp.add_argument("--form", type=int, default=0, help="0-based form index")
    sp.add_argument("--u", type=int, default=1, help="modulus for --kind M")
    sp.add_argument("--nu", type=int, default=1)
    sp.add_argument("--eta", type=_rational, default=Fraction(0))
    sp.add_argument("--Y", type=float, help="overrides N^eta")
    sp.add_argument("--mod4", action="store_true")
    sp.add_argument("--with-primes", action="store_true")
    sp.add_argument("--exact", action="store_true", help="rational accumulation (N <= 1e5)")
    sp.add_argument("--csv", action="store_true", help="winner list as CSV")
    sp.add_argument("--max-winners", type=int, default=100)

    sp = add("jint", cmd_jint, "J-integral constants")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--B", type=_rational, required=True)
    sp.add_argument("--eta", type=_rational, default=Fraction(0))
    sp.add_argument("--nu", type=int, default=1)
    sp.add_argument("--poly", type=_poly, required=True)
    sp.add_argument("--with-primes", action="store_true")

    sp = add("bounds", cmd_bounds, "leading-order thresholds (heuristic)")
    sp.add_argument("--nu", type=int, required=True)
    sp.add_argument("--B", type=_rational, default=Fraction(4))
    sp.add_argument("--variant", choices=("E2", "short_interval", "two_squares", "both"), default="E2")

    sp = add("min-k", cmd_min_k, "smallest k with a certified positive detection constant")
    sp.add_argument("--nu", type=int, required=True)
    sp.add_argument("--B", type=_rational, default=Fraction(4))
    sp.add_argument("--eta", type=_rational, default=Fraction(0))
    sp.add_argument("--poly", type=_poly, help="fixed polynomial; omit for the x^l/l! family")
    sp.add_argument("--k-max", type=int, default=10**4)
    sp.add_argument("--two-squares", action="store_true")

    sp = add("e2", cmd_e2, "products of two distinct primes: stream, gaps, patterns")
    sp.add_argument("--limit", type=_integer, required=True)
    sp.add_argument("--min-factor", type=int, default=0)
    sp.add_argument("--mod4", action="store_true")
    sp.add_argument("--allow-squares", action="store_true")
    sp.add_argument("--gaps", action="store_true")
    sp.add_argument("--instances", type=_ints, help="gap values to list instances for")
    sp.add_argument("--max-instances", type=int, default=100)
    sp.add_argument("--block-nu", type=int)
    sp.add_argument("--block-window", type=int)
    sp.add_argument("--find-triples", type=_ints, help='shift pattern, e.g. "0,2,6"')
    sp.add_argument("--csv", action="store_true", help="gap instances as CSV")

    sp = add("bv", cmd_bv, "weighted equidistribution error sums")
    sp.add_argument("--x", type=_integer, required=True)
    sp.add_argument("--Q-expr", default="sqrt(x)/log(x)^5")
    sp.add_argument("--h", type=int, default=1)
    sp.add_argument("--which", choices=("primes", "beta"), default="primes")
    sp.add_argument("--Y", type=float, default=1.0)
    sp.add_argument("--exact", action="store_true", help="scan every y (slow above 1e6)")
    sp.add_argument("--log-power", type=float)
    sp.add_argument("--csv", action="store_true", help="per-q values as CSV")

    sp = add("wirsing", cmd_wirsing, "mean values of multiplicative functions")
    sp.add_argument("--spec", choices=("unit", "constant_k_off_A", "totient_like"), required=True)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--excluded", type=int, default=1)
    sp.add_argument("--tuple", type=_tuple, help="take the excluded primes from this tuple's normalization")
    sp.add_argument("--z", type=_number, required=True)
    sp.add_argument("--F", type=_poly, help="weight polynomial")
    return p


def _emit(payload, out_path: str | None) -> None:
    if isinstance(payload, dict):
        text = json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True) + "\n"
    else:
        text = payload
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _accel.set_threads(args.threads)
    try:
        payload = args.func(args)
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return 2
    try:
        _emit(payload, args.out)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return 0


if __name__ == "__main__":
    sys.exit(main())
