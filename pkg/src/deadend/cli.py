"""Command-line interface for the dead-end toolkit.

Subcommands: density, enumerate, verify, qs, model, walk, report.
Data goes to stdout, diagnostics to stderr. Exit codes are a stable
contract: 0 success/confirmed, 1 refuted, 2 usage error, 3 unverifiable at
the configured bound, 4 precision failure.

Tuning comes from flags plus exactly two environment variables:
``DEADEND_SEGMENT_BYTES`` and ``DEADEND_THREADS``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

import mpmath

from . import census, euler, local, stochastic, walker
from .arith import UnverifiableError
from .euler import PrecisionError
from .local import CapacityError, DigitSet

__all__ = ["main", "main_entry"]

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_UNVERIFIABLE = 3
EXIT_PRECISION = 4

FORMAT_CSV = "csv"
FORMAT_TEXT = "text"


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by the subcommands."""

    subcommand: str
    base: int = 10
    precision: int = 12
    limit: int = 1
    subset: str = ""
    z: Optional[int] = None
    seed: Optional[int] = None
    segment_bytes: int = census.DEFAULT_SEGMENT_BYTES
    fmt: str = FORMAT_TEXT
    out: Optional[str] = None

    def validate(self) -> "RunConfig":
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if self.base > local.MAX_BASE:
            raise ValueError(f"base must be <= {local.MAX_BASE}, got {self.base}")
        if self.precision < 6:
            raise ValueError(f"--digits must be >= 6, got {self.precision}")
        if self.limit < 1:
            raise ValueError(f"--limit must be >= 1, got {self.limit}")
        if self.z is not None and self.z < 2:
            raise ValueError(f"--z must be >= 2, got {self.z}")
        if self.fmt not in (FORMAT_CSV, FORMAT_TEXT):
            raise ValueError(f"unknown format {self.fmt!r}")
        return self


def _hp_str(hp: euler.HPReal, digits: int) -> str:
    shown = max(1, min(digits, hp.certified_digits()))
    return f"{mpmath.nstr(hp.value, shown)} +/- {mpmath.nstr(hp.err, 2)}"


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


# ---------------------------------------------------------------------------
# subcommands


def cmd_density(args) -> int:
    cfg = RunConfig("density", base=args.base, precision=args.digits).validate()
    hp = euler.dead_end_constant(cfg.base, cfg.precision)
    print(f"c_dead({cfg.base}) = {_hp_str(hp, cfg.precision)}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    cfg = RunConfig("enumerate", base=args.base, limit=args.limit).validate()
    out, close = _open_out(args.out)
    try:
        count = census.enumerate_dead_ends(
            cfg.base, cfg.limit, emit=lambda n: print(n, file=out)
        )
    finally:
        if close:
            out.close()
    print(f"found {count} dead ends up to {cfg.limit} in base {cfg.base}", file=sys.stderr)
    return EXIT_OK


def _prime_exponent(value: int, p: int) -> int:
    e = 0
    while value % p == 0:
        value //= p
        e += 1
    return e


def cmd_verify(args) -> int:
    cfg = RunConfig("verify", base=args.base).validate()
    if args.n < 1:
        raise ValueError(f"n must be >= 1, got {args.n}")
    result = census.verify_dead_end(cfg.base, args.n, args.factor_bound)
    if isinstance(result, census.Refutation):
        print(f"refuted: {result.reason}")
        return EXIT_REFUTED
    print(f"dead end confirmed: {result.n} (base {result.base})")
    print("digit,child,prime,exponent")
    for ob in result.obstructions:
        print(f"{ob.digit},{ob.child},{ob.prime},{_prime_exponent(ob.child, ob.prime)}")
    return EXIT_OK


def cmd_qs(args) -> int:
    cfg = RunConfig(
        "qs", base=args.base, limit=args.limit, subset=args.subset, z=args.z,
        precision=args.digits,
    ).validate()
    subset = DigitSet.parse(cfg.base, cfg.subset)
    if cfg.z is None:
        count = census.q_count(subset, cfg.limit)
        ref = euler.subset_constant(subset, cfg.precision)
        print(f"count: {count}")
        print(
            f"reference: {mpmath.nstr(ref.value * cfg.limit, cfg.precision)}"
            f" +/- {mpmath.nstr(ref.err * cfg.limit, 2)}"
        )
    else:
        count = census.q_sifted(subset, cfg.limit, cfg.z)
        fr = euler.finite_product_fraction(subset, cfg.z) * cfg.limit
        with euler._mp_dps(cfg.precision + 10):
            ref_str = mpmath.nstr(mpmath.mpf(fr.numerator) / fr.denominator, cfg.precision)
        print(f"count: {count}")
        print(f"reference: {ref_str}")
        print(f"bound: {euler.modulus(cfg.z)}")
    return EXIT_OK


def cmd_model(args) -> int:
    cfg = RunConfig("model", base=args.base, precision=args.digits).validate()
    if not args.tol > 0:
        raise ValueError(f"--tol must be > 0, got {args.tol}")
    if args.max_iter < 1:
        raise ValueError(f"--max-iter must be >= 1, got {args.max_iter}")
    label = "model" if cfg.base == 10 else "model (generalized)"
    print(f"label: {label}")
    work = max(cfg.precision, 12)
    first = stochastic.p1(cfg.base, work)
    print(f"P1: {_hp_str(first, cfg.precision)}")
    trace = stochastic.iterate_p(cfg.base, args.max_iter, args.tol, work)
    print(f"iterations: {len(trace.values)}")
    if trace.converged and trace.ell is not None:
        print(f"ell: {_hp_str(trace.ell, cfg.precision)}")
    else:
        print(f"ell: not converged within {args.max_iter} iterations (tol {args.tol})")
    pred = stochastic.predicted_density(cfg.base, work)
    print(f"predicted_density: {_hp_str(pred, cfg.precision)}")
    gap = stochastic.model_gap(cfg.base, work)
    print(f"gap_ratio: {_hp_str(gap, cfg.precision)}")
    return EXIT_OK


def cmd_walk(args) -> int:
    cfg = RunConfig("walk", base=args.base, seed=args.seed).validate()
    if args.steps < 0:
        raise ValueError(f"--steps must be >= 0, got {args.steps}")
    result = walker.extend_walk(
        cfg.base,
        args.start,
        strategy=args.strategy,
        max_steps=args.steps,
        seed=cfg.seed,
        prime_bound=args.factor_bound,
    )
    print(walker.transcript(args.start, result), end="")
    print(f"status: {result.status}", file=sys.stderr)
    if result.status == walker.STATUS_UNVERIFIABLE:
        return EXIT_UNVERIFIABLE
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = RunConfig(
        "report", base=args.base, limit=args.limit, fmt=args.format,
        out=args.out, precision=args.digits,
    ).validate()
    checkpoints = None
    if args.checkpoints:
        checkpoints = [int(tok) for tok in args.checkpoints.split(",") if tok.strip()]
    report = census.density_report(cfg.base, cfg.limit, checkpoints, cfg.precision)
    doc = census.to_csv(report) if cfg.fmt == FORMAT_CSV else census.to_text(report)
    out, close = _open_out(cfg.out)
    try:
        out.write(doc)
    finally:
        if close:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deadend",
        description="Dead ends in square-free digit walks: exact densities, "
        "enumeration, witnesses, and the branching-model comparison.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("density", help="certified dead-end density constant c_dead(b)")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--digits", type=int, default=12, help="certified decimal digits")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("enumerate", help="stream every dead end up to a limit")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="prove or refute that n is a dead end")
    p.add_argument("n", type=int)
    p.add_argument("--base", type=int, default=10)
    p.add_argument(
        "--factor-bound", type=int, default=census.DEFAULT_FACTOR_BOUND,
        help="trial-division prime bound for witnesses",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("qs", help="subset count Q_S(X), or sifted count with --z")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--subset", default="", help="comma digits, '' for empty, 'all'")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--z", type=int, default=None, help="sift primes <= z only")
    p.add_argument("--digits", type=int, default=12)
    p.set_defaults(func=cmd_qs)

    p = sub.add_parser("model", help="branching-model prediction and gap ratio")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--tol", type=float, default=stochastic.DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=stochastic.DEFAULT_MAX_ITER)
    p.add_argument("--digits", type=int, default=12)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("walk", help="extend a square-free digit walk")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--strategy", choices=[walker.GREEDY, walker.RANDOM],
                   default=walker.GREEDY)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument(
        "--factor-bound", type=int, default=census.DEFAULT_FACTOR_BOUND,
        help="trial-division prime bound for square-freeness checks",
    )
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("report", help="density report with checkpoints")
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--checkpoints", default=None, help="comma-separated x values")
    p.add_argument("--format", choices=[FORMAT_CSV, FORMAT_TEXT], default=FORMAT_TEXT)
    p.add_argument("--out", default=None)
    p.add_argument("--digits", type=int, default=12)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnverifiableError as exc:
        print(f"unverifiable: {exc}", file=sys.stderr)
        return EXIT_UNVERIFIABLE
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION


def main_entry() -> None:
    sys.exit(main())
