"""
Command-line interface.

    sl2lc verify <suite|all> [--p P]... [--w-pi {+1,-1,both}] [--shell-depth D]
                 [--torus-range R] [--jobs N] [--format json|text] [--out PATH]
                 [--reproducible] [--seed S]
    sl2lc compute gauss-sum --p P [--level-index I] --c-val V
    sl2lc compute local-coefficient --p P [--w-pi {+1,-1}] [--level-index I]
    sl2lc compute plancherel --p P [--w-pi {+1,-1}] [--level-index I]

Exit code 0 means every check passed, 1 a failed check, 2 a configuration
error.
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from sympy import isprime

from . import __version__
from .anchors import SUITES
from .config import RunConfig, parse_w_pi
from .cyclo import format_complex
from .errors import ConfigurationError, Sl2lcError
from .integrate import factors_and_equations
from .localfield import ExtChar, FieldContext, ramified_quadratic_chars
from .report import Report
from .runner import compute_gauss_sum, run_suite

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def emit_report(report: Report, fmt: str = "json", out: str | None = None) -> str:
    """
    Serialise a report and write it to ``out`` or stdout.

    Returns:
        The serialised text
    """
    text = report.to_json() if fmt == "json" else report.to_text()
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
        log.info("Report written to %s", out)
    return text


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sl2lc",
        description="Exact local coefficients and Hecke actions for SL(2) over Q_p",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Logging level (default WARNING)")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="Run verification suites")
    verify.add_argument("suite", choices=["all", *SUITES])
    verify.add_argument("--p", dest="primes", type=int, action="append", help="Prime (repeatable)")
    verify.add_argument("--w-pi", dest="w_pi", default=None, help="+1, -1 or both")
    verify.add_argument("--shell-depth", type=int, default=None)
    verify.add_argument("--torus-range", type=int, default=None)
    verify.add_argument("--jobs", type=int, default=None)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--format", choices=["json", "text"], default=None)
    verify.add_argument("--out", default=None)
    verify.add_argument(
        "--reproducible", action="store_true", default=None, help="Zero elapsed times"
    )

    compute = commands.add_parser("compute", help="Print one quantity without verification")
    quantities = compute.add_subparsers(dest="quantity", required=True)
    gauss = quantities.add_parser("gauss-sum", help="tau(eta, psi, c)")
    gauss.add_argument("--p", type=int, required=True)
    gauss.add_argument("--level-index", type=int, default=0)
    gauss.add_argument("--c-val", type=Fraction, required=True)
    for name, text in (
        ("local-coefficient", "C(s, eta~, psi)"),
        ("plancherel", "Plancherel measure and intertwining coefficients"),
    ):
        sub = quantities.add_parser(name, help=text)
        sub.add_argument("--p", type=int, required=True)
        sub.add_argument("--w-pi", dest="w_pi", default="+1")
        sub.add_argument("--level-index", type=int, default=0)
    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _run_verify(args: argparse.Namespace, base: RunConfig) -> int:
    cfg = base.with_overrides(
        primes=tuple(args.primes) if args.primes else None,
        w_pi=parse_w_pi(args.w_pi) if args.w_pi is not None else None,
        shell_depth=args.shell_depth,
        torus_range=args.torus_range,
        jobs=args.jobs,
        seed=args.seed,
        format=args.format,
        out=args.out,
        reproducible=args.reproducible,
        suites=tuple(SUITES) if args.suite == "all" else (args.suite,),
    )
    report = asyncio.run(run_suite(cfg))
    emit_report(report, cfg.format, cfg.out)
    return report.exit_code


def _character(p: int, index: int, w_pi: str) -> ExtChar:
    chars = ramified_quadratic_chars(p)
    if not 0 <= index < len(chars):
        raise ConfigurationError(f"Character index {index} out of range for p={p}")
    values = parse_w_pi(w_pi)
    if len(values) != 1:
        raise ConfigurationError("compute needs a single w_pi, +1 or -1")
    return ExtChar(chars[index], values[0])


def _run_compute(args: argparse.Namespace) -> int:
    if not isprime(args.p):
        raise ConfigurationError(f"{args.p} is not prime")
    match args.quantity:
        case "gauss-sum":
            value = compute_gauss_sum(args.p, args.c_val, args.level_index)
            print(f"tau = {value}")
            print(f"    ~ {format_complex(value.embed())}")
        case "local-coefficient":
            ext = _character(args.p, args.level_index, args.w_pi)
            factors = factors_and_equations(FieldContext.create(args.p, ext.level), ext)
            coefficient = factors.epsilon_factor
            print(f"C({ext.label}) = {coefficient}")
            print(f"    ~ {format_complex(coefficient.leading.embed())} * X^{coefficient.degree}")
        case "plancherel":
            ext = _character(args.p, args.level_index, args.w_pi)
            factors = factors_and_equations(FieldContext.create(args.p, ext.level), ext)
            c = factors.intertwining
            print(f"mu({ext.label}) = {factors.plancherel}")
            print(f"a_I2 = {c.a_I2}, a_w0 = {c.a_w0}, b_I2 = {c.b_I2}, b_w0 = {c.b_w0}")
            print(f"b_w0 with f_I2 substituted = {c.b_w0_from_f_I2}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``sl2lc`` script."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        base = RunConfig.from_env()
        _configure_logging(args.log_level or base.log_level)
        if args.command == "verify":
            return _run_verify(args, base)
        return _run_compute(args)
    except ConfigurationError as e:
        print(f"sl2lc: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Sl2lcError as e:
        log.error("%s: %s", type(e).__name__, e)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
