"""Command-line front end.

    tauberian expand     exact local-factor algebra
    tauberian sieve      partial sums S(X) as CSV
    tauberian constants  leading constant A as JSON
    tauberian verify     S(X) against the predicted main term
    tauberian kernels    numerical checks of the Laplace identity and kernel limit

Exit codes: 0 success, 2 usage error, 3 numeric-contract violation, 4 I/O.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .constants import (DEFAULT_CUTOFF, leading_constant, leading_constant_via_zeta2,
                        zeta2)
from .errors import ContractError
from .exact_algebra import (Poly, euler_regularize, format_rational, parse_rational,
                            quintic_identity_check, reduced_factor)
from .sieve import (DEFAULT_PER_DECADE, DEFAULT_SEGMENT, PartialSumSeries, SieveConfig,
                    SieveState, checkpoint_grid, partial_sums, write_csv_rows)
from .verify import KernelCheckSpec, compare, kernel_limit_check, laplace_identity_check

EXIT_USAGE, EXIT_CONTRACT, EXIT_IO = 2, 3, 4

LAPLACE_ALPHAS = (Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2))
LAPLACE_S = (1.5, 2.0)


class UsageError(Exception):
    pass


class ResumeError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _count(text: str) -> int:
    """Positive integer; also accepts 10^k and 1e7 spellings."""
    t = text.strip().lower()
    try:
        if "^" in t:
            base, exp = t.split("^")
            value = int(base) ** int(exp)
        elif "e" in t:
            mant, exp = t.split("e")
            value = int(mant) * 10 ** int(exp)
        else:
            value = int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _c_value(text: str) -> Fraction:
    try:
        c = parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not 0 < c <= 1:
        raise argparse.ArgumentTypeError(f"c must lie in (0, 1], got {text}")
    return c


def _alpha_value(text: str) -> float:
    try:
        a = float(parse_rational(text)) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not a > 0:
        raise argparse.ArgumentTypeError("alpha must be positive")
    return a


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--c", type=_c_value, default=Fraction(2, 3),
                        help="coefficient c in a_n = c^Omega(n), written l/m (default 2/3)")
    common.add_argument("--x-max", type=_count, default=10 ** 7)
    common.add_argument("--prime-cutoff", type=_count, default=DEFAULT_CUTOFF)
    common.add_argument("--per-decade", type=_count, default=DEFAULT_PER_DECADE)
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--resume", default=None,
                        help="sieve state file; resumed from if present, updated after each segment")
    common.add_argument("--segment-size", type=_count, default=DEFAULT_SEGMENT)

    parser = _Parser(prog="tauberian", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("expand", parents=[common], help="exact Euler-factor algebra")
    sub.add_parser("sieve", parents=[common], help="checkpointed partial sums")
    sub.add_parser("constants", parents=[common], help="leading constant A")
    p = sub.add_parser("verify", parents=[common], help="compare S(X) with the prediction")
    p.add_argument("--series", default=None, help="existing X,S CSV to use instead of sieving")
    p = sub.add_parser("kernels", parents=[common], help="Laplace identity and kernel limit checks")
    p.add_argument("--alpha", type=_alpha_value, default=2 / 3)
    return parser


@contextlib.contextmanager
def _output(path: str):
    if path == "-":
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(path, "w", newline="") as fh:
        yield fh


def _emit(path: str, text: str) -> None:
    # build everything first so failures leave no partial file
    with _output(path) as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_expand(args) -> None:
    c = args.c
    l, m, g = euler_regularize(c)
    local = Poly([1, -c]) ** m
    reduced = reduced_factor(c)
    if args.format == "csv":
        lines = ["name,k,coefficient"]
        for name, coeffs in (("local_factor_power", local.to_json()),
                             ("reduced_factor", reduced.to_json()),
                             ("regularized_series", g.to_json())):
            lines += [f"{name},{k},{q}" for k, q in enumerate(coeffs)]
        _emit(args.out, "\n".join(lines) + "\n")
        return
    _emit(args.out, _json({
        "c": format_rational(c),
        "l": l,
        "m": m,
        "local_factor_power": local.to_json(),
        "reduced_factor": reduced.to_json(),
        "quintic_identity": quintic_identity_check(),
        "order": g.order,
        "regularized_series": g.to_json(),
    }))


def _resume_state(path: Optional[str]) -> Optional[SieveState]:
    if path is None or not os.path.exists(path):
        return None
    try:
        return SieveState.read(path)
    except ValueError as exc:
        raise ResumeError(f"{path}: {exc}") from None


def _read_prior_rows(out: str, next_n: int, c: Fraction) -> list:
    try:
        text = Path(out).read_text()
    except FileNotFoundError:
        raise ResumeError(f"cannot resume: partial output {out} is missing") from None
    try:
        series = PartialSumSeries.from_csv(text, c)
    except ValueError as exc:
        raise ResumeError(f"cannot resume from {out}: {exc}") from None
    return [r for r in series.rows if r[0] < next_n]


def run_sieve(args) -> None:
    config = SieveConfig(args.x_max, args.c, checkpoint_grid(args.x_max, args.per_decade),
                         args.segment_size)
    if args.format == "json":
        raise UsageError("sieve writes CSV only")
    state = _resume_state(args.resume)
    if state is not None and args.out == "-":
        raise UsageError("--resume needs --out pointing at the partial CSV")
    if state is not None and state.next_n > args.x_max + 1:
        raise ContractError(f"resume point {state.next_n} lies beyond x_max + 1 = {args.x_max + 1}")
    prior = _read_prior_rows(args.out, state.next_n, args.c) if state is not None else []

    with _output(args.out) as fh:
        write_csv_rows(fh, prior, header=True)
        fh.flush()

        def on_segment(rows, _state):
            write_csv_rows(fh, rows)
            fh.flush()

        partial_sums(config, resume=state, state_path=args.resume, on_segment=on_segment)


def cmd_constants(args) -> None:
    pole = leading_constant(args.c, args.prime_cutoff)
    route = leading_constant_via_zeta2(args.c, args.prime_cutoff)
    record = {
        "c": format_rational(args.c),
        "l": pole.l,
        "m": pole.m,
        "alpha": pole.alpha,
        "A": pole.A,
        "F1": route.F1.value,
        "zeta2": zeta2(),
        "cutoff": args.prime_cutoff,
        "tail_bound": pole.tail_bound,
    }
    if args.format == "csv":
        _emit(args.out, "key,value\n" + "".join(f"{k},{v}\n" for k, v in record.items()))
    else:
        _emit(args.out, _json(record))


def cmd_verify(args) -> None:
    if args.series is not None:
        series = PartialSumSeries.from_csv(Path(args.series).read_text(), args.c)
    else:
        config = SieveConfig(args.x_max, args.c, checkpoint_grid(args.x_max, args.per_decade),
                             args.segment_size)
        series = partial_sums(config)
    report = compare(series, leading_constant(args.c, args.prime_cutoff))
    if args.format == "json":
        body = report.trailer()
        body["rows"] = [{"X": x, "S": s, "prediction": p, "ratio": r}
                        for x, s, p, r in report.rows]
        _emit(args.out, _json(body))
    else:
        _emit(args.out, report.to_csv() + "# " + json.dumps(report.trailer()) + "\n")


def cmd_kernels(args) -> None:
    kernel_rows = kernel_limit_check(args.alpha)
    laplace_rows = []
    for alpha in LAPLACE_ALPHAS:
        a = float(alpha)
        for s in LAPLACE_S:
            laplace_rows.append((alpha, s, laplace_identity_check(a, s, KernelCheckSpec(alpha=a))))
    if args.format == "json":
        _emit(args.out, _json({
            "alpha": args.alpha,
            "kernel_limit": [{"v": v, "value": val} for v, val in kernel_rows],
            "laplace_identity": [{"alpha": format_rational(a), "s": s, "residual": r}
                                 for a, s, r in laplace_rows],
        }))
        return
    buf = io.StringIO()
    buf.write("v,value\n")
    for v, val in kernel_rows:
        buf.write(f"{v!r},{val!r}\n")
    buf.write("\nalpha,s,residual\n")
    for a, s, r in laplace_rows:
        buf.write(f"{format_rational(a)},{s!r},{r!r}\n")
    _emit(args.out, buf.getvalue())


COMMANDS = {
    "expand": cmd_expand,
    "sieve": run_sieve,
    "constants": cmd_constants,
    "verify": cmd_verify,
    "kernels": cmd_kernels,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    def fail(code: int, msg: str) -> int:
        print(f"tauberian: error: {msg}", file=sys.stderr)
        return code

    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        return fail(EXIT_USAGE, str(exc))
    except ResumeError as exc:
        return fail(EXIT_IO, str(exc))
    except ContractError as exc:
        return fail(EXIT_CONTRACT, str(exc))
    except OSError as exc:
        return fail(EXIT_IO, f"{exc.filename or ''}: {exc.strerror or exc}")
    except (ValueError, ZeroDivisionError) as exc:
        return fail(EXIT_USAGE, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
