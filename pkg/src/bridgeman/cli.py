"""Command-line front end.

Every subcommand validates all of its numeric arguments before computing and
writes deterministic text: 12 significant digits, ``.`` as decimal separator.

Exit codes: 0 success, 2 invalid input, 3 quadrature failure, 4 I/O failure,
5 a convergence table that is not monotone or overshoots its limit.
"""

from __future__ import annotations

import argparse
import ast
import io
import json
import math
import operator
import sys
from dataclasses import dataclass

import numpy as np

from . import dilog, orthospec, quadvol
from .errors import BridgemanError, DomainError, ParameterError, ToleranceError
from .orthospec import fmt

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_QUADRATURE = 3
EXIT_IO = 4
EXIT_MONOTONE = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    boundary: tuple[float, float, float] | None = None
    max_word_length: int = 8
    tol: float = 1e-6
    n_samples: int = 1_000_000
    seed: int = 0
    fmt: str = "csv"
    out: str | None = None
    threads: int | None = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        """Validate every numeric option up front and freeze the run description."""
        _check_common(args)
        boundary = _check_boundary(args.b) if hasattr(args, "b") else None
        return cls(
            subcommand=args.command,
            boundary=boundary,
            max_word_length=getattr(args, "max_word_length", 8),
            tol=getattr(args, "tol", 1e-6),
            n_samples=getattr(args, "samples", 1_000_000),
            seed=getattr(args, "seed", 0),
            fmt=getattr(args, "format", "csv"),
            out=getattr(args, "out", None),
            threads=getattr(args, "threads", None),
        )


# ---------------------------------------------------------------------------
# argument parsing

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def parse_real(text: str) -> float:
    """Evaluate a small arithmetic expression over numbers and ``pi``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ValueError

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise CliError(EXIT_INVALID, f"cannot parse number {text!r}") from None
    if not math.isfinite(value):
        raise CliError(EXIT_INVALID, f"{text!r} is not finite")
    return value


def parse_grid(text: str) -> list[float]:
    """Comma separated values; ``start:stop:count`` expands to an inclusive even grid."""
    out: list[float] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise CliError(EXIT_INVALID, f"empty entry in grid {text!r}")
        parts = item.split(":")
        if len(parts) == 1:
            out.append(parse_real(item))
        elif len(parts) == 3:
            lo, hi = parse_real(parts[0]), parse_real(parts[1])
            try:
                count = int(parts[2])
            except ValueError:
                raise CliError(EXIT_INVALID, f"grid count {parts[2]!r} is not an integer") from None
            if count < 1:
                raise CliError(EXIT_INVALID, "grid count must be positive")
            out.extend(float(v) for v in np.linspace(lo, hi, count))
        else:
            raise CliError(EXIT_INVALID, f"bad grid entry {item!r}; use a value or start:stop:count")
    return out


def parse_bounds(text: str) -> list[int]:
    try:
        bounds = [int(t) for t in text.split(",")]
    except ValueError:
        raise CliError(EXIT_INVALID, f"bounds must be comma separated integers, got {text!r}") from None
    for n in bounds:
        _check_word_length(n)
    return bounds


def _check_word_length(n: int) -> int:
    if not 0 <= n <= orthospec.kernels.MAX_WORD_LENGTH:
        raise CliError(EXIT_INVALID, f"word length bound {n} outside 0..{orthospec.kernels.MAX_WORD_LENGTH}")
    return n


def _check_boundary(values) -> tuple[float, float, float]:
    b = tuple(parse_real(v) for v in values)
    if not all(x > 0.0 for x in b):
        raise CliError(EXIT_INVALID, f"boundary lengths must be positive, got {' '.join(values)}")
    return b


def _check_common(args) -> None:
    if hasattr(args, "tol") and not args.tol > 0.0:
        raise CliError(EXIT_INVALID, "--tol must be positive")
    if hasattr(args, "samples") and args.samples < quadvol.MIN_SAMPLES:
        raise CliError(EXIT_INVALID, f"--samples must be at least {quadvol.MIN_SAMPLES}")
    if hasattr(args, "seed") and args.seed < 0:
        raise CliError(EXIT_INVALID, "--seed must be nonnegative")
    if getattr(args, "threads", None) is not None and args.threads < 1:
        raise CliError(EXIT_INVALID, "--threads must be positive")


# ---------------------------------------------------------------------------
# output


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc.strerror or exc}") from None


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _row(values) -> str:
    return ",".join(v if isinstance(v, str) else fmt(v) for v in values) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_dilog(args) -> int:
    x = parse_real(args.x)
    try:
        li = dilog.li2(x)
        lv = dilog.rogers_l(x)
    except DomainError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from None
    deriv = fmt(dilog.rogers_l_deriv(x)) if 0.0 < x < 1.0 else ""
    _emit(_row((x, li, lv, deriv)), None)
    return EXIT_OK


def cmd_verify_volume(args) -> int:
    grid = parse_grid(args.alpha_grid)
    for a in grid:
        if not 0.0 < a < math.pi:
            raise CliError(EXIT_INVALID, f"grid point {a!r} outside (0, pi)")
    buf = io.StringIO()
    buf.write(",".join(quadvol.REPORT_COLUMNS) + "\n")
    worst = 0.0
    try:
        for a in grid:
            rep = quadvol.volume_report(a, args.tol, args.samples, args.seed, args.threads)
            buf.write(_row(rep.row()))
            worst = max(worst, rep.residual)
    except ToleranceError as exc:
        raise CliError(EXIT_QUADRATURE, str(exc)) from None
    buf.write(f"# max_abs_residual,{fmt(worst)}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK if worst < args.tol else 1


def _surface(args):
    b = _check_boundary(args.b)
    try:
        return orthospec.build_pants(*b)
    except BridgemanError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from None


def cmd_spectrum(args) -> int:
    n = _check_word_length(args.max_word_length)
    surface = _surface(args)
    s = orthospec.spectrum(surface, n, args.threads)
    if args.format == "json":
        text = json.dumps(orthospec.spectrum_json(s), separators=(",", ":")) + "\n"
    else:
        text = orthospec.spectrum_csv(s)
    _emit(text, args.out)
    _note(f"records={len(s)} completeness_length={fmt(s.completeness_length)}")
    return EXIT_OK


def _convergence(args, check) -> int:
    bounds = parse_bounds(args.bounds)
    surface = _surface(args)
    buf = io.StringIO()
    buf.write("bound,count,partial_sum,rhs,residual\n")
    prev = None
    ok = True
    for n in bounds:
        s = orthospec.spectrum(surface, n, args.threads)
        partial, rhs, residual = check(s)
        buf.write(_row((str(n), str(len(s)), partial, rhs, residual)))
        if not residual > -1e-9:
            ok = False
        if prev is not None and not partial > prev:
            ok = False
        prev = partial
    _emit(buf.getvalue(), args.out)
    if not ok:
        _note("partial sums are not strictly increasing or exceed the limit")
        return EXIT_MONOTONE
    return EXIT_OK


def cmd_verify_bridgeman(args) -> int:
    return _convergence(args, orthospec.bridgeman_check)


def cmd_verify_basmajian(args) -> int:
    return _convergence(args, orthospec.basmajian_check)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bridgeman", description="Numerical checks of the orthospectrum dilogarithm identity.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dilog", help="print x,li2,L,Lprime")
    d.add_argument("x")
    d.set_defaults(func=cmd_dilog)

    v = sub.add_parser("verify-volume", help="crossing-volume report over an angle grid")
    v.add_argument("--alpha-grid", default="pi/2", help="values or start:stop:count, comma separated; pi allowed")
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--samples", type=int, default=1_000_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threads", type=int, default=None)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify_volume)

    s = sub.add_parser("spectrum", help="enumerate the orthospectrum of a pair of pants")
    s.add_argument("b", nargs=3, metavar="b")
    s.add_argument("--max-word-length", type=int, default=8)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--threads", type=int, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_spectrum)

    for name, func, what in (
        ("verify-bridgeman", cmd_verify_bridgeman, "dilogarithm sum convergence table"),
        ("verify-basmajian", cmd_verify_basmajian, "log coth sum convergence table"),
    ):
        c = sub.add_parser(name, help=what)
        c.add_argument("b", nargs=3, metavar="b")
        c.add_argument("--bounds", default="4,8,12")
        c.add_argument("--threads", type=int, default=None)
        c.add_argument("--out", default=None)
        c.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        RunConfig.from_args(args)
        return args.func(args)
    except CliError as exc:
        _note(f"error: {exc}")
        return exc.code
    except (DomainError, ParameterError) as exc:
        _note(f"error: {exc}")
        return EXIT_INVALID
    except ToleranceError as exc:
        _note(f"error: {exc}")
        return EXIT_QUADRATURE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
