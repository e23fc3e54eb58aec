"""Command-line front end; every subcommand writes CSV (or plain text) output.

Exit status is 0 on success, including runs that diverge, and 2 on any
configuration or expression error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import sys
from typing import Iterator, Optional, Sequence, TextIO

from confeuler.acceptance import reproduce
from confeuler.analysis import convergence_study, discrete_cfd, ratio_sweep
from confeuler.expr import ParseError, evaluate, parse
from confeuler.ivp import make_grid, sample
from confeuler.oracle import (
    DEFAULT_EPS,
    PROBLEM_PARAMETERS,
    catalog,
    certify,
    cfd_limit_estimate,
    describe,
    make_problem,
)
from confeuler.schemes import SchemeKind, solve

EXIT_OK = 0
EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


def fmt(x: float | int) -> str:
    """Round-trip exact text for *x* (17 significant digits for floats)."""
    if isinstance(x, int):
        return str(x)
    return format(x, ".17g")


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


# {{{ problem selection


def _add_problem_args(parser: argparse.ArgumentParser, *, n_flag: Optional[str]) -> None:
    group = parser.add_argument_group("problem")
    group.add_argument("--problem", choices=list(PROBLEM_PARAMETERS),
                       help="catalog problem (default: linear, or custom with --rhs)")
    group.add_argument("--rhs", help="right-hand side f(t, y) of a custom problem")
    group.add_argument("--exact", help="exact solution y(t) of a custom problem")
    group.add_argument("--alpha", type=float, default=0.5, help="fractional order in (0, 1]")
    group.add_argument("--a", type=float, default=0.0, help="start of the interval")
    group.add_argument("--b", type=float, default=1.0, help="end of the interval")
    group.add_argument("--y0", type=float, help="initial value (catalog default if omitted)")
    group.add_argument("--lambda", dest="lam", type=float, help="linear: growth rate")
    group.add_argument("--p", type=float, help="power: exponent")
    group.add_argument("--r", type=float, help="logistic: rate")
    group.add_argument("--kcap", type=float, help="logistic: carrying capacity")

    if n_flag is None:
        return
    if n_flag == "n":
        parser.add_argument("--n", type=int, default=100, help="number of steps")
    else:
        parser.add_argument("--n0", type=int, default=32, help="coarsest number of steps")
        parser.add_argument("--levels", type=int, default=5, help="number of refinement levels")


def _problem_from_args(args: argparse.Namespace):
    name = args.problem or ("custom" if args.rhs is not None else "linear")
    params = {"lambda": args.lam, "p": args.p, "r": args.r, "kcap": args.kcap}
    y0 = args.y0
    try:
        if name == "custom" and args.exact is not None and y0 is None:
            y0 = evaluate(parse(args.exact), args.a, 0.0)
        return make_problem(
            name,
            alpha=args.alpha,
            a=args.a,
            b=args.b,
            y0=y0,
            rhs=args.rhs,
            exact=args.exact,
            **params,
        )
    except ParseError as exc:
        raise ConfigError(exc.pretty()) from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _scheme(name: str) -> SchemeKind:
    return SchemeKind.from_name(name)


# }}}


# {{{ commands


def cmd_solve(args: argparse.Namespace, out: TextIO) -> None:
    named = _problem_from_args(args)
    problem = named.problem
    try:
        grid = make_grid(problem.t_start, problem.t_end, args.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    traj = solve(problem, grid, args.scheme)

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["k", "t", "y"])
    for k, (t, y) in enumerate(zip(traj.times, traj.values)):
        writer.writerow([k, fmt(t), fmt(y)])
    if traj.diverged:
        out.write(f"# diverged at k={traj.diverged_at}\n")


def cmd_converge(args: argparse.Namespace, out: TextIO) -> None:
    named = _problem_from_args(args)
    if args.levels < 3:
        raise ConfigError(f"--levels must be at least 3, got {args.levels}")
    if args.n0 < 1:
        raise ConfigError(f"--n0 must be positive, got {args.n0}")

    schemes = args.scheme or [SchemeKind.ModifiedConformableEuler]
    try:
        reports = [convergence_study(named, s, args.n0, args.levels) for s in schemes]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["scheme", "problem", "alpha", "N", "h",
                     "final_abs_err", "max_abs_err", "order_est"])
    for report in reports:
        orders = [None, *report.orders]
        for row, order in zip(report.rows, orders):
            writer.writerow([
                report.scheme.value,
                report.problem,
                fmt(report.alpha),
                row.n,
                fmt(row.h),
                fmt(row.final_abs_err),
                fmt(row.max_abs_err),
                "" if order is None else fmt(order),
            ])
        out.write(f"# verdict: {report.verdict}\n")


def cmd_invalidity(args: argparse.Namespace, out: TextIO) -> None:
    try:
        diag = ratio_sweep(args.alpha, args.t0, args.k, args.h_list)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["alpha", "t0", "k", "h", "implied_alpha"])
    for h, value in diag.entries:
        writer.writerow([fmt(diag.alpha), fmt(diag.t0), diag.k, fmt(h), fmt(value)])
    out.write(f"# verdict: {diag.verdict}\n")


def cmd_cfd_check(args: argparse.Namespace, out: TextIO) -> None:
    if args.problem is None and args.exact is None:
        raise ConfigError("cfd-check needs --exact (with --rhs) or a catalog --problem")
    if args.problem in (None, "custom") and args.exact is None:
        raise ConfigError("custom cfd-check needs --exact")
    if args.exact is not None and args.rhs is None:
        raise ConfigError("--exact needs --rhs to supply the target D^a y = f(t, y)")
    if args.problem is None:
        args.problem = "custom"

    named = _problem_from_args(args)
    problem = named.problem
    alpha = problem.alpha
    y = problem.exact_fn
    f = problem.f
    t = args.t0
    if not t > 0.0:
        raise ConfigError(f"--t0 must be positive, got {t!r}")
    if any(h <= 0.0 for h in args.h_list):
        raise ConfigError("--h-list entries must be positive")

    target = f(t, y(t))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "eps_or_h", "estimate", "target", "abs_err"])

    out.write("# eps-limit quotient\n")
    for eps in args.eps_list:
        estimate = cfd_limit_estimate(y, t, alpha, eps)
        writer.writerow([fmt(t), fmt(eps), fmt(estimate), fmt(target),
                         fmt(abs(estimate - target))])

    out.write("# discrete representation\n")
    for h in args.h_list:
        (estimate,) = discrete_cfd(sample(make_grid(t, t + h, 1), y), alpha)
        writer.writerow([fmt(t), fmt(h), fmt(estimate), fmt(target),
                         fmt(abs(estimate - target))])


def cmd_list_problems(args: argparse.Namespace, out: TextIO) -> None:
    for named in catalog():
        params = ", ".join(f"{k}={fmt(v)}" for k, v in named.parameters.items()) or "-"
        if named.has_exact:
            residual = certify(named)
            exact = f"exact: yes (max cfd residual {residual:.2e})"
        else:
            exact = "exact: no"
        out.write(f"{named.name}\n")
        out.write(f"    {describe(named.name)}\n")
        out.write(f"    parameters: {params}; y0={fmt(named.problem.y0)}; {exact}\n")


def cmd_reproduce(args: argparse.Namespace, out: TextIO) -> None:
    text, _ = reproduce()
    out.write(text)


# }}}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confeuler",
        description="Euler-type solvers for conformable fractional initial value problems.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add(name: str, func, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.set_defaults(func=func)
        return p

    p = add("solve", cmd_solve, "integrate one problem and print the trajectory")
    _add_problem_args(p, n_flag="n")
    p.add_argument("--scheme", type=_scheme, default=SchemeKind.ModifiedConformableEuler,
                   help="conformable-euler, modified or classical (default: modified)")

    p = add("converge", cmd_converge, "refinement study with empirical orders")
    _add_problem_args(p, n_flag="n0")
    p.add_argument("--scheme", type=_scheme, action="append",
                   help="scheme to study; repeat for several (default: modified)")

    p = add("invalidity", cmd_invalidity,
            "alpha implied by the original scheme as h shrinks")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--h-list", type=_float_list, default=[1.0e-1, 1.0e-2, 1.0e-3])

    p = add("cfd-check", cmd_cfd_check,
            "compare the eps-limit and discrete derivatives with the right-hand side")
    _add_problem_args(p, n_flag=None)
    p.add_argument("--t0", type=float, default=1.0, help="point at which to check")
    p.add_argument("--h-list", type=_float_list, default=[1.0e-2],
                   help="step sizes of the discrete representation")
    p.add_argument("--eps-list", type=_float_list, default=[DEFAULT_EPS],
                   help="eps values of the limit quotient")

    add("list-problems", cmd_list_problems, "list catalog problems")
    add("reproduce", cmd_reproduce, "run every reproduction check")

    return parser


@contextlib.contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG

    if args.command is None:
        parser.print_help()
        return EXIT_OK

    # build the whole output first so a config error never leaves a partial file
    buf = io.StringIO()
    try:
        args.func(args, buf)
    except ConfigError as exc:
        print(f"confeuler {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    with _output(args.out) as out:
        out.write(buf.getvalue())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
