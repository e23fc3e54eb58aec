"""Reproduction checks behind ``confeuler reproduce``.

Each check returns a :class:`CheckResult`; the rendered report contains no
timings so that repeated runs are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from confeuler.analysis import (
    ORDER_WINDOW,
    convergence_study,
    discrete_cfd,
    implied_alpha,
)
from confeuler.ivp import make_grid, sample
from confeuler.oracle import catalog, certify, make_problem, reference_solve
from confeuler.schemes import SchemeKind, solve, tpow


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    details: tuple[str, ...]

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"[{status}] {self.number}. {self.title}"]
        lines.extend(f"    {d}" for d in self.details)
        return "\n".join(lines)


def _g(x: float) -> str:
    return f"{x:.6g}"


def check_scheme_equivalence() -> CheckResult:
    problem = make_problem("linear", alpha=1.0, lam=1.0, y0=1.0).problem
    grid = make_grid(0.0, 1.0, 64)
    trajs = {s: solve(problem, grid, s).values for s in SchemeKind}

    details = []
    passed = True
    schemes = list(SchemeKind)
    for i, s1 in enumerate(schemes):
        for s2 in schemes[i + 1:]:
            diff = max(abs(u - v) for u, v in zip(trajs[s1], trajs[s2]))
            ok = diff < 1.0e-12
            passed &= ok
            details.append(f"{s1.value} vs {s2.value}: max diff {_g(diff)} (< 1e-12: {ok})")

    return CheckResult(1, "scheme equivalence at alpha = 1", passed, tuple(details))


def check_modified_convergence() -> CheckResult:
    lo, hi = ORDER_WINDOW
    details = []
    passed = True
    for name in ("linear", "power"):
        for alpha in (0.3, 0.5, 0.8, 1.0):
            report = convergence_study(
                make_problem(name, alpha=alpha),
                SchemeKind.ModifiedConformableEuler,
                n0=32,
                levels=5,
            )
            errors = report.final_errors
            last = report.orders[-2:]
            in_window = all(p is not None and lo <= p <= hi for p in last)
            decreasing = all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
            ok = in_window and decreasing
            passed &= ok
            orders = ", ".join(_g(p) for p in last)
            details.append(
                f"{name} alpha={alpha}: last orders [{orders}], "
                f"errors decreasing: {decreasing} -> {'ok' if ok else 'FAILED'}"
            )

    return CheckResult(2, "modified method converges at first order", passed, tuple(details))


def check_original_invalidity() -> CheckResult:
    details = []
    passed = True
    for alpha in (0.3, 0.5, 0.8):
        report = convergence_study(
            make_problem("linear", alpha=alpha),
            SchemeKind.ConformableEuler,
            n0=32,
            levels=5,
        )
        errors = report.final_errors
        non_decreasing = all(e2 >= e1 for e1, e2 in zip(errors, errors[1:]))
        ok = non_decreasing or report.verdict == "diverged"
        passed &= ok
        details.append(
            f"linear alpha={alpha}: final errors "
            f"{', '.join(_g(e) for e in errors)} -> {report.verdict}"
        )

    problem = make_problem("linear", alpha=0.5).problem
    y_end = solve(problem, make_grid(0.0, 1.0, 100), SchemeKind.ConformableEuler).values[-1]
    ok = y_end > 1.0e7
    passed &= ok
    details.append(
        f"alpha=0.5, N=100: y(1) = {_g(y_end)} (> 1e7: {ok}), exact e^2 = {_g(math.exp(2.0))}"
    )

    return CheckResult(3, "original method is invalid for alpha < 1", passed, tuple(details))


def check_inconsistency_ratio() -> CheckResult:
    details = []
    passed = True
    for h, n in ((1.0e-1, 11), (1.0e-2, 101), (1.0e-3, 1001)):
        value = implied_alpha(0.5, 1.0, 1, h)
        ok = abs(value - math.sqrt(n)) <= 1.0e-4
        passed &= ok
        details.append(f"alpha=0.5, t0=1, k=1, h={h:g}: {value:.6f} vs sqrt({n})")

    hs = [10.0**-j for j in range(1, 9)]
    ones = all(implied_alpha(1.0, t0, k, h) == 1.0
               for t0 in (0.0, 0.5, 1.0) for k in (1, 2, 7) for h in hs)
    passed &= ones
    details.append(f"alpha=1 gives exactly 1 everywhere: {ones}")

    flat = True
    for k in (1, 4, 9, 25):
        values = [implied_alpha(0.5, 0.0, k, h) for h in hs]
        ref = values[0]
        flat &= all(abs(v - ref) <= 4 * math.ulp(ref) for v in values)
    passed &= flat
    details.append(f"t0=0 values independent of h within 4 ulps: {flat}")

    return CheckResult(4, "inconsistency ratio of the original method", passed, tuple(details))


def check_discrete_cfd() -> CheckResult:
    alpha = 0.5
    errors = []
    for h in (0.02, 0.01, 0.005):
        n = round(1.0 / h)
        traj = sample(make_grid(0.5, 1.5, n), lambda t: t * t)
        d = discrete_cfd(traj, alpha)
        errors.append(max(abs(dk - 2.0 * tpow(t, 1.5)) for dk, t in zip(d, traj.times)))

    details = [f"max errors {', '.join(_g(e) for e in errors)}"]
    passed = True
    for e1, e2 in zip(errors, errors[1:]):
        ratio = e2 / e1
        ok = 0.5 * 0.75 <= ratio <= 0.5 * 1.25
        passed &= ok
        details.append(f"ratio {ratio:.4f} within 0.5 +- 25%: {ok}")

    return CheckResult(5, "discrete conformable derivative is first order", passed, tuple(details))


def check_oracle() -> CheckResult:
    details = []
    passed = True
    for named in catalog():
        if not named.has_exact:
            continue

        residual = certify(named, n_points=10, eps=1.0e-7)
        problem = named.problem
        ref = reference_solve(problem, n_output=10, refinement=1024)
        exact = problem.exact_fn
        rel = max(
            abs(y - exact(t)) / abs(exact(t)) if exact(t) != 0.0 else abs(y)
            for t, y in zip(ref.times, ref.values)
        )
        ok = residual < 1.0e-5 and rel <= 1.0e-7
        passed &= ok
        details.append(
            f"{named.name}: max residual {_g(residual)}, reference rel err {_g(rel)}"
        )

    return CheckResult(6, "oracle self-certification", passed, tuple(details))


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_scheme_equivalence,
    check_modified_convergence,
    check_original_invalidity,
    check_inconsistency_ratio,
    check_discrete_cfd,
    check_oracle,
)


def run_checks() -> list[CheckResult]:
    return [check() for check in CHECKS]


def render(results: list[CheckResult]) -> str:
    return "\n".join(r.render() for r in results)


def reproduce() -> tuple[str, bool]:
    """Run every check, then re-run them to confirm identical output."""
    results = run_checks()
    first = render(results)
    same = render(run_checks()) == first
    results.append(
        CheckResult(7, "determinism", same, (f"second run byte-identical: {same}",))
    )

    n_passed = sum(r.passed for r in results)
    summary = f"{n_passed}/{len(results)} checks passed"
    return f"{render(results)}\n{summary}\n", n_passed == len(results)
