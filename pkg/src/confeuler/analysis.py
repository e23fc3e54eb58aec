"""Consistency diagnostics and refinement studies.

The original conformable Euler step ``y_{k+1} - y_k = h^a / a f(t_k, y_k)``
agrees with :math:`D^\\alpha y = t^{1-\\alpha} y'` only if

.. math::

    \\alpha = \\left(\\frac{t_0}{h} + k\\right)^{1 - \\alpha}

(or :math:`\\alpha = k^{1-\\alpha}` when :math:`t_0 = 0`). The right-hand side
is what :func:`implied_alpha` returns; it depends on ``k`` and, for
``t_0 != 0``, grows without bound as ``h -> 0`` unless ``a = 1``.

:func:`ratio_sweep` keeps ``k`` fixed while ``h`` shrinks. On a fixed
interval one could instead follow a fixed time ``t = t0 + k h`` with
``k = (t - t0) / h``; that reading gives ``(t / h)^(1 - a)`` and is not
implemented here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from confeuler.ivp import (
    Alpha,
    IvpProblem,
    Solution,
    Trajectory,
    as_alpha,
    make_grid,
    solution_callable,
)
from confeuler.oracle import NamedProblem, reference_solve
from confeuler.schemes import SchemeKind, solve, tpow

__all__ = [
    "ORDER_WINDOW",
    "RatioDiagnostic",
    "ConvergenceRow",
    "ConvergenceReport",
    "implied_alpha",
    "ratio_sweep",
    "discrete_cfd",
    "error_norms",
    "convergence_study",
]

#: empirical orders accepted as first-order convergence
ORDER_WINDOW = (0.75, 1.25)


# {{{ inconsistency ratio


def implied_alpha(alpha: Alpha | float, t0: float, k: int, h: float) -> float:
    """Value the fractional order would need for the original scheme to be
    consistent at node ``k``."""
    if not h > 0.0:
        raise ValueError(f"h must be positive, got {h!r}")
    if t0 < 0.0:
        raise ValueError(f"t0 must be nonnegative, got {t0!r}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k!r}")

    exponent = 1.0 - as_alpha(alpha).value
    if t0 == 0.0:
        return math.pow(k, exponent)
    return math.pow(t0 / h + k, exponent)


@dataclass(frozen=True)
class RatioDiagnostic:
    alpha: float
    t0: float
    k: int
    #: pairs ``(h, implied_alpha)`` in the order the step sizes were given
    entries: tuple[tuple[float, float], ...]
    #: ``"unbounded growth"``, ``"constant"``, ``"increasing"`` or ``"bounded"``
    verdict: str


def _sweep_verdict(entries: Sequence[tuple[float, float]]) -> str:
    values = [v for _, v in entries]
    if all(v == values[0] for v in values):
        return "constant"

    pairs = list(zip(entries, entries[1:]))
    if pairs and all(v2 > v1 for (_, v1), (_, v2) in pairs):
        # at least a factor of two per decade of h
        per_decade = [
            math.log10(v2 / v1) / math.log10(h1 / h2)
            for (h1, v1), (h2, v2) in pairs
        ]
        if all(g >= math.log10(2.0) for g in per_decade):
            return "unbounded growth"
        return "increasing"

    return "bounded"


def ratio_sweep(
    alpha: Alpha | float, t0: float, k: int, h_values: Sequence[float]
) -> RatioDiagnostic:
    h_values = [float(h) for h in h_values]
    if not h_values:
        raise ValueError("need at least one step size")
    if any(h <= 0.0 for h in h_values):
        raise ValueError("step sizes must be positive")
    if any(h2 >= h1 for h1, h2 in zip(h_values, h_values[1:])):
        raise ValueError("step sizes must be strictly decreasing")

    alpha = as_alpha(alpha)
    entries = tuple((h, implied_alpha(alpha, t0, k, h)) for h in h_values)
    return RatioDiagnostic(alpha.value, float(t0), int(k), entries, _sweep_verdict(entries))


# }}}


# {{{ discrete derivative


def discrete_cfd(traj: Trajectory, alpha: Alpha | float) -> list[float]:
    """Forward quotients ``a (y_{k+1} - y_k) / (t_{k+1}^a - t_k^a)``."""
    if len(traj.values) < 2:
        raise ValueError("need at least two samples")

    a = as_alpha(alpha).value
    ts, ys = traj.times, traj.values
    return [
        a * (ys[k + 1] - ys[k]) / (tpow(ts[k + 1], a) - tpow(ts[k], a))
        for k in range(len(ys) - 1)
    ]


# }}}


# {{{ refinement studies


def error_norms(traj: Trajectory, exact: Solution) -> tuple[float, float]:
    """``(|y_N - y(t_N)|, max_k |y_k - y(t_k)|)``; infinite for divergent runs."""
    if traj.diverged:
        return math.inf, math.inf

    exact = solution_callable(exact)
    errors = [abs(y - exact(t)) for t, y in zip(traj.times, traj.values)]
    return errors[-1], max(errors)


class ConvergenceRow(NamedTuple):
    n: int
    h: float
    final_abs_err: float
    max_abs_err: float


@dataclass(frozen=True)
class ConvergenceReport:
    scheme: SchemeKind
    problem: str
    alpha: float
    rows: tuple[ConvergenceRow, ...]
    #: ``log2(err(h) / err(h/2))`` of the final error; ``None`` when undefined
    orders: tuple[Optional[float], ...]
    verdict: str

    @property
    def final_errors(self) -> list[float]:
        return [row.final_abs_err for row in self.rows]


def _order(coarse: float, fine: float) -> Optional[float]:
    if not (math.isfinite(coarse) and math.isfinite(fine)) or coarse <= 0.0 or fine <= 0.0:
        return None
    return math.log2(coarse / fine)


def _verdict(rows: Sequence[ConvergenceRow], orders: Sequence[Optional[float]]) -> str:
    errors = [row.final_abs_err for row in rows]
    if any(math.isinf(e) for e in errors):
        return "diverged"

    last = errors[-3:]
    if not all(e2 < e1 for e1, e2 in zip(last, last[1:])):
        return "non-converging"

    lo, hi = ORDER_WINDOW
    if all(p is not None and lo <= p <= hi for p in orders[-2:]):
        return "converging"

    # errors decrease, but slower (or faster) than first order
    return "reduced-order"


def convergence_study(
    problem: IvpProblem | NamedProblem,
    scheme: SchemeKind,
    n0: int,
    levels: int,
    *,
    reference_refinement: int = 1024,
) -> ConvergenceReport:
    """Solve on ``N = n0 * 2^j`` steps for ``j = 0, ..., levels - 1``.

    Errors are measured against the exact solution when there is one and
    against :func:`~confeuler.oracle.reference_solve` on the finest grid
    otherwise.
    """
    if levels < 3:
        raise ValueError(f"need at least 3 refinement levels, got {levels!r}")
    if n0 < 1:
        raise ValueError(f"n0 must be positive, got {n0!r}")

    if isinstance(problem, NamedProblem):
        name, problem = problem.name, problem.problem
    else:
        name = "custom"

    n_finest = n0 * 2 ** (levels - 1)
    reference = None
    if problem.exact is None:
        reference = reference_solve(problem, n_finest, reference_refinement)
        if reference.diverged:
            raise ValueError("reference solution diverged; no surrogate truth available")

    rows = []
    for j in range(levels):
        n = n0 * 2**j
        grid = make_grid(problem.t_start, problem.t_end, n)
        traj = solve(problem, grid, scheme)

        if reference is None:
            final, worst = error_norms(traj, problem.exact)
        elif traj.diverged:
            final, worst = math.inf, math.inf
        else:
            stride = n_finest // n
            errors = [abs(y - reference.values[stride * k]) for k, y in enumerate(traj.values)]
            final, worst = errors[-1], max(errors)

        rows.append(ConvergenceRow(n, grid.h, final, worst))

    orders = tuple(
        _order(c.final_abs_err, f.final_abs_err) for c, f in zip(rows, rows[1:])
    )
    return ConvergenceReport(
        scheme=scheme,
        problem=name,
        alpha=problem.alpha.value,
        rows=tuple(rows),
        orders=orders,
        verdict=_verdict(rows, orders),
    )


# }}}
