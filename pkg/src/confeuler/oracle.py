"""Ground truth for conformable problems.

Everything here rests on :math:`D_t^\\alpha y = t^{1 - \\alpha} y'(t)` for
differentiable ``y``. With :math:`s = t^\\alpha / \\alpha` the chain rule
turns :math:`D_t^\\alpha y = f(t, y)` into the ordinary problem

.. math::

    \\frac{dy}{ds} = f\\left((\\alpha s)^{1/\\alpha}, y\\right),

which has no singularity at ``t = 0`` and is integrated here with the
classical fourth-order Runge-Kutta method.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from confeuler.expr import ExprAst, parse
from confeuler.ivp import (
    Alpha,
    IvpProblem,
    Rhs,
    Solution,
    Trajectory,
    as_alpha,
    is_divergent,
    make_grid,
    rhs_callable,
    solution_callable,
)
from confeuler.schemes import tpow

__all__ = [
    "DEFAULT_EPS",
    "NamedProblem",
    "PROBLEM_PARAMETERS",
    "s_of_t",
    "t_of_s",
    "transform_rhs",
    "rk4_step",
    "reference_solve",
    "cfd_limit_estimate",
    "cfd_residual",
    "make_problem",
    "catalog",
    "certify",
]

DEFAULT_EPS = 1.0e-7


# {{{ s-substitution


def s_of_t(t: float, alpha: Alpha | float) -> float:
    a = as_alpha(alpha).value
    if a == 1.0:
        return t
    return tpow(t, a) / a


def t_of_s(s: float, alpha: Alpha | float) -> float:
    a = as_alpha(alpha).value
    if a == 1.0:
        return s
    return tpow(a * s, 1.0 / a)


def transform_rhs(f: Rhs, alpha: Alpha | float) -> Callable[[float, float], float]:
    """Right-hand side ``g(s, y) = f(t(s), y)`` of the problem in ``s``."""
    f = rhs_callable(f)
    a = as_alpha(alpha).value
    if a == 1.0:
        return f

    def g(s: float, y: float) -> float:
        return f(t_of_s(s, a), y)

    return g


# }}}


# {{{ reference integrator


def rk4_step(
    g: Callable[[float, float], float], s: float, ds: float, y: float
) -> float:
    k1 = g(s, y)
    k2 = g(s + 0.5 * ds, y + 0.5 * ds * k1)
    k3 = g(s + 0.5 * ds, y + 0.5 * ds * k2)
    k4 = g(s + ds, y + ds * k3)
    return y + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def reference_solve(
    problem: IvpProblem, n_output: int, refinement: int = 1024
) -> Trajectory:
    """High-accuracy solution at the nodes of ``make_grid(a, b, n_output)``.

    Each output interval ``[t_k, t_{k+1}]`` is mapped to ``[s_k, s_{k+1}]``
    and crossed with *refinement* uniform RK4 steps in ``s``.
    """
    if refinement < 1:
        raise ValueError(f"refinement must be at least 1, got {refinement!r}")

    grid = make_grid(problem.t_start, problem.t_end, n_output)
    alpha = problem.alpha
    g = transform_rhs(problem.f, alpha)

    s_nodes = [s_of_t(t, alpha) for t in grid.nodes]
    values = [problem.y0]
    y = problem.y0
    for k in range(grid.n_steps):
        s_left = s_nodes[k]
        ds = (s_nodes[k + 1] - s_left) / refinement
        for i in range(refinement):
            y = rk4_step(g, s_left + i * ds, ds, y)
            if is_divergent(y):
                values.append(y)
                return Trajectory(grid, tuple(values), diverged_at=k + 1)
        values.append(y)

    return Trajectory(grid, tuple(values))


# }}}


# {{{ limit definition


def cfd_limit_estimate(
    f: Solution, t: float, alpha: Alpha | float, eps: float = DEFAULT_EPS
) -> float:
    """Difference quotient ``(f(t + eps t^(1 - a)) - f(t)) / eps``."""
    if not t > 0.0:
        raise ValueError(f"the conformable derivative needs t > 0, got {t!r}")
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps!r}")

    f = solution_callable(f)
    a = as_alpha(alpha).value
    return (f(t + eps * tpow(t, 1.0 - a)) - f(t)) / eps


def cfd_residual(
    exact: Solution,
    f: Rhs,
    alpha: Alpha | float,
    t: float,
    eps: float = DEFAULT_EPS,
) -> float:
    """How far *exact* is from satisfying ``D^a y = f(t, y)`` at *t*."""
    y = solution_callable(exact)
    rhs = rhs_callable(f)
    return abs(cfd_limit_estimate(y, t, alpha, eps) - rhs(t, y(t)))


# }}}


# {{{ catalog


@dataclass(frozen=True)
class NamedProblem:
    name: str
    parameters: dict[str, float] = field(hash=False)
    problem: IvpProblem

    @property
    def has_exact(self) -> bool:
        return self.problem.exact is not None


#: parameter keys and defaults of each catalog entry
PROBLEM_PARAMETERS: dict[str, dict[str, float]] = {
    "linear": {"lambda": 1.0},
    "power": {"p": 2.0},
    "logistic": {"r": 1.0, "kcap": 2.0},
    "custom": {},
}

_DEFAULT_Y0 = {"linear": 1.0, "power": 0.0, "logistic": 1.0, "custom": 1.0}

_DESCRIPTIONS = {
    "linear": "D^a y = lambda*y, exact y0*exp(lambda*(t^a - a0^a)/a)",
    "power": "D^a y = p*t^(p-a), exact y0 + t^p - a0^p",
    "logistic": "D^a y = r*y*(1 - y/kcap), exact kcap/(1 + C*exp(-r*(t^a - a0^a)/a))",
    "custom": "D^a y = <--rhs>, exact from --exact if given",
}


def _lit(x: float) -> str:
    return f"({float(x)!r})"


def make_problem(
    name: str,
    *,
    alpha: Alpha | float = 0.5,
    a: float = 0.0,
    b: float = 1.0,
    y0: Optional[float] = None,
    rhs: Optional[str | ExprAst] = None,
    exact: Optional[str | ExprAst] = None,
    **params: Optional[float],
) -> NamedProblem:
    """Build catalog entry *name*; unknown names or parameters raise ``ValueError``.

    Parameters left as ``None`` take their catalog defaults; ``lam`` is
    accepted for ``lambda``. *rhs* and *exact*
    are only accepted for ``"custom"``.
    """
    if name not in PROBLEM_PARAMETERS:
        choices = ", ".join(PROBLEM_PARAMETERS)
        raise ValueError(f"unknown problem {name!r} (choose from {choices})")

    if "lam" in params:
        params["lambda"] = params.pop("lam")
    defaults = PROBLEM_PARAMETERS[name]
    unknown = {k for k, v in params.items() if v is not None} - set(defaults)
    if unknown:
        raise ValueError(f"problem {name!r} takes no parameter(s) {sorted(unknown)}")
    values = {k: float(params[k]) if params.get(k) is not None else v
              for k, v in defaults.items()}

    if not (0.0 <= a < b):
        raise ValueError(f"need 0 <= a < b, got a={a!r}, b={b!r}")
    alpha = as_alpha(alpha)
    al = alpha.value
    y0 = _DEFAULT_Y0[name] if y0 is None else float(y0)
    # t^a - a0^a, shared by the exponential forms
    shift = f"(t^{_lit(al)} - {_lit(tpow(a, al))})"

    if name != "custom" and (rhs is not None or exact is not None):
        raise ValueError("--rhs/--exact are only accepted by the custom problem")

    if name == "linear":
        lam = values["lambda"]
        rhs = f"{_lit(lam)}*y"
        exact = f"{_lit(y0)}*exp({_lit(lam)}*{shift}/{_lit(al)})"
    elif name == "power":
        p = values["p"]
        rhs = f"{_lit(p)}*t^{_lit(p - al)}"
        exact = f"{_lit(y0)} + t^{_lit(p)} - {_lit(tpow(a, p))}"
    elif name == "logistic":
        r, kcap = values["r"], values["kcap"]
        if y0 == 0.0:
            raise ValueError("logistic problem needs y0 != 0")
        rhs = f"{_lit(r)}*y*(1 - y/{_lit(kcap)})"
        exact = (
            f"{_lit(kcap)}/(1 + {_lit(kcap / y0 - 1.0)}"
            f"*exp(-{_lit(r)}*{shift}/{_lit(al)}))"
        )
    elif rhs is None:
        raise ValueError("the custom problem needs a right-hand side")

    if isinstance(rhs, str):
        rhs = parse(rhs)
    if isinstance(exact, str):
        exact = parse(exact)

    problem = IvpProblem(rhs=rhs, t_start=a, t_end=b, y0=y0, alpha=alpha, exact=exact)
    return NamedProblem(name, values, problem)


def catalog() -> list[NamedProblem]:
    """Catalog entries with default parameters; ``custom`` solves ``D^a y = y``."""
    return [
        make_problem(name, rhs="y" if name == "custom" else None)
        for name in PROBLEM_PARAMETERS
    ]


def describe(name: str) -> str:
    return _DESCRIPTIONS[name]


def certify(
    named: NamedProblem,
    n_points: int = 10,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
) -> float:
    """Largest :func:`cfd_residual` of the exact solution at random interior points.

    Points are drawn from the inner 90% of ``(a, b]`` with a fixed seed so the
    check is reproducible.
    """
    problem = named.problem
    if problem.exact is None:
        raise ValueError(f"problem {named.name!r} has no exact solution")

    a, b = problem.t_start, problem.t_end
    rng = random.Random(seed)
    lo = a + 0.05 * (b - a)
    points = [rng.uniform(lo, b - 0.05 * (b - a)) for _ in range(n_points)]
    return max(
        cfd_residual(problem.exact, problem.rhs, problem.alpha, t, eps)
        for t in points
    )


# }}}
