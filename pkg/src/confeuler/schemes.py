"""Explicit one-step integrators for conformable initial value problems.

Three schemes are provided, all evaluating the right-hand side at the left
node ``(t_k, y_k)``:

* ``ConformableEuler``: ``y_{k+1} = y_k + h^a / a * f(t_k, y_k)``
* ``ModifiedConformableEuler``:
  ``y_{k+1} = y_k + (t_{k+1}^a - t_k^a) / a * f(t_k, y_k)``
* ``ClassicalEuler``: ``y_{k+1} = y_k + h * f(t_k, y_k)``, ignoring ``a``.

All three coincide for ``a = 1``. For ``a < 1`` only the modified scheme is
consistent with :math:`D_t^\\alpha y = t^{1 - \\alpha} y'`; the original one
blows up as ``h -> 0``.
"""

from __future__ import annotations

import enum
import math
from typing import Callable

from confeuler.ivp import (
    Alpha,
    IvpProblem,
    Trajectory,
    UniformGrid,
    as_alpha,
    is_divergent,
)

__all__ = [
    "SchemeKind",
    "tpow",
    "conformable_euler_step",
    "modified_euler_step",
    "classical_euler_step",
    "solve",
]


class SchemeKind(enum.Enum):
    ConformableEuler = "conformable-euler"
    ModifiedConformableEuler = "modified"
    ClassicalEuler = "classical"

    @classmethod
    def from_name(cls, name: str) -> SchemeKind:
        try:
            return cls(name)
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown scheme {name!r} (choose from {choices})") from None


def tpow(t: float, alpha: float) -> float:
    """:math:`t^\\alpha` for ``t >= 0``, computed as ``exp(alpha log t)``."""
    if t == 0.0:
        return 0.0
    return math.exp(alpha * math.log(t))


def conformable_euler_step(
    t_k: float,
    h: float,
    y_k: float,
    f: Callable[[float, float], float],
    alpha: Alpha | float,
) -> float:
    a = as_alpha(alpha).value
    return y_k + tpow(h, a) / a * f(t_k, y_k)


def modified_euler_step(
    t_k: float,
    t_next: float,
    y_k: float,
    f: Callable[[float, float], float],
    alpha: Alpha | float,
) -> float:
    a = as_alpha(alpha).value
    return y_k + (tpow(t_next, a) - tpow(t_k, a)) / a * f(t_k, y_k)


def classical_euler_step(
    t_k: float, h: float, y_k: float, f: Callable[[float, float], float]
) -> float:
    return y_k + h * f(t_k, y_k)


def _check_grid(problem: IvpProblem, grid: UniformGrid) -> None:
    span = problem.t_end - problem.t_start
    if grid.t0 != problem.t_start or abs(grid.t_end - problem.t_end) > 1.0e-12 * span:
        raise ValueError(
            f"grid [{grid.t0!r}, {grid.t_end!r}] does not span the problem "
            f"interval [{problem.t_start!r}, {problem.t_end!r}]"
        )


def solve(problem: IvpProblem, grid: UniformGrid, scheme: SchemeKind) -> Trajectory:
    """Integrate *problem* on *grid* with *scheme*.

    A run that leaves ``[-1e300, 1e300]`` or produces a non-finite value stops
    there; the returned trajectory ends with that value and records its index
    in ``diverged_at``.
    """
    _check_grid(problem, grid)

    f = problem.f
    alpha = problem.alpha
    h = grid.h
    ts = grid.nodes

    if scheme is SchemeKind.ConformableEuler:
        def step(k: int, y: float) -> float:
            return conformable_euler_step(ts[k], h, y, f, alpha)
    elif scheme is SchemeKind.ModifiedConformableEuler:
        def step(k: int, y: float) -> float:
            return modified_euler_step(ts[k], ts[k + 1], y, f, alpha)
    elif scheme is SchemeKind.ClassicalEuler:
        def step(k: int, y: float) -> float:
            return classical_euler_step(ts[k], h, y, f)
    else:
        raise TypeError(f"unknown scheme: {scheme!r}")

    values = [problem.y0]
    y = problem.y0
    for k in range(grid.n_steps):
        y = step(k, y)
        values.append(y)
        if is_divergent(y):
            return Trajectory(grid, tuple(values), diverged_at=k + 1)

    return Trajectory(grid, tuple(values))
