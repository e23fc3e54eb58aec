"""Problems, grids and trajectories for scalar conformable initial value problems

.. math::

    D_t^\\alpha y = f(t, y), \\qquad y(a) = y_0, \\qquad a \\le t \\le b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from confeuler.expr import ExprAst, compile_expr, parse

__all__ = [
    "DIVERGENCE_THRESHOLD",
    "Alpha",
    "as_alpha",
    "IvpProblem",
    "UniformGrid",
    "Trajectory",
    "make_grid",
    "node",
    "sample",
]

#: magnitude beyond which a trajectory is declared divergent
DIVERGENCE_THRESHOLD = 1.0e300

Rhs = Union[ExprAst, Callable[[float, float], float]]
Solution = Union[ExprAst, Callable[[float], float]]


@dataclass(frozen=True)
class Alpha:
    """Fractional order, restricted to :math:`0 < \\alpha \\le 1`."""

    value: float

    def __post_init__(self) -> None:
        value = float(self.value)
        if not (0.0 < value <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.value!r}")
        object.__setattr__(self, "value", value)

    def __float__(self) -> float:
        return self.value


def as_alpha(alpha: Alpha | float) -> Alpha:
    return alpha if isinstance(alpha, Alpha) else Alpha(alpha)


def rhs_callable(rhs: Rhs | str) -> Callable[[float, float], float]:
    if callable(rhs):
        return rhs
    if isinstance(rhs, str):
        rhs = parse(rhs)
    return compile_expr(rhs)


def solution_callable(exact: Solution | str) -> Callable[[float], float]:
    if callable(exact):
        return exact
    if isinstance(exact, str):
        exact = parse(exact)
    fn = compile_expr(exact)
    return lambda t: fn(t, 0.0)


@dataclass(frozen=True)
class IvpProblem:
    """A scalar problem on ``[t_start, t_end]``.

    *rhs* and *exact* are either expression trees or plain callables
    ``rhs(t, y)`` and ``exact(t)``; strings are parsed on construction.
    """

    rhs: Rhs
    t_start: float
    t_end: float
    y0: float
    alpha: Alpha
    exact: Optional[Solution] = None

    def __post_init__(self) -> None:
        if isinstance(self.rhs, str):
            object.__setattr__(self, "rhs", parse(self.rhs))
        if isinstance(self.exact, str):
            object.__setattr__(self, "exact", parse(self.exact))
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        object.__setattr__(self, "t_start", float(self.t_start))
        object.__setattr__(self, "t_end", float(self.t_end))
        object.__setattr__(self, "y0", float(self.y0))

        if not (0.0 <= self.t_start < self.t_end):
            raise ValueError(
                f"need 0 <= a < b, got a={self.t_start!r}, b={self.t_end!r}"
            )

        if self.exact is not None:
            y_start = self.exact_fn(self.t_start)
            if not math.isclose(y_start, self.y0, rel_tol=1.0e-12, abs_tol=1.0e-12):
                raise ValueError(
                    f"exact solution gives y(a) = {y_start!r}, expected y0 = {self.y0!r}"
                )

    @property
    def f(self) -> Callable[[float, float], float]:
        return rhs_callable(self.rhs)

    @property
    def exact_fn(self) -> Callable[[float], float]:
        if self.exact is None:
            raise ValueError("problem has no exact solution")
        return solution_callable(self.exact)


@dataclass(frozen=True)
class UniformGrid:
    t0: float
    h: float
    n_steps: int

    def __post_init__(self) -> None:
        if not self.h > 0.0:
            raise ValueError(f"step must be positive, got h={self.h!r}")
        if self.n_steps < 1:
            raise ValueError(f"need at least one step, got N={self.n_steps!r}")

    def node(self, k: int) -> float:
        if not 0 <= k <= self.n_steps:
            raise IndexError(f"node index {k} outside [0, {self.n_steps}]")
        return self.t0 + k * self.h

    @property
    def nodes(self) -> list[float]:
        return [self.t0 + k * self.h for k in range(self.n_steps + 1)]

    @property
    def t_end(self) -> float:
        return self.node(self.n_steps)


def make_grid(a: float, b: float, n: int) -> UniformGrid:
    """Uniform grid on ``[a, b]`` with ``n`` steps of size ``(b - a) / n``."""
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"number of steps must be an integer, got {n!r}")
    if a < 0.0:
        raise ValueError(f"grid must start at a nonnegative time, got a={a!r}")
    if not b > a:
        raise ValueError(f"need b > a, got a={a!r}, b={b!r}")
    if n < 1:
        raise ValueError(f"need at least one step, got N={n!r}")

    return UniformGrid(t0=float(a), h=(b - a) / int(n), n_steps=int(n))


def node(grid: UniformGrid, k: int) -> float:
    return grid.node(k)


@dataclass(frozen=True)
class Trajectory:
    """Grid-aligned values; truncated after the first divergent index."""

    grid: UniformGrid
    values: tuple[float, ...]
    diverged_at: Optional[int] = None
    times: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(
            self, "times", tuple(self.grid.nodes[: len(self.values)])
        )

    @property
    def diverged(self) -> bool:
        return self.diverged_at is not None


def sample(grid: UniformGrid, fn: Solution) -> Trajectory:
    """Trajectory holding ``fn(t_k)`` at every node of *grid*."""
    fn = solution_callable(fn)
    return Trajectory(grid, tuple(fn(t) for t in grid.nodes))


def is_divergent(y: float) -> bool:
    return not math.isfinite(y) or abs(y) > DIVERGENCE_THRESHOLD
