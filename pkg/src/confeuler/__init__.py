"""Euler-type solvers for conformable fractional initial value problems."""

from confeuler.analysis import (
    ConvergenceReport,
    RatioDiagnostic,
    convergence_study,
    discrete_cfd,
    error_norms,
    implied_alpha,
    ratio_sweep,
)
from confeuler.expr import ParseError, evaluate, parse, to_source
from confeuler.ivp import (
    Alpha,
    IvpProblem,
    Trajectory,
    UniformGrid,
    make_grid,
    node,
    sample,
)
from confeuler.oracle import (
    NamedProblem,
    catalog,
    cfd_limit_estimate,
    cfd_residual,
    make_problem,
    reference_solve,
    transform_rhs,
)
from confeuler.schemes import (
    SchemeKind,
    conformable_euler_step,
    modified_euler_step,
    solve,
)

__all__ = [
    "Alpha",
    "ConvergenceReport",
    "IvpProblem",
    "NamedProblem",
    "ParseError",
    "RatioDiagnostic",
    "SchemeKind",
    "Trajectory",
    "UniformGrid",
    "catalog",
    "cfd_limit_estimate",
    "cfd_residual",
    "conformable_euler_step",
    "convergence_study",
    "discrete_cfd",
    "error_norms",
    "evaluate",
    "implied_alpha",
    "make_grid",
    "make_problem",
    "modified_euler_step",
    "node",
    "parse",
    "ratio_sweep",
    "reference_solve",
    "sample",
    "solve",
    "to_source",
    "transform_rhs",
]
