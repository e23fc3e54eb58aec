import math
from decimal import Decimal, getcontext

import pytest
from hypothesis import given
from hypothesis import strategies as st

from confeuler.analysis import (
    ORDER_WINDOW,
    ConvergenceRow,
    _verdict,
    convergence_study,
    discrete_cfd,
    error_norms,
    implied_alpha,
    ratio_sweep,
)
from confeuler.ivp import IvpProblem, Trajectory, make_grid, sample
from confeuler.oracle import make_problem
from confeuler.schemes import SchemeKind, solve, tpow

alphas = st.floats(min_value=0.01, max_value=0.99)


# {{{ implied alpha


def test_implied_alpha_examples():
    assert implied_alpha(1.0, 0.7, 3, 0.01) == 1.0
    assert implied_alpha(0.5, 1.0, 1, 0.01) == pytest.approx(math.sqrt(101), abs=1e-12)
    assert implied_alpha(0.5, 1.0, 1, 0.01) == pytest.approx(10.0499, abs=1e-4)
    assert implied_alpha(0.5, 0.0, 4, 0.3) == 2.0


@pytest.mark.parametrize(("t0", "k", "h"), [(1.0, 0, 0.1), (-1.0, 1, 0.1), (1.0, 1, 0.0)])
def test_implied_alpha_preconditions(t0, k, h):
    with pytest.raises(ValueError):
        implied_alpha(0.5, t0, k, h)


@given(
    st.floats(min_value=0.0, max_value=100.0),
    st.integers(min_value=1, max_value=10_000),
    st.floats(min_value=1e-12, max_value=10.0),
)
def test_implied_alpha_is_one_at_alpha_one(t0, k, h):
    assert implied_alpha(1.0, t0, k, h) == 1.0


@given(
    alphas,
    st.floats(min_value=1e-3, max_value=100.0),
    st.integers(min_value=1, max_value=1000),
    st.lists(st.floats(min_value=1e-8, max_value=1.0), min_size=2, max_size=8, unique=True),
)
def test_implied_alpha_decreases_in_h(alpha, t0, k, hs):
    hs = sorted(hs)
    values = [implied_alpha(alpha, t0, k, h) for h in hs]
    assert all(v1 >= v2 for v1, v2 in zip(values, values[1:]))
    # strictly, wherever t0/h moves the base by more than rounding
    for (h1, v1), (h2, v2) in zip(zip(hs, values), zip(hs[1:], values[1:])):
        if t0 / h1 - t0 / h2 > 1e-9 * (t0 / h1 + k):
            assert v1 > v2


@given(alphas, st.integers(min_value=1, max_value=10_000),
       st.lists(st.floats(min_value=1e-12, max_value=10.0), min_size=2, max_size=8))
def test_implied_alpha_h_independent_at_origin(alpha, k, hs):
    values = [implied_alpha(alpha, 0.0, k, h) for h in hs]
    assert all(abs(v - values[0]) <= 4 * math.ulp(values[0]) for v in values)


def test_ratio_sweep_examples():
    diag = ratio_sweep(0.5, 1.0, 1, [1e-1, 1e-2, 1e-3])
    expected = [math.sqrt(11), math.sqrt(101), math.sqrt(1001)]
    assert [v for _, v in diag.entries] == pytest.approx(expected, abs=1e-12)
    assert [v for _, v in diag.entries] == pytest.approx([3.3166, 10.0499, 31.6386], abs=1e-4)
    assert diag.verdict == "unbounded growth"

    diag = ratio_sweep(1.0, 1.0, 1, [1e-1, 1e-2, 1e-3])
    assert [v for _, v in diag.entries] == [1.0, 1.0, 1.0]
    assert diag.verdict == "constant"

    diag = ratio_sweep(0.5, 0.0, 9, [1e-1, 1e-2, 1e-3, 1e-6])
    assert [v for _, v in diag.entries] == [3.0] * 4
    assert diag.verdict == "constant"


def test_ratio_sweep_slow_growth():
    # (1/h + 1)^0.2 grows by about 10^0.2 < 2 per decade
    assert ratio_sweep(0.8, 1.0, 1, [1e-1, 1e-2, 1e-3]).verdict == "increasing"


@pytest.mark.parametrize("hs", [[], [0.1, 0.2], [0.1, 0.1], [0.1, -0.01]])
def test_ratio_sweep_rejects(hs):
    with pytest.raises(ValueError):
        ratio_sweep(0.5, 1.0, 1, hs)


# }}}


# {{{ discrete derivative


def test_discrete_cfd_example():
    getcontext().prec = 50
    # 0.5 (1.01^2 - 1) / (sqrt(1.01) - 1)
    expected = Decimal("0.5") * (Decimal("1.01") ** 2 - 1) / (Decimal("1.01").sqrt() - 1)
    traj = sample(make_grid(1.0, 1.01, 1), lambda t: t * t)
    (d,) = discrete_cfd(traj, 0.5)
    assert d == pytest.approx(float(expected), rel=1e-12)
    assert d == pytest.approx(2.0150, abs=1e-4)


def test_discrete_cfd_constant_and_alpha_one():
    grid = make_grid(0.0, 1.0, 10)
    assert discrete_cfd(sample(grid, lambda t: 3.0), 0.4) == [0.0] * 10

    (d,) = discrete_cfd(sample(make_grid(1.0, 1.01, 1), lambda t: t * t), 1.0)
    assert d == pytest.approx(2.01, rel=1e-12)


def test_discrete_cfd_needs_two_points():
    traj = Trajectory(make_grid(0.0, 1.0, 1), (1.0,))
    with pytest.raises(ValueError):
        discrete_cfd(traj, 0.5)


@pytest.mark.parametrize(
    ("y", "dy"),
    [(math.exp, math.exp), (math.sin, math.cos), (lambda t: t**3, lambda t: 3 * t**2)],
)
@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_discrete_cfd_is_first_order(y, dy, alpha):
    errors = []
    for n in (50, 100, 200):
        traj = sample(make_grid(0.5, 1.5, n), y)
        d = discrete_cfd(traj, alpha)
        interior = range(1, n)
        errors.append(
            max(abs(d[k] - tpow(traj.times[k], 1 - alpha) * dy(traj.times[k])) for k in interior)
        )
    for coarse, fine in zip(errors, errors[1:]):
        assert 0.5 * 0.75 <= fine / coarse <= 0.5 * 1.25


# }}}


# {{{ error norms


def test_error_norms_examples():
    problem = make_problem("linear", alpha=0.5)
    grid = make_grid(0.0, 1.0, 8)
    exact = problem.problem.exact_fn
    assert error_norms(sample(grid, exact), exact) == (0.0, 0.0)

    single = IvpProblem("y", 0.0, 0.25, 1.0, 0.5)
    traj = solve(single, make_grid(0.0, 0.25, 1), SchemeKind.ModifiedConformableEuler)
    final, worst = error_norms(traj, "exp(2*sqrt(t))")
    assert final == pytest.approx(math.e - 2.0, abs=1e-15)
    assert worst == final

    diverged = Trajectory(grid, (1.0, math.inf), diverged_at=1)
    assert error_norms(diverged, exact) == (math.inf, math.inf)


# }}}


# {{{ convergence studies


def test_modified_converges_on_linear():
    report = convergence_study(
        make_problem("linear", alpha=0.5), SchemeKind.ModifiedConformableEuler, 32, 5
    )
    assert [row.n for row in report.rows] == [32, 64, 128, 256, 512]
    assert all(r2.h == r1.h / 2 for r1, r2 in zip(report.rows, report.rows[1:]))
    assert len(report.orders) == 4
    lo, hi = ORDER_WINDOW
    assert all(lo <= p <= hi for p in report.orders[-2:])
    assert report.verdict == "converging"
    assert report.problem == "linear"
    assert report.alpha == 0.5


def test_original_blows_up_on_linear():
    report = convergence_study(
        make_problem("linear", alpha=0.5), SchemeKind.ConformableEuler, 32, 5
    )
    for row in report.rows:
        h = row.h
        closed_form = (1 + 2 * math.sqrt(h)) ** row.n
        assert row.final_abs_err == pytest.approx(closed_form - math.exp(2.0), rel=1e-10)
    errors = report.final_errors
    assert all(e2 > e1 for e1, e2 in zip(errors, errors[1:]))
    assert report.verdict in ("non-converging", "diverged")


@pytest.mark.parametrize("scheme", list(SchemeKind))
def test_every_scheme_is_first_order_at_alpha_one(scheme):
    report = convergence_study(make_problem("linear", alpha=1.0), scheme, 32, 5)
    assert report.verdict == "converging"
    assert all(abs(p - 1.0) < 0.05 for p in report.orders)


def test_diverged_verdict():
    problem = make_problem("linear", alpha=0.3, b=2.0)
    report = convergence_study(problem, SchemeKind.ConformableEuler, 2000, 3)
    assert report.verdict == "diverged"
    assert math.isinf(report.rows[-1].final_abs_err)
    assert report.orders[-1] is None


def test_verdict_rules():
    def rows(errors):
        return [ConvergenceRow(2**j, 2.0**-j, e, e) for j, e in enumerate(errors)]

    assert _verdict(rows([8.0, 4.0, 2.0, 1.0]), [1.0, 1.0, 1.0]) == "converging"
    assert _verdict(rows([8.0, 4.0, 4.0, 1.0]), [1.0, 0.0, 2.0]) == "non-converging"
    assert _verdict(rows([8.0, 6.0, 4.5]), [0.415, 0.415]) == "reduced-order"
    assert _verdict(rows([8.0, math.inf, 4.5]), [None, None]) == "diverged"


def test_surrogate_reference_for_custom_problem():
    problem = IvpProblem("-y + sin(t)", 0.0, 1.0, 1.0, 0.6)
    report = convergence_study(problem, SchemeKind.ModifiedConformableEuler, 16, 4,
                               reference_refinement=64)
    assert report.problem == "custom"
    assert report.verdict == "converging"

    # the surrogate agrees with an independently refined reference
    exactish = IvpProblem("-y + sin(t)", 0.0, 1.0, 1.0, 0.6)
    fine = convergence_study(exactish, SchemeKind.ModifiedConformableEuler, 16, 4)
    assert [r.final_abs_err for r in report.rows] == pytest.approx(
        [r.final_abs_err for r in fine.rows], rel=1e-6
    )


def test_study_preconditions():
    problem = make_problem("linear")
    with pytest.raises(ValueError):
        convergence_study(problem, SchemeKind.ModifiedConformableEuler, 32, 2)
    with pytest.raises(ValueError):
        convergence_study(problem, SchemeKind.ModifiedConformableEuler, 0, 4)


def test_study_is_reproducible():
    problem = make_problem("logistic", alpha=0.4)
    first = convergence_study(problem, SchemeKind.ModifiedConformableEuler, 16, 4)
    second = convergence_study(problem, SchemeKind.ModifiedConformableEuler, 16, 4)
    assert first == second


# }}}


@pytest.mark.parametrize("alpha", [0.3, 0.35])
def test_modified_order_on_linear_tends_to_two_alpha(alpha):
    # the first steps near t = 0 contribute an O(h^(2 alpha)) error, which
    # dominates the O(h) remainder when alpha < 1/2
    report = convergence_study(
        make_problem("linear", alpha=alpha), SchemeKind.ModifiedConformableEuler, 4096, 4
    )
    orders = report.orders
    assert all(p2 > p1 for p1, p2 in zip(orders, orders[1:]))
    assert all(2 * alpha - 0.1 < p < 2 * alpha for p in orders)
    assert report.verdict == "reduced-order"
