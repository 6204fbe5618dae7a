import math

import numpy as np
import pytest

from twofluid.energy import (
    LinearizedShockProblem,
    apriori_bound,
    apriori_estimate_check,
    energy_identity_residual,
    parse_expression,
    problem_from_config,
    solve_entropy_perturbation,
)
from twofluid.errors import ConfigurationError


def bump(a, x0, w):
    return lambda x: a * np.exp(-(((np.asarray(x) - x0) / w) ** 2))


def test_zero_data():
    prob = LinearizedShockProblem(2.0, 1.0)
    sol = solve_entropy_perturbation(prob, 50)
    assert energy_identity_residual(prob, sol) == 0.0
    assert np.all(sol.energy == 0.0)
    assert apriori_estimate_check(prob, sol).ratio == 0.0


def test_pure_inflow_against_characteristics():
    prob = LinearizedShockProblem(2.0, 1.0, g=math.sin, t_final=1.0, half_line_length=2.0)
    errors = []
    for cells in (200, 400, 800):
        sol = solve_entropy_perturbation(prob, cells)
        assert np.all(sol.s_minus == 0.0)
        assert np.array_equal(sol.trace_plus, np.sin(sol.t))
        x = sol.x_plus
        exact = np.where(x < prob.t_final, np.sin(prob.t_final - x), 0.0)
        # the exact profile has a slope kink at x = u+ t; measure away from it
        away = np.abs(x - prob.t_final) > 0.2
        errors.append(np.max(np.abs(sol.s_plus - exact)[away]))
    ratios = [a / b for a, b in zip(errors, errors[1:])]
    assert all(1.8 < r < 2.2 for r in ratios)


def test_interior_bump_loses_energy_only_to_dissipation():
    prob = LinearizedShockProblem(2.0, 1.0, s0_minus=bump(1.0, -1.5, 0.08),
                                  t_final=0.2, half_line_length=2.0)
    gaps = []
    for cells in (200, 400, 800):
        sol = solve_entropy_perturbation(prob, cells)
        assert np.all(np.diff(sol.energy) <= 1e-15 * sol.energy[0])
        gaps.append(sol.energy[0] - sol.energy[-1])
    assert gaps[0] > gaps[1] > gaps[2] > 0.0


def test_energy_decays_without_jump_datum(rng):
    for _ in range(10):
        prob = LinearizedShockProblem(
            2.0, 1.0,
            s0_minus=bump(rng.normal(), -rng.uniform(0.2, 1.0), 0.2),
            s0_plus=bump(rng.normal(), rng.uniform(0.2, 1.0), 0.2),
            t_final=0.5, half_line_length=2.0)
        sol = solve_entropy_perturbation(prob, 200)
        assert np.all(sol.energy <= sol.energy[0] * (1 + 1e-14))


def test_homogeneity():
    prob = LinearizedShockProblem(
        2.0, 1.0, f_minus=lambda t, x: np.cos(3 * t) * np.exp(-((x + 0.6) / 0.15) ** 2),
        g=lambda t: math.sin(4 * t), s0_plus=bump(0.7, 0.5, 0.15),
        t_final=0.4, half_line_length=2.0)
    base = solve_entropy_perturbation(prob, 100)
    big = solve_entropy_perturbation(prob.scaled(10.0), 100)
    assert np.allclose(big.s_plus, 10.0 * base.s_plus, rtol=1e-12, atol=1e-15)
    assert np.allclose(big.energy, 100.0 * base.energy, rtol=1e-12, atol=1e-15)
    r0 = apriori_estimate_check(prob, base).ratio
    assert apriori_estimate_check(prob.scaled(10.0), big).ratio == pytest.approx(r0, rel=1e-12)


def test_causality():
    prob = LinearizedShockProblem(2.0, 1.0, g=math.sin, s0_plus=bump(1.0, 0.3, 0.1),
                                  t_final=0.4, half_line_length=2.0)
    late_g = LinearizedShockProblem(
        2.0, 1.0, g=lambda t: math.sin(t) + (t > 0.2) * 5.0, s0_plus=bump(1.0, 0.3, 0.1),
        t_final=0.4, half_line_length=2.0)
    far_data = LinearizedShockProblem(
        2.0, 1.0, g=math.sin, t_final=0.4, half_line_length=2.0,
        s0_plus=lambda x: bump(1.0, 0.3, 0.1)(x) + (np.asarray(x) > 1.5) * 3.0)
    a = solve_entropy_perturbation(prob, 100, keep_history=True)
    b = solve_entropy_perturbation(late_g, 100, keep_history=True)
    c = solve_entropy_perturbation(far_data, 100)
    k = int(np.searchsorted(a.t, 0.2, side="right")) - 1
    for n in range(k + 1):
        assert np.array_equal(a.history_plus[n], b.history_plus[n])
    upstream = a.x_plus < 1.5
    assert np.array_equal(a.s_plus[upstream], c.s_plus[upstream])
    assert np.array_equal(a.s_minus, c.s_minus)


def test_configuration_errors():
    with pytest.raises(ConfigurationError):
        solve_entropy_perturbation(LinearizedShockProblem(2.0, -1.0), 10)
    with pytest.raises(ConfigurationError):
        solve_entropy_perturbation(LinearizedShockProblem(2.0, 1.0), 0)
    with pytest.raises(ConfigurationError):
        solve_entropy_perturbation(LinearizedShockProblem(2.0, 1.0), 10, cfl=1.5)
    expanding = LinearizedShockProblem(1.0, 2.0)
    with pytest.raises(ConfigurationError):
        apriori_estimate_check(expanding, solve_entropy_perturbation(expanding, 10))
    with pytest.raises(ConfigurationError):
        apriori_bound(expanding)


def test_apriori_ratio_grows_as_jump_closes():
    ratios = []
    for up in (1.0, 1.9, 1.99):
        prob = LinearizedShockProblem(2.0, up, g=math.sin, t_final=0.4, half_line_length=2.0)
        sol = solve_entropy_perturbation(prob, 100)
        report = apriori_estimate_check(prob, sol)
        assert report.ratio <= report.bound
        ratios.append(apriori_bound(prob))
    assert ratios[0] < ratios[1] < ratios[2]


@pytest.mark.parametrize("text, t, x, expected", [
    ("zero", 1.0, 0.3, 0.0),
    ("0", 1.0, 0.3, 0.0),
    ("sine(2, 1, 3, 0.5)", 0.2, 0.3, 2 * math.sin(0.3 + 0.6 + 0.5)),
    ("gaussian(1.5, 0.2, 0.1)", 0.0, 0.3, 1.5 * math.exp(-1.0)),
    ("poly_x(1, 2, 3)", 9.0, 0.5, 1 + 1 + 0.75),
    ("poly_t(1, -1)", 0.25, 7.0, 0.75),
])
def test_parse_expression(text, t, x, expected):
    assert float(parse_expression(text)(t, np.array(x))) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("text", ["sine(1, 2)", "cosine(1,2,3,4)", "gaussian(a, 1, 1)", "x+1"])
def test_parse_expression_rejects(text):
    with pytest.raises(ConfigurationError):
        parse_expression(text)


def test_problem_from_config():
    prob = problem_from_config({"u_hat_minus": "2", "u_hat_plus": "1", "g": "poly_t(0, 1)",
                                "s0_plus": "gaussian(1, 0.5, 0.1)", "t_final": "0.3"})
    assert prob.g(0.25) == 0.25
    assert prob.s0_plus(np.array([0.5]))[0] == 1.0
    assert prob.f_minus(0.0, np.array([0.1]))[0] == 0.0
    assert prob.t_final == 0.3 and prob.half_line_length == 1.0
