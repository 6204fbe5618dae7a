"""Reduced-size invariant checks behind ``twofluid selftest``.

Each check returns a :class:`CheckResult`; the sample sizes are small
enough for the whole table to finish in seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import energy, fvm
from .eos import (
    BiFluid,
    ModelKind,
    TwoPhaseLiquidFraction,
    TwoPhasePolytropic,
    TwoPhaseSonic,
    check_convexity,
    pressure_mn,
)
from .hyperbolic import assemble_matrices, characteristic_speeds, check_symmetric_hyperbolic
from .rankine_hugoniot import classify_shock, hugoniot_downstream, residual_scale, rh_residual
from .state import conservative_from_rho, primitive_from_rho
from .vortex import Verdict, classify_jump, thresholds

REFERENCE_LAWS = {
    "two_phase_polytropic": TwoPhasePolytropic(gamma=2.0),
    "two_phase_liquid_fraction": TwoPhaseLiquidFraction(c_const=1.0, gamma=2.0, rho_l=10.0),
    "two_phase_sonic": TwoPhaseSonic(c_const=1.0, k0=1.0, a0=1.0),
    "bi_fluid": BiFluid(alpha=1.0, gamma=2.0, a_coef=1.0),
}


def density_range(law):
    """A density interval on which ``law`` is valid and well conditioned."""
    if isinstance(law, TwoPhaseLiquidFraction):
        return 0.1, 0.9 * law.rho_l
    return 0.1, 5.0


def sample_rho_s(law, rng, size):
    lo, hi = density_range(law)
    rho = rng.uniform(lo, hi, size)
    s = rng.uniform(0.05, 5.0, size)
    return rho, s


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_reference_values():
    law = REFERENCE_LAWS
    got = [
        pressure_mn(law["two_phase_polytropic"], 1.0, 1.0),
        pressure_mn(law["two_phase_liquid_fraction"], 2.0, 1.0),
        pressure_mn(law["two_phase_sonic"], 0.5, 0.5),
        pressure_mn(law["bi_fluid"], 1.0, 1.0),
    ]
    want = [4.0, (2.0 / 9.0) ** 2, math.sqrt(2.0), 2.0]
    err = max(abs(g - w) / w for g, w in zip(got, want))
    return CheckResult("eos reference values", err < 1e-14, f"max rel err {err:.2e}")


def check_derivatives(samples=200, seed=1):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for law in REFERENCE_LAWS.values():
        rho, s = sample_rho_s(law, rng, samples)
        h = 1e-6 * rho
        fd = (law.p_rho_s(rho + h, s) - law.p_rho_s(rho - h, s)) / (2.0 * h)
        exact = law.dp_drho(rho, s)
        if np.any(exact <= 0.0):
            return CheckResult("dP/drho vs finite differences", False, "nonpositive dP/drho")
        worst = max(worst, float(np.max(np.abs(fd - exact) / exact)))
    return CheckResult("dP/drho vs finite differences", worst < 1e-6, f"max rel err {worst:.2e}")


def check_symbols(samples=50, seed=2):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for law in REFERENCE_LAWS.values():
        rho, s = sample_rho_s(law, rng, samples)
        for k in range(samples):
            u = rng.normal(size=3)
            xi = rng.normal(size=3)
            prim = primitive_from_rho(law, rho[k], u, s[k])
            msys = assemble_matrices(law, prim)
            if not check_symmetric_hyperbolic(msys):
                return CheckResult("symmetric hyperbolicity", False, "assembly failed")
            symbol = sum(x * a for x, a in zip(xi, msys.a))
            eig = np.sort(np.linalg.eigvals(np.linalg.solve(msys.a0, symbol)).real)
            speeds = np.array(characteristic_speeds(law, prim, xi))
            scale = max(1.0, float(np.max(np.abs(speeds))))
            worst = max(worst, float(np.max(np.abs(eig - speeds))) / scale)
    return CheckResult("symmetric hyperbolicity", worst < 1e-10, f"max rel eig err {worst:.2e}")


def check_shocks(samples=100, seed=3):
    rng = np.random.default_rng(seed)
    worst = 0.0
    lax_failures = 0
    for law in REFERENCE_LAWS.values():
        lo, hi = density_range(law)
        for _ in range(samples):
            rho_m = rng.uniform(lo, hi / 3.0)
            prim = primitive_from_rho(law, rho_m, (rng.normal(),), rng.uniform(0.05, 5.0))
            shock = hugoniot_downstream(law.model, law, prim, rho_m * rng.uniform(1.01, 3.0))
            res = rh_residual(law.model, law, shock)
            worst = max(worst, float(np.max(np.abs(res))) / residual_scale(law, shock))
            cls = classify_shock(law, shock)
            ok = (shock.plus.s == shock.minus.s and cls.compressive
                  and shock.plus.u[0] < shock.minus.u[0])
            if not ok or not cls.lax:
                lax_failures += 1
    passed = worst <= 1e-12 and lax_failures == 0
    return CheckResult("Rankine-Hugoniot construction", passed,
                       f"max rel residual {worst:.2e}, failures {lax_failures}")


def check_convexity_verdicts():
    laws = REFERENCE_LAWS
    verdicts = [
        check_convexity(laws["two_phase_polytropic"], 1.0, 0.1, 5.0, 100).convex,
        check_convexity(laws["two_phase_liquid_fraction"], 1.0, 0.1, 9.0, 100).convex,
        not check_convexity(BiFluid(1.0, 1.0, 1.0), 1.0, 0.1, 5.0, 100).convex,
    ]
    return CheckResult("convexity verdicts", all(verdicts), f"{sum(verdicts)}/3 as expected")


def check_conservation(steps=200):
    worst = 0.0
    for name in ("two_phase_polytropic", "bi_fluid"):
        law = REFERENCE_LAWS[name]
        grid = fvm.Grid((64,), (0.0,), (1.0,))
        base = base_state(law, u=0.5)
        f = fvm.sine_perturbation(grid, law.model, law, base, 0.05)
        t0 = f.totals()
        dt = fvm.cfl_dt(f, 0.45)
        for _ in range(steps):
            f = fvm.step(f, dt)
        t1 = f.totals()
        for a, b in zip(t0, t1):
            worst = max(worst, abs(b - a) / abs(a))
    return CheckResult("periodic conservation", worst <= 1e-12, f"max rel drift {worst:.2e}")


def base_state(law, u=0.0):
    """``m = n = 1`` at velocity ``u`` (1D)."""
    rho = 1.0 if law.model is ModelKind.LIQUID_GAS else 2.0
    return conservative_from_rho(law.model, rho, (u,), 1.0)


def check_form_equivalence(cells=(50, 100, 200)):
    orders = []
    for name in ("two_phase_polytropic", "bi_fluid"):
        law = REFERENCE_LAWS[name]
        base = base_state(law)
        initial = fvm.sine_initial(law.model, base, 0.01)
        errs = [fvm.cross_validate_forms(law.model, law, initial, 0.1, n).total for n in cells]
        orders.extend(fvm.observed_orders(errs))
    ok = all(0.8 <= p <= 1.2 for p in orders)
    return CheckResult("conservative vs symmetric form", ok,
                       "orders " + ", ".join(f"{p:.3f}" for p in orders))


def check_energy_identity(cells=(100, 200, 400)):
    prob = energy.LinearizedShockProblem(
        u_hat_minus=2.0, u_hat_plus=1.0,
        g=lambda t: math.sin(5.0 * t),
        t_final=0.4, half_line_length=2.0)
    res = [energy.energy_identity_residual(prob, energy.solve_entropy_perturbation(prob, n))
           for n in cells]
    ratios = [a / b for a, b in zip(res, res[1:])]
    ok = all(1.6 <= r <= 2.4 for r in ratios)
    return CheckResult("energy identity refinement", ok,
                       "ratios " + ", ".join(f"{r:.3f}" for r in ratios))


def check_vortex_triple():
    c = math.sqrt(8.0)
    t1, t2 = thresholds(c, c)
    got = [classify_jump(j, c, c).verdict for j in (9.0, 8.0, 7.0)]
    want = [Verdict.STABLE, Verdict.EXCLUDED, Verdict.NOT_IN_PROVEN_REGION]
    ok = got == want and abs(t1 - t2) <= 1e-13 * t2
    return CheckResult("vortex sheet verdicts", ok, f"t1 - t2 = {t1 - t2:.1e}")


CHECKS = (
    check_reference_values,
    check_derivatives,
    check_symbols,
    check_shocks,
    check_convexity_verdicts,
    check_conservation,
    check_form_equivalence,
    check_energy_identity,
    check_vortex_triple,
)


def run_selftest():
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failing check
            results.append(CheckResult(check.__name__, False, f"raised {exc!r}"))
    return results
