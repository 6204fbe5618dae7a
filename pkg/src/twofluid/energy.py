"""Linearized entropy perturbation across a planar shock.

Two half-lines meet at the front ``x1 = 0``.  On each side the
perturbation is transported with the frozen normal velocity,

    dS-/dt + u- dS-/dx = f-   on (-L, 0),
    dS+/dt + u+ dS+/dx = f+   on (0, L),

coupled by the jump ``S+(t, 0) - S-(t, 0) = g(t)``.  With ``u- > u+ > 0``
the front is an outflow boundary for the minus side and an inflow
boundary for the plus side, which receives ``S- + g``.

Both sides use first-order upwind differences on cell averages.  The
energy ``I(t) = ||S-||^2 + ||S+||^2`` then obeys

    I(t) - int_0^t ([u] a^2 + 2 u+ a g + u+ g^2) ds = I(0) + 2 sum int int f S

up to the scheme's numerical dissipation, where ``a = S-(t, 0)``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError


def zero_source(t, x):
    return np.zeros_like(x)


def zero_boundary(t):
    return 0.0


def zero_initial(x):
    return np.zeros_like(x)


@dataclass(frozen=True)
class LinearizedShockProblem:
    u_hat_minus: float
    u_hat_plus: float
    f_minus: object = zero_source
    f_plus: object = zero_source
    g: object = zero_boundary
    s0_minus: object = zero_initial
    s0_plus: object = zero_initial
    t_final: float = 1.0
    half_line_length: float = 1.0

    @property
    def jump_u_hat(self):
        return self.u_hat_plus - self.u_hat_minus

    def scaled(self, lam):
        """Same problem with ``f``, ``g`` and the initial data multiplied by ``lam``."""
        return replace(
            self,
            f_minus=_scale2(self.f_minus, lam), f_plus=_scale2(self.f_plus, lam),
            g=_scale1(self.g, lam),
            s0_minus=_scale1(self.s0_minus, lam), s0_plus=_scale1(self.s0_plus, lam),
        )


def _scale1(fn, lam):
    return lambda a: lam * fn(a)


def _scale2(fn, lam):
    return lambda t, x: lam * fn(t, x)


@dataclass
class EntropySolution:
    """Discrete solution together with its energy bookkeeping.

    Time series have one entry per time level ``t[0] = 0 .. t[-1] = T``.
    ``boundary_integral`` and ``source_integral`` are left-endpoint
    quadratures of the boundary term and of ``2 sum int f S``.
    """

    x_minus: np.ndarray
    x_plus: np.ndarray
    dx: float
    dt: float
    t: np.ndarray
    s_minus: np.ndarray          # final time
    s_plus: np.ndarray
    trace_minus: np.ndarray      # S-(t_n, 0)
    trace_plus: np.ndarray       # S+(t_n, 0) = trace_minus + g(t_n)
    g_values: np.ndarray
    energy: np.ndarray           # I(t_n)
    boundary_integral: np.ndarray
    source_integral: np.ndarray
    l2_sq_minus: float           # int_0^T ||S-||^2 dt
    l2_sq_plus: float
    f_l2_sq_minus: float         # int_0^T ||f-||^2 dt
    f_l2_sq_plus: float
    history_minus: list = field(default_factory=list)
    history_plus: list = field(default_factory=list)

    def residual_series(self):
        return np.abs(self.energy - self.boundary_integral - self.energy[0] - self.source_integral)


def _check_configuration(prob):
    if not (prob.u_hat_minus > 0.0 and prob.u_hat_plus > 0.0):
        raise ConfigurationError(
            "both frozen normal velocities must be positive; otherwise the jump "
            "condition overdetermines an outflow side")
    if not (prob.t_final > 0.0 and prob.half_line_length > 0.0):
        raise ConfigurationError("t_final and half_line_length must be positive")


def solve_entropy_perturbation(prob, cells, cfl=0.9, keep_history=False):
    """Upwind solve of the two coupled half-line transport problems.

    ``cells`` is the number of cells on each half-line.  The far end
    ``x = -L`` is an inflow boundary fed with zero (exact while the
    data vanish near it); ``x = L`` is a pure outflow.
    """
    _check_configuration(prob)
    cells = int(cells)
    if cells < 1:
        raise ConfigurationError("cells must be positive")
    if not 0.0 < cfl <= 1.0:
        raise ConfigurationError("cfl must lie in (0, 1]")
    L = float(prob.half_line_length)
    dx = L / cells
    x_minus = -L + (np.arange(cells) + 0.5) * dx
    x_plus = (np.arange(cells) + 0.5) * dx
    um, up = float(prob.u_hat_minus), float(prob.u_hat_plus)
    nsteps = max(1, math.ceil(prob.t_final / (cfl * dx / max(um, up)) - 1e-9))
    dt = prob.t_final / nsteps
    nu_m, nu_p = um * dt / dx, up * dt / dx

    sm = np.asarray(prob.s0_minus(x_minus), dtype=float).copy()
    sp = np.asarray(prob.s0_plus(x_plus), dtype=float).copy()

    t = np.arange(nsteps + 1) * dt
    t[-1] = prob.t_final
    energy = np.empty(nsteps + 1)
    bint = np.zeros(nsteps + 1)
    sint = np.zeros(nsteps + 1)
    tr_m = np.empty(nsteps + 1)
    tr_p = np.empty(nsteps + 1)
    gv = np.empty(nsteps + 1)
    l2m = l2p = fm2 = fp2 = 0.0
    hist_m, hist_p = [], []
    jump = up - um

    for k in range(nsteps + 1):
        tk = t[k]
        gk = float(prob.g(tk))
        a = sm[-1]
        tr_m[k] = a
        tr_p[k] = a + gk
        gv[k] = gk
        energy[k] = dx * (np.dot(sm, sm) + np.dot(sp, sp))
        if keep_history:
            hist_m.append(sm.copy())
            hist_p.append(sp.copy())
        if k == nsteps:
            break
        fm = np.asarray(prob.f_minus(tk, x_minus), dtype=float)
        fp = np.asarray(prob.f_plus(tk, x_plus), dtype=float)
        bint[k + 1] = bint[k] + dt * (jump * a * a + 2.0 * up * a * gk + up * gk * gk)
        sint[k + 1] = sint[k] + 2.0 * dt * dx * (np.dot(fm, sm) + np.dot(fp, sp))
        l2m += dt * dx * np.dot(sm, sm)
        l2p += dt * dx * np.dot(sp, sp)
        fm2 += dt * dx * np.dot(fm, fm)
        fp2 += dt * dx * np.dot(fp, fp)

        new_m = np.empty_like(sm)
        new_m[0] = sm[0] - nu_m * sm[0]
        new_m[1:] = sm[1:] - nu_m * (sm[1:] - sm[:-1])
        new_m += dt * fm
        new_p = np.empty_like(sp)
        new_p[0] = sp[0] - nu_p * (sp[0] - (a + gk))
        new_p[1:] = sp[1:] - nu_p * (sp[1:] - sp[:-1])
        new_p += dt * fp
        sm, sp = new_m, new_p

    return EntropySolution(
        x_minus=x_minus, x_plus=x_plus, dx=dx, dt=dt, t=t,
        s_minus=sm, s_plus=sp, trace_minus=tr_m, trace_plus=tr_p, g_values=gv,
        energy=energy, boundary_integral=bint, source_integral=sint,
        l2_sq_minus=l2m, l2_sq_plus=l2p, f_l2_sq_minus=fm2, f_l2_sq_plus=fp2,
        history_minus=hist_m, history_plus=hist_p,
    )


def energy_identity_residual(prob, solution):
    """Defect of the energy identity at the final time."""
    return float(solution.residual_series()[-1])


@dataclass(frozen=True)
class AprioriReport:
    lhs: float
    rhs: float
    ratio: float
    bound: float


def apriori_bound(prob):
    """Constant of the a priori estimate from a Gronwall argument.

    With ``delta = -[u]`` and ``K = u+ + 2 u+^2 / delta`` the energy
    identity gives ``LHS <= (sqrt(2 T e^T) + 2 sqrt(2 e^T / delta)) max(1, sqrt K) RHS + ||g||``.
    """
    delta = -prob.jump_u_hat
    if not delta > 0.0:
        raise ConfigurationError("a priori bound needs [u] < 0 (compressive shock)")
    T = prob.t_final
    up = prob.u_hat_plus
    k = up + 2.0 * up * up / delta
    et = math.exp(T)
    return (math.sqrt(2.0 * T * et) + 2.0 * math.sqrt(2.0 * et / delta)) * max(1.0, math.sqrt(k)) + 1.0


def apriori_estimate_check(prob, solution):
    """Ratio of the discrete norms on both sides of the a priori estimate.

    ``LHS = sum_pm (||S||_{L2(time x space)} + ||S(., 0)||_{L2(time)})`` and
    ``RHS = sum_pm (||S(0)|| + ||f||) + ||g||``; the ratio of zero data is 0.
    """
    if not prob.jump_u_hat < 0.0:
        raise ConfigurationError("a priori estimate needs [u] < 0 (compressive shock)")
    dt, dx = solution.dt, solution.dx
    tm = solution.trace_minus[:-1]
    tp = solution.trace_plus[:-1]
    gv = solution.g_values[:-1]
    lhs = (math.sqrt(solution.l2_sq_minus) + math.sqrt(solution.l2_sq_plus)
           + math.sqrt(dt * np.dot(tm, tm)) + math.sqrt(dt * np.dot(tp, tp)))
    s0m = np.asarray(prob.s0_minus(solution.x_minus), dtype=float)
    s0p = np.asarray(prob.s0_plus(solution.x_plus), dtype=float)
    rhs = (math.sqrt(dx * np.dot(s0m, s0m)) + math.sqrt(dx * np.dot(s0p, s0p))
           + math.sqrt(solution.f_l2_sq_minus) + math.sqrt(solution.f_l2_sq_plus)
           + math.sqrt(dt * np.dot(gv, gv)))
    ratio = 0.0 if rhs == 0.0 else lhs / rhs
    return AprioriReport(lhs, rhs, ratio, apriori_bound(prob))


# --- data expressions for config files ---------------------------------

_EXPR = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")


def parse_expression(text):
    """Compile a data expression into a function of ``(t, x)``.

    Recognised forms::

        zero | 0
        sine(a, k, w, phase)     a sin(k x + w t + phase)
        gaussian(a, x0, width)   a exp(-((x - x0) / width)^2)
        poly_x(c0, c1, ...)      sum c_i x^i
        poly_t(c0, c1, ...)      sum c_i t^i
    """
    text = text.strip()
    if text in ("0", "zero"):
        return lambda t, x: np.zeros_like(np.asarray(x, dtype=float)) + 0.0
    match = _EXPR.match(text)
    if not match or match.group(2) is None:
        raise ConfigurationError(f"cannot parse data expression {text!r}")
    name, args = match.group(1), match.group(2)
    try:
        vals = [float(v) for v in args.split(",")] if args.strip() else []
    except ValueError:
        raise ConfigurationError(f"non-numeric argument in {text!r}") from None
    if name == "sine" and len(vals) == 4:
        a, k, w, ph = vals
        return lambda t, x: a * np.sin(k * np.asarray(x, dtype=float) + w * t + ph)
    if name == "gaussian" and len(vals) == 3:
        a, x0, width = vals
        return lambda t, x: a * np.exp(-(((np.asarray(x, dtype=float) - x0) / width) ** 2))
    if name == "poly_x" and vals:
        coeffs = vals[::-1]
        return lambda t, x: np.polyval(coeffs, np.asarray(x, dtype=float))
    if name == "poly_t" and vals:
        coeffs = vals[::-1]
        return lambda t, x: np.zeros_like(np.asarray(x, dtype=float)) + np.polyval(coeffs, t)
    raise ConfigurationError(f"unknown expression or wrong arity: {text!r}")


def problem_from_config(cfg):
    """Build a problem from a mapping of string values (config file keys)."""
    def fx(key):
        return parse_expression(cfg.get(key, "zero"))

    f_minus, f_plus = fx("f_minus"), fx("f_plus")
    g_expr = fx("g")
    s0m, s0p = fx("s0_minus"), fx("s0_plus")
    return LinearizedShockProblem(
        u_hat_minus=float(cfg["u_hat_minus"]),
        u_hat_plus=float(cfg["u_hat_plus"]),
        f_minus=f_minus,
        f_plus=f_plus,
        g=lambda t: float(g_expr(t, 0.0)),
        s0_minus=lambda x: s0m(0.0, x),
        s0_plus=lambda x: s0p(0.0, x),
        t_final=float(cfg.get("t_final", "1.0")),
        half_line_length=float(cfg.get("half_line_length", "1.0")),
    )
