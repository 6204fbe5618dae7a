"""Planar shock waves: jump-condition residuals, Hugoniot construction, classification.

The front is ``x1 = phi(t, x')`` with ``N = (1, -phi_2, -phi_3)`` and
``tau_i`` the tangent vectors; the sides are ``minus`` (``x1 < phi``)
and ``plus`` (``x1 > phi``).  Jumps are ``[g] = g_plus - g_minus``.
Mass fluxes are ``rho (u_N - phi_t)`` with ``rho = n`` for the
liquid-gas model and ``rho = m + n`` for the bi-fluid model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .eos import ModelKind, check_model, pressure_rho_s, sound_speed, validate_rho_s
from .errors import DomainError, RarefactionBranchError
from .state import PrimitiveState

SHOCK_FLUX_RTOL = 1e-12


@dataclass(frozen=True)
class FrontGeometry:
    """Front speed ``phi_t`` and tangential slopes of ``x1 = phi(t, x2, x3)``."""

    phi_t: float
    phi_x2: float = 0.0
    phi_x3: float = 0.0

    def normal(self, dim):
        return np.array([1.0, -self.phi_x2, -self.phi_x3][:dim])

    def tangents(self, dim):
        t1 = [self.phi_x2, 1.0, 0.0][:dim]
        t2 = [self.phi_x3, 0.0, 1.0][:dim]
        return [np.array(t) for t in (t1, t2)[: dim - 1]]

    @property
    def is_planar(self):
        return self.phi_x2 == 0.0 and self.phi_x3 == 0.0


@dataclass(frozen=True)
class ShockClassification:
    is_shock: bool
    compressive: bool
    lax: bool
    mach_minus: float
    mach_plus: float


@dataclass(frozen=True)
class ShockSolution:
    minus: PrimitiveState
    plus: PrimitiveState
    sigma: float
    j_flux: float
    geometry: FrontGeometry
    classification: ShockClassification | None = field(default=None, compare=False)
    x0: float = 0.0


def _masses(model, prim):
    rho, s = prim.rho, prim.s
    if model is ModelKind.LIQUID_GAS:
        return s * rho, rho
    return rho * s / (1.0 + s), rho / (1.0 + s)


def _check_pair(law, shock):
    if shock.minus.dim != shock.plus.dim:
        raise DomainError("shock sides have different dimensions")
    for side in (shock.minus, shock.plus):
        report = validate_rho_s(law, side.rho, side.s)
        if not report:
            raise DomainError(f"shock state: {report.reason.value}", report)


def _normal_data(shock):
    d = shock.minus.dim
    nvec = shock.geometry.normal(d)
    un_m = float(np.dot(shock.minus.u, nvec))
    un_p = float(np.dot(shock.plus.u, nvec))
    return nvec, un_m, un_p


def rh_residual(model, law, shock):
    """Left-hand sides of the full jump conditions at the given states.

    Components: the two partial mass-flux jumps (``m`` then ``n``),
    ``j [u_N] + |N|^2 [P]`` and ``j [u_tau_i]`` for each tangent, where
    ``j`` is the total mass flux evaluated on the minus side.
    """
    model = ModelKind(model)
    check_model(law, model)
    _check_pair(law, shock)
    d = shock.minus.dim
    nvec, un_m, un_p = _normal_data(shock)
    phi_t = shock.geometry.phi_t
    m_m, n_m = _masses(model, shock.minus)
    m_p, n_p = _masses(model, shock.plus)
    p_m = law.p_rho_s(shock.minus.rho, shock.minus.s)
    p_p = law.p_rho_s(shock.plus.rho, shock.plus.s)
    j = shock.minus.rho * (un_m - phi_t)
    res = [
        m_p * (un_p - phi_t) - m_m * (un_m - phi_t),
        n_p * (un_p - phi_t) - n_m * (un_m - phi_t),
        j * (un_p - un_m) + float(nvec @ nvec) * (p_p - p_m),
    ]
    for tau in shock.geometry.tangents(d):
        res.append(j * float(np.dot(shock.plus.u, tau) - np.dot(shock.minus.u, tau)))
    return np.array(res)


def rh_residual_reduced(model, law, shock):
    """Residuals of the reduced shock conditions.

    ``[S]``, ``[j]``, ``j [u_N] + |N|^2 [P]`` and ``[u_tau_i]``; for
    ``j != 0`` these accept exactly the pairs accepted by
    :func:`rh_residual`.
    """
    model = ModelKind(model)
    check_model(law, model)
    _check_pair(law, shock)
    d = shock.minus.dim
    nvec, un_m, un_p = _normal_data(shock)
    phi_t = shock.geometry.phi_t
    j_m = shock.minus.rho * (un_m - phi_t)
    j_p = shock.plus.rho * (un_p - phi_t)
    p_m = law.p_rho_s(shock.minus.rho, shock.minus.s)
    p_p = law.p_rho_s(shock.plus.rho, shock.plus.s)
    res = [
        shock.plus.s - shock.minus.s,
        j_p - j_m,
        j_m * (un_p - un_m) + float(nvec @ nvec) * (p_p - p_m),
    ]
    for tau in shock.geometry.tangents(d):
        res.append(float(np.dot(shock.plus.u, tau) - np.dot(shock.minus.u, tau)))
    return np.array(res)


def residual_scale(law, shock):
    """``|j| max|u_N| + |N|^2 max P``: the scale residuals are measured against."""
    nvec, un_m, un_p = _normal_data(shock)
    p_m = law.p_rho_s(shock.minus.rho, shock.minus.s)
    p_p = law.p_rho_s(shock.plus.rho, shock.plus.s)
    return abs(shock.j_flux) * max(abs(un_m), abs(un_p)) + float(nvec @ nvec) * max(p_m, p_p)


def classify_shock(law, shock):
    """Compressivity, Lax property and relative Mach numbers of a shock.

    Orientation follows the mass flux: for ``j > 0`` fluid crosses from
    the minus side to the plus side, so the minus side is ahead of the
    shock.  A shock is compressive when density increases along the
    mass flux, and Lax when the relative flow is supersonic ahead and
    subsonic behind.
    """
    nvec, un_m, un_p = _normal_data(shock)
    nn = float(np.linalg.norm(nvec))
    sigma = shock.sigma
    c_m = sound_speed(law, shock.minus.rho, shock.minus.s)
    c_p = sound_speed(law, shock.plus.rho, shock.plus.s)
    mach_m = abs(un_m - sigma) / (c_m * nn)
    mach_p = abs(un_p - sigma) / (c_p * nn)
    j = shock.j_flux
    scale = max(shock.minus.rho, shock.plus.rho) * max(c_m, c_p)
    is_shock = abs(j) > SHOCK_FLUX_RTOL * scale
    if not is_shock:
        return ShockClassification(False, False, False, mach_m, mach_p)
    jump_rho = shock.plus.rho - shock.minus.rho
    compressive = math.copysign(1.0, j) * jump_rho > 0.0
    if j > 0:
        mach_ahead, mach_behind = mach_m, mach_p
    else:
        mach_ahead, mach_behind = mach_p, mach_m
    lax = mach_ahead > 1.0 and mach_behind < 1.0
    return ShockClassification(True, compressive, lax, mach_m, mach_p)


def hugoniot_downstream(model, law, upstream, rho_plus, flux_sign=+1):
    """Shock connecting ``upstream`` (minus side) to density ``rho_plus``.

    The entropy ratio is continuous across the shock, so the plus state
    is ``(rho_plus, S_minus)``; eliminating the front speed gives
    ``j**2 = -[P] / [1/rho]``.  ``flux_sign`` picks the branch of ``j``.
    Tangential velocity is carried over unchanged.

    Raises
    ------
    RarefactionBranchError
        If ``-[P]/[1/rho]`` is not positive (no shock joins the pair).
    """
    model = ModelKind(model)
    check_model(law, model)
    sign = _parse_sign(flux_sign)
    rho_m = upstream.rho
    s = upstream.s
    p_m = pressure_rho_s(law, rho_m, s)
    p_p = pressure_rho_s(law, rho_plus, s)
    dv = 1.0 / rho_plus - 1.0 / rho_m
    j2 = -(p_p - p_m) / dv if dv != 0.0 else math.nan
    if not j2 > 0.0:
        raise RarefactionBranchError(
            f"rarefaction-branch: no shock joins rho={rho_m!r} to rho={rho_plus!r}")
    j = sign * math.sqrt(j2)
    un_m = upstream.u[0]
    sigma = un_m - j / rho_m
    un_p = sigma + j / rho_plus
    minus = replace(upstream, p=p_m)
    plus = PrimitiveState(p_p, (un_p,) + upstream.u[1:], s, rho_plus)
    shock = ShockSolution(minus, plus, sigma, j, FrontGeometry(sigma))
    return replace(shock, classification=classify_shock(law, shock))


def _parse_sign(flux_sign):
    if flux_sign in (+1, "+", "pos"):
        return 1.0
    if flux_sign in (-1, "-", "neg"):
        return -1.0
    raise ValueError(f"flux_sign must be +/-, got {flux_sign!r}")


def hugoniot_locus(model, law, upstream, rho_plus_values, flux_sign=+1):
    """Shocks from ``upstream`` for each density in ``rho_plus_values``."""
    return [hugoniot_downstream(model, law, upstream, r, flux_sign) for r in rho_plus_values]


def exact_shock_solution(shock, x, t):
    """Piecewise-constant traveling-wave state at ``(x, t)``."""
    x1 = float(np.atleast_1d(x)[0])
    if x1 - shock.sigma * t < shock.x0:
        return shock.minus
    return shock.plus
