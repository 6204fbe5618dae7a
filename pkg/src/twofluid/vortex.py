"""Vortex sheets: boundary conditions and the 2D supersonic stability test."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .eos import (
    ModelKind,
    TwoPhasePolytropic,
    check_model,
    validate_masses,
    validate_rho_s,
)
from .errors import DomainError

DEFAULT_EQUALITY_RTOL = 1e-9


class Verdict(str, enum.Enum):
    STABLE = "Stable"
    EXCLUDED = "Excluded"
    NOT_IN_PROVEN_REGION = "NotInProvenRegion"


@dataclass(frozen=True)
class VortexSheetVerdict:
    verdict: Verdict
    t1: float
    t2: float
    jump_u2: float
    c_plus: float
    c_minus: float


def _sound_speed(law, prim):
    report = validate_rho_s(law, prim.rho, prim.s)
    if not report:
        raise DomainError(f"vortex sheet state: {report.reason.value}", report)
    return math.sqrt(law.dp_drho(prim.rho, prim.s))


def vortex_sheet_residual(model, law, minus, plus, geometry):
    """``(max_pm |u_N - phi_t|, |[P]|)``; both vanish on a vortex sheet."""
    check_model(law, ModelKind(model))
    _sound_speed(law, minus)
    _sound_speed(law, plus)
    nvec = geometry.normal(minus.dim)
    un_m = float(np.dot(minus.u, nvec))
    un_p = float(np.dot(plus.u, nvec))
    kinematic = max(abs(un_p - geometry.phi_t), abs(un_m - geometry.phi_t))
    p_m = law.p_rho_s(minus.rho, minus.s)
    p_p = law.p_rho_s(plus.rho, plus.s)
    return kinematic, abs(p_p - p_m)


def thresholds(c_minus, c_plus):
    """The two critical tangential jumps for sound speeds ``c_minus``, ``c_plus``."""
    t1 = (c_plus ** (2.0 / 3.0) + c_minus ** (2.0 / 3.0)) ** 1.5
    t2 = math.sqrt(2.0) * (c_plus + c_minus)
    return t1, t2


def classify_jump(jump_u2, c_minus, c_plus, equality_tolerance=None):
    t1, t2 = thresholds(c_minus, c_plus)
    tol = DEFAULT_EQUALITY_RTOL * t2 if equality_tolerance is None else equality_tolerance
    if abs(jump_u2 - t2) <= tol:
        verdict = Verdict.EXCLUDED
    elif jump_u2 > t1:
        verdict = Verdict.STABLE
    else:
        verdict = Verdict.NOT_IN_PROVEN_REGION
    return VortexSheetVerdict(verdict, t1, t2, jump_u2, c_plus, c_minus)


def supersonic_condition(law, minus, plus, equality_tolerance=None):
    """Classify a 2D vortex sheet against the supersonic stability condition.

    Stable when ``|[u2]| > (c+^(2/3) + c-^(2/3))^(3/2)`` and ``|[u2]|`` is
    not the excluded value ``sqrt(2) (c+ + c-)``.  Below the first
    threshold no stability result is available, hence the verdict
    ``NotInProvenRegion`` rather than "unstable".  The tolerance for the
    excluded value defaults to ``1e-9 * sqrt(2) (c+ + c-)``.
    """
    if minus.dim != 2 or plus.dim != 2:
        raise DomainError("supersonic_condition needs 2D states")
    c_m = _sound_speed(law, minus)
    c_p = _sound_speed(law, plus)
    jump = abs(plus.u[1] - minus.u[1])
    return classify_jump(jump, c_m, c_p, equality_tolerance)


def sound_speed_mn(law, m, n, form="direct"):
    """Sound speed of the polytropic liquid-gas law in terms of ``(m, n)``.

    ``form="direct"`` uses ``sqrt(gamma (gamma-1) (m+n)**gamma / n)``;
    ``form="pn"`` uses ``sqrt((1 + m/n) dP/dn)``.
    """
    if not isinstance(law, TwoPhasePolytropic):
        raise DomainError("sound_speed_mn is defined for the two_phase_polytropic law only")
    report = validate_masses(law, m, n)
    if not report:
        raise DomainError(f"sound_speed_mn: {report.reason.value}", report)
    g = law.gamma
    if form == "direct":
        return math.sqrt(g * (g - 1.0) * (m + n) ** g / n)
    if form == "pn":
        p_n = g * (g - 1.0) * (m + n) ** (g - 1.0)
        return math.sqrt((1.0 + m / n) * p_n)
    raise ValueError(f"unknown form {form!r}")


def sound_speeds_mn(law, m_minus, n_minus, m_plus, n_plus):
    return sound_speed_mn(law, m_minus, n_minus), sound_speed_mn(law, m_plus, n_plus)


# Log-entropy bookkeeping for the polytropic law: s = ln(S + 1) turns
# (gamma-1) rho^g (S+1)^g into (gamma-1) rho^g exp(g s).

def log_entropy(s_ratio):
    return math.log1p(s_ratio)


def pressure_log_entropy(law, rho, s_log):
    g = law.gamma
    return (g - 1.0) * rho**g * math.exp(g * s_log)


def sound_speed_log_entropy(law, rho, s_log):
    return math.sqrt(law.gamma * pressure_log_entropy(law, rho, s_log) / rho)
