"""Conservative and primitive state representations and conversions.

Conservative variables are the evolved quantities ``(m, n, q)`` of the
two conservation systems; ``q`` is the momentum ``n u`` (liquid-gas) or
``(m + n) u`` (bi-fluid).  Primitive variables ``(P, u, S)`` are the
unknowns of the symmetric form, with ``rho`` cached alongside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eos import (
    ModelKind,
    TwoPhaseLiquidFraction,
    check_model,
    density_mn,
    validate_masses,
    validate_rho_s,
)
from .errors import ConvergenceError, DomainError, NoBracketError

RHO_FLOOR = 1e-12
BISECTION_WIDTH = 1e-8
NEWTON_RTOL = 1e-13
MAX_ITER = 200


def _as_vector(u):
    if isinstance(u, (int, float)):
        u = (u,)
    u = tuple(float(x) for x in u)
    if len(u) not in (1, 2, 3):
        raise DomainError(f"velocity must have 1, 2 or 3 components, got {len(u)}")
    return u


@dataclass(frozen=True)
class ConservativeState:
    m: float
    n: float
    q: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "n", float(self.n))
        object.__setattr__(self, "q", _as_vector(self.q))

    @property
    def dim(self):
        return len(self.q)


@dataclass(frozen=True)
class PrimitiveState:
    """Pressure ``p``, velocity ``u``, entropy-like ratio ``s`` and density ``rho``."""

    p: float
    u: tuple
    s: float
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "u", _as_vector(self.u))

    @property
    def dim(self):
        return len(self.u)


def primitive_from_rho(law, rho, u, s):
    """Primitive state with the pressure evaluated from ``(rho, s)``."""
    report = validate_rho_s(law, rho, s)
    if not report:
        raise DomainError(f"primitive state: {report.reason.value}", report)
    return PrimitiveState(law.p_rho_s(float(rho), float(s)), u, s, rho)


def to_primitive(model, law, w):
    """``(m, n, q) -> (P, u, S)`` with ``S = m/n`` and ``u = q/rho``."""
    model = ModelKind(model)
    check_model(law, model)
    report = validate_masses(law, w.m, w.n)
    if not report:
        raise DomainError(f"to_primitive: {report.reason.value}", report)
    rho = density_mn(model, w.m, w.n)
    s = w.m / w.n
    u = tuple(qi / rho for qi in w.q)
    return PrimitiveState(law.p_rho_s(rho, s), u, s, rho)


def density_from_pressure(law, p_target, s):
    """Solve ``P(rho, s) = p_target`` for ``rho``.

    Bisection on a bracket ``[1e-12, rho_hi]`` down to a relative width
    of 1e-8, then Newton polishing with the analytic ``dP/drho`` until
    the relative residual drops below 1e-13.  ``rho_hi`` doubles from 1
    and is capped just below ``rho_l`` for the liquid-fraction law.

    Raises
    ------
    NoBracketError
        ``p_target`` is not attained on the admissible density range.
    ConvergenceError
        More than 200 iterations were needed.
    """
    p_target = float(p_target)
    s = float(s)
    cap = math.inf
    if isinstance(law, TwoPhaseLiquidFraction):
        cap = law.rho_l * (1.0 - 1e-12)
    report = validate_rho_s(law, min(1.0, cap), s)
    if not report:
        raise DomainError(f"density_from_pressure: {report.reason.value}", report)

    lo = RHO_FLOOR
    if not p_target > law.p_rho_s(lo, s):
        raise NoBracketError(f"pressure {p_target!r} is below the attainable range at S={s!r}")
    hi = min(1.0, cap)
    it = 0
    while not law.p_rho_s(hi, s) > p_target:
        if hi >= cap or hi > 1e300:
            raise NoBracketError(
                f"pressure {p_target!r} is above the attainable range at S={s!r}")
        hi = min(2.0 * hi, cap)
        it += 1
        if it >= MAX_ITER:
            raise ConvergenceError("density bracket search did not terminate")

    while hi - lo > BISECTION_WIDTH * hi:
        mid = 0.5 * (lo + hi)
        if law.p_rho_s(mid, s) > p_target:
            hi = mid
        else:
            lo = mid
        it += 1
        if it >= MAX_ITER:
            raise ConvergenceError("density bisection hit the iteration cap")

    rho = 0.5 * (lo + hi)
    while True:
        res = law.p_rho_s(rho, s) - p_target
        if abs(res) <= NEWTON_RTOL * p_target:
            return rho
        step = res / law.dp_drho(rho, s)
        new = min(max(rho - step, lo), hi)
        if abs(new - rho) <= 4.0 * math.ulp(rho):
            # no representable improvement left
            return new
        rho = new
        it += 1
        if it >= MAX_ITER:
            raise ConvergenceError(
                f"Newton polish stalled at relative residual {abs(res) / p_target:.3e}")


def conservative_from_rho(model, rho, u, s):
    """Conservative state from density, velocity and entropy ratio."""
    if ModelKind(model) is ModelKind.LIQUID_GAS:
        m, n = s * rho, rho
    else:
        n = rho / (1.0 + s)
        m = rho * s / (1.0 + s)
    return ConservativeState(m, n, tuple(rho * ui for ui in _as_vector(u)))


def to_conservative(model, law, prim):
    """Inverse of :func:`to_primitive`; ``rho`` is recovered from ``(P, S)``."""
    model = ModelKind(model)
    check_model(law, model)
    rho = density_from_pressure(law, prim.p, prim.s)
    return conservative_from_rho(model, rho, prim.u, prim.s)


def density_from_pressure_newton(law, p, s, rho_guess, max_iter=50):
    """Vectorised Newton solve of ``P(rho, s) = p`` from a nearby guess.

    Meant for time stepping, where the previous density is an excellent
    starting point; use :func:`density_from_pressure` when no guess is
    available.
    """
    rho = np.array(rho_guess, dtype=float, copy=True)
    for _ in range(max_iter):
        res = law.p_rho_s(rho, s) - p
        if np.all(np.abs(res) <= NEWTON_RTOL * np.abs(p)):
            return rho
        step = res / law.dp_drho(rho, s)
        rho = rho - step
        if np.all(np.abs(step) <= 4.0 * np.spacing(np.abs(rho))):
            return rho
    raise ConvergenceError("vectorised density Newton solve did not converge")
