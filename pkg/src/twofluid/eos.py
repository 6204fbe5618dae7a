"""Pressure laws for the liquid-gas and bi-fluid models.

Every law is available in two coordinate systems: the original mass
densities ``(m, n)`` and the symmetric-form variables ``(rho, S)`` where
``S = m / n`` is the entropy-like ratio and ``rho`` is ``n`` (liquid-gas)
or ``m + n`` (bi-fluid).  The law objects evaluate without checks and
accept numpy arrays; the module-level functions validate their inputs.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, fields

import numpy as np

from .errors import ConfigurationError, DomainError


class ModelKind(str, enum.Enum):
    """Which conservation system a state belongs to."""

    LIQUID_GAS = "liquid_gas"
    BI_FLUID = "bi_fluid"


class DomainReason(str, enum.Enum):
    OK = "Ok"
    NONPOSITIVE_MASS = "NonpositiveMass"
    NONPOSITIVE_LIQUID_MASS = "NonpositiveLiquidMass"
    DENSITY_EXCEEDS_LIQUID_DENSITY = "DensityExceedsLiquidDensity"
    NONPOSITIVE_TOTAL_DENSITY = "NonpositiveTotalDensity"


@dataclass(frozen=True)
class DomainReport:
    valid: bool
    reason: DomainReason

    def __bool__(self):
        return self.valid


_OK = DomainReport(True, DomainReason.OK)


def _scalar_or_array(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


class PressureLaw:
    """Common interface of the four pressure laws.

    Subclasses are frozen dataclasses whose fields are the law
    parameters.  ``name`` is the identifier used in config files.
    """

    name: str = ""
    model: ModelKind = ModelKind.LIQUID_GAS

    def p_mn(self, m, n):
        raise NotImplementedError

    def p_rho_s(self, rho, s):
        raise NotImplementedError

    def dp_drho(self, rho, s):
        raise NotImplementedError

    def params(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def _require(self, cond, what):
        if not cond:
            raise ConfigurationError(f"{self.name}: parameter {what}")


@dataclass(frozen=True)
class TwoPhasePolytropic(PressureLaw):
    """``P = (gamma - 1) (m + n)**gamma``."""

    gamma: float
    name = "two_phase_polytropic"
    model = ModelKind.LIQUID_GAS

    def __post_init__(self):
        self._require(self.gamma > 1.0, "gamma must exceed 1")

    def p_mn(self, m, n):
        return (self.gamma - 1.0) * (m + n) ** self.gamma

    def p_rho_s(self, rho, s):
        return (self.gamma - 1.0) * rho**self.gamma * (s + 1.0) ** self.gamma

    def dp_drho(self, rho, s):
        return self.gamma * self.p_rho_s(rho, s) / rho


@dataclass(frozen=True)
class TwoPhaseLiquidFraction(PressureLaw):
    """``P = C (m / (rho_l - n))**gamma`` with constant liquid density."""

    c_const: float
    gamma: float
    rho_l: float
    name = "two_phase_liquid_fraction"
    model = ModelKind.LIQUID_GAS

    def __post_init__(self):
        self._require(self.c_const > 0.0, "c_const must be positive")
        self._require(self.gamma > 1.0, "gamma must exceed 1")
        self._require(self.rho_l > 0.0, "rho_l must be positive")

    def p_mn(self, m, n):
        return self.c_const * (m / (self.rho_l - n)) ** self.gamma

    def p_rho_s(self, rho, s):
        return self.c_const * (rho * s / (self.rho_l - rho)) ** self.gamma

    def dp_drho(self, rho, s):
        # carries S**gamma, not S**(gamma - 1): checked against finite differences
        g = self.gamma
        return (g * self.rho_l * self.c_const * s**g * rho ** (g - 1.0)
                / (self.rho_l - rho) ** (g + 1.0))

    def dp_drho_without_s_factor(self, rho, s):
        """The derivative without the extra factor ``S``; kept for comparison."""
        g = self.gamma
        return (g * self.rho_l * self.c_const * (rho * s) ** (g - 1.0)
                / (self.rho_l - rho) ** (g + 1.0))


@dataclass(frozen=True)
class TwoPhaseSonic(PressureLaw):
    """Law built from reference sonic speeds of gas and liquid.

    ``c_const = a_l**2 / 2``, ``a0 = (a_g / a_l)**2`` and
    ``k0 = rho_0 - p_0 / a_l**2``.
    """

    c_const: float
    k0: float
    a0: float
    name = "two_phase_sonic"
    model = ModelKind.LIQUID_GAS

    def __post_init__(self):
        self._require(self.c_const > 0.0, "c_const must be positive")
        self._require(self.k0 > 0.0, "k0 must be positive")
        self._require(self.a0 > 0.0, "a0 must be positive")

    def p_mn(self, m, n):
        b = self.k0 - n - self.a0 * m
        c = 4.0 * self.k0 * self.a0 * m
        return self.c_const * (-b + np.sqrt(b * b + c))

    def _b(self, rho, s):
        return self.k0 - rho - self.a0 * rho * s

    def p_rho_s(self, rho, s):
        b = self._b(rho, s)
        return self.c_const * (-b + np.sqrt(b * b + 4.0 * self.k0 * self.a0 * rho * s))

    def dp_drho(self, rho, s):
        b = self._b(rho, s)
        root = np.sqrt(b * b + 4.0 * self.k0 * self.a0 * rho * s)
        a0s = self.a0 * s
        return self.c_const * (
            1.0 + a0s + (rho * (a0s + 1.0) ** 2 + self.k0 * (a0s - 1.0)) / root)


@dataclass(frozen=True)
class BiFluid(PressureLaw):
    """``P = m**alpha + A n**gamma`` for the bi-fluid model."""

    alpha: float
    gamma: float
    a_coef: float
    name = "bi_fluid"
    model = ModelKind.BI_FLUID

    def __post_init__(self):
        self._require(self.alpha >= 1.0, "alpha must be at least 1")
        self._require(self.gamma >= 1.0, "gamma must be at least 1")
        self._require(self.a_coef > 0.0, "a_coef must be positive")

    def p_mn(self, m, n):
        return m**self.alpha + self.a_coef * n**self.gamma

    def p_rho_s(self, rho, s):
        return (rho * s / (s + 1.0)) ** self.alpha + self.a_coef * (rho / (s + 1.0)) ** self.gamma

    def dp_drho(self, rho, s):
        return (self.alpha / rho * (rho * s / (s + 1.0)) ** self.alpha
                + self.gamma * self.a_coef / rho * (rho / (s + 1.0)) ** self.gamma)


LAWS = {cls.name: cls for cls in (TwoPhasePolytropic, TwoPhaseLiquidFraction,
                                   TwoPhaseSonic, BiFluid)}


def make_law(name, **params):
    """Build a law from its config name and keyword parameters."""
    try:
        cls = LAWS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown law {name!r}; expected one of {sorted(LAWS)}") from None
    expected = {f.name for f in fields(cls)}
    unknown = set(params) - expected
    if unknown:
        raise ConfigurationError(f"law {name}: unknown parameter(s) {sorted(unknown)}")
    missing = expected - set(params)
    if missing:
        raise ConfigurationError(f"law {name}: missing parameter(s) {sorted(missing)}")
    return cls(**{k: float(v) for k, v in params.items()})


def check_model(law, model):
    if law.model is not ModelKind(model):
        raise ConfigurationError(
            f"law {law.name} belongs to model {law.model.value}, not {ModelKind(model).value}")


# --- validation ---------------------------------------------------------

def validate_masses(law, m, n):
    """Check ``(m, n)`` against the admissible region of ``law``.

    Liquid-gas laws need ``m > 0`` and ``n > 0`` (and ``n < rho_l`` for
    the liquid-fraction law); the bi-fluid law allows ``m = 0``.  Works
    on arrays, reporting the first violated condition.
    """
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    if law.model is ModelKind.LIQUID_GAS:
        bad_m = ~(m > 0.0)
    else:
        bad_m = ~(m >= 0.0)
    if np.any(bad_m):
        return DomainReport(False, DomainReason.NONPOSITIVE_MASS)
    if np.any(~(n > 0.0)):
        return DomainReport(False, DomainReason.NONPOSITIVE_LIQUID_MASS)
    if isinstance(law, TwoPhaseLiquidFraction) and np.any(~(n < law.rho_l)):
        return DomainReport(False, DomainReason.DENSITY_EXCEEDS_LIQUID_DENSITY)
    return _OK


def validate_rho_s(law, rho, s):
    rho = np.asarray(rho, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(~(rho > 0.0)):
        return DomainReport(False, DomainReason.NONPOSITIVE_TOTAL_DENSITY)
    bad_s = ~(s > 0.0) if law.model is ModelKind.LIQUID_GAS else ~(s >= 0.0)
    if np.any(bad_s):
        return DomainReport(False, DomainReason.NONPOSITIVE_MASS)
    if isinstance(law, TwoPhaseLiquidFraction) and np.any(~(rho < law.rho_l)):
        return DomainReport(False, DomainReason.DENSITY_EXCEEDS_LIQUID_DENSITY)
    return _OK


def _raise_if_invalid(report, what):
    if not report.valid:
        raise DomainError(f"{what}: {report.reason.value}", report)


def density_mn(model, m, n):
    """``rho(m, n)``: ``n`` for the liquid-gas model, ``m + n`` for bi-fluid."""
    return n if ModelKind(model) is ModelKind.LIQUID_GAS else m + n


# --- evaluation ---------------------------------------------------------

def pressure_mn(law, m, n):
    _raise_if_invalid(validate_masses(law, m, n), "pressure_mn")
    return _scalar_or_array(law.p_mn(np.asarray(m, float), np.asarray(n, float)))


def pressure_rho_s(law, rho, s_entropy):
    _raise_if_invalid(validate_rho_s(law, rho, s_entropy), "pressure_rho_s")
    return _scalar_or_array(law.p_rho_s(np.asarray(rho, float), np.asarray(s_entropy, float)))


def dpressure_drho(law, rho, s_entropy):
    """Partial derivative of ``P(rho, S)`` in ``rho`` at fixed ``S``."""
    _raise_if_invalid(validate_rho_s(law, rho, s_entropy), "dpressure_drho")
    return _scalar_or_array(law.dp_drho(np.asarray(rho, float), np.asarray(s_entropy, float)))


def sound_speed(law, rho, s_entropy):
    return _scalar_or_array(np.sqrt(dpressure_drho(law, rho, s_entropy)))


@dataclass(frozen=True)
class ConvexityReport:
    min_second_difference: float
    noise_floor: float
    convex: bool


def check_convexity(law, s_entropy, rho_min, rho_max, samples):
    """Sign test of ``d2P/drho2`` at fixed ``S`` by centred second differences.

    The step is ``(rho_max - rho_min) / (10 * samples)``.  A minimum that
    does not clear the rounding floor of the difference quotient (as for
    a law that is linear in ``rho``) is reported as not convex.
    """
    samples = int(samples)
    if samples < 1:
        raise ValueError("samples must be a positive integer")
    if not rho_max > rho_min:
        raise DomainError("check_convexity: empty density interval")
    h = (rho_max - rho_min) / (10.0 * samples)
    rho = np.linspace(rho_min, rho_max, samples)
    _raise_if_invalid(validate_rho_s(law, np.array([rho_min - h, rho_max + h]), s_entropy),
                      "check_convexity")
    p0 = law.p_rho_s(rho, s_entropy)
    d2 = (law.p_rho_s(rho + h, s_entropy) - 2.0 * p0 + law.p_rho_s(rho - h, s_entropy)) / (h * h)
    floor = 64.0 * float(np.finfo(float).eps) * float(np.max(np.abs(p0))) / (h * h)
    dmin = float(np.min(d2))
    return ConvexityReport(dmin, floor, bool(dmin > floor))


def describe_law(law):
    """Config-file lines (``law = ...``, ``law.<param> = ...``) for ``law``."""
    lines = [f"law = {law.name}"]
    for k, v in law.params().items():
        lines.append(f"law.{k} = {v!r}")
    return lines


__all__ = [
    "ModelKind", "DomainReason", "DomainReport", "PressureLaw",
    "TwoPhasePolytropic", "TwoPhaseLiquidFraction", "TwoPhaseSonic", "BiFluid",
    "LAWS", "make_law", "check_model", "validate_masses", "validate_rho_s",
    "density_mn", "pressure_mn", "pressure_rho_s", "dpressure_drho",
    "sound_speed", "ConvexityReport", "check_convexity", "describe_law",
]
