import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twofluid.eos import (
    BiFluid,
    DomainReason,
    ModelKind,
    TwoPhaseLiquidFraction,
    TwoPhasePolytropic,
    TwoPhaseSonic,
    check_convexity,
    check_model,
    describe_law,
    dpressure_drho,
    make_law,
    pressure_mn,
    pressure_rho_s,
    sound_speed,
    validate_masses,
)
from twofluid.errors import ConfigurationError, DomainError

POLY = TwoPhasePolytropic(gamma=2.0)
LIQ = TwoPhaseLiquidFraction(c_const=1.0, gamma=2.0, rho_l=10.0)
SONIC = TwoPhaseSonic(c_const=1.0, k0=1.0, a0=1.0)
BF = BiFluid(alpha=1.0, gamma=2.0, a_coef=1.0)


@pytest.mark.parametrize("law, m, n, expected", [
    (POLY, 1.0, 1.0, 4.0),
    (LIQ, 2.0, 1.0, (2.0 / 9.0) ** 2),
    (SONIC, 0.5, 0.5, math.sqrt(2.0)),
    (BF, 1.0, 1.0, 2.0),
])
def test_pressure_mn_reference(law, m, n, expected):
    assert pressure_mn(law, m, n) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("law, rho, s, expected", [
    (POLY, 1.0, 1.0, 4.0),
    (LIQ, 1.0, 2.0, (2.0 / 9.0) ** 2),
    (SONIC, 0.5, 1.0, math.sqrt(2.0)),
    (BF, 2.0, 1.0, 2.0),
])
def test_pressure_rho_s_reference(law, rho, s, expected):
    assert pressure_rho_s(law, rho, s) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("law, rho, s, expected", [
    (POLY, 1.0, 1.0, 8.0),
    (LIQ, 1.0, 2.0, 80.0 / 729.0),
    (SONIC, 0.5, 1.0, 2.0 + math.sqrt(2.0)),
    (BF, 2.0, 1.0, 1.5),
])
def test_dp_drho_reference(law, rho, s, expected):
    assert dpressure_drho(law, rho, s) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("law, rho, s, expected", [
    (POLY, 1.0, 1.0, math.sqrt(8.0)),
    (BF, 2.0, 1.0, math.sqrt(1.5)),
    (SONIC, 0.5, 1.0, math.sqrt(2.0 + math.sqrt(2.0))),
])
def test_sound_speed_reference(law, rho, s, expected):
    assert sound_speed(law, rho, s) == pytest.approx(expected, rel=1e-13)


def test_liquid_fraction_derivative_needs_factor_s():
    # at S = 2 the two expressions differ by exactly that factor
    assert LIQ.dp_drho(1.0, 2.0) == pytest.approx(2.0 * LIQ.dp_drho_without_s_factor(1.0, 2.0))
    assert LIQ.dp_drho(3.0, 1.0) == pytest.approx(LIQ.dp_drho_without_s_factor(3.0, 1.0))


def _fd(law, rho, s):
    h = 1e-6 * rho
    return (law.p_rho_s(rho + h, s) - law.p_rho_s(rho - h, s)) / (2.0 * h)


@pytest.mark.parametrize("law", [POLY, LIQ, SONIC, BF], ids=lambda l: l.name)
@settings(max_examples=200, deadline=None)
@given(frac=st.floats(0.01, 0.9), s=st.floats(0.05, 5.0))
def test_derivative_matches_finite_difference(law, frac, s):
    rho = 10.0 * frac if isinstance(law, TwoPhaseLiquidFraction) else 5.0 * frac
    exact = law.dp_drho(rho, s)
    assert exact > 0.0
    assert _fd(law, rho, s) == pytest.approx(exact, rel=1e-6)


@settings(max_examples=200, deadline=None)
@given(m=st.floats(0.01, 5.0), n=st.floats(0.01, 5.0))
def test_mass_and_entropy_forms_agree(m, n):
    for law in (POLY, SONIC):
        assert law.p_mn(m, n) == pytest.approx(law.p_rho_s(n, m / n), rel=1e-12)
    assert LIQ.p_mn(m, n) == pytest.approx(LIQ.p_rho_s(n, m / n), rel=1e-12)
    assert BF.p_mn(m, n) == pytest.approx(BF.p_rho_s(m + n, m / n), rel=1e-12)


def test_sonic_b_vanishes_at_reference_point():
    assert SONIC._b(0.5, 1.0) == 0.0


def test_validate_masses():
    assert validate_masses(POLY, 1.0, 1.0)
    assert validate_masses(POLY, 0.0, 1.0).reason is DomainReason.NONPOSITIVE_MASS
    assert validate_masses(BF, 0.0, 1.0).reason is DomainReason.OK
    assert validate_masses(POLY, 1.0, -1.0).reason is DomainReason.NONPOSITIVE_LIQUID_MASS
    assert validate_masses(LIQ, 1.0, 10.0).reason is DomainReason.DENSITY_EXCEEDS_LIQUID_DENSITY
    assert validate_masses(POLY, np.array([1.0, 0.0]), np.ones(2)).reason \
        is DomainReason.NONPOSITIVE_MASS


def test_evaluators_raise_on_invalid_state():
    with pytest.raises(DomainError):
        pressure_mn(POLY, 0.0, 1.0)
    with pytest.raises(DomainError):
        pressure_rho_s(LIQ, 11.0, 1.0)
    with pytest.raises(DomainError):
        sound_speed(BF, -1.0, 1.0)


def test_array_evaluation_matches_scalar():
    rho = np.array([0.5, 1.0, 2.0])
    p = pressure_rho_s(POLY, rho, 1.0)
    assert isinstance(p, np.ndarray)
    assert [pressure_rho_s(POLY, r, 1.0) for r in rho] == list(p)
    assert isinstance(pressure_rho_s(POLY, 1.0, 1.0), float)


@pytest.mark.parametrize("law, s, lo, hi, convex", [
    (POLY, 1.0, 0.1, 5.0, True),
    (LIQ, 1.0, 0.1, 9.0, True),
    (BiFluid(1.0, 1.0, 1.0), 1.0, 0.1, 5.0, False),
])
def test_convexity_examples(law, s, lo, hi, convex):
    assert check_convexity(law, s, lo, hi, 100).convex is convex


def test_convexity_rejects_bad_interval():
    with pytest.raises(DomainError):
        check_convexity(POLY, 1.0, 2.0, 1.0, 10)
    with pytest.raises(DomainError):
        check_convexity(LIQ, 1.0, 0.1, 10.0, 10)


def test_make_law_and_model():
    law = make_law("two_phase_liquid_fraction", c_const="1", gamma="2", rho_l="10")
    assert law == LIQ
    assert law.model is ModelKind.LIQUID_GAS
    assert make_law("bi_fluid", alpha=1, gamma=2, a_coef=1).model is ModelKind.BI_FLUID
    with pytest.raises(ConfigurationError):
        make_law("ideal_gas", gamma=1.4)
    with pytest.raises(ConfigurationError):
        make_law("two_phase_polytropic")
    with pytest.raises(ConfigurationError):
        make_law("two_phase_polytropic", gamma=2, extra=1)
    with pytest.raises(ConfigurationError):
        check_model(BF, ModelKind.LIQUID_GAS)


@pytest.mark.parametrize("bad", [
    lambda: TwoPhasePolytropic(gamma=1.0),
    lambda: TwoPhaseLiquidFraction(c_const=-1.0, gamma=2.0, rho_l=10.0),
    lambda: TwoPhaseSonic(c_const=1.0, k0=0.0, a0=1.0),
    lambda: BiFluid(alpha=0.5, gamma=2.0, a_coef=1.0),
])
def test_invalid_parameters_rejected(bad):
    with pytest.raises(ConfigurationError):
        bad()


def test_describe_law_round_trips():
    lines = describe_law(LIQ)
    mapping = dict(line.split(" = ") for line in lines)
    name = mapping.pop("law")
    assert make_law(name, **{k[4:]: v for k, v in mapping.items()}) == LIQ
