import math

import numpy as np
import pytest

from twofluid import fvm
from twofluid.config import format_float
from twofluid.eos import ModelKind
from twofluid.errors import ConfigurationError, DomainError, PositivityError
from twofluid.rankine_hugoniot import hugoniot_downstream
from twofluid.selftest import REFERENCE_LAWS, base_state
from twofluid.state import ConservativeState, primitive_from_rho

POLY = REFERENCE_LAWS["two_phase_polytropic"]
BF = REFERENCE_LAWS["bi_fluid"]
LG = ModelKind.LIQUID_GAS
BI = ModelKind.BI_FLUID


@pytest.mark.parametrize("model, law, w, expected", [
    (LG, POLY, ConservativeState(1.0, 1.0, (0.0,)), [0.0, 0.0, 4.0]),
    (LG, POLY, ConservativeState(1.0, 1.0, (1.0,)), [1.0, 1.0, 5.0]),
    (BI, BF, ConservativeState(1.0, 1.0, (2.0,)), [1.0, 1.0, 4.0]),
])
def test_physical_flux_examples(model, law, w, expected):
    assert np.array_equal(fvm.physical_flux(model, law, w), expected)


def test_physical_flux_2d_axes():
    w = ConservativeState(1.0, 1.0, (1.0, 2.0))
    assert np.allclose(fvm.physical_flux(LG, POLY, w, axis=1), [2.0, 2.0, 2.0, 4.0 + 4.0])


def test_rusanov_consistency_and_symmetry():
    w = ConservativeState(0.7, 1.3, (0.4, -0.2))
    for axis in (0, 1):
        assert np.array_equal(fvm.rusanov_flux(LG, POLY, w, w, axis),
                              fvm.physical_flux(LG, POLY, w, axis))
    left = ConservativeState(1.0, 1.0, (0.5,))
    right = ConservativeState(1.0, 1.0, (-0.5,))
    flux = fvm.rusanov_flux(LG, POLY, left, right)
    assert flux[0] == 0.0 and flux[1] == 0.0


def test_invalid_state_flux_raises():
    with pytest.raises(DomainError):
        fvm.physical_flux(LG, POLY, ConservativeState(-1.0, 1.0, (0.0,)))


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        fvm.Grid((0,), (0.0,), (1.0,))
    with pytest.raises(ConfigurationError):
        fvm.Grid((4,), (1.0,), (0.0,))
    with pytest.raises(ConfigurationError):
        fvm.Grid((4, 4, 4), (0, 0, 0), (1, 1, 1))
    grid = fvm.Grid((4, 2), (0.0, 0.0), (1.0, 2.0))
    assert grid.spacing == (0.25, 1.0) and grid.cell_volume == 0.25


def test_field_validation_names_cell():
    grid = fvm.Grid((3,), (0.0,), (1.0,))
    w = np.ones((3, 3))
    w[0, 2] = -1.0
    with pytest.raises(PositivityError) as info:
        fvm.Field(w, grid, LG, POLY)
    assert info.value.cell == (2,)
    with pytest.raises(ConfigurationError):
        fvm.Field(np.ones((3, 3)), grid, LG, POLY, boundary="reflect")
    with pytest.raises(ConfigurationError):
        fvm.Field(np.ones((3, 3)), grid, BI, POLY)


def test_cfl_dt():
    one = fvm.constant_field(fvm.Grid((1,), (0.0,), (0.01,)), LG, POLY,
                             ConservativeState(1.0, 1.0, (0.0,)))
    assert fvm.cfl_dt(one, 0.45) == pytest.approx(0.45 * 0.01 / math.sqrt(8.0), rel=1e-15)
    assert fvm.cfl_dt(one, 0.0) == 0.0
    coarse = fvm.constant_field(fvm.Grid((50,), (0.0,), (1.0,)), LG, POLY,
                                ConservativeState(1.0, 1.0, (0.3,)))
    fine = fvm.constant_field(fvm.Grid((100,), (0.0,), (1.0,)), LG, POLY,
                              ConservativeState(1.0, 1.0, (0.3,)))
    assert fvm.cfl_dt(fine, 0.45) == pytest.approx(0.5 * fvm.cfl_dt(coarse, 0.45), rel=1e-15)


@pytest.mark.parametrize("boundary", ["periodic", "outflow"])
def test_constant_field_is_preserved(boundary):
    grid = fvm.Grid((8, 5), (0.0, 0.0), (1.0, 1.0))
    f = fvm.constant_field(grid, BI, BF, ConservativeState(0.5, 1.5, (0.2, -0.4)), boundary)
    g = fvm.step(f, fvm.cfl_dt(f, 0.45))
    assert np.allclose(g.w, f.w, rtol=1e-15, atol=1e-15)


def test_positivity_failure_aborts():
    grid = fvm.Grid((20,), (0.0,), (1.0,))
    f = fvm.sine_perturbation(grid, LG, POLY, ConservativeState(1.0, 1.0, (0.0,)), 0.5)
    with pytest.raises(PositivityError, match="cell"):
        fvm.advance(f, 1.0, cfl=5.0)


@pytest.mark.parametrize("model, law", [(LG, POLY), (BI, BF)])
def test_periodic_conservation_2d(model, law):
    grid = fvm.Grid((24, 16), (0.0, 0.0), (1.0, 1.0))
    base = conservative_at_rest(model, law, (0.3, -0.2))
    f = fvm.sine_perturbation(grid, model, law, base, 0.05, boundary="periodic")
    before = f.totals()
    result = fvm.advance(f, 0.05, 0.4)
    after = result.final.totals()
    for a, b in zip(before, after):
        assert abs(b - a) <= 1e-12 * abs(a)


def conservative_at_rest(model, law, u):
    rho = 1.0 if model is LG else 2.0
    from twofluid.state import conservative_from_rho
    return conservative_from_rho(model, rho, u, 1.0)


@pytest.mark.parametrize("model, law", [(LG, POLY), (BI, BF)])
def test_entropy_is_transported(model, law):
    # pressure-balanced entropy wave: P, u constant, the exact solution is a translation
    u0 = 0.5
    errors = []
    for cells in (100, 200, 400):
        grid = fvm.Grid((cells,), (0.0,), (1.0,))
        x = grid.centers(0)
        m, n = _contact_masses(model, x)
        rho = n if model is LG else m + n
        f = fvm.Field(np.stack([m, n, rho * u0]), grid, model, law, "periodic")
        f = fvm.advance(f, 0.4, 0.45).final
        _, u, s, p = f.primitives()
        m_ex, n_ex = _contact_masses(model, x - u0 * 0.4)
        errors.append(np.max(np.abs(s - m_ex / n_ex)))
        if model is LG:
            # m + n is advected linearly, so the pressure balance is exact
            assert np.allclose(u[0], u0, rtol=1e-12)
    orders = fvm.observed_orders(errors)
    assert all(0.8 <= p <= 1.2 for p in orders)


def _contact_masses(model, x):
    bump = 0.2 * np.sin(2 * np.pi * x)
    if model is LG:
        # P depends on m + n only
        n = 1.0 + bump
        return 2.0 - n, n
    # m + n**2 = 2 keeps m^1 + n^2 constant
    n = 1.0 + 0.5 * bump
    return 2.0 - n**2, n


def test_worked_shock_front_and_plateaus():
    up = primitive_from_rho(POLY, 1.0, (0.0,), 1.0)
    shock = hugoniot_downstream(LG, POLY, up, 2.0)
    grid = fvm.Grid((400,), (-2.0,), (2.0,))
    f0 = fvm.shock_field(grid, LG, POLY, shock)
    t = 0.05
    f = fvm.advance(f0, t, 0.45).final
    dx = grid.spacing[0]
    assert abs(fvm.front_position(f) - shock.sigma * t) <= 2.0 * dx
    rho, u, s, p = f.primitives()
    x = grid.centers(0)
    far = np.abs(x - shock.sigma * t) > 10 * dx
    exact_rho = np.where(x < shock.sigma * t, 1.0, 2.0)
    assert np.max(np.abs(rho - exact_rho)[far] / exact_rho[far]) < 0.01
    assert np.all(s == 1.0)


def test_riemann_scenario_in_2d_is_planar():
    cfg = {"model": "bi_fluid", "law": "bi_fluid", "law.alpha": "1", "law.gamma": "2",
           "law.a_coef": "1", "dim": "2", "cells": "20", "cells_y": "4", "t_final": "0.05",
           "initial": "riemann", "left": "rho=2 s=1 u=0,0", "right": "rho=1 s=1 u=0,0"}
    result, resolved = fvm.run(cfg)
    w = result.final.w
    assert np.allclose(w, w[:, :, :1], rtol=0, atol=1e-14)
    assert resolved["x_split"] == "0.5"
    assert np.all(np.abs(w[3]) < 1e-14)


def test_resolve_simulation_errors():
    base = {"model": "liquid_gas", "law": "two_phase_polytropic", "law.gamma": "2",
            "cells": "10", "t_final": "0.1", "initial": "constant", "state": "m=1 n=1 u=0"}
    assert fvm.resolve_simulation(base)["boundary"] == "outflow"
    with pytest.raises(ConfigurationError, match="unknown"):
        fvm.resolve_simulation({**base, "colour": "red"})
    with pytest.raises(ConfigurationError, match="t_final"):
        fvm.resolve_simulation({k: v for k, v in base.items() if k != "t_final"})
    with pytest.raises(ConfigurationError):
        fvm.resolve_simulation({**base, "initial": "vortex"})
    with pytest.raises(ConfigurationError, match="state"):
        fvm.resolve_simulation({k: v for k, v in base.items() if k != "state"})


def test_constant_scenario_has_no_drift():
    cfg = {"model": "liquid_gas", "law": "two_phase_polytropic", "law.gamma": "2",
           "cells": "16", "t_final": "0.2", "initial": "constant", "state": "m=1 n=1 u=0.3",
           "boundary": "periodic"}
    result, _ = fvm.run(cfg)
    first, last = result.diagnostics[0], result.diagnostics[-1]
    assert last["min_s"] == first["min_s"] == last["max_s"] == 1.0
    assert last["total_m"] == pytest.approx(first["total_m"], rel=1e-15)


def test_write_run(tmp_path):
    cfg = {"model": "liquid_gas", "law": "two_phase_polytropic", "law.gamma": "2",
           "dim": "2", "cells": "3", "cells_y": "2", "t_final": "0.01",
           "initial": "sine", "state": "m=1 n=1 u=0.1,0", "boundary": "periodic"}
    result, resolved = fvm.run(cfg)
    grid = result.final.grid
    paths = fvm.write_run(result, grid, LG, POLY, tmp_path, format_float)
    assert [p.name for p in paths] == ["snapshot_0000.csv", "snapshot_0001.csv", "diagnostics.csv"]
    lines = paths[1].read_text().splitlines()
    assert lines[0] == f"# t = {format_float(0.01)}"
    assert lines[1] == "x,y,m,n,u1,u2,p,s"
    assert len(lines) == 2 + 6
    diag = paths[2].read_text().splitlines()
    assert diag[0] == "t,total_m,total_n,total_q1,total_q2,min_s,max_s,dt"
    assert len(diag) == 1 + result.steps + 1


def test_cross_validate_uniform_state_is_exact():
    base = base_state(POLY)
    report = fvm.cross_validate_forms(LG, POLY, fvm.sine_initial(LG, base, 0.0), 0.1, 32)
    assert report.total == 0.0


def test_advance_is_deterministic():
    grid = fvm.Grid((64,), (0.0,), (1.0,))
    f = fvm.sine_perturbation(grid, BI, BF, base_state(BF, 0.2), 0.1)
    a = fvm.advance(f, 0.1, 0.45).final.w
    b = fvm.advance(f, 0.1, 0.45).final.w
    assert np.array_equal(a, b)
