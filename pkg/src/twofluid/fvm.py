"""First-order finite-volume solver for the two conservation systems.

Cell averages of ``W = (m, n, q_1, .., q_d)`` are advanced with forward
Euler and Rusanov (local Lax-Friedrichs) interface fluxes, dimension by
dimension on a uniform rectilinear grid.  Both models share the flux

    F_a(W) = (m u_a, n u_a, q u_a + P e_a),

since the momentum is ``q = rho u`` with ``rho = n`` or ``rho = m + n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .eos import ModelKind, check_model, density_mn, validate_masses
from .errors import ConfigurationError, DomainError, PositivityError
from .state import ConservativeState, density_from_pressure_newton

BOUNDARIES = ("periodic", "outflow")


@dataclass(frozen=True)
class Grid:
    cells: tuple
    lower: tuple
    upper: tuple

    def __post_init__(self):
        cells = tuple(int(c) for c in self.cells)
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if not (len(cells) == len(lower) == len(upper)) or len(cells) not in (1, 2):
            raise ConfigurationError("grid must be 1D or 2D with matching extents")
        if any(c < 1 for c in cells):
            raise ConfigurationError("cell counts must be positive")
        if any(not hi > lo for lo, hi in zip(lower, upper)):
            raise ConfigurationError("domain extents must be positive")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self):
        return len(self.cells)

    @property
    def spacing(self):
        return tuple((hi - lo) / n for lo, hi, n in zip(self.lower, self.upper, self.cells))

    @property
    def cell_volume(self):
        return math.prod(self.spacing)

    def centers(self, axis=0):
        h = self.spacing[axis]
        return self.lower[axis] + (np.arange(self.cells[axis]) + 0.5) * h

    def mesh(self):
        """Cell-centre coordinate arrays, one per axis, each of shape ``cells``."""
        return np.meshgrid(*(self.centers(a) for a in range(self.dim)), indexing="ij")


@dataclass(frozen=True)
class Field:
    """Cell averages ``w`` of shape ``(2 + d, *grid.cells)``."""

    w: np.ndarray
    grid: Grid
    model: ModelKind
    law: object
    boundary: str = "outflow"
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind(self.model))
        check_model(self.law, self.model)
        if self.boundary not in BOUNDARIES:
            raise ConfigurationError(f"boundary must be one of {BOUNDARIES}")
        expected = (2 + self.grid.dim,) + self.grid.cells
        if self.w.shape != expected:
            raise ConfigurationError(f"field shape {self.w.shape} != {expected}")
        report = validate_masses(self.law, self.w[0], self.w[1])
        if not report:
            cell = _first_bad_cell(self.model, self.law, self.w)
            raise PositivityError(f"field: {report.reason.value} in cell {cell}", cell, report)

    def totals(self):
        """Integrals of every conserved component (fixed summation order)."""
        vol = self.grid.cell_volume
        return [float(np.sum(comp)) * vol for comp in self.w]

    def primitives(self):
        return primitive_arrays(self.model, self.law, self.w)


def _first_bad_cell(model, law, w):
    bad = np.zeros(w.shape[1:], dtype=bool)
    bad |= ~(w[0] > 0.0) if model is ModelKind.LIQUID_GAS else ~(w[0] >= 0.0)
    bad |= ~(w[1] > 0.0)
    if hasattr(law, "rho_l"):
        bad |= ~(w[1] < law.rho_l)
    idx = np.argwhere(bad)
    return tuple(int(i) for i in idx[0]) if len(idx) else None


def primitive_arrays(model, law, w):
    """``(rho, u, s, p)`` arrays from conservative arrays (no validation)."""
    m, n, q = w[0], w[1], w[2:]
    rho = density_mn(model, m, n)
    u = q / rho
    s = m / n
    return rho, u, s, law.p_rho_s(rho, s)


def flux_array(model, law, w, axis):
    rho, u, s, p = primitive_arrays(model, law, w)
    ua = u[axis]
    f = np.empty_like(w)
    f[0] = w[0] * ua
    f[1] = w[1] * ua
    f[2:] = w[2:] * ua
    f[2 + axis] += p
    return f


def _wave_speed_array(model, law, w, axis):
    rho, u, s, _ = primitive_arrays(model, law, w)
    return np.abs(u[axis]) + np.sqrt(law.dp_drho(rho, s))


def rusanov_array(model, law, wl, wr, axis):
    lam = np.maximum(_wave_speed_array(model, law, wl, axis),
                     _wave_speed_array(model, law, wr, axis))
    return 0.5 * (flux_array(model, law, wl, axis) + flux_array(model, law, wr, axis)) \
        - 0.5 * lam * (wr - wl)


def _as_column(w):
    return np.array([w.m, w.n, *w.q], dtype=float)


def _check_state(model, law, w):
    model = ModelKind(model)
    check_model(law, model)
    report = validate_masses(law, w.m, w.n)
    if not report:
        raise DomainError(f"flux of invalid state: {report.reason.value}", report)
    return model


def physical_flux(model, law, w, axis=0):
    """Flux of a single :class:`ConservativeState` along ``axis`` (0 is ``x1``)."""
    model = _check_state(model, law, w)
    if not 0 <= axis < w.dim:
        raise DomainError(f"axis {axis} out of range for dimension {w.dim}")
    return flux_array(model, law, _as_column(w), axis)


def rusanov_flux(model, law, w_left, w_right, axis=0):
    model = _check_state(model, law, w_left)
    _check_state(model, law, w_right)
    if w_left.dim != w_right.dim:
        raise DomainError("left and right states have different dimensions")
    return rusanov_array(model, law, _as_column(w_left), _as_column(w_right), axis)


def cfl_dt(fieldobj, cfl):
    """``cfl * min(h) / max(|u_a| + c)`` over cells and axes."""
    rho, u, s, _ = fieldobj.primitives()
    c = np.sqrt(fieldobj.law.dp_drho(rho, s))
    lam = max(float(np.max(np.abs(u[a]) + c)) for a in range(fieldobj.grid.dim))
    return cfl * min(fieldobj.grid.spacing) / lam


def step(fieldobj, dt):
    """One forward-Euler conservative update; returns a new field.

    Raises
    ------
    PositivityError
        The update left a cell outside the admissible mass region.
    """
    w = fieldobj.w
    d = fieldobj.grid.dim
    mode = "wrap" if fieldobj.boundary == "periodic" else "edge"
    wp = np.pad(w, [(0, 0)] + [(1, 1)] * d, mode=mode)
    new = w.copy()
    for a in range(d):
        sl_l = [slice(None)] + [slice(1, -1)] * d
        sl_r = list(sl_l)
        sl_l[a + 1] = slice(0, -1)
        sl_r[a + 1] = slice(1, None)
        flux = rusanov_array(fieldobj.model, fieldobj.law, wp[tuple(sl_l)], wp[tuple(sl_r)], a)
        new -= (dt / fieldobj.grid.spacing[a]) * np.diff(flux, axis=a + 1)
    report = validate_masses(fieldobj.law, new[0], new[1])
    if not report:
        cell = _first_bad_cell(fieldobj.model, fieldobj.law, new)
        raise PositivityError(
            f"positivity failure in cell {cell}: {report.reason.value}", cell, report)
    return replace(fieldobj, w=new, t=fieldobj.t + dt)


# --- initial data --------------------------------------------------------

def field_from_states(grid, model, law, states, boundary="outflow"):
    """Field from a callable ``x -> ConservativeState`` or a list of states."""
    if callable(states):
        coords = grid.mesh()
        flat = [states(tuple(c.flat[i] for c in coords)) for i in range(coords[0].size)]
    else:
        flat = list(states)
    w = np.array([_as_column(s) for s in flat]).T.reshape((2 + grid.dim,) + grid.cells)
    return Field(w, grid, model, law, boundary)


def constant_field(grid, model, law, w_state, boundary="periodic"):
    col = _as_column(w_state)
    if w_state.dim != grid.dim:
        raise ConfigurationError("state dimension does not match the grid")
    w = np.broadcast_to(col.reshape((-1,) + (1,) * grid.dim), (len(col),) + grid.cells).copy()
    return Field(w, grid, model, law, boundary)


def sine_perturbation(grid, model, law, base, amplitude, wavenumber=1, boundary="periodic"):
    """``n -> n (1 + amplitude sin(2 pi k xi))`` with ``m`` and ``u`` held fixed.

    ``xi`` is ``x/L_x`` in 1D and ``x/L_x + y/L_y`` in 2D.
    """
    coords = grid.mesh()
    phase = sum((c - lo) / (hi - lo) for c, lo, hi in zip(coords, grid.lower, grid.upper))
    n = base.n * (1.0 + amplitude * np.sin(2.0 * math.pi * wavenumber * phase))
    m = np.full_like(n, base.m)
    rho0 = density_mn(model, base.m, base.n)
    u0 = [qi / rho0 for qi in base.q]
    rho = density_mn(model, m, n)
    w = np.stack([m, n] + [rho * ui for ui in u0])
    return Field(w, grid, model, law, boundary)


def shock_field(grid, model, law, shock, boundary="outflow"):
    """Exact traveling shock at ``t = 0`` with the front at ``shock.x0``."""
    from .state import conservative_from_rho

    wm = _as_column(conservative_from_rho(model, shock.minus.rho, shock.minus.u, shock.minus.s))
    wp = _as_column(conservative_from_rho(model, shock.plus.rho, shock.plus.u, shock.plus.s))
    x = grid.mesh()[0]
    left = (x < shock.x0)[None]
    shape = (-1,) + (1,) * grid.dim
    w = np.where(left, wm.reshape(shape), wp.reshape(shape))
    return Field(w, grid, model, law, boundary)


# --- runs ----------------------------------------------------------------

@dataclass
class RunResult:
    snapshots: list = field(default_factory=list)   # (t, w)
    diagnostics: list = field(default_factory=list)  # dict rows
    final: Field | None = None
    steps: int = 0


def diagnostics_row(fieldobj, dt):
    totals = fieldobj.totals()
    _, _, s, _ = fieldobj.primitives()
    row = {"t": fieldobj.t, "total_m": totals[0], "total_n": totals[1]}
    for a in range(fieldobj.grid.dim):
        row[f"total_q{a + 1}"] = totals[2 + a]
    row["min_s"] = float(np.min(s))
    row["max_s"] = float(np.max(s))
    row["dt"] = dt
    return row


def advance(fieldobj, t_final, cfl, snapshot_every=0, max_steps=10_000_000):
    """March ``fieldobj`` to ``t_final`` with CFL-limited steps.

    ``snapshot_every = 0`` keeps only the initial and final snapshots.
    """
    if not cfl > 0.0:
        raise ConfigurationError("cfl must be positive")
    result = RunResult()
    result.snapshots.append((fieldobj.t, fieldobj.w))
    result.diagnostics.append(diagnostics_row(fieldobj, 0.0))
    f = fieldobj
    while f.t < t_final:
        dt = cfl_dt(f, cfl)
        last = f.t + dt >= t_final
        if last:
            dt = t_final - f.t
        try:
            f = step(f, dt)
        except PositivityError as exc:
            raise PositivityError(f"at t={f.t!r}: {exc}", exc.cell, exc.report) from exc
        if last:
            f = replace(f, t=float(t_final))
        result.steps += 1
        result.diagnostics.append(diagnostics_row(f, dt))
        if last or (snapshot_every and result.steps % snapshot_every == 0):
            result.snapshots.append((f.t, f.w))
        if result.steps >= max_steps:
            raise ConfigurationError("step limit exceeded")
    result.final = f
    return result


def front_position(fieldobj, level=None):
    """Position along ``x1`` where the density first crosses ``level``.

    Defaults to the mid value between the two end densities; linear
    interpolation between neighbouring cell centres.  1D fields only.
    """
    rho, _, _, _ = fieldobj.primitives()
    x = fieldobj.grid.centers(0)
    if level is None:
        level = 0.5 * (rho[0] + rho[-1])
    side = np.sign(rho - level)
    idx = np.nonzero(side[:-1] != side[1:])[0]
    if not len(idx):
        raise DomainError("no front found")
    i = idx[0]
    return float(x[i] + (level - rho[i]) * (x[i + 1] - x[i]) / (rho[i + 1] - rho[i]))


# --- conservative vs symmetric form ------------------------------------

@dataclass(frozen=True)
class FormDiscrepancy:
    pressure: float
    velocity: float
    entropy: float
    cells: int

    @property
    def total(self):
        return max(self.pressure, self.velocity, self.entropy)


def _nonconservative_step(law, p, u, s, rho, dt, dx):
    """Characteristic upwind update of the 1D symmetric system.

    ``U = (P, u, S)`` with ``dU/dt + A dU/dx = 0``, ``A`` having
    eigenvalues ``u - c, u, u + c``; periodic neighbours.
    """
    c = np.sqrt(law.dp_drho(rho, s))
    z = rho * c

    def split(dp, du, ds):
        # amplitudes on r+- = (+-rho c, 1, 0) and r0 = (0, 0, 1)
        a_plus = 0.5 * (du + dp / z)
        a_minus = 0.5 * (du - dp / z)
        return a_plus, a_minus, ds

    back = [x - np.roll(x, 1) for x in (p, u, s)]
    fwd = [np.roll(x, -1) - x for x in (p, u, s)]
    lam = (u + c, u - c, u)
    inc_p = np.zeros_like(p)
    inc_u = np.zeros_like(u)
    inc_s = np.zeros_like(s)
    for diffs, pick in ((back, np.maximum), (fwd, np.minimum)):
        amps = split(*diffs)
        speeds = [pick(l, 0.0) for l in lam]
        inc_p += speeds[0] * amps[0] * z - speeds[1] * amps[1] * z
        inc_u += speeds[0] * amps[0] + speeds[1] * amps[1]
        inc_s += speeds[2] * amps[2]
    return p - dt / dx * inc_p, u - dt / dx * inc_u, s - dt / dx * inc_s


def cross_validate_forms(model, law, initial, t_final, cells, cfl=0.4, domain=(0.0, 1.0)):
    """Run the conservative and the symmetric nonconservative schemes side by side.

    ``initial`` maps the cell-centre array ``x`` to conservative arrays
    ``(m, n, q)`` (periodic, 1D, smooth).  Both schemes use the same fixed
    time step; the result holds the max-norm differences of ``P``, ``u``
    and ``S`` at ``t_final``.
    """
    model = ModelKind(model)
    grid = Grid((cells,), (domain[0],), (domain[1],))
    x = grid.centers(0)
    m0, n0, q0 = (np.asarray(v, dtype=float) for v in initial(x))
    w0 = np.stack([m0, n0, q0])
    fieldobj = Field(w0, grid, model, law, "periodic")
    rho, u, s, p = (np.asarray(v) for v in fieldobj.primitives())
    u = u[0].copy()
    lam = float(np.max(np.abs(u) + np.sqrt(law.dp_drho(rho, s))))
    dx = grid.spacing[0]
    nsteps = max(1, math.ceil(t_final / (cfl * dx / lam) - 1e-9))
    dt = t_final / nsteps
    for _ in range(nsteps):
        fieldobj = step(fieldobj, dt)
        p, u, s = _nonconservative_step(law, p, u, s, rho, dt, dx)
        rho = density_from_pressure_newton(law, p, s, rho)
    rho_c, u_c, s_c, p_c = fieldobj.primitives()
    return FormDiscrepancy(
        pressure=float(np.max(np.abs(p_c - p))),
        velocity=float(np.max(np.abs(u_c[0] - u))),
        entropy=float(np.max(np.abs(s_c - s))),
        cells=cells,
    )


def sine_initial(model, base, amplitude, wavenumber=1, domain=(0.0, 1.0)):
    """Initial data for :func:`cross_validate_forms`: sinusoidal ``n`` at fixed ``m``, ``u``."""
    model = ModelKind(model)
    rho0 = density_mn(model, base.m, base.n)
    u0 = base.q[0] / rho0

    def init(x):
        xi = (x - domain[0]) / (domain[1] - domain[0])
        n = base.n * (1.0 + amplitude * np.sin(2.0 * math.pi * wavenumber * xi))
        m = np.full_like(n, base.m)
        return m, n, density_mn(model, m, n) * u0

    return init


def observed_orders(errors):
    return [math.log2(a / b) for a, b in zip(errors[:-1], errors[1:])]


# --- output --------------------------------------------------------------

def snapshot_rows(grid, model, law, w):
    rho, u, s, p = primitive_arrays(model, law, w)
    coords = grid.mesh()
    header = ["x", "y"][: grid.dim] + ["m", "n"] + [f"u{a + 1}" for a in range(grid.dim)] + ["p", "s"]
    cols = list(coords) + [w[0], w[1]] + [u[a] for a in range(grid.dim)] + [p, s]
    flat = [np.asarray(c).ravel() for c in cols]
    return header, list(zip(*flat))


def write_run(result, grid, model, law, out_dir, fmt):
    """Write ``snapshot_XXXX.csv`` files and ``diagnostics.csv`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for k, (t, w) in enumerate(result.snapshots):
        header, rows = snapshot_rows(grid, model, law, w)
        path = out / f"snapshot_{k:04d}.csv"
        with path.open("w", newline="\n") as fh:
            fh.write(f"# t = {fmt(t)}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(fmt(v) for v in row) + "\n")
        written.append(path)
    path = out / "diagnostics.csv"
    keys = list(result.diagnostics[0])
    with path.open("w", newline="\n") as fh:
        fh.write(",".join(keys) + "\n")
        for row in result.diagnostics:
            fh.write(",".join(fmt(row[k]) for k in keys) + "\n")
    written.append(path)
    return written


# --- config-driven runs ---------------------------------------------------

SIM_DEFAULTS = {
    "dim": "1",
    "x_min": "0", "x_max": "1", "y_min": "0", "y_max": "1",
    "boundary": "outflow",
    "cfl": "0.45",
    "snapshot_every": "0",
}
SCENARIO_KEYS = {
    "constant": {"state": None},
    "riemann": {"left": None, "right": None, "x_split": None},
    "sine": {"state": None, "amplitude": "0.01", "wavenumber": "1"},
    "exact_shock": {"upstream": None, "rho_plus": None, "branch": "pos", "x0": "0"},
}
COMMON_KEYS = ("model", "dim", "cells", "cells_y", "x_min", "x_max", "y_min", "y_max",
               "boundary", "cfl", "t_final", "snapshot_every", "initial")


def resolve_simulation(mapping):
    """Fill defaults and reject unknown keys; returns an ordered mapping."""
    from .config import check_keys, law_keys

    initial = mapping.get("initial")
    if initial not in SCENARIO_KEYS:
        raise ConfigurationError(
            f"initial must be one of {sorted(SCENARIO_KEYS)}, got {initial!r}")
    check_keys(mapping, set(COMMON_KEYS) | set(SCENARIO_KEYS[initial]), "simulate")
    out = {}
    for key in ("model", "law"):
        if key not in mapping:
            raise ConfigurationError(f"simulate: missing key {key!r}")
        out[key] = mapping[key]
    for key in sorted(law_keys(mapping) - {"law"}):
        out[key] = mapping[key]
    for key in COMMON_KEYS[1:]:
        if key in mapping:
            out[key] = mapping[key]
        elif key in SIM_DEFAULTS:
            out[key] = SIM_DEFAULTS[key]
        elif key == "cells_y":
            if mapping.get("dim", SIM_DEFAULTS["dim"]) == "2":
                out[key] = mapping.get("cells", "")
        elif key != "initial":
            raise ConfigurationError(f"simulate: missing key {key!r}")
    out["initial"] = initial
    for key, default in SCENARIO_KEYS[initial].items():
        if key in mapping:
            out[key] = mapping[key]
        elif key == "x_split":
            out[key] = repr(0.5 * (float(out["x_min"]) + float(out["x_max"])))
        elif default is not None:
            out[key] = default
        else:
            raise ConfigurationError(f"simulate: scenario {initial} needs key {key!r}")
    return out


def build_initial_field(cfg):
    """Grid and initial field described by a resolved simulation mapping."""
    from .config import law_from_mapping, parse_state_literal
    from .rankine_hugoniot import hugoniot_downstream

    model = ModelKind(cfg["model"])
    law = law_from_mapping(cfg)
    check_model(law, model)
    dim = int(cfg["dim"])
    if dim == 1:
        grid = Grid((int(cfg["cells"]),), (float(cfg["x_min"]),), (float(cfg["x_max"]),))
    elif dim == 2:
        grid = Grid((int(cfg["cells"]), int(cfg["cells_y"])),
                    (float(cfg["x_min"]), float(cfg["y_min"])),
                    (float(cfg["x_max"]), float(cfg["y_max"])))
    else:
        raise ConfigurationError("dim must be 1 or 2")
    boundary = cfg["boundary"]
    kind = cfg["initial"]
    if kind == "constant":
        _, w = parse_state_literal(cfg["state"], model, law, dim)
        return constant_field(grid, model, law, w, boundary)
    if kind == "sine":
        _, w = parse_state_literal(cfg["state"], model, law, dim)
        return sine_perturbation(grid, model, law, w, float(cfg["amplitude"]),
                                 float(cfg["wavenumber"]), boundary)
    if kind == "riemann":
        _, wl = parse_state_literal(cfg["left"], model, law, dim)
        _, wr = parse_state_literal(cfg["right"], model, law, dim)
        split = float(cfg["x_split"])
        x = grid.mesh()[0]
        shape = (-1,) + (1,) * dim
        w = np.where((x < split)[None], _as_column(wl).reshape(shape), _as_column(wr).reshape(shape))
        return Field(w, grid, model, law, boundary)
    prim, _ = parse_state_literal(cfg["upstream"], model, law, dim)
    shock = hugoniot_downstream(model, law, prim, float(cfg["rho_plus"]), cfg["branch"])
    shock = replace(shock, x0=float(cfg["x0"]))
    return shock_field(grid, model, law, shock, boundary)


def run(config):
    """Resolve ``config``, build the initial field and advance it.

    Returns ``(result, resolved_config)``.
    """
    cfg = resolve_simulation(config)
    f0 = build_initial_field(cfg)
    result = advance(f0, float(cfg["t_final"]), float(cfg["cfl"]), int(cfg["snapshot_every"]))
    return result, cfg


__all__ = [
    "Grid", "Field", "ConservativeState", "primitive_arrays", "flux_array",
    "rusanov_array", "physical_flux", "rusanov_flux", "cfl_dt", "step",
    "field_from_states", "constant_field", "sine_perturbation", "shock_field",
    "RunResult", "advance", "front_position", "FormDiscrepancy",
    "cross_validate_forms", "sine_initial", "observed_orders", "write_run",
    "resolve_simulation", "build_initial_field", "run",
]
