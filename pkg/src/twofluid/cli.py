"""Command-line entry point.

Exit codes: 0 success, 1 internal error, 2 invalid input or domain
violation, 3 solver failure (non-convergence or positivity loss).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import energy as energy_mod
from . import fvm
from .config import (
    check_keys,
    format_config,
    format_float,
    law_from_mapping,
    parse_assignments,
    parse_state_literal,
    read_config,
)
from .eos import ModelKind, check_model, dpressure_drho, pressure_rho_s, sound_speed
from .errors import ConfigurationError, ConvergenceError, DomainError, PositivityError
from .hyperbolic import characteristic_speeds
from .rankine_hugoniot import hugoniot_downstream
from .vortex import classify_jump, supersonic_condition

LAW_PARAMS = ("gamma", "c_const", "rho_l", "k0", "a0", "alpha", "a_coef")
ENERGY_KEYS = ("u_hat_minus", "u_hat_plus", "t_final", "half_line_length", "cells", "cfl",
               "f_minus", "f_plus", "g", "s0_minus", "s0_plus")
ENERGY_DEFAULTS = {"t_final": "1.0", "half_line_length": "1.0", "cfl": "0.9",
                   "f_minus": "zero", "f_plus": "zero", "g": "zero",
                   "s0_minus": "zero", "s0_plus": "zero"}

fmt = format_float


def _bool(b):
    return "true" if b else "false"


def _add_law_flags(p, with_model=True):
    p.add_argument("--config", help="key = value file; flags override its keys")
    if with_model:
        p.add_argument("--model", choices=[m.value for m in ModelKind])
    p.add_argument("--law")
    for name in LAW_PARAMS:
        p.add_argument(f"--law.{name}", dest=f"law.{name}", metavar="VALUE")


def _range(text):
    try:
        lo, hi, steps = text.split(":")
        steps = int(steps)
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise ConfigurationError(f"range must be lo:hi:steps, got {text!r}") from None
    if steps < 1:
        raise ConfigurationError("range needs at least one step")
    return np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])


def _mapping(args, keys):
    """Config-file keys overlaid with the non-empty flags in ``keys``."""
    mapping = read_config(args.config) if getattr(args, "config", None) else {}
    for key in keys:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            mapping[key] = str(value)
    return mapping


def _law_and_model(args, allowed=()):
    keys = ["model", "law"] + [f"law.{n}" for n in LAW_PARAMS] + list(allowed)
    mapping = _mapping(args, keys)
    check_keys(mapping, {"model", *allowed}, args.command)
    law = law_from_mapping(mapping)
    model = ModelKind(mapping.get("model", law.model.value))
    check_model(law, model)
    return mapping, law, model


def cmd_eos(args, out):
    mapping, law, model = _law_and_model(args, ("m", "n", "rho", "s"))
    have = {k for k in ("m", "n", "rho", "s") if k in mapping}
    if have == {"m", "n"}:
        _, w = parse_state_literal(f"m={mapping['m']} n={mapping['n']}", model, law, 1)
        rho = w.n if model is ModelKind.LIQUID_GAS else w.m + w.n
        s = w.m / w.n
    elif have == {"rho", "s"}:
        rho, s = float(mapping["rho"]), float(mapping["s"])
    else:
        raise ConfigurationError("eos needs either --m and --n or --rho and --s")
    rows = [("p", pressure_rho_s(law, rho, s)),
            ("dp_drho", dpressure_drho(law, rho, s)),
            ("c", sound_speed(law, rho, s)),
            ("rho", rho), ("s", s)]
    for key, value in rows:
        out.write(f"{key},{fmt(value)}\n")
    return 0


def cmd_speeds(args, out):
    mapping, law, model = _law_and_model(args, ("state", "xi"))
    if "state" not in mapping or "xi" not in mapping:
        raise ConfigurationError("speeds needs --state and --xi")
    xi = [float(v) for v in mapping["xi"].split(",")]
    prim, _ = parse_state_literal(mapping["state"], model, law, len(xi))
    speeds = characteristic_speeds(law, prim, xi)
    out.write(",".join(fmt(v) for v in speeds) + "\n")
    return 0


HUGONIOT_COLUMNS = ("j", "sigma", "un_plus", "p_minus", "p_plus",
                    "compressive", "lax", "mach_minus", "mach_plus")


def _hugoniot_row(shock):
    c = shock.classification
    return [fmt(shock.j_flux), fmt(shock.sigma), fmt(shock.plus.u[0]), fmt(shock.minus.p),
            fmt(shock.plus.p), _bool(c.compressive), _bool(c.lax),
            fmt(c.mach_minus), fmt(c.mach_plus)]


def cmd_hugoniot(args, out):
    mapping, law, model = _law_and_model(
        args, ("upstream", "rho-plus", "rho-plus-range", "branch"))
    if "upstream" not in mapping:
        raise ConfigurationError("hugoniot needs --upstream")
    fields = parse_assignments(mapping["upstream"])
    prim, _ = parse_state_literal(mapping["upstream"], model, law,
                                  None if ("u" in fields or "un" in fields) else 1)
    branch = mapping.get("branch", "pos")
    if "rho-plus-range" in mapping:
        out.write(",".join(("rho_plus",) + HUGONIOT_COLUMNS) + "\n")
        for rho_p in _range(mapping["rho-plus-range"]):
            shock = hugoniot_downstream(model, law, prim, float(rho_p), branch)
            out.write(",".join([fmt(rho_p)] + _hugoniot_row(shock)) + "\n")
        return 0
    if "rho-plus" not in mapping:
        raise ConfigurationError("hugoniot needs --rho-plus or --rho-plus-range")
    shock = hugoniot_downstream(model, law, prim, float(mapping["rho-plus"]), branch)
    out.write(",".join(HUGONIOT_COLUMNS) + "\n")
    out.write(",".join(_hugoniot_row(shock)) + "\n")
    return 0


def cmd_vortex(args, out):
    mapping, law, model = _law_and_model(args, ("left", "right", "u2-range"))
    if "left" not in mapping or "right" not in mapping:
        raise ConfigurationError("vortex needs --left and --right")
    minus, _ = parse_state_literal(mapping["left"], model, law, 2)
    plus, _ = parse_state_literal(mapping["right"], model, law, 2)
    base = supersonic_condition(law, minus, plus)
    out.write("u2_jump,t1,t2,verdict\n")
    jumps = _range(mapping["u2-range"]) if "u2-range" in mapping else [base.jump_u2]
    for jump in jumps:
        v = classify_jump(float(jump), base.c_minus, base.c_plus)
        out.write(f"{fmt(v.jump_u2)},{fmt(v.t1)},{fmt(v.t2)},{v.verdict.value}\n")
    return 0


def _overrides(args):
    extra = {}
    for item in args.set or ():
        if "=" not in item:
            raise ConfigurationError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        extra[key.strip()] = value.strip()
    for flag in ("cells", "t_final", "cfl"):
        value = getattr(args, flag, None)
        if value is not None:
            extra[flag] = value
    return extra


def cmd_simulate(args, out):
    mapping = read_config(args.config) if args.config else {}
    mapping.update(_overrides(args))
    result, resolved = fvm.run(mapping)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.resolved").write_text(format_config(resolved))
    law = law_from_mapping(resolved)
    fvm.write_run(result, result.final.grid, ModelKind(resolved["model"]), law, out_dir, fmt)
    out.write(f"steps,{result.steps}\nt,{fmt(result.final.t)}\nout,{out_dir}\n")
    return 0


def resolve_energy(mapping):
    check_keys(mapping, set(ENERGY_KEYS), "energy")
    if any(k == "law" or k.startswith("law.") for k in mapping):
        raise ConfigurationError("energy: law keys are not used by this subcommand")
    resolved = {}
    for key in ENERGY_KEYS:
        if key in mapping:
            resolved[key] = mapping[key]
        elif key in ENERGY_DEFAULTS:
            resolved[key] = ENERGY_DEFAULTS[key]
        else:
            raise ConfigurationError(f"energy: missing key {key!r}")
    return resolved


def cmd_energy(args, out):
    mapping = read_config(args.config) if args.config else {}
    mapping.update(_overrides(args))
    resolved = resolve_energy(mapping)
    prob = energy_mod.problem_from_config(resolved)
    sol = energy_mod.solve_entropy_perturbation(prob, int(resolved["cells"]), float(resolved["cfl"]))
    res = sol.residual_series()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.resolved").write_text(format_config(resolved))
    with (out_dir / "energy.csv").open("w", newline="\n") as fh:
        fh.write("t,I,boundary_integral,source_integral,residual\n")
        for k in range(len(sol.t)):
            fh.write(",".join(fmt(v) for v in (sol.t[k], sol.energy[k], sol.boundary_integral[k],
                                               sol.source_integral[k], res[k])) + "\n")
    out.write(f"residual,{fmt(res[-1])}\nout,{out_dir}\n")
    return 0


def cmd_selftest(args, out):
    from .selftest import run_selftest

    rows = run_selftest()
    width = max(len(r.name) for r in rows)
    out.write(f"{'check':<{width}}  status  detail\n")
    for r in rows:
        out.write(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}\n")
    failed = sum(not r.passed for r in rows)
    out.write(f"{len(rows) - failed}/{len(rows)} checks passed\n")
    return 0 if failed == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="twofluid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eos", help="pressure, dP/drho and sound speed at one state")
    _add_law_flags(p)
    for name in ("m", "n", "rho", "s"):
        p.add_argument(f"--{name}")
    p.set_defaults(func=cmd_eos)

    p = sub.add_parser("speeds", help="characteristic speeds in a direction")
    _add_law_flags(p)
    p.add_argument("--state")
    p.add_argument("--xi")
    p.set_defaults(func=cmd_speeds)

    p = sub.add_parser("hugoniot", help="shock from an upstream state")
    _add_law_flags(p)
    p.add_argument("--upstream")
    p.add_argument("--rho-plus", dest="rho_plus")
    p.add_argument("--rho-plus-range", dest="rho_plus_range")
    p.add_argument("--branch", choices=("pos", "neg"))
    p.set_defaults(func=cmd_hugoniot)

    p = sub.add_parser("vortex", help="supersonic stability verdict for a 2D vortex sheet")
    _add_law_flags(p)
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--u2-range", dest="u2_range")
    p.set_defaults(func=cmd_vortex)

    for name, func, helptext in (("simulate", cmd_simulate, "finite-volume run from a config"),
                                 ("energy", cmd_energy, "linearized entropy problem")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config")
        p.add_argument("--out", default="./out")
        p.add_argument("--cells")
        p.add_argument("--t-final", dest="t_final")
        p.add_argument("--cfl")
        p.add_argument("--set", action="append", metavar="KEY=VALUE")
        p.set_defaults(func=func)

    p = sub.add_parser("selftest", help="run the invariant checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (PositivityError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigurationError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - reported as internal error
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
