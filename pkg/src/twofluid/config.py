"""Line-based ``key = value`` configuration and state literals."""
from __future__ import annotations

import re
from pathlib import Path

from .eos import ModelKind, check_model, make_law
from .errors import ConfigurationError
from .state import (
    ConservativeState,
    PrimitiveState,
    conservative_from_rho,
    primitive_from_rho,
    to_conservative,
    to_primitive,
)


def format_float(x):
    """17 significant digits: enough to round-trip every double."""
    return format(float(x), ".17g")


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError(f"{source}:{lineno}: empty key")
        if key in out:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def read_config(path):
    path = Path(path)
    return parse_config_text(path.read_text(), str(path))


def format_config(mapping):
    return "".join(f"{k} = {v}\n" for k, v in mapping.items())


def law_from_mapping(mapping):
    if "law" not in mapping:
        raise ConfigurationError("missing key 'law'")
    params = {k[len("law."):]: v for k, v in mapping.items() if k.startswith("law.")}
    return make_law(mapping["law"], **params)


def law_keys(mapping):
    return {k for k in mapping if k == "law" or k.startswith("law.")}


def check_keys(mapping, allowed, context):
    unknown = [k for k in mapping if k not in allowed and not k.startswith("law.") and k != "law"]
    if unknown:
        raise ConfigurationError(f"{context}: unknown key(s) {', '.join(unknown)}")


_TOKEN = re.compile(r"(\w+)\s*=\s*(.*?)(?=[\s,]+\w+\s*=|\s*$)")


def parse_assignments(text):
    """Split ``"a=1 b=2,3"`` or ``"a=1,b=2"`` into a dict of strings."""
    out = {}
    pos = 0
    text = text.strip()
    for match in _TOKEN.finditer(text):
        gap = text[pos:match.start()].strip(" ,\t")
        if gap:
            raise ConfigurationError(f"cannot parse {gap!r} in {text!r}")
        key, value = match.group(1), match.group(2).strip(" ,")
        if key in out:
            raise ConfigurationError(f"duplicate field {key!r} in {text!r}")
        out[key] = value
        pos = match.end()
    if text[pos:].strip(" ,"):
        raise ConfigurationError(f"cannot parse {text[pos:]!r} in {text!r}")
    return out


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigurationError(f"bad number list {text!r}") from None


def parse_state_literal(text, model, law, dim=None):
    """Parse a state literal and return ``(PrimitiveState, ConservativeState)``.

    Accepted forms: ``m=.. n=.. u=..``, ``p=.. s=.. u=..`` and
    ``rho=.. s=.. u=..``; ``un`` is an alias of a one-component ``u``.
    Without a velocity, ``dim`` zeros are used.
    """
    model = ModelKind(model)
    check_model(law, model)
    fields = parse_assignments(text)
    if "u" in fields and "un" in fields:
        raise ConfigurationError("give either u or un, not both")
    vel = fields.pop("u", None) or fields.pop("un", None)
    if vel is not None:
        u = _floats(vel)
    elif dim is not None:
        u = (0.0,) * int(dim)
    else:
        raise ConfigurationError(f"state literal {text!r} has no velocity")
    if dim is not None and len(u) != int(dim):
        raise ConfigurationError(f"state literal {text!r} must have {dim} velocity components")
    keys = set(fields)
    try:
        vals = {k: float(v) for k, v in fields.items()}
    except ValueError:
        raise ConfigurationError(f"non-numeric value in state literal {text!r}") from None
    if keys == {"m", "n"}:
        rho = vals["n"] if model is ModelKind.LIQUID_GAS else vals["m"] + vals["n"]
        w = ConservativeState(vals["m"], vals["n"], tuple(rho * ui for ui in u))
        return to_primitive(model, law, w), w
    if keys == {"p", "s"}:
        prim = PrimitiveState(vals["p"], u, vals["s"], 1.0)
        w = to_conservative(model, law, prim)
        return to_primitive(model, law, w), w
    if keys == {"rho", "s"}:
        prim = primitive_from_rho(law, vals["rho"], u, vals["s"])
        return prim, conservative_from_rho(model, prim.rho, prim.u, prim.s)
    raise ConfigurationError(
        f"state literal {text!r}: expected fields m,n or p,s or rho,s (plus u)")
