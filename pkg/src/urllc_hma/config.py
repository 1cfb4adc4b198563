"""Flat ``section.key = value`` configuration files.

Blank lines and ``#`` comments are ignored; every key is optional. After
the file is read, environment variables ``SIM_<SECTION>_<KEY>`` override
individual keys.
"""
import os
import re

from .channel import ChannelParams
from .engine import SimConfig
from .rl import LearningParams

# section -> key -> (target, field name, type); target is "sim", "channel" or "learning"
SCHEMA = {
    "sim": {k: ("sim", k, t) for k, t in [
        ("n_devices", int), ("n_slots_train", int), ("n_slots_eval", int), ("episode_slots", int),
        ("slot_ms", float), ("seed", int), ("eps_ns", float), ("eps_s", float),
        ("ns_rate_bps", float), ("s_tx_dbm", float), ("ns_tx_dbm", float),
        ("delay_budget_slots", int)]},
    "channel": {k: ("channel", k, float) for k in
                ("pl_ref_db", "d_ref_m", "pl_exponent", "pl_floor_db", "noise_psd_dbm_hz")},
    "traffic": {"arrival_rate": ("sim", "arrival_rate", float),
                "arrival_scope": ("sim", "arrival_scope", str)},
    "slicing": {"mode": ("sim", "mode", str), "cap_dbm_hz": ("sim", "cap_dbm_hz", float)},
    "learning": {k: ("learning", k, float) for k in ("alpha", "epsilon", "gamma", "beta")},
    "rrp": {"kappa": ("sim", "kappa", float), "forget": ("sim", "forget", float)},
    "rru": {"reward": ("sim", "rru_reward", str)},
    "users": {"placement": ("sim", "placement", str), "radius_m": ("sim", "radius_m", float)},
}

_LINE = re.compile(r"^\s*([A-Za-z_]\w*)\.([A-Za-z_]\w*)\s*=\s*(.*?)\s*$")


class ConfigError(ValueError):
    pass


def _convert(raw, typ):
    if typ is str:
        return raw.strip("\"'")
    if typ is int:
        v = float(raw)
        if not v.is_integer():
            raise ValueError(f"expected an integer, got {raw!r}")
        return int(v)
    return float(raw)


def _entries_from_text(text, origin):
    for n, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE.match(body)
        if not m:
            raise ConfigError(f"{origin}:{n}: expected 'section.key = value', got {line.strip()!r}")
        yield m.group(1), m.group(2), m.group(3), f"{origin}:{n}"


def _entries_from_env(environ):
    for name, value in sorted(environ.items()):
        if not name.startswith("SIM_"):
            continue
        rest = name[4:].lower()
        for section in SCHEMA:
            if rest.startswith(section + "_"):
                yield section, rest[len(section) + 1:], value, f"environment {name}"
                break
        else:
            raise ConfigError(f"environment {name}: unknown section")


def build_config(entries):
    values = {"sim": {}, "channel": {}, "learning": {}}
    where = {}
    for section, key, raw, loc in entries:
        spec = SCHEMA.get(section, {}).get(key)
        if spec is None:
            raise ConfigError(f"{loc}: unknown key {section}.{key}")
        target, fld, typ = spec
        try:
            values[target][fld] = _convert(raw, typ)
        except ValueError as e:
            raise ConfigError(f"{loc}: {section}.{key}: {e}") from None
        where[fld] = (f"{section}.{key}", loc)

    def fail(e):
        msg = str(e)
        for fld, (key, loc) in where.items():
            if re.search(rf"\b{fld}\b", msg):
                return ConfigError(f"{loc}: {key}: {msg}")
        return ConfigError(msg)

    try:
        cp = ChannelParams(**values["channel"])
        lp = LearningParams(**values["learning"])
        cfg = SimConfig(channel=cp, learning=lp, **values["sim"])
        cfg.validate()
    except ValueError as e:
        raise fail(e) from None
    return cfg


def parse_text(text, origin="<string>", environ=None):
    entries = list(_entries_from_text(text, origin))
    entries += list(_entries_from_env(os.environ if environ is None else environ))
    return build_config(entries)


def parse_config(path, environ=None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_text(text, str(path), environ)


def dump_config(cfg):
    """Render ``cfg`` in the file format; ``parse_text`` of the output round-trips."""
    lines = []
    for section, keys in SCHEMA.items():
        for key, (target, fld, _) in keys.items():
            obj = {"sim": cfg, "channel": cfg.channel, "learning": cfg.learning}[target]
            lines.append(f"{section}.{key} = {getattr(obj, fld)}")
    return "\n".join(lines) + "\n"
