"""Enumeration caps.

Defaults can be replaced globally through the PLC_CAP_OVERRIDE environment
variable, e.g. ``PLC_CAP_OVERRIDE="enum=9,worlds=64"``, or per call.
"""
import os

from .errors import CapExceeded

DEFAULTS = {
    "enum": 8,          # qualitativeness / ranking / MP search over subsets
    "materialize": 16,  # materialize and extensional space equality
    "equality": 8,      # extensional space comparison (4^n pairs)
    "worlds": 20,       # Kripke model checking of loaded structures
    "runs": 12,         # coherence: subsets of runs
    "lines": 24,        # diagnosis: circuit lines
    "runs_built": 4096, # diagnosis systems: number of generated runs
}

_caps = dict(DEFAULTS)


def parse_overrides(text):
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep or key not in DEFAULTS:
            raise ValueError(f"bad cap override {item!r}")
        out[key] = int(val)
    return out


def reset():
    _caps.clear()
    _caps.update(DEFAULTS)
    env = os.environ.get("PLC_CAP_OVERRIDE")
    if env:
        _caps.update(parse_overrides(env))


def set_caps(**kw):
    for k, v in kw.items():
        if k not in DEFAULTS:
            raise KeyError(k)
        _caps[k] = int(v)


def get(name):
    return _caps[name]


def current():
    return dict(_caps)


def enforce(name, size, what=None, cap=None):
    limit = get(name) if cap is None else cap
    if size > limit:
        raise CapExceeded(what or name, size, limit)


reset()
