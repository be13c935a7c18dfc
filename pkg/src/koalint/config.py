"""JSON system configurations: parsing, validation and default expansion."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

from .errors import ConfigInvalid

FAMILIES = ("sw", "sw_general_f", "sw_deformed", "sw_deformed_general_f", "stackel", "comodule")
F_CHOICES = ("linear", "quadratic", "exp2z")
N_CAP = 12

_COMMON = ("family", "seed", "n_points", "tol", "q0", "p0")
_CHAIN = ("N", "omega2", "b")
_FIELDS = {
    "sw": _COMMON + _CHAIN,
    "sw_general_f": _COMMON + _CHAIN + ("f_choice", "z"),
    "sw_deformed": _COMMON + _CHAIN + ("z",),
    "sw_deformed_general_f": _COMMON + _CHAIN + ("z", "f_choice"),
    "stackel": _COMMON + _CHAIN + ("z",),
    "comodule": _COMMON + ("N", "sigma", "lambda1", "lambda2", "b1"),
}
_ALL = sorted({f for fs in _FIELDS.values() for f in fs})


@dataclass(frozen=True)
class SystemConfig:
    family: str
    N: int = 2
    omega2: float | None = None
    b: tuple | None = None
    z: float | None = None
    sigma: float | None = None
    lambda1: float | None = None
    lambda2: float | None = None
    b1: float | None = None
    f_choice: str | None = None
    seed: int = 0
    n_points: int = 100
    tol: float = 1e-10
    q0: tuple | None = None
    p0: tuple | None = None

    @property
    def fields(self):
        return _FIELDS[self.family]

    def resolved(self):
        """The applicable fields with defaults filled in, as a plain dict."""
        d = asdict(self)
        out = {k: d[k] for k in ("family", *sorted(f for f in self.fields if f != "family"))}
        for k in ("b", "q0", "p0"):
            if k in out and out[k] is not None:
                out[k] = list(out[k])
        return out

    def with_param(self, name, value, n_cap=N_CAP):
        if name not in self.fields:
            raise ConfigInvalid(name, f"does not apply to family {self.family!r}")
        return validate({**self.resolved(), name: value}, n_cap)


def _real(path, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigInvalid(path, f"expected a real number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigInvalid(path, "must be finite")
    return v


def _int(path, v):
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            return int(v)
        raise ConfigInvalid(path, f"expected an integer, got {v!r}")
    return v


def _vector(path, v, n):
    if not isinstance(v, list):
        raise ConfigInvalid(path, f"expected a list of {n} reals")
    if len(v) != n:
        raise ConfigInvalid(path, f"expected length N={n}, got {len(v)}")
    return tuple(_real(f"{path}[{i}]", x) for i, x in enumerate(v))


def _required(raw, key, family):
    if key not in raw or raw[key] is None:
        raise ConfigInvalid(key, f"required for family {family!r}")
    return raw[key]


def validate(raw, n_cap=N_CAP):
    """Turn a decoded JSON object into a :class:`SystemConfig`.

    Errors name the offending field path.  Fields that do not apply to the
    chosen family are rejected along with unknown ones.
    """
    if not isinstance(raw, dict):
        raise ConfigInvalid("$", "top level must be a JSON object")
    family = raw.get("family")
    if family is None:
        raise ConfigInvalid("family", "missing")
    if family not in FAMILIES:
        raise ConfigInvalid("family", f"must be one of {list(FAMILIES)}, got {family!r}")
    allowed = _FIELDS[family]
    for key in raw:
        if key not in _ALL:
            raise ConfigInvalid(key, "unknown field")
        if key not in allowed and raw[key] is not None:
            raise ConfigInvalid(key, f"does not apply to family {family!r}")

    kw = {"family": family}
    if family == "comodule":
        N = _int("N", raw.get("N", 2))
        if N != 2:
            raise ConfigInvalid("N", "the comodule family is defined for N = 2 only")
        kw["N"] = 2
        kw["sigma"] = _real("sigma", _required(raw, "sigma", family))
        for k in ("lambda1", "lambda2", "b1"):
            kw[k] = _real(k, raw.get(k, 1.0))
    else:
        N = _int("N", _required(raw, "N", family))
        lo = 2 if family == "stackel" else 1
        if N < lo:
            raise ConfigInvalid("N", f"must be >= {lo} for family {family!r}")
        if N > n_cap:
            raise ConfigInvalid("N", f"exceeds the cap of {n_cap}; raise it explicitly to go further")
        kw["N"] = N
        kw["omega2"] = _real("omega2", raw.get("omega2", 1.0))
        kw["b"] = _vector("b", _required(raw, "b", family), N)
        if "f_choice" in allowed:
            fc = _required(raw, "f_choice", family)
            if fc not in F_CHOICES:
                raise ConfigInvalid("f_choice", f"must be one of {list(F_CHOICES)}, got {fc!r}")
            kw["f_choice"] = fc
        if family in ("sw_deformed", "sw_deformed_general_f", "stackel") or kw.get("f_choice") == "exp2z":
            kw["z"] = _real("z", _required(raw, "z", family))
        elif raw.get("z") is not None:
            kw["z"] = _real("z", raw["z"])
        if family == "stackel" and kw["z"] == 0.0:
            raise ConfigInvalid("z", "the separation data need z != 0")

    seed = _int("seed", raw.get("seed", 0))
    if not 0 <= seed < 2**64:
        raise ConfigInvalid("seed", "must be a 64-bit unsigned integer")
    kw["seed"] = seed
    n_points = _int("n_points", raw.get("n_points", 100))
    if n_points < 1:
        raise ConfigInvalid("n_points", "must be positive")
    kw["n_points"] = n_points
    tol = _real("tol", raw.get("tol", 1e-10))
    if tol <= 0:
        raise ConfigInvalid("tol", "must be positive")
    kw["tol"] = tol
    for k in ("q0", "p0"):
        if raw.get(k) is not None:
            kw[k] = _vector(k, raw[k], kw["N"])
    if (kw.get("q0") is None) != (kw.get("p0") is None):
        raise ConfigInvalid("q0" if kw.get("q0") is None else "p0", "q0 and p0 must be given together")
    return SystemConfig(**kw)


def load(path, n_cap=N_CAP):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigInvalid("$", f"config file {path} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigInvalid("$", f"invalid JSON ({exc})") from None
    return validate(raw, n_cap)


def override(cfg, n_cap=N_CAP, **kw):
    """Revalidated copy with CLI overrides (seed, n_points, tol) that are not None."""
    kw = {k: v for k, v in kw.items() if v is not None}
    return validate({**cfg.resolved(), **kw}, n_cap) if kw else cfg
