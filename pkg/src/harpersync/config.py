"""Run configuration: defaults, config-file parsing, flag precedence.

Precedence is command-line flags over config-file entries over built-in
defaults.  The config file is flat ``key=value`` text, one entry per line,
``#`` starting a comment line.  Unknown keys and malformed values raise
ConfigError naming the offending key; tau has no default because every
scenario fixes it explicitly.
"""

import argparse
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

__all__ = [
    "RunConfig",
    "ConfigError",
    "parse_config",
    "parse_config_file",
    "resolve_eps_axis",
    "config_items",
    "CLASSICAL_ACTIONS",
    "QUANTUM_ACTIONS",
]

CLASSICAL_ACTIONS = ("trajectory", "jpd", "sweep")
QUANTUM_ACTIONS = ("evolve", "sweep", "mi-map")

CLASSICAL_IC_DEFAULT = (0.5, 0.4, 0.3, 0.5)


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")


@dataclass
class RunConfig:
    mode: str = ""
    action: str = ""
    tau: Optional[float] = None
    g: float = 1.0
    eps: Optional[float] = None
    n: int = 100
    ic: tuple = ()
    kicks: int = 1000
    n_total: int = 1_010_000
    n_transient: int = 10_000
    grid_m: int = 20
    rho_c: Optional[float] = None
    eps_axis: str = ""
    probes: tuple = (0.3, 0.7)
    observables: tuple = ("dE", "eint", "SA")
    coupling: str = "global"
    coupling_at: str = "new"
    propagator_form: str = "ring"
    windings: int = 3
    kink_factor: float = 5.0
    onset_prominence: float = 0.2
    norm_tol: float = 1e-8
    workers: Optional[int] = None
    outdir: str = "out"
    format: str = "csv"


def _cast_float(key, text):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {text!r}") from None
    if not np.isfinite(v):
        raise ConfigError(key, f"must be finite, got {text!r}")
    return v


def _cast_int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {text!r}") from None


def _cast_float_tuple(key, text):
    parts = [p for p in str(text).split(",") if p.strip() != ""]
    if not parts:
        raise ConfigError(key, "expected a comma-separated list of numbers")
    return tuple(_cast_float(key, p.strip()) for p in parts)


def _cast_str_tuple(key, text):
    parts = [p.strip() for p in str(text).split(",") if p.strip() != ""]
    if not parts:
        raise ConfigError(key, "expected a comma-separated list")
    return tuple(parts)


def _cast_choice(choices):
    def cast(key, text):
        text = str(text).strip()
        if text not in choices:
            raise ConfigError(key, f"must be one of {choices}, got {text!r}")
        return text
    return cast


_CASTERS = {
    "mode": _cast_choice(("classical", "quantum")),
    "action": lambda key, text: str(text).strip(),
    "tau": _cast_float,
    "g": _cast_float,
    "eps": _cast_float,
    "n": _cast_int,
    "ic": _cast_float_tuple,
    "kicks": _cast_int,
    "n_total": _cast_int,
    "n_transient": _cast_int,
    "grid_m": _cast_int,
    "rho_c": _cast_float,
    "eps_axis": lambda key, text: str(text).strip(),
    "probes": _cast_float_tuple,
    "observables": _cast_str_tuple,
    "coupling": _cast_choice(("global", "local")),
    "coupling_at": _cast_choice(("new", "old")),
    "propagator_form": _cast_choice(("ring", "bessel")),
    "windings": _cast_int,
    "kink_factor": _cast_float,
    "onset_prominence": _cast_float,
    "norm_tol": _cast_float,
    "workers": _cast_int,
    "outdir": lambda key, text: str(text),
    "format": _cast_choice(("csv", "json")),
}

_FIELD_NAMES = tuple(f.name for f in fields(RunConfig))


def parse_config_file(path: str) -> dict:
    """Read a flat key=value config file into a cast dict."""
    entries = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path!r}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("config", f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _FIELD_NAMES:
            raise ConfigError(key, f"unknown key ({path}:{lineno})")
        entries[key] = _CASTERS[key](key, value.strip())
    return entries


def _build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="harpersync",
        description="Measure synchronization in coupled kicked-Harper maps "
                    "and their one-magnon quantum counterpart.")
    ap.add_argument("words", nargs="*", metavar="[mode] action",
                    help="mode is classical|quantum (may come from --mode); "
                         "actions: classical trajectory|jpd|sweep, "
                         "quantum evolve|sweep|mi-map")
    ap.add_argument("--config", default=None, help="flat key=value config file")
    for name in _FIELD_NAMES:
        if name == "action":
            continue
        flag = "--" + name.replace("_", "-")
        ap.add_argument(flag, dest=name, default=argparse.SUPPRESS, metavar="V")
    return ap


def parse_config(argv=None) -> RunConfig:
    """Resolve the full run configuration from CLI arguments.

    Raises ConfigError on any invalid or unknown entry.
    """
    ap = _build_arg_parser()
    ns = ap.parse_args(argv)

    merged = {f.name: f.default for f in fields(RunConfig)}
    merged["ic"] = ()
    merged["probes"] = (0.3, 0.7)
    merged["observables"] = ("dE", "eint", "SA")
    if ns.config is not None:
        merged.update(parse_config_file(ns.config))
    for name in _FIELD_NAMES:
        if hasattr(ns, name) and name != "action":
            merged[name] = _CASTERS[name](name, getattr(ns, name))

    words = list(ns.words)
    if words and words[0] in ("classical", "quantum"):
        word_mode = words.pop(0)
        if merged["mode"] and merged["mode"] != word_mode and hasattr(ns, "mode"):
            raise ConfigError("mode", f"positional {word_mode!r} conflicts with --mode {merged['mode']!r}")
        merged["mode"] = word_mode
    if words:
        if len(words) > 1:
            raise ConfigError("action", f"expected one action, got {words!r}")
        merged["action"] = words[0]

    return _validate(merged)


def _validate(merged: dict) -> RunConfig:
    mode = merged["mode"]
    if mode not in ("classical", "quantum"):
        raise ConfigError("mode", "mode is required: classical or quantum")
    action = merged["action"]
    allowed = CLASSICAL_ACTIONS if mode == "classical" else QUANTUM_ACTIONS
    if action not in allowed:
        raise ConfigError("action", f"{mode} actions are {allowed}, got {action!r}")

    if merged["tau"] is None:
        raise ConfigError("tau", "tau is required (no default; scenarios use 0.1, 0.3, 0.5)")
    tau = float(merged["tau"])
    if tau <= 0:
        raise ConfigError("tau", f"must be > 0, got {tau}")

    single_run = action in ("trajectory", "jpd", "evolve", "mi-map")
    if single_run and merged["eps"] is None:
        raise ConfigError("eps", f"action {action!r} needs an explicit coupling eps")

    n = int(merged["n"])
    if n < 2:
        raise ConfigError("n", f"chain length must be >= 2, got {n}")
    if int(merged["grid_m"]) < 1:
        raise ConfigError("grid_m", f"must be >= 1, got {merged['grid_m']}")
    if merged["rho_c"] is not None and merged["rho_c"] <= 0:
        raise ConfigError("rho_c", f"must be > 0, got {merged['rho_c']}")
    if int(merged["kicks"]) < 1:
        raise ConfigError("kicks", f"must be >= 1, got {merged['kicks']}")
    if int(merged["n_transient"]) < 0 or int(merged["n_total"]) <= int(merged["n_transient"]):
        raise ConfigError("n_total",
                          f"need n_total > n_transient >= 0, got {merged['n_total']} "
                          f"and {merged['n_transient']}")
    if int(merged["windings"]) < 0:
        raise ConfigError("windings", f"must be >= 0, got {merged['windings']}")
    if merged["kink_factor"] <= 0:
        raise ConfigError("kink_factor", f"must be > 0, got {merged['kink_factor']}")
    if merged["norm_tol"] <= 0:
        raise ConfigError("norm_tol", f"must be > 0, got {merged['norm_tol']}")
    if merged["workers"] is not None and int(merged["workers"]) < 1:
        raise ConfigError("workers", f"must be >= 1, got {merged['workers']}")
    if not merged["probes"]:
        raise ConfigError("probes", "need at least one probe coupling")
    for name in merged["observables"]:
        if name not in ("dE", "eint", "SA"):
            raise ConfigError("observables", f"unknown observable {name!r}")

    ic = tuple(merged["ic"])
    if mode == "classical":
        if not ic:
            ic = CLASSICAL_IC_DEFAULT
        if len(ic) != 4:
            raise ConfigError("ic", f"classical ic needs 4 coordinates, got {len(ic)}")
        if any(not np.isfinite(v) for v in ic):
            raise ConfigError("ic", f"coordinates must be finite, got {ic}")
    else:
        if not ic:
            ic = (1, n // 2) if merged["coupling"] == "global" else (1, n // 5)
        if len(ic) != 2:
            raise ConfigError("ic", f"quantum ic needs 2 sites, got {len(ic)}")
        sites = []
        for v in ic:
            if float(v) != int(float(v)):
                raise ConfigError("ic", f"sites must be integers, got {ic}")
            sites.append(int(float(v)))
        if not all(1 <= s <= n for s in sites):
            raise ConfigError("ic", f"sites must lie in 1..{n}, got {tuple(sites)}")
        ic = tuple(sites)
    merged["ic"] = ic

    if merged["eps_axis"]:
        resolve_eps_axis_spec(merged["eps_axis"])  # raises on malformed spec

    return RunConfig(**merged)


def resolve_eps_axis_spec(spec: str) -> np.ndarray:
    """Parse an eps-axis spec: 'start:stop:step' or a comma list."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError("eps_axis", f"range spec is start:stop:step, got {spec!r}")
        start, stop, step = (_cast_float("eps_axis", p) for p in parts)
        if step <= 0 or stop < start:
            raise ConfigError("eps_axis", f"need step > 0 and stop >= start, got {spec!r}")
        axis = np.round(np.arange(start, stop + 0.5 * step, step), 10)
    else:
        axis = np.asarray(_cast_float_tuple("eps_axis", spec))
    if axis.size == 0:
        raise ConfigError("eps_axis", f"empty axis from {spec!r}")
    if axis.size > 1 and np.any(np.diff(axis) <= 0):
        raise ConfigError("eps_axis", "axis must be strictly increasing")
    if np.any(axis < 0):
        raise ConfigError("eps_axis", "couplings must be >= 0")
    return axis


def resolve_eps_axis(cfg: RunConfig) -> np.ndarray:
    """Axis for sweeps: explicit spec, else the per-mode default grid."""
    if cfg.eps_axis:
        return resolve_eps_axis_spec(cfg.eps_axis)
    start = 0.0 if cfg.mode == "classical" else 0.01
    return np.round(np.arange(start, 1.0001, 0.01), 2)


def config_items(cfg: RunConfig):
    """(key, value-as-text) pairs for the reproducibility record, sorted by
    key; None-valued entries are omitted.  Floats serialize via repr, which
    round-trips exactly."""
    items = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, tuple):
            text = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
        elif isinstance(v, float):
            text = repr(v)
        else:
            text = str(v)
        items.append((f.name, text))
    return sorted(items)
