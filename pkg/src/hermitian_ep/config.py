"""Loading and validating run configurations from YAML files or named presets."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .model import ConfigError, ReservoirSpec, SystemConfig, return_time
from .presets import get_preset
from .ratio import PortraitSpec
from .reduced import ReducedParams, ep_coupling, reduced_params
from .transition import DEFAULT_POLE_EPS, MODELS, EnsembleSpec

_SCHEMA = {
    "system": {
        "omega0": None,
        "coupling": None,
        "reservoir1": {"n_modes": None, "freq_step": None, "coupling": None},
        "reservoir2": {"n_modes": None, "freq_step": None, "coupling": None},
        "t_max": None,
        "dt_sample": None,
    },
    "initial": {"a1": None, "a2": None},
    "ensemble": {"n_states": None, "seed": None},
    "sweep": {
        "T": None, "start": None, "stop": None, "steps": None, "log": None,
        "units": None, "model": None, "pole_eps": None, "dt": None,
    },
    "reduced": {"gamma1": None, "gamma2": None},
    "portrait": {"re_range": None, "im_range": None, "grid": None, "seeds": None, "t_span": None},
    "diagnostics": {"threshold": None, "smooth_window": None},
}


@dataclass(frozen=True)
class SweepSpec:
    T: float
    start: float = 0.1
    stop: float = 3.0
    steps: int = 30
    log: bool = False
    units: str = "ep"
    model: str = "hermitian"
    pole_eps: float = DEFAULT_POLE_EPS
    dt: float | None = None

    def __post_init__(self):
        if not self.T > 0:
            raise ConfigError("sweep.T: must be > 0")
        if self.units not in ("ep", "omega0"):
            raise ConfigError(f"sweep.units: expected 'ep' or 'omega0', got {self.units!r}")
        if self.model not in MODELS:
            raise ConfigError(f"sweep.model: expected one of {MODELS}, got {self.model!r}")
        if self.steps < 1:
            raise ConfigError("sweep.steps: must be >= 1")
        if self.log and not self.start > 0:
            raise ConfigError("sweep.start: must be > 0 on a log grid")
        if self.steps > 1 and not self.stop > self.start:
            raise ConfigError("sweep: stop must exceed start")

    def grid(self, ep: float) -> np.ndarray:
        """Absolute couplings of the sweep."""
        if self.log:
            g = np.geomspace(self.start, self.stop, self.steps)
        else:
            g = np.linspace(self.start, self.stop, self.steps)
        return g * ep if self.units == "ep" else g


@dataclass(frozen=True)
class DiagnosticsSpec:
    threshold: float = 0.1
    smooth_window: float | None = None


@dataclass
class RunConfig:
    system: SystemConfig
    initial: tuple = (1.0 + 0j, 1.0 + 0j)
    ensemble: EnsembleSpec | None = None
    sweep: SweepSpec | None = None
    reduced: ReducedParams | None = None
    portrait: PortraitSpec | None = None
    diagnostics: DiagnosticsSpec = field(default_factory=DiagnosticsSpec)
    source: str = ""

    def reduced_model(self) -> ReducedParams:
        """Reduced parameters at the configured coupling (explicit rates win over golden-rule rates)."""
        if self.reduced is not None:
            return self.reduced.with_coupling(self.system.coupling)
        return reduced_params(self.system)

    def ep_coupling(self) -> float:
        return ep_coupling(self.reduced_model())

    def to_dict(self) -> dict:
        def enc(x):
            if isinstance(x, complex):
                return [x.real, x.imag]
            if isinstance(x, (list, tuple)):
                return [enc(i) for i in x]
            if isinstance(x, dict):
                return {k: enc(v) for k, v in x.items()}
            return x

        out = {"source": self.source, "system": self.system.to_dict(), "initial": enc(list(self.initial))}
        for name in ("ensemble", "sweep", "reduced", "portrait", "diagnostics"):
            val = getattr(self, name)
            if val is not None:
                out[name] = enc(asdict(val))
        return out


def _check_keys(data, schema, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where or 'config'}: expected a mapping, got {type(data).__name__}")
    for key, value in data.items():
        loc = f"{where}.{key}" if where else str(key)
        if key not in schema:
            raise ConfigError(f"{loc}: unknown key")
        if isinstance(schema[key], dict):
            _check_keys(value, schema[key], loc)


def _complex(value, where):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{where}: expected a number or [re, im], got {value!r}")


def _build(section, cls, where, **extra):
    try:
        return cls(**section, **extra)
    except ConfigError as exc:
        msg = str(exc)
        raise ConfigError(msg if msg.startswith(where) else f"{where}: {msg}") from None
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _reservoir(data, where):
    if data is None:
        return ReservoirSpec(0, 1.0, 0.0)
    missing = {"n_modes", "freq_step", "coupling"} - set(data)
    if missing:
        raise ConfigError(f"{where}: missing {', '.join(sorted(missing))}")
    return _build(
        {"n_modes": int(data["n_modes"]), "freq_step": float(data["freq_step"]),
         "coupling": float(data["coupling"])},
        ReservoirSpec, where,
    )


def parse_config(data: dict, source: str = "") -> RunConfig:
    """Validate a nested mapping and build a :class:`RunConfig`."""
    _check_keys(data, _SCHEMA, "")
    sysd = data.get("system")
    if sysd is None:
        raise ConfigError("system: section is required")
    r1 = _reservoir(sysd.get("reservoir1"), "system.reservoir1")
    r2 = _reservoir(sysd.get("reservoir2"), "system.reservoir2")
    if "coupling" not in sysd:
        raise ConfigError("system.coupling: required")
    present = [return_time(r) for r in (r1, r2) if r.n_modes > 0]
    t_max = sysd.get("t_max")
    if t_max is None:
        if not present:
            raise ConfigError("system.t_max: required when no reservoir is present")
        t_max = 4 * max(present)
    dt_sample = sysd.get("dt_sample")
    if dt_sample is None:
        dt_sample = max(present) / 200 if present else float(t_max) / 1000
    system = _build(
        {"omega0": float(sysd.get("omega0", 1.0)), "coupling": float(sysd["coupling"]),
         "reservoir1": r1, "reservoir2": r2, "t_max": float(t_max), "dt_sample": float(dt_sample)},
        SystemConfig, "system",
    )

    init = data.get("initial", {})
    initial = (_complex(init.get("a1", 1.0), "initial.a1"), _complex(init.get("a2", 1.0), "initial.a2"))
    if initial == (0, 0):
        raise ConfigError("initial: amplitudes must not both vanish")

    ensemble = None
    if "ensemble" in data:
        e = data["ensemble"]
        try:
            ensemble = EnsembleSpec(int(e.get("n_states", 300)), int(e.get("seed", 0)))
        except ValueError as exc:
            raise ConfigError(f"ensemble: {exc}") from None

    sweep = None
    if "sweep" in data:
        s = dict(data["sweep"])
        if "T" not in s:
            raise ConfigError("sweep.T: required")
        for k in ("T", "start", "stop", "pole_eps", "dt"):
            if s.get(k) is not None:
                s[k] = float(s[k])
        if "steps" in s:
            s["steps"] = int(s["steps"])
        sweep = _build(s, SweepSpec, "sweep")

    reduced = None
    if "reduced" in data:
        r = data["reduced"]
        try:
            reduced = ReducedParams(system.omega0, system.coupling, float(r["gamma1"]), float(r["gamma2"]))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"reduced: {exc}") from None

    portrait = None
    if "portrait" in data:
        p = data["portrait"]
        kw = {}
        if "re_range" in p:
            kw["re_range"] = tuple(float(v) for v in p["re_range"])
        if "im_range" in p:
            kw["im_range"] = tuple(float(v) for v in p["im_range"])
        if "grid" in p:
            kw["grid"] = tuple(int(v) for v in p["grid"])
        if "seeds" in p:
            kw["seeds"] = tuple(_complex(v, "portrait.seeds") for v in p["seeds"])
        if p.get("t_span") is not None:
            kw["t_span"] = float(p["t_span"])
        try:
            portrait = PortraitSpec(**kw)
        except ValueError as exc:
            raise ConfigError(f"portrait: {exc}") from None

    d = data.get("diagnostics", {})
    diagnostics = DiagnosticsSpec(
        float(d.get("threshold", 0.1)),
        None if d.get("smooth_window") is None else float(d["smooth_window"]),
    )
    if not 0 < diagnostics.threshold < 1:
        raise ConfigError("diagnostics.threshold: must lie in (0, 1)")

    return RunConfig(system, initial, ensemble, sweep, reduced, portrait, diagnostics, source)


def load_config(path: str | Path | None = None, preset: str | None = None) -> RunConfig:
    """Exactly one of ``path`` (YAML file) or ``preset`` must be given."""
    if (path is None) == (preset is None):
        raise ConfigError("give exactly one of a config path or a preset name")
    if preset is not None:
        try:
            data = get_preset(preset)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
        return parse_config(data, source=f"preset:{preset}")
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: parse error: {exc}") from None
    if data is None:
        raise ConfigError(f"{path}: empty configuration")
    return parse_config(data, source=str(path))
