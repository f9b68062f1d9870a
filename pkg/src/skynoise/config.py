"""Experiment configuration: YAML blocks -> validated dataclasses.

A config file has four named blocks (all keys below are the documented
ones):

grid:       nx, ny, extent ("auto" picks the calibrated default for the
            state's charges)
state:      l1, l2, alpha
channels:   named channel blocks; each has a ``family`` plus per-family
            profile blocks (see channel_from_spec); family ``convex``
            instead lists ``components`` (names of earlier blocks) and
            ``weights``
run:        experiment (simulate|table|sweep|homotopy|compactify),
            channel (name), topologies, sweep_family, sweep_values,
            t_samples, cutoff {p0, a}, deterministic, dump_fields,
            stokes_floor, trace_floor
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .channels import (
    CONSTANT_FAMILIES,
    ChannelError,
    KrausChannel,
    channel_diattenuator,
    channel_retarder,
    convex_combine,
)
from .grid import Grid, make_grid
from .profiles import profile_from_dict

DEFAULT_NX = 512
DEFAULT_NY = 512
# Window half-widths (units of w0) calibrated so the slowest 1/rho state
# tails cost < 0.015 of the winding integral at 512^2; high-charge states
# are compact and resolution-bound instead, so they get a tighter window.
DEFAULT_EXTENT_LOW_L = 6.0
DEFAULT_EXTENT_HIGH_L = 5.0
HIGH_L_THRESHOLD = 8

SINGULAR_P = {
    "bit_flip": (0.5,),
    "phase_flip": (0.5,),
    "depolarizing": (1.0,),
    "amplitude_damping": (0.5, 1.0),
    "phase_damping": (1.0,),
}


class ConfigError(ValueError):
    pass


def default_extent(l1: int, l2: int) -> float:
    if max(abs(l1), abs(l2)) >= HIGH_L_THRESHOLD:
        return DEFAULT_EXTENT_HIGH_L
    return DEFAULT_EXTENT_LOW_L


@dataclass
class GridBlock:
    nx: int = DEFAULT_NX
    ny: int = DEFAULT_NY
    extent: object = "auto"

    def build(self, l1: int, l2: int) -> Grid:
        ext = self.extent
        if ext in (None, "auto"):
            ext = default_extent(l1, l2)
        return make_grid(self.nx, self.ny, float(ext))


@dataclass
class StateBlock:
    l1: int = 1
    l2: int = 0
    alpha: float = 0.0


@dataclass
class RunBlock:
    experiment: str = "simulate"
    channel: str = ""
    topologies: list = field(default_factory=lambda: [-3, -2, -1, 1, 2, 3])
    sweep_family: str = "bit_flip"
    sweep_values: list = field(default_factory=list)
    t_samples: list = field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    cutoff: dict = field(default_factory=lambda: {"p0": 0.1, "a": 1.6})
    deterministic: bool = True
    dump_fields: bool = False
    stokes_floor: float = 1e-60
    trace_floor: float = 1e-60


@dataclass
class ExperimentConfig:
    grid: GridBlock = field(default_factory=GridBlock)
    state: StateBlock = field(default_factory=StateBlock)
    channels: dict = field(default_factory=dict)
    run: RunBlock = field(default_factory=RunBlock)

    def validate(self):
        if self.run.channel and self.run.channel not in self.channels:
            raise ConfigError(f"run.channel {self.run.channel!r} not defined "
                              f"in channels block {sorted(self.channels)}")
        for name, spec in self.channels.items():
            if "family" not in spec:
                raise ConfigError(f"channel {name!r} missing family")
            fam = spec["family"]
            known = {"retarder", "diattenuator", "convex", "cutoff_depolarizing",
                     *CONSTANT_FAMILIES}
            if fam not in known:
                raise ConfigError(f"channel {name!r} has unknown family {fam!r}")
            if fam == "convex":
                for ref in spec.get("components", []):
                    if ref not in self.channels:
                        raise ConfigError(
                            f"convex channel {name!r} references undefined {ref!r}")
        if self.run.sweep_family not in CONSTANT_FAMILIES:
            raise ConfigError(f"sweep family {self.run.sweep_family!r} is not a "
                              f"constant-p family")
        for p in self.run.sweep_values:
            if not 0.0 <= float(p) <= 1.0:
                raise ConfigError(f"sweep value {p} outside [0, 1]")
        return self


def _pick(d, cls):
    allowed = {f for f in cls.__dataclass_fields__}
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {cls.__name__} block")
    return cls(**d)


def config_from_dict(raw: dict) -> ExperimentConfig:
    raw = dict(raw or {})
    cfg = ExperimentConfig(
        grid=_pick(raw.get("grid", {}) or {}, GridBlock),
        state=_pick(raw.get("state", {}) or {}, StateBlock),
        channels=dict(raw.get("channels", {}) or {}),
        run=_pick(raw.get("run", {}) or {}, RunBlock),
    )
    return cfg.validate()


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return config_from_dict(yaml.safe_load(fh))


def channel_from_spec(grid: Grid, name: str, spec: dict,
                      all_specs: dict = None) -> KrausChannel:
    """Build one channel from its config block (recursing for convex mixes)."""
    spec = dict(spec)
    family = spec.pop("family")
    if family == "retarder":
        return channel_retarder(grid,
                                profile_from_dict(spec["theta"]),
                                profile_from_dict(spec["varphi"]),
                                profile_from_dict(spec["psi"]), name=name)
    if family == "diattenuator":
        return channel_diattenuator(grid,
                                    profile_from_dict(spec["theta"]),
                                    profile_from_dict(spec["psi"]),
                                    profile_from_dict(spec["q"]),
                                    profile_from_dict(spec["r"]), name=name)
    if family == "cutoff_depolarizing":
        from .profiles import CutoffRamp
        from .channels import channel_depolarizing
        ramp = CutoffRamp(p0=float(spec.get("p0", 0.1)), a=float(spec["a"]))
        return channel_depolarizing(grid, ramp, name=name)
    if family == "convex":
        if all_specs is None:
            raise ConfigError("convex channel needs the full channels block")
        parts = [channel_from_spec(grid, ref, all_specs[ref], all_specs)
                 for ref in spec["components"]]
        return convex_combine(parts, spec["weights"], name=name)
    if family in CONSTANT_FAMILIES:
        return CONSTANT_FAMILIES[family](grid, profile_from_dict(spec["p"]), name=name)
    raise ChannelError(f"unknown channel family {family!r}")
