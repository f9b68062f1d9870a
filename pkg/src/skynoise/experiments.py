"""Experiment orchestration: tables, sweeps, homotopy traces, cutoff runs.

Every run produces ExperimentRows with the fixed CSV schema

    experiment,channel,sweep_value,l1,l2,n_initial,n_final,valid_fraction,wall_time_s

(floats at 17 significant digits).  Rows hit by a family's singular
parameter values carry an experiment id suffixed with ``+singular``;
under the deterministic flag wall_time_s is written as 0 so identical
configs produce byte-identical CSV.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field

import numpy as np

from .channels import CONSTANT_FAMILIES, KrausChannel, apply_channel, verify_cptp
from .config import SINGULAR_P, ExperimentConfig, channel_from_spec
from .grid import Grid
from .modes import StateSpec, build_state
from .oracle import ORACLE_L1, ORACLE_L2, analytic_stokes
from .profiles import CutoffRamp, constant
from .topology import (
    boundary_phi_dependence,
    skyrmion_number,
    stokes_from_density,
    unit_stokes_of,
)

CSV_HEADER = ("experiment,channel,sweep_value,l1,l2,"
              "n_initial,n_final,valid_fraction,wall_time_s")
ORACLE_CSV_HEADER = "family,p,rho,phi,component,pipeline,analytic,rel_err"


@dataclass
class ExperimentRow:
    experiment: str
    channel: str
    sweep_value: float
    l1: int
    l2: int
    n_initial: float
    n_final: float
    valid_fraction: float
    wall_time_s: float

    def csv(self) -> str:
        def f(x):
            return f"{float(x):.17g}"
        return ",".join([
            self.experiment, self.channel, f(self.sweep_value),
            str(self.l1), str(self.l2), f(self.n_initial), f(self.n_final),
            f(self.valid_fraction), f(self.wall_time_s),
        ])


@dataclass
class ExperimentResult:
    rows: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)   # non-tabular diagnostics

    def csv(self) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for r in self.rows:
            out.write(r.csv() + "\n")
        return out.getvalue()


def _clock(cfg) -> float:
    return 0.0 if cfg.run.deterministic else time.perf_counter()


def _elapsed(cfg, t0) -> float:
    return 0.0 if cfg.run.deterministic else time.perf_counter() - t0


def _pair_for_target(n: int):
    """Minimal-|l| charge pair realizing winding n: (n, 0).

    The sign of the winding follows the sign of the charge; pairing a
    positive l1 against a larger l2 does not flip it.
    """
    if n == 0:
        return (0, 0)
    return (int(n), 0)


def _measure(cfg, spec: StateSpec, grid: Grid, ch: KrausChannel = None):
    """(n_initial, n_final, valid_fraction) for one state/channel pair."""
    state = build_state(spec, grid)
    floor = cfg.run.stokes_floor
    n0 = skyrmion_number(unit_stokes_of(state, floor)).n
    if ch is None:
        return n0, n0, 1.0
    noisy = apply_channel(state, ch, trace_floor=cfg.run.trace_floor)
    res = skyrmion_number(unit_stokes_of(noisy, floor))
    return n0, res.n, res.valid_fraction


def _resolve_channel(cfg, grid: Grid) -> KrausChannel:
    name = cfg.run.channel
    return channel_from_spec(grid, name, cfg.channels[name], cfg.channels)


def run_simulate(cfg: ExperimentConfig) -> ExperimentResult:
    """Single state through the configured channel (or clean if none)."""
    spec = StateSpec(cfg.state.l1, cfg.state.l2, cfg.state.alpha)
    grid = cfg.grid.build(spec.l1, spec.l2)
    ch = _resolve_channel(cfg, grid) if cfg.run.channel else None
    t0 = _clock(cfg)
    n0, n1, vf = _measure(cfg, spec, grid, ch)
    row = ExperimentRow("simulate", cfg.run.channel or "none", float("nan"),
                        spec.l1, spec.l2, n0, n1, vf, _elapsed(cfg, t0))
    return ExperimentResult([row])


def run_topology_table(cfg: ExperimentConfig) -> ExperimentResult:
    """N_initial/N_final across the configured topology list."""
    rows = []
    for target in cfg.run.topologies:
        l1, l2 = _pair_for_target(int(target))
        spec = StateSpec(l1, l2, cfg.state.alpha)
        grid = cfg.grid.build(l1, l2)
        ch = _resolve_channel(cfg, grid)
        t0 = _clock(cfg)
        n0, n1, vf = _measure(cfg, spec, grid, ch)
        rows.append(ExperimentRow("table", ch.name, float(target), l1, l2,
                                  n0, n1, vf, _elapsed(cfg, t0)))
    return ExperimentResult(rows)


def run_p_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    """Constant-p sweep of one channel family on the configured state."""
    family = cfg.run.sweep_family
    build = CONSTANT_FAMILIES[family]
    singular = SINGULAR_P.get(family, ())
    spec = StateSpec(cfg.state.l1, cfg.state.l2, cfg.state.alpha)
    grid = cfg.grid.build(spec.l1, spec.l2)
    values = cfg.run.sweep_values or [round(0.05 * k, 2) for k in range(21)]
    rows = []
    for p in values:
        ch = build(grid, constant(float(p)), name=family)
        t0 = _clock(cfg)
        n0, n1, vf = _measure(cfg, spec, grid, ch)
        tag = "sweep+singular" if any(abs(p - s) < 1e-12 for s in singular) else "sweep"
        rows.append(ExperimentRow(tag, family, float(p), spec.l1, spec.l2,
                                  n0, n1, vf, _elapsed(cfg, t0)))
    return ExperimentResult(rows)


def run_homotopy_trace(cfg: ExperimentConfig) -> ExperimentResult:
    """N along the identity-to-channel deformation of a single-Kraus family."""
    from .channels import homotopy_channel
    from .profiles import profile_from_dict

    name = cfg.run.channel
    spec_dict = dict(cfg.channels[name])
    family = spec_dict.pop("family")
    if family not in ("retarder", "diattenuator"):
        raise ValueError(f"homotopy trace needs retarder/diattenuator, got {family}")
    profiles = {k: profile_from_dict(v) for k, v in spec_dict.items()}
    spec = StateSpec(cfg.state.l1, cfg.state.l2, cfg.state.alpha)
    grid = cfg.grid.build(spec.l1, spec.l2)
    rows = []
    for t in cfg.run.t_samples:
        ch = homotopy_channel(family, grid, profiles, float(t), name=f"{name}@t")
        t0 = _clock(cfg)
        n0, n1, vf = _measure(cfg, spec, grid, ch)
        rows.append(ExperimentRow("homotopy", name, float(t), spec.l1, spec.l2,
                                  n0, n1, vf, _elapsed(cfg, t0)))
    return ExperimentResult(rows)


def run_compactification_break(cfg: ExperimentConfig) -> ExperimentResult:
    """Depolarizer saturating at radius a: non-integer N plus the boundary
    angular-dependence diagnostic of the surviving region."""
    from .channels import channel_depolarizing

    p0 = float(cfg.run.cutoff.get("p0", 0.1))
    a = float(cfg.run.cutoff.get("a", 1.6))
    ramp = CutoffRamp(p0=p0, a=a)
    rows = []
    extras = {}
    for target in cfg.run.topologies:
        l1, l2 = _pair_for_target(int(target))
        spec = StateSpec(l1, l2, cfg.state.alpha)
        grid = cfg.grid.build(l1, l2)
        if a >= grid.extent:
            raise ValueError(f"cutoff radius {a} outside window {grid.extent}")
        ch = channel_depolarizing(grid, ramp, name="cutoff_depolarizing")
        t0 = _clock(cfg)
        state = build_state(spec, grid)
        n0 = skyrmion_number(unit_stokes_of(state, cfg.run.stokes_floor)).n
        noisy = apply_channel(state, ch, trace_floor=cfg.run.trace_floor)
        u = unit_stokes_of(noisy, cfg.run.stokes_floor)
        res = skyrmion_number(u)
        # ring just inside the surviving disk; back off the interpolation
        # stencil so coarse grids stay clear of the dark rim
        ring = min(0.9 * a, a - 3.0 * max(grid.dx, grid.dy))
        extras[f"boundary_phi_dependence[{target}]"] = \
            boundary_phi_dependence(u, ring)
        rows.append(ExperimentRow("compactify", "cutoff_depolarizing", float(target),
                                  l1, l2, n0, res.n, res.valid_fraction,
                                  _elapsed(cfg, t0)))
    extras["cutoff"] = {"p0": p0, "a": a}
    return ExperimentResult(rows, extras)


def oracle_residual_rows(nx: int = 32, extent: float = 5.0,
                         samples: int = 200, seed: int = 7):
    """Pipeline-vs-closed-form residual table for the (12, 1) state.

    Each sample draws a pixel with rho in [0.2, 4.5] and a p uniform in
    (0, 1), runs the full build/apply/trace pipeline (renormalization
    off) and compares each Stokes component against the analytic value.
    """
    from .channels import (channel_amplitude_damping, channel_bit_flip,
                           channel_phase_damping)

    grid = Grid(nx, nx, extent)
    spec = StateSpec(ORACLE_L1, ORACLE_L2)
    state = build_state(spec, grid)
    rho_r, phi_r = grid.polar()
    usable = np.argwhere((rho_r > 0.2) & (rho_r < 4.5))
    rng = np.random.default_rng(seed)
    builders = {"bit_flip": channel_bit_flip,
                "amp_damp": channel_amplitude_damping,
                "phase_damp": channel_phase_damping}
    rows = []
    for family, build in builders.items():
        for _ in range(samples):
            j, i = usable[rng.integers(len(usable))]
            p = float(rng.uniform(0.02, 0.98))
            ch = build(grid, constant(p))
            noisy = apply_channel(state, ch, renormalize=False)
            S = stokes_from_density(noisy)
            got = (S.sx[j, i], S.sy[j, i], S.sz[j, i])
            want = analytic_stokes(family, p, rho_r[j, i], phi_r[j, i])
            for comp, g, w in zip("xyz", got, want):
                scale = max(abs(g), abs(w))
                rel = abs(g - w) / scale if scale > 1e-290 else 0.0
                rows.append((family, p, float(rho_r[j, i]), float(phi_r[j, i]),
                             f"s{comp}", float(g), float(w), rel))
    return rows


def oracle_residuals_csv(**kw) -> str:
    out = io.StringIO()
    out.write(ORACLE_CSV_HEADER + "\n")
    for row in oracle_residual_rows(**kw):
        fields = [row[0]] + [f"{v:.17g}" if isinstance(v, float) else str(v)
                             for v in row[1:4]] + [row[4]] + \
                 [f"{v:.17g}" for v in row[5:]]
        out.write(",".join(fields) + "\n")
    return out.getvalue()


def verify_report(cfg: ExperimentConfig) -> dict:
    """CPTP classification of every configured channel block."""
    report = {}
    grid = cfg.grid.build(cfg.state.l1, cfg.state.l2)
    for name, spec in cfg.channels.items():
        ch = channel_from_spec(grid, name, spec, cfg.channels)
        rep = verify_cptp(ch)
        report[name] = {
            "classification": rep.classification,
            "max_identity_deviation": rep.max_identity_deviation,
            "max_psd_defect": rep.max_psd_defect,
        }
    return report


EXPERIMENTS = {
    "simulate": run_simulate,
    "table": run_topology_table,
    "sweep": run_p_sweep,
    "homotopy": run_homotopy_trace,
    "compactify": run_compactification_break,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    kind = cfg.run.experiment
    if kind not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {kind!r}; expected {sorted(EXPERIMENTS)}")
    return EXPERIMENTS[kind](cfg)


def field_dump_payload(cfg: ExperimentConfig):
    """Unit-Stokes + winding-density snapshots for the configured run.

    Returns {filename: bytes} of SKGF blobs with components ux, uy, uz,
    mask, density (5 per snapshot), for the clean state and, when a
    channel is configured, the noisy state.
    """
    from .grid import skgf_bytes

    spec = StateSpec(cfg.state.l1, cfg.state.l2, cfg.state.alpha)
    grid = cfg.grid.build(spec.l1, spec.l2)
    state = build_state(spec, grid)
    payload = {}

    def snap(tag, fld):
        u = unit_stokes_of(fld, cfg.run.stokes_floor)
        dens = skyrmion_number(u).density
        payload[f"{tag}.skgf"] = skgf_bytes(
            grid, [u.ux, u.uy, u.uz, u.mask.astype(np.float64), dens.data])

    snap("clean", state)
    if cfg.run.channel:
        ch = _resolve_channel(cfg, grid)
        snap(f"noisy_{cfg.run.channel}", apply_channel(
            state, ch, trace_floor=cfg.run.trace_floor))
    return payload
