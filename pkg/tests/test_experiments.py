import math
from pathlib import Path

import numpy as np
import pytest
import yaml

from skynoise.config import (
    ConfigError,
    ExperimentConfig,
    channel_from_spec,
    config_from_dict,
    default_extent,
    load_config,
)
from skynoise.experiments import (
    CSV_HEADER,
    oracle_residual_rows,
    run_compactification_break,
    run_experiment,
    run_homotopy_trace,
    run_p_sweep,
    run_simulate,
    run_topology_table,
    verify_report,
)

CONFIG_PATH = Path(__file__).resolve().parents[1] / "configs" / "paper_defaults.yaml"


def small_cfg(**run_overrides):
    raw = yaml.safe_load(CONFIG_PATH.read_text())
    raw["grid"] = {"nx": 96, "ny": 96, "extent": "auto"}
    raw["run"].update(run_overrides)
    return config_from_dict(raw)


def test_default_config_loads_and_validates():
    cfg = load_config(CONFIG_PATH)
    assert cfg.run.channel in cfg.channels
    assert cfg.grid.extent == "auto"
    assert set(cfg.channels) >= {"retarder_spatial", "diattenuator_spatial",
                                 "bit_flip_spatial", "mixed_flip"}


def test_default_extent_rule():
    assert default_extent(1, 0) == 6.0
    assert default_extent(3, 0) == 6.0
    assert default_extent(12, 1) == 5.0
    assert default_extent(0, -9) == 5.0


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown keys"):
        config_from_dict({"grid": {"nx": 32, "pitch": 1.0}})


def test_config_rejects_missing_channel_ref():
    with pytest.raises(ConfigError, match="not defined"):
        config_from_dict({"run": {"channel": "ghost"}})


def test_config_rejects_dangling_convex_ref():
    with pytest.raises(ConfigError, match="undefined"):
        config_from_dict({"channels": {
            "mix": {"family": "convex", "components": ["nope"], "weights": [1.0]}}})


def test_config_rejects_bad_sweep_values():
    with pytest.raises(ConfigError, match="outside"):
        config_from_dict({"run": {"sweep_values": [0.5, 1.5]}})


def test_channel_from_spec_all_blocks():
    cfg = load_config(CONFIG_PATH)
    grid = cfg.grid.build(1, 0)
    for name, spec in cfg.channels.items():
        ch = channel_from_spec(grid, name, spec, cfg.channels)
        assert ch.grid == grid


def test_simulate_row_and_initial_matches_standalone():
    cfg = small_cfg(experiment="simulate", channel="bit_flip_const")
    res = run_simulate(cfg)
    row = res.rows[0]
    assert row.experiment == "simulate"
    from skynoise import StateSpec, build_state, skyrmion_number, unit_stokes_of
    grid = cfg.grid.build(1, 0)
    n_ref = skyrmion_number(unit_stokes_of(build_state(StateSpec(1, 0), grid))).n
    assert row.n_initial == n_ref  # exact same code path
    assert math.isnan(row.sweep_value)


def test_topology_table_targets_and_pairs():
    # tight channel bounds live in the acceptance suite at full
    # resolution; this checks wiring on a coarse grid
    cfg = small_cfg(experiment="table", channel="retarder_spatial",
                    topologies=[-2, 1])
    res = run_topology_table(cfg)
    assert [(r.l1, r.l2) for r in res.rows] == [(-2, 0), (1, 0)]
    for r in res.rows:
        assert abs(r.n_initial - r.sweep_value) < 0.2
        assert abs(r.n_final - r.n_initial) < 0.25


def test_p_sweep_flags_singular_rows():
    cfg = small_cfg(experiment="sweep", sweep_family="phase_flip",
                    sweep_values=[0.0, 0.5, 1.0])
    res = run_p_sweep(cfg)
    tags = [r.experiment for r in res.rows]
    assert tags == ["sweep", "sweep+singular", "sweep"]
    assert abs(res.rows[1].n_final) < 0.02


def test_amplitude_damping_sweep_flags_both_singular_values():
    cfg = small_cfg(experiment="sweep", sweep_family="amplitude_damping",
                    sweep_values=[0.5, 1.0])
    res = run_p_sweep(cfg)
    assert all(r.experiment == "sweep+singular" for r in res.rows)


def test_homotopy_trace_endpoints():
    cfg = small_cfg(experiment="homotopy", channel="diattenuator_spatial",
                    t_samples=[0.0, 1.0])
    res = run_homotopy_trace(cfg)
    assert res.rows[0].n_final == pytest.approx(res.rows[0].n_initial, abs=1e-12)
    assert abs(res.rows[1].n_final - res.rows[1].n_initial) < 0.05


def test_homotopy_requires_single_kraus_family():
    cfg = small_cfg(experiment="homotopy", channel="bit_flip_const")
    with pytest.raises(ValueError, match="retarder/diattenuator"):
        run_homotopy_trace(cfg)


def test_compactification_rows_and_extras():
    cfg = small_cfg(experiment="compactify", topologies=[1])
    res = run_compactification_break(cfg)
    row = res.rows[0]
    assert 0.7 < row.n_final < 0.95
    assert row.valid_fraction < 0.1
    assert res.extras["cutoff"] == {"p0": 0.1, "a": 1.6}
    assert res.extras["boundary_phi_dependence[1]"] > 0.3


def test_compactify_cutoff_must_fit_window():
    cfg = small_cfg(experiment="compactify", topologies=[1],
                    cutoff={"p0": 0.1, "a": 7.0})
    with pytest.raises(ValueError, match="outside"):
        run_compactification_break(cfg)


def test_csv_deterministic_and_schema():
    cfg = small_cfg(experiment="sweep", sweep_family="depolarizing",
                    sweep_values=[0.0, 0.4], deterministic=True)
    a = run_experiment(cfg).csv()
    b = run_experiment(cfg).csv()
    assert a == b
    lines = a.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert all(len(line.split(",")) == 9 for line in lines)


def test_nondeterministic_wall_time_positive():
    cfg = small_cfg(experiment="simulate", channel="bit_flip_const",
                    deterministic=False)
    row = run_simulate(cfg).rows[0]
    assert row.wall_time_s > 0


def test_oracle_residual_rows_small():
    rows = oracle_residual_rows(nx=24, samples=5, seed=1)
    assert len(rows) == 3 * 5 * 3
    assert max(r[-1] for r in rows) < 1e-7


def test_verify_report_classifications():
    cfg = small_cfg()
    rep = verify_report(cfg)
    assert rep["retarder_spatial"]["classification"] == "trace-preserving"
    assert rep["diattenuator_spatial"]["classification"] == "trace-decreasing"
    assert rep["mixed_flip"]["classification"] == "trace-preserving"


def test_unknown_experiment_rejected():
    cfg = small_cfg()
    cfg.run.experiment = "frobnicate"
    with pytest.raises(ValueError, match="unknown experiment"):
        run_experiment(cfg)
