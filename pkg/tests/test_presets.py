import dataclasses
import math

import pytest

from urllc_hma.engine import SimConfig
from urllc_hma.presets import (ExperimentPreset, power_alloc_table, rate_vs_eps_rows, read_csv, run_preset,
                               training_slots, write_csv)


def test_preset_sweep_must_be_ordered():
    with pytest.raises(ValueError):
        ExperimentPreset("x", "a", ())
    with pytest.raises(ValueError):
        ExperimentPreset("x", "a", (1, 3, 2))


def test_power_alloc_rows_include_oma_and_noma_points():
    rows = power_alloc_table(-172.0, n_samples=20_000)
    splits = {r["split"] for r in rows}
    assert "[1.0000,0.0000,0.0000]" in splits and "[0.3333,0.3333,0.3333]" in splits
    for r in rows:
        assert 0.0 <= r["outage"] <= 1.0 and math.isfinite(r["ci"])


def test_oracle_check_within_four_sigma(tmp_path):
    (path,) = run_preset("oracle_check", tmp_path)
    rows = read_csv(path)
    assert len(rows) == 30
    assert all(r["within_4sigma"] == "1" for r in rows)


def test_training_length_scales_with_actions():
    cfg = SimConfig()
    assert training_slots("conservative", cfg) == 0
    assert training_slots("HMA", cfg) > training_slots("OMA", cfg) >= training_slots("NOMA", cfg)


def test_rate_vs_eps_schema_and_conservative_monotone(tmp_path):
    base = SimConfig(n_devices=6, n_slots_eval=5_000)
    rows = rate_vs_eps_rows(base, 1, eps_grid=(1e-1, 1e-3, 1e-5, 1e-7), modes=("conservative",))
    assert list(rows[0])[:6] == ["eps_ns", "mode", "reliable_rate_bps", "ns_outage_measured", "ci_low", "ci_high"]
    rates = [r["reliable_rate_bps"] for r in rows]
    assert all(b <= a for a, b in zip(rates, rates[1:]))
    p = write_csv(tmp_path / "r.csv", rows)
    assert read_csv(p)[0]["mode"] == "conservative"


def test_run_preset_rejects_unknown(tmp_path):
    with pytest.raises(ValueError):
        run_preset("nope", tmp_path)
