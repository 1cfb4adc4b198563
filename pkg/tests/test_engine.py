import dataclasses
import math

import numpy as np
import pytest

from urllc_hma.agents import EQUAL, RrpAgent, conservative_slice, rru_fractions, rru_states
from urllc_hma.channel import radius_for_path_loss, snr_full_power
from urllc_hma.engine import Engine, SimConfig, run, run_replications, summarize
from urllc_hma.outage import rayleigh_outage, shannon_rate
from urllc_hma.slicing import Mode, SliceConfig

SMALL = SimConfig(n_devices=8, n_slots_train=20_000, n_slots_eval=10_000, eps_ns=1e-2)


def test_run_is_deterministic():
    assert run(SMALL) == run(SMALL)


def test_no_traffic_no_attempts():
    m = run(dataclasses.replace(SMALL, arrival_rate=0.0))
    assert m.ns_attempts == 0 and m.ns_outages == 0 and m.ns_outage_measured == 0.0


def test_invalid_config_rejected_before_simulation():
    for bad in ({"mode": "TDMA"}, {"eps_ns": 0.0}, {"n_devices": 0}, {"rru_reward": "x"},
                {"arrival_scope": "x"}, {"radius_m": 5000.0}):
        with pytest.raises(ValueError):
            Engine(dataclasses.replace(SMALL, **bad))


def test_single_device_oma_matches_closed_form():
    pl = -80.0
    snr = snr_full_power(23.0, pl)
    thr = -math.log1p(-0.01) * snr              # 1% outage on one clean RRB
    cfg = SimConfig(n_devices=1, placement="fixed", radius_m=radius_for_path_loss(pl),
                    arrival_rate=0.5, ns_rate_bps=float(shannon_rate(thr)),
                    n_slots_train=0, n_slots_eval=40_000, mode="OMA", seed=3)
    eng = Engine(cfg)
    eng.rrp = RrpAgent(Mode.OMA, actions=[SliceConfig(1, 4, 0)])
    m = eng.train().evaluate()
    p = rayleigh_outage(snr, thr)
    assert m.slice == (1, 4, 0)
    assert m.ns_outage_measured == pytest.approx(p, rel=1e-9)
    sigma = math.sqrt(p * (1 - p) / m.ns_attempts)
    assert abs(m.ns_outage_realized - p) <= 4 * sigma


def test_metrics_invariants():
    m = run(dataclasses.replace(SMALL, mode="HMA"))
    assert 0 <= m.ns_outages <= m.ns_attempts
    assert all(0.0 <= u <= 1.0 for u in m.rrb_utilization)
    assert all(0.0 <= v <= 1.0 for v in m.slice_occupancy.values())
    assert sum(m.slice) == 5


def test_power_splits_use_full_power():
    for s in rru_states():
        for a in range(EQUAL + 1):
            assert sum(rru_fractions(a, s).fractions) == pytest.approx(1.0, abs=1e-12)


def test_replications_n1_equals_single_run():
    s = run_replications(SMALL, 1)
    m = run(SMALL)
    assert s.runs == [m]
    assert s.mean["reliable_rate_bps"] == m.scheduled_reliable_goodput_bps
    assert s.half_width_95["reliable_rate_bps"] == 0.0


def test_replication_seeds_and_ci_formula():
    s = run_replications(dataclasses.replace(SMALL, n_slots_train=5_000, n_slots_eval=5_000), 4)
    rates = [m.scheduled_reliable_goodput_bps for m in s.runs]
    assert len(set(rates)) == 4
    x = np.array([m.ns_outage_measured for m in s.runs])
    assert s.half_width_95["ns_outage_measured"] == pytest.approx(1.96 * x.std(ddof=1) / 2)


def test_ci_half_width_scales_with_sqrt_n():
    # same spread at n=4 and n=16 -> half-width ratio exactly 2
    runs = run_replications(dataclasses.replace(SMALL, n_slots_train=5_000, n_slots_eval=5_000), 4).runs
    hw4 = summarize(runs).half_width_95["reliable_rate_bps"]
    x = np.array([m.scheduled_reliable_goodput_bps for m in runs])
    s4 = x.std(ddof=1)
    hw16 = 1.96 * s4 / math.sqrt(16)
    assert hw4 / hw16 == pytest.approx(2.0)


def test_eval_independent_of_training_stream():
    cfg = dataclasses.replace(SMALL, mode="HMA")
    a = Engine(cfg).train()
    text = a.export_policies()
    b = Engine(dataclasses.replace(cfg, n_slots_train=1_000)).import_policies(text)
    assert a.evaluate(seed=99) == b.evaluate(seed=99)
    with pytest.raises(ValueError):
        Engine(cfg).import_policies("[rrp]\n")


def test_intelligent_uses_fewer_ns_rrbs_for_near_users():
    eps = 1e-4
    cfg = SimConfig(n_devices=10, placement="fixed", radius_m=radius_for_path_loss(-80.0), mode="OMA",
                    eps_ns=eps, n_slots_train=360_000, n_slots_eval=20_000)
    m = run(cfg)
    cons, _ = conservative_slice(eps, cfg.ns_rate_bps)
    assert m.slice[0] < cons.n_ded_ns
    assert m.ns_outage_measured <= eps


@pytest.mark.slow
def test_rrp_never_shrinks_ns_share_as_target_tightens():
    prev = 0
    for k in range(1, 8):
        m = run(SimConfig(mode="OMA", eps_ns=10.0 ** -k, seed=2, n_slots_train=360_000, n_slots_eval=20_000))
        assert m.slice[0] >= prev
        prev = m.slice[0]


def test_cell_scope_arrivals():
    m = run(dataclasses.replace(SMALL, arrival_scope="cell", arrival_rate=0.2))
    assert m.ns_attempts == pytest.approx(0.2 * SMALL.n_slots_eval, rel=0.1)
