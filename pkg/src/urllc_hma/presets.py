"""Experiment presets and their CSV outputs.

``rate_vs_eps``
    Scheduled reliable rate and measured NS outage vs. the NS outage
    target, for the conservative baseline and intelligent OMA/NOMA/HMA.
``power_alloc``
    Outage vs. the dedicated-RRB power share for one NS device, under two
    shared-RRB interference levels (one CSV each).
``oracle_check``
    Closed-form single-RRB outage vs. Monte Carlo.
"""
import csv
import logging
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .agents import ALPHAS
from .channel import snr_full_power
from .engine import SimConfig, run_replications
from .outage import (PowerSplit, multi_rrb_outage_exact, outage_counts_mc, rayleigh_outage,
                     shannon_rate)
from .slicing import Mode, all_slices

EPS_GRID = tuple(10.0 ** -k for k in range(1, 8))
RATE_MODES = ("conservative", "OMA", "NOMA", "HMA")


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    axis: str
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("sweep values must be nonempty")
        d = np.diff(self.values)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("sweep values must be strictly ordered")


# --------------------------------------------------------------- power_alloc

PA_DEVICE_PL_DB = -80.0
PA_TX_DBM = 23.0
# 16 bit/s/Hz per RRB: puts the candidate splits' outages in 1e-3..1e-1
PA_TARGET_RATE_BPS = 16 * 180e3
PA_CASES = (-172.0, -164.0)
PA_SAMPLES = 1_000_000


def pa_candidates():
    """``(label alpha, split)``: the alpha grid plus the equal split."""
    out = [(a, PowerSplit.dedicated_share(a)) for a in ALPHAS]
    out.append((1.0 / 3.0, PowerSplit.equal(3)))
    return out


def pa_link(psd_dbm_hz, noise_psd=-174.0):
    s = snr_full_power(PA_TX_DBM, PA_DEVICE_PL_DB)
    inr = 10.0 ** ((psd_dbm_hz - noise_psd) / 10.0)
    return [s, s, s], [0.0, inr, inr]


def power_alloc_table(psd_dbm_hz, n_samples=PA_SAMPLES, seed=0):
    """Rows for one interference case; all candidates share random draws."""
    snrs, inrs = pa_link(psd_dbm_hz)
    cands = pa_candidates()
    ests = outage_counts_mc([s for _, s in cands], snrs, PA_TARGET_RATE_BPS, n_samples,
                            np.random.default_rng([seed, int(-psd_dbm_hz)]), inr=inrs)
    rows = []
    for (alpha, split), e in zip(cands, ests):
        rows.append({
            "alpha": alpha,
            "split": "[" + ",".join(f"{f:.4f}" for f in split.fractions) + "]",
            "interference_psd_case": f"[NONE,{psd_dbm_hz:g},{psd_dbm_hz:g}]",
            "outage": e.p_hat,
            "ci": e.half_width_95,
            "outage_exact": multi_rrb_outage_exact(split, snrs, PA_TARGET_RATE_BPS, inr=inrs),
        })
    return rows


# -------------------------------------------------------------- oracle_check

ORACLE_SNR_DB = tuple(range(10, 61, 10))
ORACLE_OUTAGES = (1e-4, 1e-3, 1e-2, 0.1, 0.5)


def oracle_check_table(n_samples=1_000_000, seed=0):
    rows = []
    rng = np.random.default_rng([seed, 7])
    for snr_db in ORACLE_SNR_DB:
        snr = 10.0 ** (snr_db / 10.0)
        for p in ORACLE_OUTAGES:
            thr = -math.log1p(-p) * snr
            rate = float(shannon_rate(thr))
            exact = rayleigh_outage(snr, thr)
            mc = outage_counts_mc([[1.0]], [snr], rate, n_samples, rng)[0].p_hat
            sigma = math.sqrt(exact * (1.0 - exact) / n_samples)
            rows.append({"mean_snr_db": snr_db, "threshold": thr, "closed_form": exact, "mc": mc,
                         "sigma": sigma, "within_4sigma": int(abs(mc - exact) <= 4.0 * sigma)})
    return rows


# --------------------------------------------------------------- rate_vs_eps


def training_slots(mode, cfg, visits_per_action=60, min_episodes=200):
    """Training length scaled with the number of slices the RRP chooses from."""
    if mode == "conservative":
        return 0
    n_actions = len(all_slices(Mode(mode)))
    return max(min_episodes, visits_per_action * n_actions) * cfg.episode_slots


def rate_vs_eps_rows(base=SimConfig(), reps=1, eps_grid=EPS_GRID, modes=RATE_MODES, workers=1):
    rows = []
    logging.getLogger("urllc_hma.engine").setLevel(logging.ERROR)
    for eps in eps_grid:
        for mode in modes:
            cfg = replace(base, mode=mode, eps_ns=eps, n_slots_train=training_slots(mode, base))
            summ = run_replications(cfg, reps, workers)
            p, hw = summ.mean["ns_outage_measured"], summ.half_width_95["ns_outage_measured"]
            r, rhw = summ.mean["reliable_rate_bps"], summ.half_width_95["reliable_rate_bps"]
            rows.append({
                "eps_ns": eps, "mode": mode, "reliable_rate_bps": r,
                "ns_outage_measured": p, "ci_low": max(0.0, p - hw), "ci_high": min(1.0, p + hw),
                "rate_ci_low": r - rhw, "rate_ci_high": r + rhw,
                "ns_outage_realized": summ.mean["ns_outage_realized"],
                "slices": " ".join("{%d,%d,%d}" % m.slice for m in summ.runs),
                "rates_per_rep": " ".join(f"{m.scheduled_reliable_goodput_bps:.1f}" for m in summ.runs),
            })
    return rows


# -------------------------------------------------------------------- output

PROB_COLUMNS = {"outage", "ci", "outage_exact", "ns_outage_measured", "ci_low", "ci_high",
                "ns_outage_realized", "closed_form", "mc", "sigma", "eps_ns", "threshold"}


def _fmt(key, v):
    if isinstance(v, float):
        return f"{v:.6e}" if key in PROB_COLUMNS else f"{v:.6f}"
    return str(v)


def write_csv(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_fmt(k, v) for k, v in r.items()])
    return path


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


PRESETS = {
    "rate_vs_eps": ExperimentPreset("rate_vs_eps", "eps_ns", EPS_GRID),
    "power_alloc": ExperimentPreset("power_alloc", "alpha", tuple(sorted(ALPHAS))),
    "oracle_check": ExperimentPreset("oracle_check", "mean_snr_db", ORACLE_SNR_DB),
}


def run_preset(name, out_dir, reps=1, seed=0, base=None, workers=1):
    """Run a preset and write its CSV file(s); returns the paths written."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    os.makedirs(out_dir, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise OSError(f"output directory {out_dir!r} is not writable")
    if name == "power_alloc":
        return [write_csv(os.path.join(out_dir, f"power_alloc_psd{int(psd)}.csv"),
                          power_alloc_table(psd, seed=seed)) for psd in PA_CASES]
    if name == "oracle_check":
        return [write_csv(os.path.join(out_dir, "oracle_check.csv"), oracle_check_table(seed=seed))]
    base = replace(base or SimConfig(), seed=seed)
    return [write_csv(os.path.join(out_dir, "rate_vs_eps.csv"),
                      rate_vs_eps_rows(base, reps, workers=workers))]
