"""Time-slotted simulation loop.

Within each RRP episode the slice is fixed, so the scheduler for the
whole episode runs in one kernel call; NS packets are then processed in
slot order against the recorded grants. Per-slot event order is
arrivals -> RRS grants -> transmissions -> PHY outcomes -> learning.
"""
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import kernels
from .agents import (NONE, RiskMap, RrpAgent, RruAgent, conservative_slice, quantize_psd,
                     rrp_reward)
from .channel import N_RRB, ChannelParams, Position, path_loss_db, received_psd_dbm_hz, snr_full_power
from .outage import eps_outage_rate, rate_threshold
from .rl import LearningParams
from .slicing import InterferenceCap, Mode, check_interference_cap, make_mode
from .traffic import ArrivalProcess, Device, next_ns_arrival, place_users

log = logging.getLogger(__name__)

MODES = ("conservative", "OMA", "NOMA", "HMA")


@dataclass(frozen=True)
class SimConfig:
    n_devices: int = 20
    n_slots_train: int = 200_000
    n_slots_eval: int = 100_000
    episode_slots: int = 1000
    slot_ms: float = 1.0
    channel: ChannelParams = ChannelParams()
    arrival_rate: float = 0.01
    arrival_scope: str = "device"
    mode: str = "HMA"
    eps_ns: float = 1e-4
    eps_s: float = 1e-4
    learning: LearningParams = LearningParams()
    seed: int = 0
    cap_dbm_hz: float = -140.0
    ns_rate_bps: float = 240e3
    s_tx_dbm: float = 21.0
    ns_tx_dbm: float = 23.0
    delay_budget_slots: int = 10
    kappa: float = 10.0
    forget: float = 0.01
    rru_reward: str = "expected"
    placement: str = "uniform"
    radius_m: float = 3000.0

    def validate(self):
        if self.n_devices < 1:
            raise ValueError("n_devices must be >= 1")
        if self.n_slots_train < 0 or self.n_slots_eval < 1 or self.episode_slots < 1:
            raise ValueError("slot counts must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 <= self.arrival_rate < 1.0:
            raise ValueError("arrival_rate must lie in [0, 1)")
        if self.arrival_scope not in ("device", "cell"):
            raise ValueError("arrival_scope must be 'device' or 'cell'")
        for name in ("eps_ns", "eps_s"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise ValueError(f"{name} must lie in (0, 1)")
        if self.delay_budget_slots < 1:
            raise ValueError("delay_budget_slots must be >= 1")
        if self.rru_reward not in ("expected", "realized"):
            raise ValueError("rru_reward must be 'expected' or 'realized'")
        if self.placement not in ("uniform", "fixed"):
            raise ValueError("placement must be 'uniform' or 'fixed'")
        if not self.ns_rate_bps > 0 or not math.isfinite(self.cap_dbm_hz):
            raise ValueError("ns_rate_bps must be positive and cap_dbm_hz finite")
        if not 0.0 <= self.forget < 1.0:
            raise ValueError("forget must lie in [0, 1)")
        Position(self.radius_m)
        if self.n_slots_eval < 10.0 / self.eps_ns:
            log.warning("n_slots_eval=%d < 10/eps_ns: realized outage counts are not "
                        "meaningful; use the expected-outage column", self.n_slots_eval)
        return self

    @property
    def fixed_slice(self):
        """The slice when the mode leaves no choice, else ``None``."""
        if self.mode == "NOMA":
            return make_mode(Mode.NOMA)
        if self.mode == "conservative":
            return conservative_slice(self.eps_ns, self.ns_rate_bps, self.ns_tx_dbm, self.channel)[0]
        return None


@dataclass
class Metrics:
    ns_attempts: int = 0
    ns_outages: int = 0
    ns_outage_expected: float = 0.0
    scheduled_reliable_goodput_bps: float = 0.0
    rrb_utilization: tuple = (0.0,) * N_RRB
    slice_occupancy: dict = field(default_factory=dict)
    slice: tuple = (0, 0, 0)
    scheduled_violations: int = 0
    feasible: bool = True

    @property
    def ns_outage_measured(self):
        """Mean per-attempt outage probability (0 without attempts)."""
        return self.ns_outage_expected / self.ns_attempts if self.ns_attempts else 0.0

    @property
    def ns_outage_realized(self):
        return self.ns_outages / self.ns_attempts if self.ns_attempts else 0.0


def _rng(seed, label):
    return np.random.default_rng([seed, label])


class Engine:
    def __init__(self, cfg):
        self.cfg = cfg.validate()
        cp = cfg.channel
        rng = _rng(cfg.seed, 0)
        if cfg.placement == "uniform":
            self.devices = place_users(cfg.n_devices, rng, delay_budget_slots=cfg.delay_budget_slots)
        else:
            az = rng.uniform(0.0, 2.0 * math.pi, cfg.n_devices)
            self.devices = [Device(i, Position(cfg.radius_m, float(a)), delay_budget_slots=cfg.delay_budget_slots)
                            for i, a in enumerate(az)]
        self.pl = np.array([path_loss_db(d.pos, cp) for d in self.devices])
        self.rate = np.array([eps_outage_rate(snr_full_power(cfg.s_tx_dbm, p, cp), cfg.eps_s) for p in self.pl])
        self.contrib = np.array([received_psd_dbm_hz(cfg.s_tx_dbm, p) for p in self.pl])
        self.inr = 10.0 ** ((self.contrib - cp.noise_psd_dbm_hz) / 10.0)
        cap = InterferenceCap(cfg.cap_dbm_hz)
        self.admissible = np.array([check_interference_cap(cap, [c]) for c in self.contrib], dtype=np.uint8)
        self.ns_snr = np.array([snr_full_power(cfg.ns_tx_dbm, p, cp) for p in self.pl])
        self.threshold = rate_threshold(cfg.ns_rate_bps)
        self.norm = N_RRB * float(self.rate.max())

        self.feasible = True
        if cfg.mode == "conservative":
            sl, self.feasible = conservative_slice(cfg.eps_ns, cfg.ns_rate_bps, cfg.ns_tx_dbm, cp)
            self.rrp = RrpAgent(Mode.OMA, cfg.learning, actions=[sl])
        else:
            self.rrp = RrpAgent(Mode(cfg.mode), cfg.learning)
        self.rru = [RruAgent(cfg.learning, cfg.rru_reward) for _ in self.devices]
        self.risk = RiskMap(forget=cfg.forget, cp=cp)
        self.ring = np.array([self.risk.ring_of(d.pos.radius_m) for d in self.devices])
        self.trained = False

    # ------------------------------------------------------------------ phases

    def train(self):
        cfg = self.cfg
        # a lone conservative slice over clean RRBs leaves nothing to learn
        if cfg.mode != "conservative" and cfg.n_slots_train > 0:
            self._run_phase(cfg.n_slots_train, _rng(cfg.seed, 1), learn=True)
        self.trained = True
        return self

    def evaluate(self, seed=None):
        seed = self.cfg.seed if seed is None else seed
        return self._run_phase(self.cfg.n_slots_eval, _rng(seed, 2), learn=False)

    def _arrivals(self, nxt, start, end, rng):
        proc = ArrivalProcess(self.cfg.arrival_rate)
        out = []
        if self.cfg.arrival_scope == "device":
            for d in range(len(nxt)):
                while nxt[d] < end:
                    out.append((nxt[d], d))
                    nxt[d] = next_ns_arrival(proc, nxt[d], rng)
        else:
            while nxt[0] < end:
                out.append((nxt[0], int(rng.integers(len(self.devices)))))
                nxt[0] = next_ns_arrival(proc, nxt[0], rng)
        out.sort()
        return out

    def _run_phase(self, n_slots, rng, learn):
        cfg = self.cfg
        n = len(self.devices)
        budgets = np.full(n, cfg.delay_budget_slots, dtype=np.int64)
        has_traffic = cfg.arrival_rate > 0
        if has_traffic:
            proc = ArrivalProcess(cfg.arrival_rate)
            nxt = [next_ns_arrival(proc, 0, rng) for _ in range(n if cfg.arrival_scope == "device" else 1)]
        m = Metrics(feasible=self.feasible)
        used_total = np.zeros(N_RRB)
        group_used = Counter()
        group_size = Counter()
        slices = Counter()
        goodput_sum = 0.0
        last = 0
        for start in range(0, n_slots, cfg.episode_slots):
            length = min(cfg.episode_slots, n_slots - start)
            state = self.rrp.state(cfg.eps_ns, self.risk)
            self.risk.reset_peak()
            sl = self.rrp.decide(state, rng, explore=learn)
            slices[sl.as_tuple()] += length
            grants, goodput, viol = kernels.schedule_slots(
                budgets, length, self.contrib, self.admissible, self.rate,
                sl.n_ded_ns, sl.n_ded_s, sl.n_shared, cfg.delay_budget_slots)
            used = grants >= 0
            usable = sl.ns_usable
            dev_p = np.zeros(n)
            dev_cnt = np.zeros(n)
            arrivals = self._arrivals(nxt, start, start + length, rng) if has_traffic else []
            for slot, d in arrivals:
                self.risk.advance(slot - last)
                last = slot
                self.risk.update(self.ring[d], self.pl[d])
                if not usable:
                    p, p_greedy, out = 1.0, 1.0, True
                else:
                    t = slot - start
                    g = grants[t]
                    rstate = tuple(NONE if g[r] < 0 else quantize_psd(self.contrib[g[r]]) for r in usable)
                    inrs = [0.0 if g[r] < 0 else self.inr[g[r]] for r in usable]
                    snrs = [self.ns_snr[d]] * len(usable)
                    agent = self.rru[d]
                    a = agent.decide(rstate, rng, explore=learn)
                    p, out = agent.transmit(rstate, a, snrs, inrs, self.threshold, rng)
                    p_greedy = p
                    if learn:
                        agent.learn(rstate, a, p, out)
                        ga = agent.q.greedy(rstate)
                        if ga != a:
                            p_greedy = agent.transmit(rstate, ga, snrs, inrs, self.threshold, rng)[0]
                    used[t, usable] = True
                dev_p[d] += p_greedy
                dev_cnt[d] += 1
                m.ns_attempts += 1
                m.ns_outages += out
                m.ns_outage_expected += p
            self.risk.advance(start + length - last)
            last = start + length
            ep_goodput = float(goodput.mean())
            if learn:
                blocked = has_traffic and not usable
                # user-map view: average the per-device outage, so the verdict
                # does not hinge on which devices happened to transmit
                seen = dev_cnt > 0
                violated = blocked or (seen.any() and float(np.mean(dev_p[seen] / dev_cnt[seen])) > cfg.eps_ns)
                self.rrp.learn(state, sl, rrp_reward(ep_goodput / self.norm, violated,
                                                     cfg.kappa, cfg.learning.beta))
            goodput_sum += float(goodput.sum())
            m.scheduled_violations += viol
            used_total += used.sum(axis=0)
            for name, rng_ in (("ded_ns", sl.ded_ns), ("ded_s", sl.ded_s), ("shared", sl.shared)):
                group_used[name] += float(used[:, list(rng_)].sum())
                group_size[name] += length * len(rng_)
        m.scheduled_reliable_goodput_bps = goodput_sum / n_slots
        m.rrb_utilization = tuple(float(u) for u in used_total / n_slots)
        m.slice_occupancy = {k: (group_used[k] / group_size[k] if group_size[k] else 0.0)
                             for k in ("ded_ns", "ded_s", "shared")}
        m.slice = slices.most_common(1)[0][0]
        return m

    # ----------------------------------------------------------------- policies

    def export_policies(self):
        """Text dump of every learned table and the risk map."""
        parts = ["[rrp]", self.rrp.q.to_text().rstrip("\n")]
        for i, agent in enumerate(self.rru):
            parts += [f"[rru {i}]", agent.q.to_text().rstrip("\n")]
        parts += ["[risk]", "\t".join(repr(float(v)) for v in self.risk.worst_pl_db),
                  "\t".join(str(int(v)) for v in self.risk.staleness_slots),
                  "\t".join(repr(float(v)) for v in self.risk.peak_pl_db)]
        return "\n".join(parts) + "\n"

    def import_policies(self, text):
        sections, name = {}, None
        for line in text.splitlines():
            if line.startswith("[") and line.endswith("]"):
                name = line[1:-1]
                sections[name] = []
            elif name is not None:
                sections[name].append(line)
        try:
            self.rrp.q.load_text("\n".join(sections["rrp"]))
            for i, agent in enumerate(self.rru):
                agent.q.load_text("\n".join(sections[f"rru {i}"]))
            worst, stale, peak = sections["risk"][:3]
        except KeyError as e:
            raise ValueError(f"policy text lacks section {e}") from None
        self.risk.worst_pl_db = np.array([float(v) for v in worst.split("\t")])
        self.risk.staleness_slots = np.array([int(v) for v in stale.split("\t")], dtype=np.int64)
        self.risk.peak_pl_db = np.array([float(v) for v in peak.split("\t")])
        self.trained = True
        return self


def run(cfg):
    return Engine(cfg).train().evaluate()


@dataclass
class ReplicationSummary:
    runs: list
    mean: dict
    half_width_95: dict

    @property
    def n_reps(self):
        return len(self.runs)


def summarize(runs):
    keys = {"reliable_rate_bps": lambda m: m.scheduled_reliable_goodput_bps,
            "ns_outage_measured": lambda m: m.ns_outage_measured,
            "ns_outage_realized": lambda m: m.ns_outage_realized}
    mean, hw = {}, {}
    for k, f in keys.items():
        x = np.array([f(m) for m in runs])
        mean[k] = float(x.mean())
        hw[k] = float(1.96 * x.std(ddof=1) / math.sqrt(len(x))) if len(x) > 1 else 0.0
    return ReplicationSummary(list(runs), mean, hw)


def run_replications(cfg, n_reps, workers=1):
    """Replication ``r`` runs with ``seed = cfg.seed + r``."""
    if n_reps < 1:
        raise ValueError("n_reps must be >= 1")
    cfgs = [replace(cfg, seed=cfg.seed + r) for r in range(n_reps)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            runs = list(ex.map(run, cfgs))
    else:
        runs = [run(c) for c in cfgs]
    return summarize(runs)


def metrics_dict(m):
    d = asdict(m)
    d["ns_outage_measured"] = m.ns_outage_measured
    d["ns_outage_realized"] = m.ns_outage_realized
    return d
