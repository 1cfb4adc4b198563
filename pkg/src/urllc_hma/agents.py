"""The three decision makers: provisioning (RRP), scheduling (RRS), utilization (RRU).

* RRP picks a :class:`SliceConfig` per episode from a learned Q-table whose
  state is the NS reliability target and the riskiest ring of the risk map.
* RRS is rule based: rank by remaining delay budget, then by expected
  interference contribution, and respect the shared-RRB cap.
* RRU picks, per NS packet, how a device spreads its power over the RRBs
  it may use, given the quantized interference on each.
"""
import itertools
import math

import numpy as np

from .channel import ChannelParams, radius_for_path_loss, snr_full_power
from .outage import PowerSplit, branch_outage, multi_rrb_outage_exact, rate_threshold
from .rl import LearningParams, QTable, q_update, risk_utility, select_action
from .slicing import Mode, SliceConfig, all_slices, check_interference_cap

# --------------------------------------------------------------------- risk map


def ring_edges(n_rings=5, cp=ChannelParams()):
    """Ring boundaries (m) with equal path-loss steps from ``pl_ref`` to ``pl_floor``."""
    pls = np.linspace(cp.pl_ref_db, cp.pl_floor_db, n_rings + 1)
    return tuple(float(radius_for_path_loss(p, cp)) for p in pls)


class RiskMap:
    """Per-ring running estimate of the worst NS path loss seen.

    Estimates relax toward the best-case ``pl_ref_db`` by a factor
    ``1 - forget`` per slot without observations.
    """

    def __init__(self, edges=None, forget=0.01, cp=ChannelParams()):
        self.edges = tuple(edges) if edges is not None else ring_edges(cp=cp)
        self.forget = forget
        self.pl_ref = cp.pl_ref_db
        self.pl_floor = cp.pl_floor_db
        n = len(self.edges) - 1
        self.worst_pl_db = np.full(n, self.pl_ref)
        self.staleness_slots = np.zeros(n, dtype=np.int64)
        # lowest estimate per ring since the last reset_peak()
        self.peak_pl_db = self.worst_pl_db.copy()

    @property
    def n_rings(self):
        return len(self.worst_pl_db)

    def ring_of(self, radius_m):
        i = int(np.searchsorted(self.edges, radius_m, side="right")) - 1
        return min(max(i, 0), self.n_rings - 1)

    def advance(self, n_slots=1):
        if n_slots <= 0:
            return self
        decay = (1.0 - self.forget) ** n_slots
        self.worst_pl_db = self.pl_ref + (self.worst_pl_db - self.pl_ref) * decay
        self.staleness_slots += n_slots
        return self

    def update(self, ring, pl_db):
        if not self.pl_floor <= pl_db <= self.pl_ref:
            raise ValueError(f"pl_db {pl_db} outside [{self.pl_floor}, {self.pl_ref}]")
        self.worst_pl_db[ring] = min(self.worst_pl_db[ring], pl_db)
        self.peak_pl_db[ring] = min(self.peak_pl_db[ring], self.worst_pl_db[ring])
        self.staleness_slots[ring] = 0
        return self

    def reset_peak(self):
        self.peak_pl_db = self.worst_pl_db.copy()
        return self

    def worst_ring(self, peak=False):
        """Index of the ring with the lowest (riskiest) estimate; 0 if nothing learned.

        With ``peak=True`` the lowest estimate since :meth:`reset_peak` is
        used, so a ring that went quiet for a few slots still counts.
        """
        return int(np.argmin(self.peak_pl_db if peak else self.worst_pl_db))

    def worst_pl(self):
        return float(self.worst_pl_db.min())


def update_risk_map(risk_map, observation):
    ring, pl_db = observation
    return risk_map.update(ring, pl_db)


# ------------------------------------------------------------ conservative RRP


def conservative_slice(eps_ns, ns_rate_bps, tx_power_dbm=23.0, cp=ChannelParams(), pl_db=None):
    """Fewest dedicated NS RRBs meeting ``eps_ns`` for a cell-edge NS user.

    The cell-edge user (path loss ``pl_floor_db`` unless ``pl_db`` is
    given) spreads its power equally over the dedicated RRBs. Returns
    ``(slice, feasible)``; an infeasible target yields all five RRBs.
    """
    if not 0.0 < eps_ns < 1.0:
        raise ValueError("eps_ns must lie in (0, 1)")
    pl = cp.pl_floor_db if pl_db is None else pl_db
    s = snr_full_power(tx_power_dbm, pl, cp)
    for n in range(1, 6):
        p = multi_rrb_outage_exact(PowerSplit.equal(n), [s] * n, ns_rate_bps)
        if p <= eps_ns:
            return SliceConfig(n, 5 - n, 0), True
    return SliceConfig(5, 0, 0), False


# --------------------------------------------------------------------------- RRP

N_EPS_BUCKETS = 7


def eps_bucket(eps):
    """Decade index: 1e-1 -> 0, ..., 1e-7 -> 6 (clipped)."""
    k = int(round(-math.log10(eps))) - 1
    return min(max(k, 0), N_EPS_BUCKETS - 1)


def protective_order(slices):
    """Most NS protection first: more dedicated-NS, then fewer shared RRBs.

    Greedy ties go to the lowest action id, so untrained states fall back
    to the safest slice.
    """
    return sorted(slices, key=lambda s: (-s.n_ded_ns, -s.n_ded_s))


class RrpAgent:
    def __init__(self, mode=Mode.HMA, params=LearningParams(), n_rings=5, actions=None):
        self.mode = Mode(mode) if not isinstance(mode, Mode) else mode
        self.params = params
        acts = list(actions) if actions is not None else protective_order(all_slices(self.mode))
        states = list(itertools.product(range(N_EPS_BUCKETS), range(n_rings)))
        self.q = QTable(states, [a.as_tuple() for a in acts])

    @staticmethod
    def state(eps_ns, risk_map):
        return (eps_bucket(eps_ns), risk_map.worst_ring(peak=True))

    def decide(self, state, rng, explore=True):
        params = self.params if explore else self.params.greedy()
        return SliceConfig(*select_action(self.q, state, params, rng))

    def learn(self, state, action, reward):
        # each episode is one decision: terminal update
        q_update(self.q, state, action.as_tuple(), reward, None, self.params)


def rrp_reward(norm_goodput, violated, kappa=10.0, beta=1.0):
    return risk_utility(norm_goodput - (kappa if violated else 0.0), beta)


# --------------------------------------------------------------------------- RRS


def rrs_schedule(budgets, contributions_dbm_hz, slice_cfg, cap, existing_psd=None):
    """One slot of scheduling.

    ``budgets`` are remaining delay budgets and ``contributions_dbm_hz`` the
    predicted interference PSD each scheduled user would cause at the BS.
    ``existing_psd`` maps shared RRB index -> interference already present.
    Returns a list with the granted user (or ``None``) per RRB.
    """
    n = len(budgets)
    existing_psd = existing_psd or {}
    order = sorted(range(n), key=lambda u: (budgets[u], contributions_dbm_hz[u], u))
    grants = [None] * (slice_cfg.n_ded_ns + slice_cfg.n_ded_s + slice_cfg.n_shared)
    served = set()
    ranked = iter(order)
    for rrb in slice_cfg.ded_s:
        u = next(ranked, None)
        if u is None:
            break
        grants[rrb] = u
        served.add(u)
    for rrb in slice_cfg.shared:
        for u in order:
            if u in served:
                continue
            if check_interference_cap(cap, [existing_psd.get(rrb), contributions_dbm_hz[u]]):
                grants[rrb] = u
                served.add(u)
                break
    return grants


# --------------------------------------------------------------------------- RRU

NONE, LE_172, LE_164, GT_164 = 0, 1, 2, 3
BUCKET_NAMES = ("NONE", "<=-172", "<=-164", ">-164")
# PSD used for a bucket when only the bucket is known
BUCKET_PSD = {NONE: None, LE_172: -172.0, LE_164: -164.0, GT_164: -156.0}
ALPHAS = tuple(round(1.0 - 0.1 * i, 10) for i in range(11))
EQUAL = len(ALPHAS)
MAX_USABLE = 5


def quantize_psd(psd_dbm_hz):
    if psd_dbm_hz is None:
        return NONE
    if psd_dbm_hz <= -172.0:
        return LE_172
    if psd_dbm_hz <= -164.0:
        return LE_164
    return GT_164


def rru_states(max_len=MAX_USABLE):
    return [s for n in range(1, max_len + 1) for s in itertools.product(range(4), repeat=n)]


def rru_fractions(action, state):
    """Power split for an RRU action.

    Action ``i < EQUAL`` puts ``ALPHAS[i]`` of the power on the
    interference-free RRBs and the rest on the interfered ones, equally
    within each group; an empty group hands its share to the other.
    ``EQUAL`` splits evenly over all usable RRBs.
    """
    n = len(state)
    if action == EQUAL:
        return PowerSplit.equal(n)
    alpha = ALPHAS[action]
    clean = [i for i, b in enumerate(state) if b == NONE]
    dirty = [i for i, b in enumerate(state) if b != NONE]
    if not clean or not dirty:
        return PowerSplit.equal(n)
    f = [0.0] * n
    for i in clean:
        f[i] = alpha / len(clean)
    for i in dirty:
        f[i] = (1.0 - alpha) / len(dirty)
    return PowerSplit(tuple(f))


def selection_outage(fractions, mean_snrs, inrs, threshold):
    """Selection-combining outage with Rayleigh-faded interference."""
    p = 1.0
    for f, s, q in zip(fractions, mean_snrs, inrs):
        p *= branch_outage(threshold / (f * s) if f > 0 else math.inf, q)
    return p


def expected_utility(p_outage, beta):
    """E[u(R)] for a delivery reward of +1 and an outage reward of -1."""
    return (1.0 - p_outage) * risk_utility(1.0, beta) + p_outage * risk_utility(-1.0, beta)


class RruAgent:
    """Device-side power allocation learner.

    ``reward="expected"`` feeds the Q-update the expected utility of the
    ±1 delivery reward given the observed interference (the packet's
    outage probability is known to the device from its link budget);
    ``reward="realized"`` uses the utility of the sampled ±1 outcome.
    """

    def __init__(self, params=LearningParams(), reward="expected", max_usable=MAX_USABLE):
        if reward not in ("expected", "realized"):
            raise ValueError(f"unknown RRU reward {reward!r}")
        self.params = params
        self.reward = reward
        self.q = QTable(rru_states(max_usable), range(EQUAL + 1))

    def decide(self, state, rng, explore=True):
        params = self.params if explore else self.params.greedy()
        return select_action(self.q, state, params, rng)

    def transmit(self, state, action, mean_snrs, inrs, threshold, rng):
        """Outage probability of the chosen split and a sampled outcome."""
        f = rru_fractions(action, state).fractions
        p = selection_outage(f, mean_snrs, inrs, threshold)
        return p, bool(rng.random() < p)

    def learn(self, state, action, p_outage, outage):
        if self.reward == "expected":
            r = expected_utility(p_outage, self.params.beta)
        else:
            r = risk_utility(-1.0 if outage else 1.0, self.params.beta)
        q_update(self.q, state, action, r, None, self.params)


def train_rru(agent, mean_snr, states, target_rate_bps, n_slots, rng, cp=ChannelParams()):
    """Train ``agent`` for one device at fixed ``mean_snr`` (noise only, full power).

    Each slot draws a state uniformly from ``states`` and uses the
    bucket's representative interference PSD.
    """
    t = rate_threshold(target_rate_bps)
    inr_of = {b: (0.0 if BUCKET_PSD[b] is None else 10.0 ** ((BUCKET_PSD[b] - cp.noise_psd_dbm_hz) / 10.0))
              for b in BUCKET_PSD}
    states = list(states)
    for _ in range(n_slots):
        s = states[int(rng.integers(len(states)))]
        a = agent.decide(s, rng)
        p, out = agent.transmit(s, a, [mean_snr] * len(s), [inr_of[b] for b in s], t, rng)
        agent.learn(s, a, p, out)
    return agent
