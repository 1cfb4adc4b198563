"""Outage probability and epsilon-outage rate under Rayleigh fading.

Single-RRB quantities have closed forms. For a transmitter that spreads
its power over several RRBs, :func:`multi_rrb_outage_mc` estimates the
outage by Monte Carlo and :func:`multi_rrb_outage_exact` gives the closed
form for selection combining.

Two ways of combining RRBs are supported:

``"selection"``
    The packet is duplicated on every RRB that carries power and is
    delivered if at least one copy decodes, i.e. if some RRB alone
    supports the target rate.
``"sum"``
    The packet is coded across RRBs; it is delivered if the summed
    Shannon rate reaches the target.

Interference on an RRB is given as an interference-to-noise ratio (INR)
and is, by default, Rayleigh faded like the desired signal.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import RRB_BANDWIDTH_HZ

COMBINING = {"selection": kernels.SELECTION, "sum": kernels.SUM_RATE}
_CHUNK = 1 << 16


def shannon_rate(sinr_linear, bandwidth_hz=RRB_BANDWIDTH_HZ):
    if np.any(np.asarray(sinr_linear) < 0):
        raise ValueError("sinr_linear must be nonnegative")
    return bandwidth_hz * np.log1p(sinr_linear) / math.log(2.0)


def rate_threshold(rate_bps, bandwidth_hz=RRB_BANDWIDTH_HZ):
    """SINR a single RRB needs to carry ``rate_bps``: ``2**(R/B) - 1``."""
    return math.expm1(rate_bps / bandwidth_hz * math.log(2.0))


def rayleigh_outage(mean_snr_linear, sinr_threshold_linear):
    """P(SINR < threshold) for an exponentially distributed SINR."""
    if not mean_snr_linear > 0:
        raise ValueError("mean_snr_linear must be positive")
    if sinr_threshold_linear < 0:
        raise ValueError("threshold must be nonnegative")
    return -math.expm1(-sinr_threshold_linear / mean_snr_linear)


def eps_outage_rate(mean_snr_linear, epsilon, bandwidth_hz=RRB_BANDWIDTH_HZ):
    """Largest rate (bits/s) whose Rayleigh outage does not exceed ``epsilon``."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    return bandwidth_hz * math.log1p(-math.log1p(-epsilon) * mean_snr_linear) / math.log(2.0)


@dataclass(frozen=True)
class PowerSplit:
    fractions: tuple

    def __post_init__(self):
        f = tuple(float(v) for v in self.fractions)
        if not f:
            raise ValueError("a power split needs at least one RRB")
        if any(v < 0.0 or v > 1.0 for v in f):
            raise ValueError(f"power fractions must lie in [0, 1]: {f}")
        if abs(sum(f) - 1.0) > 1e-9:
            raise ValueError(f"power fractions must sum to 1, got {sum(f)!r}")
        object.__setattr__(self, "fractions", f)

    def __len__(self):
        return len(self.fractions)

    @classmethod
    def dedicated_share(cls, alpha, n_shared=2):
        """``[alpha, (1-alpha)/n, ...]``: alpha on the first RRB, rest split evenly."""
        rest = (1.0 - alpha) / n_shared
        return cls((alpha,) + (rest,) * n_shared)

    @classmethod
    def equal(cls, n):
        return cls((1.0 / n,) * n)


@dataclass(frozen=True)
class OutageEstimate:
    p_hat: float
    half_width_95: float
    n_samples: int

    @classmethod
    def from_counts(cls, failures, n):
        p = failures / n
        return cls(p, 1.96 * math.sqrt(p * (1.0 - p) / n), n)

    @property
    def ci(self):
        return (max(0.0, self.p_hat - self.half_width_95), min(1.0, self.p_hat + self.half_width_95))

    def separated_below(self, other):
        """True when this estimate's 95% CI lies entirely below ``other``'s."""
        return self.ci[1] < other.ci[0]


def _as_splits(splits):
    rows = [s.fractions if isinstance(s, PowerSplit) else PowerSplit(tuple(s)).fractions for s in splits]
    return np.array(rows, dtype=np.float64)


def _check_inputs(n_rrb, mean_snrs, inr):
    mean_snrs = np.asarray(mean_snrs, dtype=np.float64)
    if mean_snrs.shape != (n_rrb,):
        raise ValueError(f"power split has {n_rrb} RRBs but {mean_snrs.size} mean SNRs were given")
    if inr is None:
        inr = np.zeros(n_rrb)
    inr = np.asarray(inr, dtype=np.float64)
    if inr.shape != (n_rrb,):
        raise ValueError(f"power split has {n_rrb} RRBs but {inr.size} INR values were given")
    if np.any(mean_snrs <= 0) or np.any(inr < 0):
        raise ValueError("mean SNRs must be positive and INRs nonnegative")
    return mean_snrs, inr


def sample_unit_power_sinr(mean_snrs, inr, n, rng, interference_fading=True):
    """Instantaneous SINR per RRB for unit transmit-power fraction.

    Desired and interfering links draw independent Rayleigh gains.
    """
    g = rng.exponential(1.0, size=(len(mean_snrs), n))
    x = mean_snrs[:, None] * g
    if np.any(inr > 0):
        if interference_fading:
            h = rng.exponential(1.0, size=(len(mean_snrs), n))
            x /= 1.0 + inr[:, None] * h
        else:
            x /= (1.0 + inr)[:, None]
    return x


def outage_counts_mc(splits, mean_snrs, target_rate_bps, n_samples, rng, *, inr=None,
                     combining="selection", interference_fading=True,
                     bandwidth_hz=RRB_BANDWIDTH_HZ):
    """Outage estimates for several splits evaluated on common random draws."""
    splits = _as_splits(splits)
    mean_snrs, inr = _check_inputs(splits.shape[1], mean_snrs, inr)
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    mode = COMBINING[combining]
    t = rate_threshold(target_rate_bps, bandwidth_hz)
    fails = np.zeros(len(splits), dtype=np.int64)
    done = 0
    while done < n_samples:
        m = min(_CHUNK, n_samples - done)
        x = sample_unit_power_sinr(mean_snrs, inr, m, rng, interference_fading)
        fails += kernels.count_failures(x, splits, t, mode)
        done += m
    return [OutageEstimate.from_counts(int(c), n_samples) for c in fails]


def multi_rrb_outage_mc(split, mean_snrs, target_rate_bps, n_samples, rng, *, inr=None,
                        combining="selection", interference_fading=True,
                        bandwidth_hz=RRB_BANDWIDTH_HZ):
    """Monte Carlo outage of one power split over several RRBs.

    ``mean_snrs`` are full-power, noise-only mean SNRs per RRB; ``inr``
    optionally adds interference on top. Pass ``interference_fading=False``
    to treat interference as constant extra noise. Reproducible for a
    given ``rng`` state.
    """
    if not isinstance(split, PowerSplit):
        split = PowerSplit(tuple(split))
    if n_samples < 10_000:
        raise ValueError("n_samples must be at least 1e4")
    return outage_counts_mc([split], mean_snrs, target_rate_bps, n_samples, rng, inr=inr,
                            combining=combining, interference_fading=interference_fading,
                            bandwidth_hz=bandwidth_hz)[0]


def branch_outage(x, inr, interference_fading=True):
    """P(branch fails) given normalized threshold ``x = t / (f * snr)``."""
    if math.isinf(x):
        return 1.0
    if inr <= 0.0:
        return -math.expm1(-x)
    if interference_fading:
        # E_h[exp(-x (1 + inr h))] = exp(-x) / (1 + inr x)
        return 1.0 - math.exp(-x) / (1.0 + inr * x)
    return -math.expm1(-x * (1.0 + inr))


def multi_rrb_outage_exact(split, mean_snrs, target_rate_bps, *, inr=None,
                           interference_fading=True, bandwidth_hz=RRB_BANDWIDTH_HZ):
    """Closed-form outage for selection combining: product of branch outages."""
    fractions = split.fractions if isinstance(split, PowerSplit) else PowerSplit(tuple(split)).fractions
    mean_snrs, inr = _check_inputs(len(fractions), mean_snrs, inr)
    t = rate_threshold(target_rate_bps, bandwidth_hz)
    p = 1.0
    for f, s, q in zip(fractions, mean_snrs, inr):
        x = t / (f * s) if f > 0 else math.inf
        p *= branch_outage(x, q, interference_fading)
    return p


def multi_rrb_outage_cmc(splits, mean_snrs, target_rate_bps, n_samples, rng, *, inr=None,
                         bandwidth_hz=RRB_BANDWIDTH_HZ):
    """Conditional Monte Carlo for selection combining with faded interference.

    Samples only the interference gains and integrates the desired-signal
    fading analytically, which removes most of the variance when comparing
    nearby power splits. Returns ``(p_hat, half_width_95)`` per split, all
    splits sharing the same interference draws.
    """
    splits = _as_splits(splits)
    mean_snrs, inr = _check_inputs(splits.shape[1], mean_snrs, inr)
    t = rate_threshold(target_rate_bps, bandwidth_hz)
    h = rng.exponential(1.0, size=(len(mean_snrs), n_samples))
    out = []
    for f in splits:
        p = np.ones(n_samples)
        for i, (fi, s, q) in enumerate(zip(f, mean_snrs, inr)):
            if fi <= 0:
                continue
            x = t / (fi * s)
            p *= -np.expm1(-x * (1.0 + q * h[i]))
        out.append((float(p.mean()), float(1.96 * p.std(ddof=1) / math.sqrt(n_samples))))
    return out
