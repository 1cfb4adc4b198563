"""Cell geometry, log-distance path loss, Rayleigh fading and link budgets.

All powers are in dBm, spectral densities in dBm/Hz and path losses are
negative gains in dB (e.g. -95 dB), so a received level is simply
``tx_power_dbm + pl_db``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

CELL_RADIUS_M = 3000.0
MIN_RADIUS_M = 30.0
RRB_BANDWIDTH_HZ = 180e3
N_RRB = 5


def db_to_lin(x_db):
    return np.power(10.0, np.divide(x_db, 10.0))


def lin_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class Position:
    """Polar position relative to the base station at the cell center."""

    radius_m: float
    azimuth_rad: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.radius_m <= CELL_RADIUS_M):
            raise ValueError(f"radius_m must be in (0, {CELL_RADIUS_M}], got {self.radius_m}")
        if not (0.0 <= self.azimuth_rad < 2.0 * math.pi):
            raise ValueError(f"azimuth_rad must be in [0, 2*pi), got {self.azimuth_rad}")


@dataclass(frozen=True)
class ChannelParams:
    pl_ref_db: float = -70.0
    d_ref_m: float = 30.0
    pl_exponent: float = 2.5
    pl_floor_db: float = -120.0
    noise_psd_dbm_hz: float = -174.0

    def __post_init__(self):
        if not self.pl_ref_db > self.pl_floor_db:
            raise ValueError("pl_ref_db must exceed pl_floor_db")
        if not self.pl_exponent > 0:
            raise ValueError("pl_exponent must be positive")
        if not self.d_ref_m > 0:
            raise ValueError("d_ref_m must be positive")


def path_loss_db(pos, cp=ChannelParams()):
    """Log-distance path loss clamped to ``[pl_floor_db, pl_ref_db]``.

    ``pos`` may be a :class:`Position` or a bare distance in meters.
    """
    r = pos.radius_m if isinstance(pos, Position) else float(pos)
    if not r > 0:
        raise ValueError(f"distance must be positive, got {r}")
    pl = cp.pl_ref_db - 10.0 * cp.pl_exponent * math.log10(r / cp.d_ref_m)
    return min(max(pl, cp.pl_floor_db), cp.pl_ref_db)


def radius_for_path_loss(pl_db, cp=ChannelParams()):
    """Inverse of :func:`path_loss_db` inside the unclamped range."""
    return cp.d_ref_m * 10.0 ** ((cp.pl_ref_db - pl_db) / (10.0 * cp.pl_exponent))


def noise_power_dbm(psd_dbm_hz, bandwidth_hz):
    if not bandwidth_hz > 0:
        raise ValueError("bandwidth_hz must be positive")
    return psd_dbm_hz + 10.0 * math.log10(bandwidth_hz)


def combine_psd_dbm_hz(*psds):
    """Power-sum of spectral densities; ``None`` entries contribute nothing."""
    total = sum(10.0 ** (p / 10.0) for p in psds if p is not None)
    if total <= 0:
        return None
    return 10.0 * math.log10(total)


@dataclass
class LinkBudget:
    """Per-RRB link budget for one transmitter.

    ``interference_psd_dbm_hz`` holds one entry per RRB; ``None`` means the
    RRB is interference-free.
    """

    tx_power_dbm: float
    pl_db: float
    interference_psd_dbm_hz: list = field(default_factory=lambda: [None])
    rrb_bandwidth_hz: float = RRB_BANDWIDTH_HZ
    noise_psd_dbm_hz: float = -174.0

    @property
    def n_rrb(self):
        return len(self.interference_psd_dbm_hz)

    @property
    def mean_snr_linear(self):
        return [mean_snr(self, i) for i in range(self.n_rrb)]


def mean_snr(lb, rrb_index):
    """Mean SINR (linear) on one RRB: interference is treated as extra noise."""
    if not 0 <= rrb_index < lb.n_rrb:
        raise IndexError(f"rrb_index {rrb_index} outside 0..{lb.n_rrb - 1}")
    eff_psd = combine_psd_dbm_hz(lb.noise_psd_dbm_hz, lb.interference_psd_dbm_hz[rrb_index])
    snr_db = lb.tx_power_dbm + lb.pl_db - noise_power_dbm(eff_psd, lb.rrb_bandwidth_hz)
    return 10.0 ** (snr_db / 10.0)


def snr_full_power(tx_power_dbm, pl_db, cp=ChannelParams(), bandwidth_hz=RRB_BANDWIDTH_HZ):
    """Noise-only mean SNR of a transmitter putting all its power on one RRB."""
    return 10.0 ** ((tx_power_dbm + pl_db - noise_power_dbm(cp.noise_psd_dbm_hz, bandwidth_hz)) / 10.0)


def received_psd_dbm_hz(tx_power_dbm, pl_db, bandwidth_hz=RRB_BANDWIDTH_HZ):
    """PSD at the BS of a transmitter spreading its power over one RRB."""
    return tx_power_dbm + pl_db - 10.0 * math.log10(bandwidth_hz)


def interference_to_noise(psd_dbm_hz, cp=ChannelParams()):
    if psd_dbm_hz is None:
        return 0.0
    return 10.0 ** ((psd_dbm_hz - cp.noise_psd_dbm_hz) / 10.0)


def draw_fading(rng, size=None):
    """Rayleigh-fading power gain(s): exponential with unit mean."""
    return rng.exponential(1.0, size)
