"""HMA partition of the RRB pool and the shared-RRB interference cap.

RRB indices are laid out as ``[dedicated-NS | dedicated-S | shared]``.
"""
import math
from dataclasses import dataclass
from enum import Enum

from .channel import N_RRB


class Mode(Enum):
    OMA = "OMA"
    NOMA = "NOMA"
    HMA = "HMA"


@dataclass(frozen=True)
class SliceConfig:
    n_ded_ns: int
    n_ded_s: int
    n_shared: int

    def __post_init__(self):
        counts = (self.n_ded_ns, self.n_ded_s, self.n_shared)
        if any(c < 0 for c in counts):
            raise ValueError(f"RRB counts must be nonnegative: {counts}")
        if sum(counts) != N_RRB:
            raise ValueError(f"RRB counts must sum to {N_RRB}: {counts}")

    @property
    def ded_ns(self):
        return range(0, self.n_ded_ns)

    @property
    def ded_s(self):
        return range(self.n_ded_ns, self.n_ded_ns + self.n_ded_s)

    @property
    def shared(self):
        return range(self.n_ded_ns + self.n_ded_s, N_RRB)

    @property
    def ns_usable(self):
        """RRBs an NS packet may use: dedicated-NS followed by shared."""
        return list(self.ded_ns) + list(self.shared)

    def as_tuple(self):
        return (self.n_ded_ns, self.n_ded_s, self.n_shared)

    def __str__(self):
        return "{%d,%d,%d}" % self.as_tuple()


def make_mode(mode, n_ded_ns=0, n_ded_s=0):
    mode = Mode(mode) if not isinstance(mode, Mode) else mode
    if mode is Mode.NOMA:
        if n_ded_ns or n_ded_s:
            raise ValueError("NOMA has no dedicated RRBs")
        return SliceConfig(0, 0, N_RRB)
    if mode is Mode.OMA and n_ded_ns + n_ded_s != N_RRB:
        raise ValueError(f"OMA dedicates all {N_RRB} RRBs, got {n_ded_ns}+{n_ded_s}")
    return SliceConfig(n_ded_ns, n_ded_s, N_RRB - n_ded_ns - n_ded_s)


def all_slices(mode=Mode.HMA):
    """Every valid partition for ``mode``, in lexicographic order."""
    mode = Mode(mode) if not isinstance(mode, Mode) else mode
    if mode is Mode.NOMA:
        return [SliceConfig(0, 0, N_RRB)]
    out = []
    for a in range(N_RRB + 1):
        for b in range(N_RRB + 1 - a):
            c = N_RRB - a - b
            if mode is Mode.OMA and c:
                continue
            out.append(SliceConfig(a, b, c))
    return out


@dataclass(frozen=True)
class InterferenceCap:
    max_psd_dbm_hz: float = -172.0

    def __post_init__(self):
        if not math.isfinite(self.max_psd_dbm_hz):
            raise ValueError("interference cap must be finite")

    @property
    def linear(self):
        return 10.0 ** (self.max_psd_dbm_hz / 10.0)


def aggregate_psd_linear(contributions):
    return sum(10.0 ** (c / 10.0) for c in contributions if c is not None)


def check_interference_cap(cap, per_user_psd_contributions):
    """True iff the aggregate interference respects ``cap``.

    ``per_user_psd_contributions`` is either a flat list of dBm/Hz values
    for one shared RRB or a list of such lists, one per shared RRB.
    ``None`` entries contribute nothing. Ties are admitted.
    """
    contribs = list(per_user_psd_contributions)
    if contribs and all(isinstance(c, (list, tuple)) for c in contribs):
        return all(check_interference_cap(cap, c) for c in contribs)
    return aggregate_psd_linear(contribs) <= cap.linear * (1.0 + 1e-12)
