"""Device population and traffic processes.

Scheduled traffic is saturated: a scheduled device always has data.
Non-scheduled (NS) packets arrive with exponential inter-arrival times
measured in slots and must go out in the slot they arrive.
"""
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel import CELL_RADIUS_M, MIN_RADIUS_M, Position

SCHEDULED_TX_DBM = 21.0
NONSCHEDULED_TX_DBM = 23.0


class TrafficClass(Enum):
    SCHEDULED = "scheduled"
    NONSCHEDULED = "nonscheduled"


@dataclass
class Device:
    id: int
    pos: Position
    classes: frozenset = frozenset({TrafficClass.SCHEDULED, TrafficClass.NONSCHEDULED})
    tx_power_dbm: dict = field(default_factory=lambda: {
        TrafficClass.SCHEDULED: SCHEDULED_TX_DBM,
        TrafficClass.NONSCHEDULED: NONSCHEDULED_TX_DBM,
    })
    delay_budget_slots: int = 10
    next_ns_arrival_slot: int = None

    def __post_init__(self):
        if self.delay_budget_slots < 1:
            raise ValueError("delay_budget_slots must be >= 1")
        if not self.classes:
            raise ValueError("a device needs at least one traffic class")

    def power(self, cls):
        return self.tx_power_dbm[cls]


@dataclass(frozen=True)
class ArrivalProcess:
    rate_per_slot: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.rate_per_slot < 1.0:
            raise ValueError(f"rate_per_slot must lie in (0, 1), got {self.rate_per_slot}")


def place_users(n, rng, r_min=MIN_RADIUS_M, r_max=CELL_RADIUS_M, **device_kwargs):
    """Drop ``n`` devices uniformly over the annulus ``[r_min, r_max]`` (uniform in area)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u = rng.random(n)
    radii = np.sqrt(r_min ** 2 + u * (r_max ** 2 - r_min ** 2))
    az = rng.uniform(0.0, 2.0 * math.pi, n)
    return [Device(i, Position(float(r), float(a) % (2.0 * math.pi)), **device_kwargs)
            for i, (r, a) in enumerate(zip(radii, az))]


def next_ns_arrival(process, now_slot, rng):
    """Slot of the next NS packet: ``now + ceil(X)``, X ~ Exp(rate)."""
    x = rng.exponential(1.0 / process.rate_per_slot)
    return now_slot + max(1, math.ceil(x))


def scheduled_has_data(device):
    if TrafficClass.SCHEDULED not in device.classes:
        raise ValueError(f"device {device.id} does not carry scheduled traffic")
    return True
