"""Air-to-ground link model: spot sequences, churn, shared capacity."""

import math
from dataclasses import dataclass

from .errors import ConfigError
from .events import US_PER_S

DA2GC = "da2gc"
SA2GC = "sa2gc"

ACTIVITY_LEVELS = ("low", "medium", "high")

DA2GC_RADII_KM = tuple(range(80, 155, 5))
SA2GC_RADIUS_KM = 1000

# Representative aircraft counts (low, medium, high) at tabulated radii.
DEFAULT_DA2GC_ANCHORS = {80: (1, 10, 55), 100: (2, 11, 61), 120: (2, 14, 80), 150: (3, 16, 103)}
DEFAULT_SA2GC_ANCHORS = {1000: (4, 28, 67)}

DEFAULT_SPEED_KMH = 900.0
CHURN_INTERVAL_US = 180 * US_PER_S
CHURN_MAX = 4


@dataclass(frozen=True)
class Spot:
    link_kind: str
    radius_km: int
    activity: str
    aircraft_count: int
    total_capacity_bps: int


class ActivityTable:
    """Aircraft counts per (link kind, radius, activity level).

    DA2GC radii between anchors are linearly interpolated and rounded to
    the nearest integer (half up).
    """

    def __init__(self, da2gc_anchors=None, sa2gc_anchors=None):
        self.anchors = {
            DA2GC: dict(sorted((da2gc_anchors or DEFAULT_DA2GC_ANCHORS).items())),
            SA2GC: dict(sorted((sa2gc_anchors or DEFAULT_SA2GC_ANCHORS).items())),
        }

    def count(self, link_kind: str, radius_km: int, activity: str) -> int:
        anchors = self.anchors[link_kind]
        idx = ACTIVITY_LEVELS.index(activity)
        if radius_km in anchors:
            return anchors[radius_km][idx]
        radii = list(anchors)
        if radius_km < radii[0] or radius_km > radii[-1]:
            raise ConfigError("radius %s km outside activity table range for %s"
                              % (radius_km, link_kind))
        hi = next(r for r in radii if r > radius_km)
        lo = max(r for r in radii if r < radius_km)
        frac = (radius_km - lo) / (hi - lo)
        value = anchors[lo][idx] + frac * (anchors[hi][idx] - anchors[lo][idx])
        return math.floor(value + 0.5)


def dwell_us(radius_km: int, speed_kmh: float = DEFAULT_SPEED_KMH) -> int:
    """Spot crossing time; the transit distance is the spot diameter."""
    return int(round(2 * radius_km / speed_kmh * 3600 * US_PER_S))


def generate_spot_sequence(link_kind: str, horizon_us: int, rng,
                           table: ActivityTable, total_capacity_bps: int,
                           radii=None, speed_kmh: float = DEFAULT_SPEED_KMH) -> list:
    """Timed spot sequence [(start_us, Spot), ...] covering the horizon.

    Radius and activity level are drawn independently per spot.
    """
    if radii is None:
        radii = DA2GC_RADII_KM if link_kind == DA2GC else (SA2GC_RADIUS_KM,)
    spots = []
    t = 0
    while t < horizon_us:
        radius = radii[rng.randrange(len(radii))] if len(radii) > 1 else radii[0]
        activity = ACTIVITY_LEVELS[rng.randrange(3)]
        count = table.count(link_kind, radius, activity)
        spots.append((t, Spot(link_kind, radius, activity, count, total_capacity_bps)))
        t += dwell_us(radius, speed_kmh)
    return spots


def churn_delta(rng, churn_max: int = CHURN_MAX) -> int:
    return rng.randint(-churn_max, churn_max)


def apply_churn(count: int, delta: int) -> int:
    """New aircraft count after a churn tick; our own aircraft always stays."""
    return max(1, count + delta)


def per_aircraft_capacity(total_capacity_bps: int, aircraft_count: int,
                          operators: int = 1) -> float:
    """Equal share of the spot capacity after splitting aircraft across operators."""
    effective = max(1, math.ceil(aircraft_count / operators))
    return total_capacity_bps / effective


class LinkRuntime:
    """Per-link mutable state during a run: current spot and aircraft count."""

    def __init__(self, link_kind: str, spot_sequence, operators: int):
        self.link_kind = link_kind
        self.spot_sequence = spot_sequence
        self.operators = operators
        self._next_spot = 0
        self.current_spot = None
        self.aircraft_count = 0
        self.advance()

    def advance(self):
        """Hand over to the next spot; resets the count to the spot's anchor."""
        _, spot = self.spot_sequence[self._next_spot]
        self._next_spot += 1
        self.current_spot = spot
        self.aircraft_count = spot.aircraft_count

    def churn(self, delta: int):
        self.aircraft_count = apply_churn(self.aircraft_count, delta)

    def capacity(self) -> float:
        return per_aircraft_capacity(self.current_spot.total_capacity_bps,
                                     self.aircraft_count, self.operators)
