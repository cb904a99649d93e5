"""Traffic model: application profiles, flow population, rate processes.

Rates are integer bits per second.  Flow start/stop times are integer
microseconds on the simulation clock.
"""

import math
from dataclasses import dataclass, field

from .errors import ConfigError, SimulationError
from .events import US_PER_S

ON_OFF = "onoff"
CONTINUOUS = "continuous"

VOIP, VIDEO, WEB = "VoIP", "Video", "Web"
PODD_APPS = (VOIP, VIDEO, WEB)

SYSTEM_DOMAINS = ("ACD", "AISD", "HMD", "FRD", "MTC")
MISSION_CRITICAL = frozenset(("ACD", "AISD", "HMD", "FRD"))
CACHEABLE_APPS = frozenset((VIDEO, WEB))


@dataclass(frozen=True)
class ApplicationProfile:
    name: str
    pattern: str  # ON_OFF or CONTINUOUS
    mean_on_s: float | None
    mean_off_s: float | None
    rate_bps: int
    varying: bool = False

    def __post_init__(self):
        if self.pattern == ON_OFF:
            if not (self.mean_on_s and self.mean_on_s > 0 and self.mean_off_s and self.mean_off_s > 0):
                raise ConfigError("on/off profile %r needs positive mean durations" % self.name)
        elif self.mean_on_s is not None or self.mean_off_s is not None:
            raise ConfigError("continuous profile %r must not set on/off durations" % self.name)
        if self.rate_bps <= 0:
            raise ConfigError("profile %r rate must be positive" % self.name)


APP_PROFILES = {
    VOIP: ApplicationProfile(VOIP, ON_OFF, 3.0, 3.0, 15_000),
    VIDEO: ApplicationProfile(VIDEO, CONTINUOUS, None, None, 4_000_000, varying=True),
    WEB: ApplicationProfile(WEB, ON_OFF, 5.0, 30.0, 3_000_000),
    "ACD": ApplicationProfile("ACD", CONTINUOUS, None, None, 80),
    "AISD": ApplicationProfile("AISD", CONTINUOUS, None, None, 100_000),
    "HMD": ApplicationProfile("HMD", CONTINUOUS, None, None, 600),
    "FRD": ApplicationProfile("FRD", CONTINUOUS, None, None, 136_000),
    "MTC": ApplicationProfile("MTC", CONTINUOUS, None, None, 3_000_000),
}

TRAVEL_CLASSES = ("First", "Business", "Economy")
PODD_PRIORITY = {"First": 4, "Business": 3, "Economy": 2}
PODD_DELAY = {VOIP: 3, VIDEO: 2, WEB: 1}
SYSTEM_PRIORITY_DELAY = {
    "ACD": (5, 3),
    "AISD": (5, 3),
    "HMD": (5, 3),
    "FRD": (5, 3),
    "MTC": (1, 1),
}


@dataclass(frozen=True)
class FlowSpec:
    id: int
    domain: str  # "PODD" or one of SYSTEM_DOMAINS
    app: str
    travel_class: str  # "First"/"Business"/"Economy" or "None"
    priority: int
    delay_req: int
    start_us: int
    stop_us: int

    @property
    def pinned(self) -> bool:
        return self.domain in MISSION_CRITICAL

    @property
    def cacheable(self) -> bool:
        return self.domain == "PODD" and self.app in CACHEABLE_APPS


DEFAULT_ACTIVITY_PROFILE = ((0.0, 0.0), (0.5, 1.0), (1.0, 0.0))


@dataclass(frozen=True)
class CabinConfig:
    economy_seats: int = 95
    business_seats: int = 6
    first_seats: int = 6
    usage_ratios: tuple = (0.2, 0.6, 0.2)  # VoIP, Video, Web
    # Piecewise-linear active fraction over normalized flight time.
    activity_profile: tuple = DEFAULT_ACTIVITY_PROFILE

    def __post_init__(self):
        if abs(sum(self.usage_ratios) - 1.0) > 1e-9:
            raise ConfigError("usage_ratios must sum to 1, got %r" % (self.usage_ratios,))
        if any(r < 0 for r in self.usage_ratios):
            raise ConfigError("usage_ratios must be nonnegative")
        for _, v in self.activity_profile:
            if not 0.0 <= v <= 1.0:
                raise ConfigError("activity_profile values must lie in [0, 1]")

    @property
    def seats(self):
        return {"First": self.first_seats, "Business": self.business_seats,
                "Economy": self.economy_seats}


def largest_remainder(total: int, ratios) -> list:
    """Integer allocation of `total` across `ratios` by largest remainder.

    Remainder ties are broken by position, so the split is deterministic.
    """
    quotas = [total * r for r in ratios]
    counts = [math.floor(q + 1e-9) for q in quotas]
    leftover = total - sum(counts)
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return counts


def profile_crossings(profile, horizon_us: int, level: float):
    """First and last time (us) the piecewise-linear profile is >= level.

    Returns None when the profile never reaches the level.
    """
    pts = [(t * horizon_us, v) for t, v in profile]
    first = last = None
    for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
        lo, hi = min(v0, v1), max(v0, v1)
        if hi < level:
            continue
        if v0 >= level:
            t_in = t0
        elif v1 >= level:  # rising crossing inside the segment
            t_in = t0 + (level - v0) / (v1 - v0) * (t1 - t0)
        else:
            t_in = None
        if v1 >= level:
            t_out = t1
        elif v0 >= level:  # falling crossing inside the segment
            t_out = t0 + (level - v0) / (v1 - v0) * (t1 - t0)
        else:
            t_out = None
        if t_in is not None and first is None:
            first = t_in
        if t_out is not None:
            last = t_out
    if first is None or last is None:
        return None
    return int(round(first)), int(round(last))


def build_flow_population(cabin: CabinConfig, horizon_us: int, rng) -> list:
    """All flows of one flight: 5 system flows plus one flow per passenger.

    Passenger flows are allocated to apps per class by largest remainder.
    Activation order is a shuffle drawn from the traffic stream; passenger
    with activation rank k is active while the cabin activity profile stays
    at or above (k + 0.5) / N, so the active count tracks the profile and
    deactivation runs in reverse activation order.
    """
    flows = []
    fid = 0
    for domain in SYSTEM_DOMAINS:
        prio, delay = SYSTEM_PRIORITY_DELAY[domain]
        flows.append(FlowSpec(fid, domain, domain, "None", prio, delay, 0, horizon_us))
        fid += 1

    passengers = []  # (travel_class, app) in deterministic seat order
    for cls in TRAVEL_CLASSES:
        counts = largest_remainder(cabin.seats[cls], cabin.usage_ratios)
        for app, n in zip(PODD_APPS, counts):
            passengers.extend((cls, app) for _ in range(n))

    n = len(passengers)
    ranks = list(range(n))
    rng.shuffle(ranks)  # ranks[i] = activation rank of passenger i

    for i, (cls, app) in enumerate(passengers):
        window = profile_crossings(cabin.activity_profile, horizon_us,
                                   (ranks[i] + 0.5) / n) if n else None
        if window is None or window[0] >= window[1]:
            continue  # profile never admits this passenger
        start_us, stop_us = window
        flows.append(FlowSpec(fid, "PODD", app, cls, PODD_PRIORITY[cls],
                              PODD_DELAY[app], start_us, stop_us))
        fid += 1
    return flows


def next_toggle_us(profile: ApplicationProfile, phase: str, rng) -> int:
    """Exponential ON/OFF phase duration in microseconds, strictly positive."""
    if profile.pattern != ON_OFF:
        raise SimulationError("next_toggle on continuous profile %r" % profile.name)
    mean = profile.mean_on_s if phase == "on" else profile.mean_off_s
    d = 0
    while d <= 0:
        d = int(round(rng.expovariate(1.0 / mean) * US_PER_S))
    return d


VIDEO_RATE_SPREAD = 0.5


def video_rate(rng, mean_bps: int = 4_000_000, spread: float = VIDEO_RATE_SPREAD) -> int:
    """One variable-bit-rate draw: uniform within +-spread around the mean."""
    return int(round(rng.uniform(mean_bps * (1 - spread), mean_bps * (1 + spread))))


def offered_rate(profile: ApplicationProfile, phase: str, current_video_bps=None) -> int:
    """Instantaneous offered rate given the flow's current phase."""
    if profile.pattern == ON_OFF and phase == "off":
        return 0
    if profile.varying:
        return current_video_bps if current_video_bps is not None else profile.rate_bps
    return profile.rate_bps
