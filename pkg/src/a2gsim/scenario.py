"""Scenario configuration: defaults reproduce the baseline one-hour flight.

Config files are flat JSON documents; every key maps to one Scenario
field.  Unknown keys and out-of-range values raise ConfigError naming the
key.
"""

import json
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .links import ActivityTable, DA2GC_RADII_KM, SA2GC_RADIUS_KM
from .traffic import CabinConfig, DEFAULT_ACTIVITY_PROFILE


@dataclass(frozen=True)
class Scenario:
    seed: int = 1
    horizon_s: float = 3600.0
    scheme: int = 2
    hit_rate: float = 0.0
    grid_step: float = 0.05

    economy_seats: int = 95
    business_seats: int = 6
    first_seats: int = 6
    usage_ratio_voip: float = 0.2
    usage_ratio_video: float = 0.6
    usage_ratio_web: float = 0.2
    activity_profile: tuple = DEFAULT_ACTIVITY_PROFILE

    da2gc_spot_capacity_bps: int = 100_000_000
    sa2gc_spot_capacity_bps: int = 100_000_000
    da2gc_operators: int = 1
    sa2gc_operators: int = 10
    aircraft_speed_kmh: float = 900.0
    da2gc_radii_km: tuple = DA2GC_RADII_KM
    sa2gc_radius_km: int = SA2GC_RADIUS_KM
    churn_interval_s: float = 180.0
    churn_max: int = 4

    video_rate_interval_s: float = 10.0
    video_rate_spread: float = 0.5

    # Activity-table overrides: {radius_km: (low, medium, high)}
    da2gc_activity_table: dict = None
    sa2gc_activity_table: dict = None

    def validate(self):
        if self.scheme not in (1, 2, 3):
            raise ConfigError("scheme must be 1, 2, or 3")
        if self.horizon_s <= 0:
            raise ConfigError("horizon_s must be positive")
        if not 0.0 <= self.hit_rate <= 1.0:
            raise ConfigError("hit_rate must lie in [0, 1]")
        steps = 1.0 / self.grid_step
        if self.grid_step <= 0 or abs(steps - round(steps)) > 1e-9:
            raise ConfigError("grid_step must divide 1 evenly")
        for key in ("economy_seats", "business_seats", "first_seats"):
            if getattr(self, key) < 0:
                raise ConfigError("%s must be nonnegative" % key)
        ratios = (self.usage_ratio_voip, self.usage_ratio_video, self.usage_ratio_web)
        if abs(sum(ratios) - 1.0) > 1e-9:
            raise ConfigError("usage_ratio_voip/video/web must sum to 1")
        for key in ("da2gc_spot_capacity_bps", "sa2gc_spot_capacity_bps",
                    "da2gc_operators", "sa2gc_operators", "aircraft_speed_kmh",
                    "churn_interval_s", "video_rate_interval_s"):
            if getattr(self, key) <= 0:
                raise ConfigError("%s must be positive" % key)
        self.cabin()  # checks activity profile range
        return self

    def cabin(self) -> CabinConfig:
        return CabinConfig(
            economy_seats=self.economy_seats,
            business_seats=self.business_seats,
            first_seats=self.first_seats,
            usage_ratios=(self.usage_ratio_voip, self.usage_ratio_video, self.usage_ratio_web),
            activity_profile=tuple((float(t), float(v)) for t, v in self.activity_profile),
        )

    def activity_table(self) -> ActivityTable:
        def normalize(table):
            if table is None:
                return None
            return {int(r): tuple(v) for r, v in table.items()}
        return ActivityTable(normalize(self.da2gc_activity_table),
                             normalize(self.sa2gc_activity_table))


_TUPLE_FIELDS = ("activity_profile", "da2gc_radii_km")


def scenario_from_dict(data: dict, base: Scenario = None) -> Scenario:
    sc = base or Scenario()
    fields = set(Scenario.__dataclass_fields__)
    updates = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError("unknown configuration key %r" % key)
        if key in _TUPLE_FIELDS:
            value = tuple(tuple(x) if isinstance(x, list) else x for x in value)
        updates[key] = value
    return replace(sc, **updates).validate()


def load_scenario(path: str, overrides: dict = None) -> Scenario:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError("malformed config %s: %s" % (path, exc))
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    sc = scenario_from_dict(data)
    if overrides:
        sc = scenario_from_dict(overrides, base=sc)
    return sc
