"""Time-weighted QoS accounting and per-class report.

Traffic is accounted in exact integer bit-microseconds (rate in bit/s
times interval length in us), so conservation per flow -
offered = delivered + dropped - holds exactly and reports are
byte-reproducible.
"""

import json
from dataclasses import dataclass, field

from .errors import SimulationError
from .links import DA2GC, SA2GC
from .forwarding import DROPPED, INACTIVE
from .traffic import MISSION_CRITICAL, PODD_APPS, TRAVEL_CLASSES, VOIP

BIT_US_PER_MBIT = 1e12  # bit*us in one Mbit


@dataclass(frozen=True)
class QosThresholds:
    max_drop_fraction: dict = field(default_factory=lambda: {"VoIP": 0.01, "Video": 0.02, "Web": 0.10})
    max_voip_sa2gc_time_fraction: float = 0.01
    mission_critical_must_hold: bool = True


@dataclass
class FlowAccount:
    delivered_bit_us: int = 0
    dropped_bit_us: int = 0
    time_on_sa2gc_us: int = 0
    durations_us: dict = field(default_factory=lambda: {DA2GC: 0, SA2GC: 0, DROPPED: 0, INACTIVE: 0})
    # open interval
    _last_us: int = 0
    _state: str = INACTIVE
    _rate_bps: int = 0
    _end_us: int = 0

    @property
    def offered_bit_us(self) -> int:
        return self.delivered_bit_us + self.dropped_bit_us


class Accounting:
    """Accumulates per-flow state intervals as the controller mutates flows."""

    def __init__(self, horizon_us: int):
        self.horizon_us = horizon_us
        self.accounts = {}

    def open_flow(self, fid: int, start_us: int, stop_us: int):
        acc = FlowAccount()
        acc._last_us = start_us
        acc._end_us = min(stop_us, self.horizon_us)
        self.accounts[fid] = acc

    def record_interval(self, fid: int, state: str, rate_bps: int, duration_us: int):
        if duration_us < 0:
            raise SimulationError("negative interval duration for flow %d" % fid)
        acc = self.accounts[fid]
        acc.durations_us[state] += duration_us
        traffic = rate_bps * duration_us
        if state == DROPPED:
            acc.dropped_bit_us += traffic
        elif state in (DA2GC, SA2GC):
            acc.delivered_bit_us += traffic
            if state == SA2GC:
                acc.time_on_sa2gc_us += duration_us
        # inactive intervals offer nothing

    def transition(self, fid: int, t_us: int, state: str, rate_bps: int):
        acc = self.accounts[fid]
        upto = min(t_us, acc._end_us)
        if upto > acc._last_us:
            self.record_interval(fid, acc._state, acc._rate_bps, upto - acc._last_us)
            acc._last_us = upto
        acc._state = state
        acc._rate_bps = rate_bps

    def finalize(self):
        for fid, acc in self.accounts.items():
            if acc._end_us > acc._last_us:
                self.record_interval(fid, acc._state, acc._rate_bps, acc._end_us - acc._last_us)
                acc._last_us = acc._end_us


def _fraction(dropped: int, offered: int) -> float:
    return dropped / offered if offered else 0.0


@dataclass
class QosReport:
    """Per-flow traffic totals plus the per-class QoS aggregates."""

    scenario: dict
    horizon_us: int
    flows: list  # dicts: id/domain/app/travel_class/priority/delay_req/drop_count + exact counters
    thresholds: QosThresholds = field(default_factory=QosThresholds)

    def _group(self, app: str, travel_class: str):
        return [f for f in self.flows if f["app"] == app and f["travel_class"] == travel_class]

    def dropped_fraction(self, app: str, travel_class: str) -> float:
        group = self._group(app, travel_class)
        dropped = sum(f["dropped_bit_us"] for f in group)
        offered = sum(f["offered_bit_us"] for f in group)
        return _fraction(dropped, offered)

    def offered_bit_us(self, app: str, travel_class: str) -> int:
        return sum(f["offered_bit_us"] for f in self._group(app, travel_class))

    def voip_sa2gc_time_fraction(self, travel_class: str) -> float:
        """Mean over the class's VoIP flows of time-on-SA2GC / horizon."""
        group = self._group(VOIP, travel_class)
        if not group:
            return 0.0
        return sum(f["time_on_sa2gc_us"] for f in group) / (len(group) * self.horizon_us)

    def mission_critical_clean(self) -> bool:
        mc = [f for f in self.flows if f["domain"] in MISSION_CRITICAL]
        return all(f["dropped_bit_us"] == 0 and f["time_on_sa2gc_us"] == 0 for f in mc)

    def satisfied_all(self) -> bool:
        th = self.thresholds
        for app in PODD_APPS:
            for cls in TRAVEL_CLASSES:
                if self.dropped_fraction(app, cls) > th.max_drop_fraction[app]:
                    return False
        for cls in TRAVEL_CLASSES:
            if self.voip_sa2gc_time_fraction(cls) > th.max_voip_sa2gc_time_fraction:
                return False
        if th.mission_critical_must_hold and not self.mission_critical_clean():
            return False
        return True

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        th = self.thresholds
        groups = []
        for app in PODD_APPS:
            for cls in TRAVEL_CLASSES:
                frac = self.dropped_fraction(app, cls)
                groups.append({
                    "app": app, "travel_class": cls,
                    "offered_bit_us": self.offered_bit_us(app, cls),
                    "dropped_fraction": round(frac, 6),
                    "threshold": th.max_drop_fraction[app],
                    "satisfied": frac <= th.max_drop_fraction[app],
                })
        voip_rows = []
        for cls in TRAVEL_CLASSES:
            frac = self.voip_sa2gc_time_fraction(cls)
            voip_rows.append({
                "travel_class": cls,
                "time_fraction": round(frac, 6),
                "threshold": th.max_voip_sa2gc_time_fraction,
                "satisfied": frac <= th.max_voip_sa2gc_time_fraction,
            })
        return {
            "scenario": self.scenario,
            "horizon_us": self.horizon_us,
            "flows": self.flows,
            "groups": groups,
            "voip_sa2gc": voip_rows,
            "mission_critical_clean": self.mission_critical_clean(),
            "satisfied_all": self.satisfied_all(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "QosReport":
        data = json.loads(text)
        return cls(scenario=data["scenario"], horizon_us=data["horizon_us"],
                   flows=data["flows"])

    def csv_rows(self, scheme=None) -> list:
        """Plot-ready rows mirroring the dropped-traffic and VoIP-on-SA2GC
        figures: one row per (metric, app, travel class)."""
        scheme = scheme if scheme is not None else self.scenario.get("scheme")
        rows = []
        for g in self.to_dict()["groups"]:
            value = "%.6f" % self.dropped_fraction(g["app"], g["travel_class"]) \
                if g["offered_bit_us"] else "n/a"
            rows.append([scheme, "dropped_fraction", g["app"], g["travel_class"],
                         value, "%.6f" % g["threshold"], g["satisfied"]])
        for v in self.to_dict()["voip_sa2gc"]:
            value = "%.6f" % self.voip_sa2gc_time_fraction(v["travel_class"]) \
                if self.offered_bit_us(VOIP, v["travel_class"]) else "n/a"
            rows.append([scheme, "voip_sa2gc_time_fraction", VOIP, v["travel_class"],
                         value, "%.6f" % v["threshold"], v["satisfied"]])
        return rows


CSV_HEADER = ["scheme", "metric", "app", "travel_class", "value", "threshold", "satisfied"]


def build_report(accounting: Accounting, flow_records, scenario_meta: dict,
                 thresholds: QosThresholds = None) -> QosReport:
    flows = []
    for rec in sorted(flow_records, key=lambda r: r.spec.id):
        acc = accounting.accounts[rec.spec.id]
        flows.append({
            "id": rec.spec.id, "domain": rec.spec.domain, "app": rec.spec.app,
            "travel_class": rec.spec.travel_class,
            "priority": rec.spec.priority, "delay_req": rec.spec.delay_req,
            "drop_count": rec.drop_count,
            "offered_bit_us": acc.offered_bit_us,
            "delivered_bit_us": acc.delivered_bit_us,
            "dropped_bit_us": acc.dropped_bit_us,
            "time_on_sa2gc_us": acc.time_on_sa2gc_us,
        })
    return QosReport(scenario=scenario_meta, horizon_us=accounting.horizon_us,
                     flows=flows, thresholds=thresholds or QosThresholds())
