"""Scenario build and the single-threaded event loop of one run."""

from dataclasses import dataclass

from .events import (CHURN_TICK, FLOW_START, FLOW_STOP, HANDOVER_DA2GC,
                     HANDOVER_SA2GC, OFF_TOGGLE, ON_TOGGLE, VIDEO_RATE_CHANGE,
                     EventQueue, RngStreams, s_to_us)
from .forwarding import Controller, FlowRecord
from .links import DA2GC, SA2GC, LinkRuntime, churn_delta, generate_spot_sequence
from .metrics import Accounting, QosReport, build_report
from .scenario import Scenario
from .traffic import (APP_PROFILES, ON_OFF, build_flow_population,
                      next_toggle_us, offered_rate, video_rate)

_APP_ORDER = {"VoIP": 0, "Video": 1, "Web": 2}


@dataclass
class _RunFlow:
    rec: FlowRecord
    active: bool = False
    phase: str = "off"


class Simulation:
    def __init__(self, scenario: Scenario, check_invariants=False, trace=None):
        sc = scenario.validate()
        self.sc = sc
        self.horizon_us = s_to_us(sc.horizon_s)
        self.rng = RngStreams(sc.seed)
        self.trace = trace
        self.check_invariants = check_invariants
        table = sc.activity_table()

        self.flows = build_flow_population(sc.cabin(), self.horizon_us, self.rng.traffic)
        self.spots = {
            DA2GC: generate_spot_sequence(DA2GC, self.horizon_us, self.rng.link_da2gc,
                                          table, sc.da2gc_spot_capacity_bps,
                                          radii=sc.da2gc_radii_km,
                                          speed_kmh=sc.aircraft_speed_kmh),
            SA2GC: generate_spot_sequence(SA2GC, self.horizon_us, self.rng.link_sa2gc,
                                          table, sc.sa2gc_spot_capacity_bps,
                                          radii=(sc.sa2gc_radius_km,),
                                          speed_kmh=sc.aircraft_speed_kmh),
        }
        self.links = {
            DA2GC: LinkRuntime(DA2GC, self.spots[DA2GC], sc.da2gc_operators),
            SA2GC: LinkRuntime(SA2GC, self.spots[SA2GC], sc.sa2gc_operators),
        }
        self.accounting = Accounting(self.horizon_us)
        self.ctrl = Controller(sc.scheme,
                               self.links[DA2GC].capacity(),
                               self.links[SA2GC].capacity(),
                               on_change=self._on_change, trace=trace)
        self.state = {}
        self.queue = EventQueue()
        self._build_schedule()

    def _on_change(self, rec):
        self.accounting.transition(rec.spec.id, self.ctrl.now_us,
                                   rec.assignment, rec.rate_bps)

    def _effective_rate(self, spec, nominal_bps: int) -> int:
        if spec.cacheable and self.sc.hit_rate > 0:
            return int(round(nominal_bps * (1.0 - self.sc.hit_rate)))
        return nominal_bps

    def _build_schedule(self):
        q = self.queue
        # Flows sharing a start time are enqueued VoIP, Video, Web, then by id.
        starts = sorted(self.flows,
                        key=lambda f: (f.start_us, _APP_ORDER.get(f.app, -1), f.id))
        for spec in starts:
            self.state[spec.id] = _RunFlow(FlowRecord(spec))
            self.accounting.open_flow(spec.id, spec.start_us, spec.stop_us)
            q.schedule(spec.start_us, FLOW_START, spec.id)
        for spec in starts:
            if spec.stop_us <= self.horizon_us:
                q.schedule(spec.stop_us, FLOW_STOP, spec.id)
        for kind, ev_kind in ((DA2GC, HANDOVER_DA2GC), (SA2GC, HANDOVER_SA2GC)):
            for t, _ in self.spots[kind][1:]:
                if t <= self.horizon_us:
                    q.schedule(t, ev_kind, kind)
        interval = s_to_us(self.sc.churn_interval_s)
        t = interval
        while t <= self.horizon_us:
            q.schedule(t, CHURN_TICK, DA2GC)
            q.schedule(t, CHURN_TICK, SA2GC)
            t += interval

    # -- event handlers -----------------------------------------------------

    def _start_flow(self, t_us, fid):
        rf = self.state[fid]
        spec = rf.rec.spec
        profile = APP_PROFILES[spec.app]
        rf.active = True
        if profile.pattern == ON_OFF:
            rf.phase = "on"
            rate = self._effective_rate(spec, offered_rate(profile, "on"))
            self.ctrl.handle_incoming(rf.rec, rate)
            self._schedule_toggle(t_us, spec, profile, OFF_TOGGLE, "on")
        elif profile.varying:
            nominal = video_rate(self.rng.video, profile.rate_bps, self.sc.video_rate_spread)
            self.ctrl.handle_incoming(rf.rec, self._effective_rate(spec, nominal))
            nxt = t_us + s_to_us(self.sc.video_rate_interval_s)
            if nxt < spec.stop_us:
                self.queue.schedule(nxt, VIDEO_RATE_CHANGE, fid)
        else:
            self.ctrl.handle_incoming(rf.rec, self._effective_rate(spec, profile.rate_bps))

    def _schedule_toggle(self, t_us, spec, profile, kind, phase):
        nxt = t_us + next_toggle_us(profile, phase, self.rng.traffic)
        if nxt < spec.stop_us:
            self.queue.schedule(nxt, kind, spec.id)

    def _dispatch(self, ev):
        kind, t_us = ev.kind, ev.time_us
        if kind == FLOW_START:
            self._start_flow(t_us, ev.payload)
        elif kind == FLOW_STOP:
            rf = self.state[ev.payload]
            rf.active = False
            self.ctrl.deactivate(rf.rec)
        elif kind == OFF_TOGGLE:
            rf = self.state[ev.payload]
            if rf.active:
                rf.phase = "off"
                self.ctrl.deactivate(rf.rec)
                self._schedule_toggle(t_us, rf.rec.spec,
                                      APP_PROFILES[rf.rec.spec.app], ON_TOGGLE, "off")
        elif kind == ON_TOGGLE:
            rf = self.state[ev.payload]
            if rf.active:
                spec = rf.rec.spec
                profile = APP_PROFILES[spec.app]
                rf.phase = "on"
                rate = self._effective_rate(spec, offered_rate(profile, "on"))
                self.ctrl.handle_incoming(rf.rec, rate)
                self._schedule_toggle(t_us, spec, profile, OFF_TOGGLE, "on")
        elif kind == VIDEO_RATE_CHANGE:
            rf = self.state[ev.payload]
            if rf.active:
                spec = rf.rec.spec
                nominal = video_rate(self.rng.video, APP_PROFILES[spec.app].rate_bps,
                                     self.sc.video_rate_spread)
                self.ctrl.handle_rate_change(rf.rec, self._effective_rate(spec, nominal))
                nxt = t_us + s_to_us(self.sc.video_rate_interval_s)
                if nxt < spec.stop_us:
                    self.queue.schedule(nxt, VIDEO_RATE_CHANGE, spec.id)
        elif kind in (HANDOVER_DA2GC, HANDOVER_SA2GC):
            link = self.links[ev.payload]
            link.advance()
            self._publish_capacity(ev.payload, link)
        elif kind == CHURN_TICK:
            link = self.links[ev.payload]
            link.churn(churn_delta(self.rng.churn, self.sc.churn_max))
            self._publish_capacity(ev.payload, link)

    def _publish_capacity(self, kind, link):
        cap = link.capacity()
        if cap != self.ctrl.capacity[kind]:
            if kind == DA2GC:
                self.ctrl.handle_da2gc_capacity_change(cap)
            else:
                self.ctrl.handle_sa2gc_capacity_change(cap)

    def run(self) -> QosReport:
        q = self.queue
        dispatched = 0
        while len(q) and q.peek_time() <= self.horizon_us:
            ev = q.pop()
            self.ctrl.now_us = ev.time_us
            if self.trace is not None:
                self.trace.append({"t_s": ev.time_us / 1e6, "event": ev.kind,
                                   "payload": ev.payload})
            self._dispatch(ev)
            if self.check_invariants:
                dispatched += 1
                self.ctrl.assert_feasible(exact=dispatched % 256 == 0)
        if self.check_invariants:
            self.ctrl.assert_feasible(exact=True)
        self.accounting.finalize()
        meta = {"seed": self.sc.seed, "scheme": self.sc.scheme,
                "hit_rate": self.sc.hit_rate, "horizon_s": self.sc.horizon_s}
        return build_report(self.accounting, [rf.rec for rf in self.state.values()], meta)


def run_simulation(scenario: Scenario, check_invariants=False, trace=None) -> QosReport:
    return Simulation(scenario, check_invariants=check_invariants, trace=trace).run()
