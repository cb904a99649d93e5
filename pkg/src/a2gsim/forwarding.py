"""Forwarding controller: FSV computation and the three event procedures.

Every placement decision is driven by a flow's forwarding scheme value
(FSV).  Flow sets are ordered by FSV descending, then arrival sequence
ascending; "lowest" means last in that order (among FSV ties, the latest
arrival is offloaded or dropped first, the earliest arrival readmitted
first).  Mission-critical flows are pinned to the DA2GC link: they are
never offloaded to the satellite link.
"""

from dataclasses import dataclass

from .errors import SimulationError
from .links import DA2GC, SA2GC
from .traffic import FlowSpec

DROPPED = "dropped"
INACTIVE = "inactive"

SCHEME_WEIGHTS = {
    1: (1.0, 0.0, 0.0),
    2: (0.5, 0.5, 0.0),
    3: (0.5, 0.25, 0.25),
}


@dataclass(eq=False)  # identity-hashed, records live in sets
class FlowRecord:
    spec: FlowSpec
    arrival_seq: int = -1  # order of first admission attempt
    drop_count: int = 0
    assignment: str = INACTIVE
    rate_bps: int = 0


def fsv(scheme: int, rec: FlowRecord) -> float:
    wp, wd, wh = SCHEME_WEIGHTS[scheme]
    return wp * rec.spec.priority + wd * rec.spec.delay_req + wh * rec.drop_count


class Controller:
    """Owns the per-link flow sets and the dropped set.

    `on_change(rec)` fires after every assignment or rate mutation; the
    simulation loop hooks metrics accounting into it.  Link loads are exact
    integer sums of the assigned rates.
    """

    def __init__(self, scheme: int, da2gc_capacity_bps, sa2gc_capacity_bps,
                 on_change=None, trace=None):
        if scheme not in SCHEME_WEIGHTS:
            raise SimulationError("unknown forwarding scheme %r" % scheme)
        self.scheme = scheme
        self.capacity = {DA2GC: float(da2gc_capacity_bps), SA2GC: float(sa2gc_capacity_bps)}
        self.assigned = {DA2GC: set(), SA2GC: set()}
        self.load = {DA2GC: 0, SA2GC: 0}
        self.dropped = set()
        self.on_change = on_change
        self.trace = trace
        self.now_us = 0
        self._next_arrival = 0

    # -- ordering helpers ---------------------------------------------------

    def fsv(self, rec: FlowRecord) -> float:
        return fsv(self.scheme, rec)

    def _low_key(self, rec):
        return (self.fsv(rec), -rec.arrival_seq)

    def _high_key(self, rec):
        return (self.fsv(rec), -rec.arrival_seq)

    def _lowest(self, link, below=None, skip_pinned=False):
        pool = self.assigned[link]
        if skip_pinned:
            pool = [r for r in pool if not r.spec.pinned]
        if below is not None:
            pool = [r for r in pool if self.fsv(r) < below]
        return min(pool, key=self._low_key) if pool else None

    def _highest(self, link):
        pool = self.assigned[link]
        return max(pool, key=self._high_key) if pool else None

    def _highest_dropped_unpinned(self):
        pool = [r for r in self.dropped if not r.spec.pinned]
        return max(pool, key=self._high_key) if pool else None

    def ordered(self, link) -> list:
        """Link flow set sorted by FSV descending, arrival ascending."""
        return sorted(self.assigned[link],
                      key=lambda r: (-self.fsv(r), r.arrival_seq))

    def free(self, link) -> float:
        return self.capacity[link] - self.load[link]

    # -- state mutation -----------------------------------------------------

    def _note(self, rec, action):
        if self.trace is not None:
            self.trace.append({"t_s": self.now_us / 1e6, "flow": rec.spec.id,
                               "action": action, "state": rec.assignment,
                               "rate_bps": rec.rate_bps})
        if self.on_change is not None:
            self.on_change(rec)

    def _place(self, rec, link, action):
        self.assigned[link].add(rec)
        self.load[link] += rec.rate_bps
        rec.assignment = link
        self._note(rec, action)

    def _unlink(self, rec):
        link = rec.assignment
        self.assigned[link].discard(rec)
        self.load[link] -= rec.rate_bps
        if not self.assigned[link]:
            self.load[link] = 0
        rec.assignment = INACTIVE

    def _drop(self, rec):
        if rec.assignment in (DA2GC, SA2GC):
            self._unlink(rec)
        rec.drop_count += 1
        rec.assignment = DROPPED
        self.dropped.add(rec)
        self._note(rec, "drop")

    # -- event procedures ---------------------------------------------------

    def handle_incoming(self, rec: FlowRecord, rate_bps: int):
        """Admit a newly active flow, preferring the DA2GC link.

        While the flow does not fit, strictly lower-FSV flows are offloaded
        from DA2GC to SA2GC one at a time.  If it never fits, it goes to
        SA2GC when there is room, otherwise it is dropped.
        """
        if rec.assignment != INACTIVE:
            raise SimulationError("flow %d already active" % rec.spec.id)
        if rec.arrival_seq < 0:
            rec.arrival_seq = self._next_arrival
            self._next_arrival += 1
        rec.rate_bps = rate_bps
        if rate_bps <= self.free(DA2GC):
            self._place(rec, DA2GC, "assign")
            return
        while True:
            victim = self._lowest(DA2GC, below=self.fsv(rec), skip_pinned=True)
            if victim is None:
                break
            self._offload_to_sa2gc(victim)
            if rate_bps <= self.free(DA2GC):
                self._place(rec, DA2GC, "assign")
                return
        if not rec.spec.pinned and rate_bps <= self.free(SA2GC):
            self._place(rec, SA2GC, "assign")
        else:
            self._drop(rec)

    def _offload_to_sa2gc(self, rec):
        """Move a flow from DA2GC to SA2GC, displacing only strictly
        lower-FSV flows there; the flow is dropped when it still does not fit."""
        self._unlink(rec)
        while rec.rate_bps > self.free(SA2GC):
            victim = self._lowest(SA2GC, below=self.fsv(rec))
            if victim is None:
                break
            self._drop(victim)
        if rec.rate_bps <= self.free(SA2GC):
            self._place(rec, SA2GC, "offload")
        else:
            self._drop(rec)

    def handle_da2gc_capacity_change(self, new_capacity_bps):
        old = self.capacity[DA2GC]
        self.capacity[DA2GC] = float(new_capacity_bps)
        if new_capacity_bps > old:
            self._pull_to_da2gc()
        elif new_capacity_bps < old:
            self._shed_da2gc()

    def handle_sa2gc_capacity_change(self, new_capacity_bps):
        old = self.capacity[SA2GC]
        self.capacity[SA2GC] = float(new_capacity_bps)
        if new_capacity_bps > old:
            self._readmit_sa2gc()
        elif new_capacity_bps < old:
            self._shed_sa2gc()

    def _pull_to_da2gc(self):
        """While the highest-FSV satellite flow fits DA2GC, move it over."""
        while self.assigned[SA2GC]:
            best = self._highest(SA2GC)
            if best.rate_bps > self.free(DA2GC):
                break
            self._unlink(best)
            self._place(best, DA2GC, "pull")

    def _shed_da2gc(self):
        """While DA2GC is oversubscribed, migrate its lowest-FSV flow to
        SA2GC, dropping lowest-FSV satellite flows to make room (with no
        FSV guard, per the capacity-decrease procedure)."""
        while self.free(DA2GC) < 0:
            victim = self._lowest(DA2GC, skip_pinned=True) or self._lowest(DA2GC)
            if victim is None:
                break
            self._unlink(victim)
            if victim.spec.pinned:
                # Pinned flows cannot use the satellite link.
                self._drop(victim)
                continue
            while victim.rate_bps > self.free(SA2GC) and self.assigned[SA2GC]:
                self._drop(self._lowest(SA2GC))
            if victim.rate_bps <= self.free(SA2GC):
                self._place(victim, SA2GC, "offload")
            else:
                self._drop(victim)

    def _readmit_sa2gc(self):
        """While the highest-FSV dropped flow fits SA2GC, readmit it."""
        while True:
            best = self._highest_dropped_unpinned()
            if best is None or best.rate_bps > self.free(SA2GC):
                break
            self.dropped.discard(best)
            self._place(best, SA2GC, "readmit")

    def _shed_sa2gc(self):
        while self.free(SA2GC) < 0:
            self._drop(self._lowest(SA2GC))

    def handle_rate_change(self, rec: FlowRecord, new_rate_bps: int):
        """Apply a data-rate change; routed to the capacity-change procedure
        of the link the flow currently occupies."""
        old = rec.rate_bps
        if new_rate_bps == old:
            return
        rec.rate_bps = new_rate_bps
        if rec.assignment == DA2GC:
            self.load[DA2GC] += new_rate_bps - old
            self._note(rec, "rate")
            if new_rate_bps > old:
                if self.free(DA2GC) < 0:
                    self._shed_da2gc()
            else:
                self._pull_to_da2gc()
        elif rec.assignment == SA2GC:
            self.load[SA2GC] += new_rate_bps - old
            self._note(rec, "rate")
            if new_rate_bps > old:
                if self.free(SA2GC) < 0:
                    self._shed_sa2gc()
            else:
                self._readmit_sa2gc()
        else:
            # Dropped or inactive: record the rate, no link action.
            self._note(rec, "rate")

    def deactivate(self, rec: FlowRecord):
        """Flow turned OFF or stopped: release its slot and sweep the freed
        capacity (pull to DA2GC, or readmit on SA2GC)."""
        prev = rec.assignment
        if prev in (DA2GC, SA2GC):
            self._unlink(rec)
        elif prev == DROPPED:
            self.dropped.discard(rec)
        rec.assignment = INACTIVE
        rec.rate_bps = 0
        self._note(rec, "deactivate")
        if prev == DA2GC:
            self._pull_to_da2gc()
        elif prev == SA2GC:
            self._readmit_sa2gc()

    # -- debug invariants ---------------------------------------------------

    def assert_feasible(self, exact=False):
        for link in (DA2GC, SA2GC):
            if self.load[link] > self.capacity[link] + 1e-6:
                raise SimulationError("%s oversubscribed: %s > %s"
                                      % (link, self.load[link], self.capacity[link]))
            if exact and self.load[link] != sum(r.rate_bps for r in self.assigned[link]):
                raise SimulationError("%s load accumulator drifted" % link)
