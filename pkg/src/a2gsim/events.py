"""Event queue and seeded random streams.

The simulation clock is an integer number of microseconds.  Using an
integer clock keeps event ordering and traffic accounting exact, which in
turn makes whole runs byte-reproducible from the master seed.
"""

import heapq
import random
from dataclasses import dataclass

from .errors import SimulationError

US_PER_S = 1_000_000


def s_to_us(seconds: float) -> int:
    return int(round(seconds * US_PER_S))


# Event kinds
FLOW_START = "flow_start"
FLOW_STOP = "flow_stop"
ON_TOGGLE = "on_toggle"
OFF_TOGGLE = "off_toggle"
VIDEO_RATE_CHANGE = "video_rate_change"
HANDOVER_DA2GC = "handover_da2gc"
HANDOVER_SA2GC = "handover_sa2gc"
CHURN_TICK = "churn_tick"


@dataclass(frozen=True)
class Event:
    time_us: int
    seq: int
    kind: str
    payload: object = None


class EventQueue:
    """Min-heap ordered by (time, seq); seq breaks ties in creation order."""

    def __init__(self):
        self._heap = []
        self._next_seq = 0
        self.now_us = 0

    def __len__(self):
        return len(self._heap)

    def schedule(self, time_us: int, kind: str, payload=None) -> Event:
        if time_us < self.now_us:
            raise SimulationError(
                "scheduled %s at t=%dus before current time %dus"
                % (kind, time_us, self.now_us)
            )
        ev = Event(time_us, self._next_seq, kind, payload)
        self._next_seq += 1
        heapq.heappush(self._heap, (time_us, ev.seq, ev))
        return ev

    def peek_time(self) -> int:
        return self._heap[0][0]

    def pop(self) -> Event:
        time_us, _, ev = heapq.heappop(self._heap)
        self.now_us = time_us
        return ev


STREAM_NAMES = ("traffic", "link_da2gc", "link_sa2gc", "churn", "video")


class RngStreams:
    """Independent per-concern random streams derived from one master seed.

    Each stream is seeded from a string, which `random.Random` hashes with
    sha512, so sequences are stable across processes and Python versions.
    """

    def __init__(self, master_seed: int):
        self.master_seed = master_seed
        for name in STREAM_NAMES:
            setattr(self, name, random.Random("%s/%s" % (master_seed, name)))
