"""Flow-level simulator of in-flight traffic management over shared
direct air-to-ground and satellite links, with FSV-based forwarding
schemes, per-class QoS reporting, and cache hit-rate analysis."""

from .cache import UNSATISFIABLE, hit_rate_cdf, min_hit_rate, min_hit_rates, satisfied_at
from .errors import ConfigError, SimulationError
from .forwarding import Controller, FlowRecord, fsv
from .metrics import QosReport, QosThresholds
from .scenario import Scenario, load_scenario, scenario_from_dict
from .simulate import Simulation, run_simulation

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "SimulationError", "Scenario", "load_scenario",
    "scenario_from_dict", "Simulation", "run_simulation", "Controller",
    "FlowRecord", "fsv", "QosReport", "QosThresholds", "min_hit_rate",
    "min_hit_rates", "hit_rate_cdf", "satisfied_at", "UNSATISFIABLE",
]
