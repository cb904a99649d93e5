class ConfigError(Exception):
    """Bad scenario configuration; message names the offending key."""


class SimulationError(Exception):
    """Fatal programming error inside a run (e.g. scheduling in the past)."""
