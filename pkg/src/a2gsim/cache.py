"""Minimal cache hit-rate search and the per-scheme empirical CDF.

Caching scales the offered rate of Web and Video flows by (1 - hit rate),
so satisfaction is monotone in the hit rate and the minimal satisfying
grid point can be located by binary search.
"""

from dataclasses import replace

from .scenario import Scenario
from .simulate import run_simulation

UNSATISFIABLE = float("inf")


def hit_rate_grid(step: float) -> list:
    n = int(round(1.0 / step))
    return [round(i * step, 10) for i in range(n + 1)]


def satisfied_at(scenario: Scenario, hit_rate: float) -> bool:
    return run_simulation(replace(scenario, hit_rate=hit_rate)).satisfied_all()


def min_hit_rate(scenario: Scenario, step: float = None) -> float:
    """Smallest grid hit rate satisfying every QoS threshold for this seed.

    Returns UNSATISFIABLE when even full caching does not satisfy the run.
    """
    grid = hit_rate_grid(step if step is not None else scenario.grid_step)
    if satisfied_at(scenario, grid[0]):
        return grid[0]
    if not satisfied_at(scenario, grid[-1]):
        return UNSATISFIABLE
    lo, hi = 0, len(grid) - 1  # grid[lo] unsatisfied, grid[hi] satisfied
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if satisfied_at(scenario, grid[mid]):
            hi = mid
        else:
            lo = mid
    return grid[hi]


def min_hit_rates(scenario: Scenario, seeds, scheme: int, step: float = None) -> dict:
    base = replace(scenario, scheme=scheme)
    return {seed: min_hit_rate(replace(base, seed=seed), step) for seed in seeds}


def hit_rate_cdf(rates_by_seed: dict, step: float) -> list:
    """Empirical CDF [(hit rate, fraction of seeds satisfied at <= rate)]."""
    n = len(rates_by_seed)
    values = sorted(rates_by_seed.values())
    return [(h, sum(1 for v in values if v <= h) / n) for h in hit_rate_grid(step)]
