import pytest

import a2gsim.cache as cache
from a2gsim.cache import (UNSATISFIABLE, hit_rate_cdf, hit_rate_grid,
                          min_hit_rate, min_hit_rates)
from a2gsim.scenario import Scenario


def test_hit_rate_grid():
    grid = hit_rate_grid(0.05)
    assert grid[0] == 0.0 and grid[-1] == 1.0
    assert len(grid) == 21
    assert grid[7] == pytest.approx(0.35)


def patch_satisfied(monkeypatch, predicate, calls=None):
    def fake(scenario, hit_rate):
        if calls is not None:
            calls.append(hit_rate)
        return predicate(hit_rate)
    monkeypatch.setattr(cache, "satisfied_at", fake)


def test_min_hit_rate_finds_first_satisfying_grid_point(monkeypatch):
    patch_satisfied(monkeypatch, lambda h: h >= 0.35)
    assert min_hit_rate(Scenario(), 0.05) == pytest.approx(0.35)
    patch_satisfied(monkeypatch, lambda h: h > 0.9)
    assert min_hit_rate(Scenario(), 0.05) == pytest.approx(0.95)


def test_min_hit_rate_edges(monkeypatch):
    patch_satisfied(monkeypatch, lambda h: True)
    assert min_hit_rate(Scenario(), 0.05) == 0.0
    patch_satisfied(monkeypatch, lambda h: False)
    assert min_hit_rate(Scenario(), 0.05) == UNSATISFIABLE


def test_min_hit_rate_uses_binary_search(monkeypatch):
    calls = []
    patch_satisfied(monkeypatch, lambda h: h >= 0.6, calls)
    min_hit_rate(Scenario(), 0.05)
    # far fewer probes than the 21-point grid
    assert len(calls) <= 2 + 5


def test_min_hit_rates_maps_seeds(monkeypatch):
    patch_satisfied(monkeypatch, lambda h: h >= 0.5)
    out = min_hit_rates(Scenario(), [1, 2], scheme=3)
    assert set(out) == {1, 2}
    assert all(v == pytest.approx(0.5) for v in out.values())


def test_cdf_counts_unsatisfiable_seeds_nowhere():
    rates = {1: 0.0, 2: 0.5, 3: 0.5, 4: UNSATISFIABLE}
    cdf = hit_rate_cdf(rates, 0.25)
    assert cdf == [(0.0, 0.25), (0.25, 0.25), (0.5, 0.75), (0.75, 0.75), (1.0, 0.75)]


def test_min_hit_rate_on_a_real_short_run():
    sc = Scenario(seed=3, scheme=2, horizon_s=300)
    m = min_hit_rate(sc)
    if m != UNSATISFIABLE:
        assert m in hit_rate_grid(sc.grid_step)
        assert cache.satisfied_at(sc, m)
