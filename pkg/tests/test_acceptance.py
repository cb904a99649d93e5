"""Acceptance suite: one verdict line per criterion.

Property criteria (1-6) must hold exactly; trend criteria (7-11) check
that the qualitative comparisons hold on a majority of seeds at the
default one-hour scenario.  Heavy sweeps are cached in session fixtures
so later criteria can reuse earlier runs.
"""

import random
from dataclasses import replace
from fractions import Fraction

import pytest

from a2gsim import Scenario, run_simulation
from a2gsim.cache import hit_rate_cdf, hit_rate_grid, min_hit_rates
from a2gsim.events import US_PER_S
from a2gsim.traffic import APP_PROFILES, CabinConfig, build_flow_population, next_toggle_us

from micro import make_instance, run_engine, run_reference

SCHEMES = (1, 2, 3)
PODD_APPS = ("VoIP", "Video", "Web")
CLASSES = ("First", "Business", "Economy")

FEASIBILITY_SEEDS = range(1, 51)
DETERMINISM_SEEDS = range(1, 11)
MONOTONICITY_SEEDS = range(1, 21)
TREND_SEEDS = range(1, 31)
CDF_SEEDS = range(1, 296)


def verdict(capsys, number, name, ok, detail=""):
    with capsys.disabled():
        print("criterion %02d %-22s %s%s"
              % (number, name, "PASS" if ok else "FAIL",
                 " (%s)" % detail if detail else ""))
    assert ok, "criterion %d (%s) failed: %s" % (number, name, detail)


# -- shared sweeps ----------------------------------------------------------

@pytest.fixture(scope="session")
def checked_runs():
    """50 seeds x 3 schemes with per-event invariant assertions enabled."""
    out = {}
    for seed in FEASIBILITY_SEEDS:
        for scheme in SCHEMES:
            sc = Scenario(seed=seed, scheme=scheme)
            try:
                out[(seed, scheme)] = run_simulation(sc, check_invariants=True)
            except Exception as exc:  # recorded, judged in the criterion tests
                out[(seed, scheme)] = exc
    return out


@pytest.fixture(scope="session")
def trend_runs():
    """30 seeds x 3 schemes at the default scenario."""
    return {(seed, scheme): run_simulation(Scenario(seed=seed, scheme=scheme))
            for seed in TREND_SEEDS for scheme in SCHEMES}


def agg_dropped_fraction(report, app):
    rows = [f for f in report.flows if f["app"] == app]
    offered = sum(f["offered_bit_us"] for f in rows)
    dropped = sum(f["dropped_bit_us"] for f in rows)
    return dropped / offered if offered else 0.0


# -- property criteria ------------------------------------------------------

def test_criterion_01_capacity_feasibility(checked_runs, capsys):
    bad = sorted((k, v) for k, v in checked_runs.items() if isinstance(v, Exception))
    detail = "%d/%d runs clean" % (len(checked_runs) - len(bad), len(checked_runs))
    if bad:
        detail += "; first failure %s: %s" % (bad[0][0], bad[0][1])
    verdict(capsys, 1, "capacity feasibility", not bad, detail)


def test_criterion_02_oracle_equivalence(capsys):
    mismatches = 0
    for seed in range(1000):
        instance = make_instance(seed)
        if run_engine(*instance) != run_reference(*instance):
            mismatches += 1
    verdict(capsys, 2, "oracle equivalence", mismatches == 0,
            "%d/1000 instances diverged" % mismatches)


def test_criterion_03_determinism(capsys):
    unstable = []
    for seed in DETERMINISM_SEEDS:
        for scheme in SCHEMES:
            sc = Scenario(seed=seed, scheme=scheme)
            if run_simulation(sc).to_json() != run_simulation(sc).to_json():
                unstable.append((seed, scheme))
    verdict(capsys, 3, "determinism", not unstable,
            "%d/30 repeated runs byte-identical" % (30 - len(unstable)))


def _lr_oracle(total, ratios):
    quotas = [Fraction(r).limit_denominator(10**9) * total for r in ratios]
    counts = [int(q) for q in quotas]
    for i in sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - counts[i]), i))[:total - sum(counts)]:
        counts[i] += 1
    return counts


def test_criterion_04_traffic_statistics(capsys):
    problems = []
    n = 100_000
    for app, phase, mean in (("VoIP", "on", 3.0), ("VoIP", "off", 3.0),
                             ("Web", "on", 5.0), ("Web", "off", 30.0)):
        rng = random.Random("toggles/%s/%s" % (app, phase))
        sample = sum(next_toggle_us(APP_PROFILES[app], phase, rng)
                     for _ in range(n)) / n / US_PER_S
        if abs(sample - mean) / mean >= 0.01:
            problems.append("%s %s mean %.3f" % (app, phase, sample))
    rng = random.Random(77)
    for _ in range(20):
        seats = [rng.randint(0, 200), rng.randint(0, 30), rng.randint(0, 12)]
        cabin = CabinConfig(economy_seats=seats[0], business_seats=seats[1],
                            first_seats=seats[2])
        flows = build_flow_population(cabin, 3600 * US_PER_S, random.Random(rng.random()))
        for cls, total in zip(("Economy", "Business", "First"), seats):
            got = [sum(1 for f in flows if f.travel_class == cls and f.app == a)
                   for a in PODD_APPS]
            if got != _lr_oracle(total, cabin.usage_ratios):
                problems.append("cabin %s class %s counts %s" % (seats, cls, got))
    verdict(capsys, 4, "traffic statistics", not problems, "; ".join(problems))


def test_criterion_05_conservation(checked_runs, capsys):
    violations = 0
    checked = 0
    for report in checked_runs.values():
        if isinstance(report, Exception):
            continue
        for f in report.flows:
            checked += 1
            if f["offered_bit_us"] != f["delivered_bit_us"] + f["dropped_bit_us"]:
                violations += 1
    verdict(capsys, 5, "conservation", violations == 0 and checked > 0,
            "%d flow accounts exact" % checked)


def test_criterion_06_cache_monotonicity(capsys):
    grid = hit_rate_grid(0.05)
    flips = []
    for seed in MONOTONICITY_SEEDS:
        for scheme in SCHEMES:
            sc = Scenario(seed=seed, scheme=scheme)
            sat = [run_simulation(replace(sc, hit_rate=h)).satisfied_all()
                   for h in grid]
            for lo, hi in zip(sat, sat[1:]):
                if lo and not hi:
                    flips.append((seed, scheme))
                    break
    verdict(capsys, 6, "cache monotonicity", not flips,
            "flips at (seed, scheme): %s" % flips if flips else "60 profiles monotone")


# -- trend criteria ---------------------------------------------------------

def test_criterion_07_scheme1_priority_ordering(trend_runs, capsys):
    hits = 0
    for seed in TREND_SEEDS:
        report = trend_runs[(seed, 1)]
        ok = True
        for app in PODD_APPS:
            fracs = [report.dropped_fraction(app, cls) for cls in CLASSES]
            offered = [report.offered_bit_us(app, cls) for cls in CLASSES]
            pairs = [(f, o) for f, o in zip(fracs, offered) if o]
            if any(a[0] > b[0] for a, b in zip(pairs, pairs[1:])):
                ok = False
        hits += ok
    verdict(capsys, 7, "scheme-1 priority order", hits > len(TREND_SEEDS) / 2,
            "%d/%d seeds ordered" % (hits, len(TREND_SEEDS)))


def test_criterion_08_scheme2_voip_protection(trend_runs, capsys):
    hits = 0
    for seed in TREND_SEEDS:
        report = trend_runs[(seed, 2)]
        ok = all(report.dropped_fraction("VoIP", cls) <= 0.01 for cls in CLASSES) \
            and all(report.voip_sa2gc_time_fraction(cls) <= 0.01 for cls in CLASSES)
        hits += ok
    verdict(capsys, 8, "scheme-2 VoIP protection", hits > len(TREND_SEEDS) / 2,
            "%d/%d seeds protected" % (hits, len(TREND_SEEDS)))


def test_criterion_09_scheme3_web_improvement(trend_runs, capsys):
    hits = sum(agg_dropped_fraction(trend_runs[(seed, 3)], "Web")
               < agg_dropped_fraction(trend_runs[(seed, 2)], "Web")
               for seed in TREND_SEEDS)
    verdict(capsys, 9, "scheme-3 Web improvement", hits > len(TREND_SEEDS) / 2,
            "%d/%d seeds improved" % (hits, len(TREND_SEEDS)))


def test_criterion_10_cache_cdf_shape(capsys):
    best = 0.0
    detail = []
    # existential over schemes: stop as soon as one clears the bar
    for scheme in (2, 3, 1):
        rates = min_hit_rates(Scenario(), CDF_SEEDS, scheme)
        cdf = hit_rate_cdf(rates, 0.05)
        fraction = next(f for h, f in cdf if abs(h - 0.9) < 1e-9)
        best = max(best, fraction)
        detail.append("scheme %d: %.3f" % (scheme, fraction))
        if best >= 0.4:
            break
    verdict(capsys, 10, "cache CDF shape", best >= 0.4,
            "CDF of minimal hit rate at 0.9 - " + ", ".join(detail))


def test_criterion_11_scheme1_inadequacy(trend_runs, capsys):
    hits = 0
    for seed in TREND_SEEDS:
        report = trend_runs[(seed, 1)]
        thresholds = {"VoIP": 0.01, "Video": 0.02, "Web": 0.10}
        exceeded = any(report.dropped_fraction(app, "Economy") > thresholds[app]
                       for app in PODD_APPS) \
            or report.voip_sa2gc_time_fraction("Economy") > 0.01
        hits += exceeded
    verdict(capsys, 11, "scheme-1 inadequacy", hits >= 0.8 * len(TREND_SEEDS),
            "%d/%d seeds exceed an economy threshold" % (hits, len(TREND_SEEDS)))
