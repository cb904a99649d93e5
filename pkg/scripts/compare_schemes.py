#!/usr/bin/env python3
"""Run all three forwarding schemes on one seed and print the QoS table.

Usage: python scripts/compare_schemes.py [--seed N] [--horizon S] [--hit-rate H]
"""

import argparse
from dataclasses import replace

from a2gsim import Scenario, run_simulation

APPS = ("VoIP", "Video", "Web")
CLASSES = ("First", "Business", "Economy")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--horizon", type=float, default=3600.0)
    parser.add_argument("--hit-rate", type=float, default=0.0)
    args = parser.parse_args()

    base = Scenario(seed=args.seed, horizon_s=args.horizon, hit_rate=args.hit_rate)
    print("seed=%d horizon=%gs hit_rate=%.2f" % (args.seed, args.horizon, args.hit_rate))
    header = "%-8s %-6s" % ("scheme", "ok") + "".join(
        " %9s" % ("%s/%s" % (a[:3], c[:3])) for a in APPS for c in CLASSES)
    print(header + "".join(" %9s" % ("sat/%s" % c[:3]) for c in CLASSES))
    for scheme in (1, 2, 3):
        report = run_simulation(replace(base, scheme=scheme))
        cells = ["%9.4f" % report.dropped_fraction(a, c) for a in APPS for c in CLASSES]
        cells += ["%9.4f" % report.voip_sa2gc_time_fraction(c) for c in CLASSES]
        print("%-8d %-6s" % (scheme, report.satisfied_all()) + " ".join([""] + cells))


if __name__ == "__main__":
    main()
