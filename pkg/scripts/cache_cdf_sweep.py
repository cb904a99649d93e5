#!/usr/bin/env python3
"""Minimal cache hit-rate CDF over many seeds, with checkpoint resume.

Thin driver over the `a2gsim cache-cdf` subcommand; results land in
--out-dir as cdf.csv / cdf.json plus a resumable checkpoint file.

Usage: python scripts/cache_cdf_sweep.py [--runs 295] [--scheme N] [--workers K]
"""

import sys

from a2gsim.cli import main

if __name__ == "__main__":
    sys.exit(main(["cache-cdf"] + sys.argv[1:]))
