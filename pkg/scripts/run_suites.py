#!/usr/bin/env python3
"""Run the property suites and write a JSON report.

Usage:
    python scripts/run_suites.py [all|classify|cayley|lcp|operator] [--seed N] [--out report.json]
"""

import sys

from pmkit.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:] or ["all"]
    sys.exit(main(["suite", *argv]))
