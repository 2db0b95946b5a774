#!/usr/bin/env python3
"""Run the full product-preservation verification: the randomized box-product
suite over all four system types, the product-écart sphere/box identity, and
the product R-system validity checks.

Usage: python scripts/verify_theorems.py [--trials N] [--seed K] [--types T1,T2] [--json]
"""

import sys

from smtop.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", "theorems", *sys.argv[1:]]))
