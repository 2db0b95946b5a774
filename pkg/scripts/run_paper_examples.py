#!/usr/bin/env python3
"""Recompute every bundled worked example and diff against the expected
tables.  Exit status is nonzero if any group mismatches.

Usage: python scripts/run_paper_examples.py [--group ex1|ex2|ex3|rsphere] [--json]
"""

import sys

from smtop.cli import main

if __name__ == "__main__":
    sys.exit(main(["paper-examples", *sys.argv[1:]]))
