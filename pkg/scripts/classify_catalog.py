#!/usr/bin/env python3
"""Classify a catalog of modal axioms and print one table row per axiom.

Each row reports the axiom, its variable count, the probe value l, the
verdict (whether definability and correspondence over the axiom's Euclidean
frame class are decidable problems), and the exploration budget k when the
verdict is decidable.  Extra axioms can be appended on the command line.

    python scripts/classify_catalog.py
    python scripts/classify_catalog.py --axiom "box (box p -> p)"
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from modef.classifier import classify
from modef.formulas import parse_modal, print_modal, var_of

CATALOG = [
    "top",
    "bot",
    "box bot",
    "dia top",
    "box p -> p",
    "box p -> box box p",
    "p -> box dia p",
    "box p -> dia p",
    "dia p -> box p",
    "box (box p -> p)",
    "dia box p -> box dia p",
    "box p | box q -> box (p | q)",
]


def main(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--axiom", action="append", default=[],
                        help="additional axiom to classify (repeatable)")
    args = parser.parse_args(argv)

    rows = []
    for text in CATALOG + args.axiom:
        axiom = parse_modal(text)
        started = time.time()
        report = classify(axiom)
        elapsed = time.time() - started
        rows.append((print_modal(axiom), len(var_of(axiom)), report.l,
                     report.verdict, report.k, elapsed))

    width = max(len(row[0]) for row in rows)
    header = (f"{'axiom':<{width}}  vars  l   verdict      k   seconds")
    print(header)
    print("-" * len(header))
    for text, vars_count, l, verdict, k, elapsed in rows:
        k_text = "-" if k is None else str(k)
        print(f"{text:<{width}}  {vars_count:>4}  {l:<3} {verdict:<12} "
              f"{k_text:<3} {elapsed:7.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
