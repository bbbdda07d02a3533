#!/usr/bin/env python3
"""Reduce seeded random Euclidean frames and report size statistics.

Draws random galaxies (optionally unioned into multi-part frames), runs the
full alpha/gamma/delta pipeline at the given budget, validates every
certificate, and prints a summary: world counts before and after, how often
the frame shrank, and the largest observed ratio.

    python scripts/reduction_stats.py --trials 200 --seed 7 --q 3
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from modef.frames import Galaxy, disjoint_union, galaxy_to_frame
from modef.reductions import reduce_frame, validate_certificate


def random_galaxy(rng: random.Random, tag: str, max_part: int) -> Galaxy:
    lower_count = rng.randint(1, max(1, max_part - 2))
    upper_count = rng.randint(0, max_part - lower_count)
    lower = frozenset(f"{tag}k{i}" for i in range(lower_count))
    upper = frozenset(f"{tag}u{i}" for i in range(upper_count))
    rho = {}
    for point in upper:
        size = rng.randint(0, lower_count)
        rho[point] = frozenset(rng.sample(sorted(lower), size))
    return Galaxy.make(upper, lower, rho)


def main(argv: list[str]) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--q", type=int, default=3,
                        help="game budget driving every stage")
    parser.add_argument("--k", type=int, default=4,
                        help="kernel budget recorded in the certificate")
    parser.add_argument("--max-part", type=int, default=6,
                        help="largest world count per random part")
    parser.add_argument("--multi-share", type=float, default=0.15,
                        help="fraction of trials drawing 2 to 4 parts")
    args = parser.parse_args(argv)

    rng = random.Random(args.seed)
    shrunk = 0
    unchanged = 0
    invalid = 0
    best_ratio = 1.0
    before_total = 0
    after_total = 0
    for trial in range(args.trials):
        multi = rng.random() < args.multi_share
        parts = rng.randint(2, 4) if multi else 1
        members = [galaxy_to_frame(random_galaxy(rng, f"t{trial}p{p}",
                                                 args.max_part))
                   for p in range(parts)]
        frame = disjoint_union(members)
        reduced, certificate = reduce_frame(frame, args.q, args.k)
        problems = validate_certificate(certificate)
        if problems:
            invalid += 1
            print(f"trial {trial}: certificate problems: {problems}")
            continue
        before = len(frame.worlds)
        after = len(reduced.worlds)
        before_total += before
        after_total += after
        if after < before:
            shrunk += 1
            best_ratio = min(best_ratio, after / before)
        else:
            unchanged += 1

    print(f"trials:          {args.trials}")
    print(f"certificates ok: {args.trials - invalid}")
    print(f"shrunk:          {shrunk}")
    print(f"unchanged:       {unchanged}")
    print(f"worlds before:   {before_total}")
    print(f"worlds after:    {after_total}")
    if shrunk:
        print(f"best ratio:      {best_ratio:.3f}")
    return 1 if invalid else 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
