#!/usr/bin/env python3
"""Independent oracle for the frozen regression constants used by the tests.

Self-contained on purpose: nothing here imports the package under src/, so the
values it prints are an independent route to the same numbers.  Regenerate with

    python scripts/derive_constants.py

and compare against tests/frozen_constants.py before changing anything there.
"""

from __future__ import annotations

import itertools
from decimal import Decimal, getcontext


# ---------------------------------------------------------------------------
# Euclidean frame isomorphism classes, by brute force over all relations.
# ---------------------------------------------------------------------------

def is_euclidean(n: int, edges: frozenset[tuple[int, int]]) -> bool:
    for s in range(n):
        succ = [t for t in range(n) if (s, t) in edges]
        for t in succ:
            for u in succ:
                if (t, u) not in edges or (u, t) not in edges:
                    return False
    return True


def canon(n: int, edges: frozenset[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    best = None
    for perm in itertools.permutations(range(n)):
        relabeled = frozenset((perm[s], perm[t]) for (s, t) in edges)
        key = tuple(sorted(relabeled))
        if best is None or key < best[0]:
            best = (key, relabeled)
    assert best is not None
    return best[1]


def euclidean_class_count(n: int) -> int:
    pairs = [(s, t) for s in range(n) for t in range(n)]
    seen = set()
    for bits in range(2 ** len(pairs)):
        edges = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
        if is_euclidean(n, edges):
            seen.add(canon(n, edges))
    return len(seen)


def graph_class_count(n: int) -> int:
    """Irreflexive symmetric frames (= simple graphs) up to isomorphism."""
    pairs = [(s, t) for s in range(n) for t in range(s + 1, n)]
    seen = set()
    for bits in range(2 ** len(pairs)):
        edges = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
        full = frozenset(edges | {(t, s) for (s, t) in edges})
        seen.add(canon(n, full))
    return len(seen)


# ---------------------------------------------------------------------------
# The reduction size bound at q=3, k=4, without ever materializing the
# decimal expansion: digit statistics come from interval arithmetic with an
# asserted safety margin, residues from modular exponentiation.
# ---------------------------------------------------------------------------

def bound_stats() -> dict[str, int]:
    q, k = 3, 4
    big_q = 2 * q * (q * (q + 1) ** 2 + 1)
    big_k = 2 ** k
    qk = big_q * big_k
    coeff = 2 * q * (qk + 1) ** 2 * qk   # everything except the power of two
    shift = qk * qk                      # bound = coeff * 2**shift

    getcontext().prec = 80
    log10x = (Decimal(coeff).ln() + shift * Decimal(2).ln()) / Decimal(10).ln()
    frac = log10x - int(log10x)
    # The floor is only trustworthy if we are far from an integer boundary.
    assert Decimal("1e-40") < frac < 1 - Decimal("1e-40"), frac
    digits = int(log10x) + 1

    lead = int(Decimal(10) ** (frac + 11))
    assert 10 ** 11 <= lead < 10 ** 12
    # Margin check for the leading digits as well: 10**(frac+11) must not sit
    # within rounding distance of an integer.
    lead_exact = Decimal(10) ** (frac + 11)
    assert abs(lead_exact - (int(lead_exact) + Decimal("0.5"))) > Decimal("1e-30")

    mod_a = 10 ** 9 + 7
    mod_b = 2 ** 61 - 1
    stats = {
        "q": big_q,
        "k_pow": big_k,
        "qk": qk,
        "coeff": coeff,
        "shift": shift,
        "digits": digits,
        "lead12": lead,
        "tail12": coeff * pow(2, shift, 10 ** 12) % 10 ** 12,
        "mod_1e9_7": coeff % mod_a * pow(2, shift, mod_a) % mod_a,
        "mod_m61": coeff % mod_b * pow(2, shift, mod_b) % mod_b,
    }

    # Second, independent route for the digit statistics: rational interval
    # arithmetic around log10(2) and log10(coeff) tight enough to pin both the
    # digit count and the 12 leading digits.
    try:
        import mpmath

        mpmath.mp.dps = 80
        alt = mpmath.log10(coeff) + shift * mpmath.log10(2)
        assert int(mpmath.floor(alt)) + 1 == digits
        alt_frac = alt - mpmath.floor(alt)
        assert int(mpmath.floor(mpmath.mpf(10) ** (alt_frac + 11))) == lead
    except ImportError:
        pass

    return stats


# ---------------------------------------------------------------------------
# Brute-force Ehrenfeucht-Fraisse games (no memoization at all).
# ---------------------------------------------------------------------------

def partial_iso(pairs: list[tuple[int, int]],
                e1: frozenset[tuple[int, int]],
                e2: frozenset[tuple[int, int]]) -> bool:
    for (a1, b1) in pairs:
        for (a2, b2) in pairs:
            if (a1 == a2) != (b1 == b2):
                return False
            if ((a1, a2) in e1) != ((b1, b2) in e2):
                return False
    return True


def ef_win(w1: list[int], e1: frozenset, w2: list[int], e2: frozenset, q: int) -> bool:
    def second_wins(pairs: list[tuple[int, int]], moves: int) -> bool:
        if not partial_iso(pairs, e1, e2):
            return False
        if moves == 0:
            return True
        for a in w1:
            if not any(second_wins(pairs + [(a, b)], moves - 1) for b in w2):
                return False
        for b in w2:
            if not any(second_wins(pairs + [(a, b)], moves - 1) for a in w1):
                return False
        return True

    return second_wins([], q)


def ef_results() -> dict[str, bool]:
    irr = ([0], frozenset())
    refl = ([0], frozenset({(0, 0)}))
    clique3 = (list(range(3)), frozenset((s, t) for s in range(3) for t in range(3)))
    clique9 = (list(range(9)), frozenset((s, t) for s in range(9) for t in range(9)))
    two_dust = ([0, 1], frozenset())
    return {
        "g1_irreflexive_vs_reflexive": ef_win(*irr, *refl, 1),
        "g3_clique3_vs_clique9": ef_win(*clique3, *clique9, 3),
        "g2_point_vs_two_points": ef_win(*irr, *two_dust, 2),
        "g1_point_vs_two_points": ef_win(*irr, *two_dust, 1),
    }


# ---------------------------------------------------------------------------
# First counter-witness of box p -> box box p on the flower with m=2, n=2,
# under the canonical search order (worlds outer in shortlex order, valuations
# as a binary counter with bit i <=> world i in V(p)).
# ---------------------------------------------------------------------------

def flower_edges(m: int, n: int) -> frozenset[tuple[int, int]]:
    if n == -1:
        return frozenset((s, t) for s in range(1, m + 1) for t in range(1, m + 1))
    root = frozenset((0, t) for t in range(1, m + 1))
    kernel = frozenset((s, t) for s in range(1, m + n + 1) for t in range(1, m + n + 1))
    return root | kernel


def first_counter_witness_422() -> tuple[int, frozenset[int]]:
    worlds = list(range(5))
    edges = flower_edges(2, 2)

    def boxed(pred, s):
        return all(pred(t) for t in worlds if (s, t) in edges)

    for s in worlds:
        for bits in range(2 ** len(worlds)):
            v = frozenset(i for i in worlds if bits >> i & 1)
            box_p = boxed(lambda t: t in v, s)
            box_box_p = boxed(lambda t: boxed(lambda u: u in v, t), s)
            if box_p and not box_box_p:
                return s, v
    raise AssertionError("no counter-witness found")


def main() -> None:
    print("# Euclidean frame isomorphism classes (exactly n worlds)")
    total = 0
    for n in range(1, 5):
        c = euclidean_class_count(n)
        total += c
        print(f"euclidean_classes[{n}] = {c}   (cumulative <= {n}: {total})")

    print("# irreflexive symmetric frames up to isomorphism")
    for n in range(2, 5):
        print(f"graph_classes[{n}] = {graph_class_count(n)}")

    print("# bound(3, 4) statistics")
    for key, value in bound_stats().items():
        print(f"bound34_{key} = {value}")

    print("# brute-force EF game outcomes")
    for key, value in ef_results().items():
        print(f"ef_{key} = {value}")

    s, v = first_counter_witness_422()
    print("# first counter-witness of 'box p -> box box p' on flower(2,2)")
    print(f"witness_world = {s}")
    print(f"witness_valuation = {sorted(v)}")


if __name__ == "__main__":
    main()
