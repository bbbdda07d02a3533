"""Index pairs under the componentwise order, their downward cones, and the
characteristic formulas of flowers.

Each admissible index (m, n) yields a modal formula that a Euclidean frame
fails to validate at a point exactly when the point's generated subframe maps
onto the flower with that index by a surjective bounded morphism whose value
at the point generates the flower.  The formula is the negation of a
conjunction that forces any falsifying valuation to label the reachable
worlds with flower worlds: one label per world, every label realized, and
arrows matched both ways.  That reading licenses two independent evaluation
routes, a semantic one enumerating labelings as valuations, and a structural
one searching for the morphism directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

from .errors import InvalidIndex, NotEuclidean, PreconditionViolated
from .formulas import (Bottom, Box, ModalFormula, Not, PropVar, big_and,
                       big_or, box_u, dia, dia_u, m_implies)
from .frames import (Frame, World, flower, generated_subframe, is_euclidean)
from .limits import DEFAULT_LIMITS, Limits
from .morphisms_games import find_surjective_bm
from .semantics import Valuation, sat_modal


@dataclass(frozen=True, order=True)
class IndexPair:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1:
            raise InvalidIndex(f"index pair needs m >= 1, got m={self.m}")
        if self.n < -1:
            raise InvalidIndex(f"index pair needs n >= -1, got n={self.n}")


IndexSet = frozenset  # of IndexPair


def ll(p: IndexPair, q: IndexPair) -> bool:
    """The componentwise partial order on index pairs."""
    return p.m <= q.m and p.n <= q.n


def pi(p: IndexPair) -> frozenset[IndexPair]:
    """All index pairs below p: exactly m * (n + 2) of them."""
    cone = frozenset(IndexPair(m, n)
                     for m in range(1, p.m + 1)
                     for n in range(-1, p.n + 1))
    assert len(cone) == p.m * (p.n + 2), (p, len(cone))
    return cone


def rectangle(bound: IndexPair) -> frozenset[IndexPair]:
    return pi(bound)


def is_closed_truncation(pairs: Iterable[IndexPair], within: IndexPair) -> bool:
    """Downward closure of a finite index set inside the given rectangle."""
    pairs = frozenset(pairs)
    box = rectangle(within)
    if not pairs <= box:
        raise PreconditionViolated(
            "the index set must live inside the given rectangle")
    return all(pi(p) <= pairs for p in pairs)


def jf_index_valid(m: int, n: int) -> bool:
    """Admissible characteristic-formula indices: flowers, plus the isolated
    point at (0, 0)."""
    return (m >= 1 and n >= -1) or (m == 0 and n == 0)


def _require_jf_index(m: int, n: int) -> None:
    if not jf_index_valid(m, n):
        raise InvalidIndex(
            f"characteristic formulas need m >= 1 and n >= -1, or (0, 0); "
            f"got ({m}, {n})")


def jf_variables(m: int, n: int, prefix: str = "_jf") -> tuple[str, ...]:
    _require_jf_index(m, n)
    if m == 0:
        return ()
    if n == -1:
        return tuple(f"{prefix}{k}" for k in range(1, m + 1))
    return tuple(f"{prefix}{k}" for k in range(0, m + n + 1))


def jf_conjunction(m: int, n: int, prefix: str = "_jf") -> ModalFormula:
    """The positive part: its satisfaction at a point is exactly what the
    characteristic formula negates."""
    _require_jf_index(m, n)
    if m == 0:
        return Box(Bottom())
    p = {k: PropVar(f"{prefix}{k}") for k in range(0, m + max(n, 0) + 1)}
    conjuncts: list[ModalFormula] = []
    if n == -1:
        ks = list(range(1, m + 1))
        conjuncts.append(p[1])
        conjuncts.append(box_u(big_or([p[k] for k in ks])))
        for k in ks:
            for l in ks:
                if k < l:
                    conjuncts.append(box_u(m_implies(p[k], Not(p[l]))))
        for k in ks:
            conjuncts.append(dia_u(p[k]))
        for k in ks:
            for l in ks:
                conjuncts.append(box_u(m_implies(p[k], dia(p[l]))))
        return big_and(conjuncts)
    ks = list(range(0, m + n + 1))
    conjuncts.append(p[0])
    conjuncts.append(box_u(big_or([p[k] for k in ks])))
    for k in ks:
        for l in ks:
            if k < l:
                conjuncts.append(box_u(m_implies(p[k], Not(p[l]))))
    for k in ks:
        conjuncts.append(dia_u(p[k]))
    conjuncts.append(box_u(m_implies(p[0], Box(Not(p[0])))))
    for k in range(1, m + 1):
        conjuncts.append(box_u(m_implies(p[0], dia(p[k]))))
    for k in range(m + 1, m + n + 1):
        conjuncts.append(box_u(m_implies(p[0], Box(Not(p[k])))))
    for k in range(1, m + n + 1):
        conjuncts.append(box_u(m_implies(p[k], Box(Not(p[0])))))
    for k in range(1, m + n + 1):
        for l in range(1, m + n + 1):
            conjuncts.append(box_u(m_implies(p[k], dia(p[l]))))
    return big_and(conjuncts)


def jankov_fine(m: int, n: int, prefix: str = "_jf") -> ModalFormula:
    """The characteristic formula of the flower with index (m, n)."""
    return Not(jf_conjunction(m, n, prefix))


def canonical_flower_valuation(m: int, n: int, prefix: str = "_jf"
                               ) -> tuple[Frame, Valuation, World]:
    """The flower, the valuation putting each variable on its own world, and
    the world where the characteristic formula fails."""
    _require_jf_index(m, n)
    frame = flower(m, n)
    if m == 0:
        return frame, {}, "0"
    ks = range(0, m + n + 1) if n >= 0 else range(1, m + 1)
    valuation = {f"{prefix}{k}": frozenset({str(k)}) for k in ks}
    return frame, valuation, str(ks[0])


def flower_generators(m: int, n: int) -> frozenset[World]:
    """Worlds whose generated subframe is the whole flower."""
    frame = flower(m, n)
    return frozenset(w for w in frame.worlds
                     if generated_subframe(frame, w) == frame)


def falsifying_valuation(frame: Frame, world: World, m: int, n: int,
                         prefix: str = "_jf",
                         limits: Limits = DEFAULT_LIMITS
                         ) -> Optional[Valuation]:
    """Semantic route: a valuation making the characteristic formula false at
    the world, or None.

    Only labelings of the generated subframe are enumerated.  On Euclidean
    frames this is complete: the conjunction's universal conjuncts range over
    exactly the generated worlds there, forcing any falsifying valuation to
    restrict to a labeling with one label per generated world and every label
    realized, so the search space below already contains a witness whenever
    one exists.
    """
    if not is_euclidean(frame):
        raise NotEuclidean("the semantic route needs a Euclidean frame")
    _require_jf_index(m, n)
    if world not in frame.worlds:
        raise KeyError(world)
    if m == 0:
        return {} if not frame.successors(world) else None
    gen = generated_subframe(frame, world)
    labels = list(range(0, m + n + 1)) if n >= 0 else list(range(1, m + 1))
    if len(labels) > len(gen.worlds):
        return None
    conjunction = jf_conjunction(m, n, prefix)
    pinned = labels[0]
    others = [w for w in gen.sorted_worlds() if w != world]
    count = len(labels) ** len(others)
    if count > limits.max_valuations:
        raise PreconditionViolated(
            f"labeling space {count} exceeds the valuation ceiling")
    for assignment in product(labels, repeat=len(others)):
        if set(assignment) | {pinned} != set(labels):
            continue
        valuation: Valuation = {}
        for k in labels:
            members = {w for (w, lab) in zip(others, assignment) if lab == k}
            if k == pinned:
                members.add(world)
            valuation[f"{prefix}{k}"] = frozenset(members)
        if sat_modal(gen, valuation, world, conjunction):
            return valuation
    return None


def morphism_witness(frame: Frame, world: World, m: int, n: int,
                     limits: Limits = DEFAULT_LIMITS
                     ) -> Optional[dict[World, World]]:
    """Structural route: a surjective bounded morphism from the world's
    generated subframe onto the flower, sending the world to a generator."""
    _require_jf_index(m, n)
    if world not in frame.worlds:
        raise KeyError(world)
    gen = generated_subframe(frame, world)
    target = flower(m, n)
    for g in sorted(flower_generators(m, n)):
        witness = find_surjective_bm(gen, target, limits, pin=(world, g))
        if witness is not None:
            return witness
    return None


def jf_valid_on(frame: Frame, m: int, n: int,
                limits: Limits = DEFAULT_LIMITS,
                route: str = "morphism") -> bool:
    """Whether the frame validates the characteristic formula of (m, n).

    The morphism route checks that no world's generated subframe maps onto
    the flower with a generator image; the semantic route looks for a
    falsifying valuation directly.  The two agree on Euclidean frames.
    """
    if route == "morphism":
        return all(morphism_witness(frame, w, m, n, limits) is None
                   for w in frame.sorted_worlds())
    if route == "semantic":
        return all(falsifying_valuation(frame, w, m, n, limits=limits) is None
                   for w in frame.sorted_worlds())
    raise ValueError(f"unknown route {route!r}")
