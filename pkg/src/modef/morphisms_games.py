"""Bounded morphisms, isomorphisms, and Ehrenfeucht-Fraisse games.

A bounded morphism preserves edges forward and reflects them backward; its
surjective images inherit modal validity.  The q-move game decides elementary
equivalence up to quantifier depth q: the second player wins exactly when the
two frames agree on all sentences of that depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import PreconditionViolated, ResourceLimit
from .frames import Frame, World, world_sort_key
from .limits import DEFAULT_LIMITS, Limits

WorldMap = Mapping[World, World]


def _check_total(f: WorldMap, source: Frame, target: Frame) -> None:
    missing = source.worlds - set(f)
    if missing:
        raise PreconditionViolated(
            f"map not total on source, missing {sorted(missing)[:3]}")
    stray = {f[s] for s in source.worlds} - target.worlds
    if stray:
        raise PreconditionViolated(
            f"map leaves the target worlds: {sorted(stray)[:3]}")


def is_bounded_morphism(f: WorldMap, source: Frame, target: Frame) -> bool:
    """Forth: source edges map to target edges.  Back: every target successor
    of an image is the image of some source successor."""
    _check_total(f, source, target)
    for (s, t) in source.edges:
        if (f[s], f[t]) not in target.edges:
            return False
    for s in source.worlds:
        images = {f[t] for t in source.successors(s)}
        for t in target.successors(f[s]):
            if t not in images:
                return False
    return True


def is_surjective(f: WorldMap, source: Frame, target: Frame) -> bool:
    _check_total(f, source, target)
    return {f[s] for s in source.worlds} == target.worlds


def find_surjective_bm(source: Frame, target: Frame,
                       limits: Limits = DEFAULT_LIMITS,
                       prune: bool = True,
                       pin: Optional[tuple[World, World]] = None
                       ) -> Optional[dict[World, World]]:
    """Complete backtracking search for a surjective bounded morphism.

    With prune=True, candidates are filtered by invariants every bounded
    morphism satisfies on arbitrary frames: worlds without successors map
    exactly onto worlds without successors, worlds with predecessors map to
    worlds with predecessors, and out-degree never increases.  prune=False
    keeps only the definitional consistency checks and serves as the slow
    oracle route in tests.  A pin (s, t) restricts the search to morphisms
    sending s to t.
    """
    if len(source.worlds) < len(target.worlds):
        return None
    if pin is not None:
        if pin[0] not in source.worlds or pin[1] not in target.worlds:
            raise PreconditionViolated(f"pin {pin} is outside the frames")
    pinned = dict([pin]) if pin is not None else {}
    order = source.sorted_worlds()
    targets = target.sorted_worlds()
    src_succ = {w: source.successors(w) for w in order}
    src_pred_nonempty = {w: bool(source.predecessors(w)) for w in order}
    tgt_succ = {w: target.successors(w) for w in targets}
    tgt_pred_nonempty = {w: bool(target.predecessors(w)) for w in targets}
    visited = 0

    def candidates(s: World) -> list[World]:
        pool = [pinned[s]] if s in pinned else targets
        if not prune:
            return pool
        out = []
        for t in pool:
            if bool(src_succ[s]) != bool(tgt_succ[t]):
                continue
            if src_pred_nonempty[s] and not tgt_pred_nonempty[t]:
                continue
            if len(tgt_succ[t]) > len(src_succ[s]):
                continue
            out.append(t)
        return out

    def consistent(assigned: dict[World, World], s: World) -> bool:
        fs = assigned[s]
        for (u, fu) in assigned.items():
            if ((s, u) in source.edges) and (fs, fu) not in target.edges:
                return False
            if ((u, s) in source.edges) and (fu, fs) not in target.edges:
                return False
        # Back condition becomes checkable for worlds whose successors are
        # all assigned; failing it now can never be repaired later.
        for (u, fu) in assigned.items():
            succ = src_succ[u]
            if all(v in assigned for v in succ):
                images = {assigned[v] for v in succ}
                if any(t not in images for t in tgt_succ[fu]):
                    return False
        return True

    def extend(index: int, assigned: dict[World, World],
               covered: set[World]) -> Optional[dict[World, World]]:
        nonlocal visited
        if index == len(order):
            if covered == target.worlds:
                return dict(assigned)
            return None
        missing = len(target.worlds - covered)
        if missing > len(order) - index:
            return None
        s = order[index]
        for t in candidates(s):
            visited += 1
            if visited > limits.max_maps:
                raise ResourceLimit(
                    f"morphism search exceeded {limits.max_maps} candidates")
            assigned[s] = t
            newly = t not in covered
            if newly:
                covered.add(t)
            if consistent(assigned, s):
                found = extend(index + 1, assigned, covered)
                if found is not None:
                    return found
            del assigned[s]
            if newly:
                covered.discard(t)
        return None

    found = extend(0, {}, set())
    if found is not None:
        assert is_bounded_morphism(found, source, target)
        assert is_surjective(found, source, target)
    return found


def are_isomorphic(left: Frame, right: Frame,
                   limits: Limits = DEFAULT_LIMITS) -> Optional[dict[World, World]]:
    """Bijective edge-preserving-and-reflecting witness, or None."""
    if len(left.worlds) != len(right.worlds):
        return None
    if len(left.edges) != len(right.edges):
        return None

    def profile(frame: Frame, w: World) -> tuple[int, int, bool]:
        return (len(frame.successors(w)), len(frame.predecessors(w)),
                frame.has_edge(w, w))

    left_profiles = {w: profile(left, w) for w in left.worlds}
    right_profiles = {w: profile(right, w) for w in right.worlds}
    if sorted(left_profiles.values()) != sorted(right_profiles.values()):
        return None
    order = left.sorted_worlds()
    visited = 0

    def extend(index: int, assigned: dict[World, World],
               used: set[World]) -> Optional[dict[World, World]]:
        nonlocal visited
        if index == len(order):
            return dict(assigned)
        s = order[index]
        for t in right.sorted_worlds():
            if t in used or right_profiles[t] != left_profiles[s]:
                continue
            visited += 1
            if visited > limits.max_maps:
                raise ResourceLimit(
                    f"isomorphism search exceeded {limits.max_maps} candidates")
            ok = all(
                ((s, u) in left.edges) == ((t, assigned[u]) in right.edges)
                and ((u, s) in left.edges) == ((assigned[u], t) in right.edges)
                for u in assigned)
            if ok and ((s, s) in left.edges) == ((t, t) in right.edges):
                assigned[s] = t
                used.add(t)
                found = extend(index + 1, assigned, used)
                if found is not None:
                    return found
                del assigned[s]
                used.discard(t)
        return None

    return extend(0, {}, set())


@dataclass(frozen=True)
class GamePosition:
    """A pair of equal-length pinned-world tuples and the move budget."""
    left_pins: tuple[World, ...]
    right_pins: tuple[World, ...]
    budget: int

    def __post_init__(self):
        if len(self.left_pins) != len(self.right_pins):
            raise ValueError("pin tuples must have equal length")
        if len(self.left_pins) > self.budget:
            raise ValueError("more pins than the move budget allows")


def _pattern_match(pairs: frozenset[tuple[World, World]],
                   left: Frame, right: Frame) -> bool:
    for (a1, b1) in pairs:
        for (a2, b2) in pairs:
            if (a1 == a2) != (b1 == b2):
                return False
            if ((a1, a2) in left.edges) != ((b1, b2) in right.edges):
                return False
    return True


def ef_second_player_wins(left: Frame, right: Frame, q: int,
                          limits: Limits = DEFAULT_LIMITS) -> bool:
    """Exact evaluation of the q-move game.  Positions are memoized on the
    set of pinned world pairs plus remaining moves; the set determines the
    game value because order and repetition of pins are irrelevant to both
    the win condition and the available continuations."""
    if q < 0:
        raise ValueError("the game needs a nonnegative move count")
    memo: dict[tuple[frozenset, int], bool] = {}

    def wins(pairs: frozenset, moves_left: int) -> bool:
        key = (pairs, moves_left)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if len(memo) >= limits.max_positions:
            raise ResourceLimit(
                f"game search exceeded {limits.max_positions} positions")
        if not _pattern_match(pairs, left, right):
            value = False
        elif moves_left == 0:
            value = True
        else:
            value = True
            for a in left.sorted_worlds():
                if not any(wins(pairs | {(a, b)}, moves_left - 1)
                           for b in right.sorted_worlds()):
                    value = False
                    break
            if value:
                for b in right.sorted_worlds():
                    if not any(wins(pairs | {(a, b)}, moves_left - 1)
                               for a in left.sorted_worlds()):
                        value = False
                        break
        memo[key] = value
        return value

    return wins(frozenset(), q)


def q_equivalent(left: Frame, right: Frame, q: int,
                 limits: Limits = DEFAULT_LIMITS) -> bool:
    """Elementary equivalence up to quantifier depth q, decided by the game
    in both directions."""
    return ef_second_player_wins(left, right, q, limits)


def sample_play(left: Frame, right: Frame, q: int,
                limits: Limits = DEFAULT_LIMITS) -> list[tuple[str, World, World]]:
    """An illustrative optimal play: the first player refutes when possible,
    otherwise plays the first canonical move; the second player replies with
    a winning answer when one exists.  Returns (side, pick, reply) triples."""
    transcript: list[tuple[str, World, World]] = []
    pairs: frozenset = frozenset()

    def value(p: frozenset, r: int) -> bool:
        if not _pattern_match(p, left, right):
            return False
        if r == 0:
            return True
        for a in left.sorted_worlds():
            if not any(value(p | {(a, b)}, r - 1) for b in right.sorted_worlds()):
                return False
        for b in right.sorted_worlds():
            if not any(value(p | {(a, b)}, r - 1) for a in left.sorted_worlds()):
                return False
        return True

    for move in range(q, 0, -1):
        chosen: Optional[tuple[str, World]] = None
        for a in left.sorted_worlds():
            if not any(value(pairs | {(a, b)}, move - 1)
                       for b in right.sorted_worlds()):
                chosen = ("left", a)
                break
        if chosen is None:
            for b in right.sorted_worlds():
                if not any(value(pairs | {(a, b)}, move - 1)
                           for a in left.sorted_worlds()):
                    chosen = ("right", b)
                    break
        if chosen is None:
            chosen = ("left", left.sorted_worlds()[0])
        side, pick = chosen
        replies = right.sorted_worlds() if side == "left" else left.sorted_worlds()
        reply = None
        for candidate in replies:
            pair = (pick, candidate) if side == "left" else (candidate, pick)
            if value(pairs | {pair}, move - 1):
                reply = candidate
                break
        if reply is None:
            reply = replies[0]
        pair = (pick, reply) if side == "left" else (reply, pick)
        pairs = pairs | {pair}
        transcript.append((side, pick, reply))
    return transcript
