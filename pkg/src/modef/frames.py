"""Finite frames and the Euclidean taxonomy.

A frame is a nonempty world set with a binary edge relation.  On Euclidean
frames the worlds split into dust (no successors), roots (successors but no
predecessors) and kernel (has predecessors); each weakly connected component
is either an isolated dust point or a galaxy: a clique kernel plus roots that
each see a nonempty part of it.  Flowers are the rooted Euclidean frames.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

from .errors import (FrameFormatError, InvalidIndex, NotEuclidean, Overlap,
                     ResourceLimit, WorldNotFound)
from .limits import DEFAULT_LIMITS, Limits

World = str
Edge = "tuple[World, World]"


def world_sort_key(world: World) -> tuple[int, str]:
    """Canonical world order: shortlex, so numeric names sort naturally."""
    return (len(world), world)


@dataclass(frozen=True)
class Frame:
    worlds: frozenset[World]
    edges: frozenset[tuple[World, World]]

    def __post_init__(self):
        if not self.worlds:
            raise ValueError("a frame needs at least one world")
        for (s, t) in self.edges:
            if s not in self.worlds or t not in self.worlds:
                raise ValueError(f"edge ({s},{t}) leaves the world set")

    @staticmethod
    def make(worlds: Iterable[World], edges: Iterable[tuple[World, World]]) -> "Frame":
        return Frame(frozenset(worlds), frozenset(tuple(e) for e in edges))

    def sorted_worlds(self) -> list[World]:
        return sorted(self.worlds, key=world_sort_key)

    def successors(self, s: World) -> frozenset[World]:
        if s not in self.worlds:
            raise WorldNotFound(s)
        return frozenset(t for (u, t) in self.edges if u == s)

    def predecessors(self, t: World) -> frozenset[World]:
        if t not in self.worlds:
            raise WorldNotFound(t)
        return frozenset(s for (s, u) in self.edges if u == t)

    def has_edge(self, s: World, t: World) -> bool:
        return (s, t) in self.edges


def is_euclidean(frame: Frame) -> bool:
    """True when sRt and sRu imply both tRu and uRt."""
    for s in frame.worlds:
        succ = frame.successors(s)
        for t in succ:
            for u in succ:
                if (t, u) not in frame.edges:
                    return False
    return True


def partition(frame: Frame) -> tuple[frozenset[World], frozenset[World], frozenset[World]]:
    """Split a Euclidean frame into (dust, root, kernel)."""
    if not is_euclidean(frame):
        raise NotEuclidean("partition requires a Euclidean frame")
    dust, root, kernel = set(), set(), set()
    for w in frame.worlds:
        if frame.predecessors(w):
            kernel.add(w)
        elif frame.successors(w):
            root.add(w)
        else:
            dust.add(w)
    return frozenset(dust), frozenset(root), frozenset(kernel)


def restrict(frame: Frame, keep: Iterable[World]) -> Frame:
    kept = frozenset(keep)
    missing = kept - frame.worlds
    if missing:
        raise WorldNotFound(sorted(missing, key=world_sort_key)[0])
    return Frame(kept, frozenset((s, t) for (s, t) in frame.edges
                                 if s in kept and t in kept))


def generated_subframe(frame: Frame, start: World) -> Frame:
    """Least successor-closed subframe containing the start world."""
    if start not in frame.worlds:
        raise WorldNotFound(start)
    reached = {start}
    frontier = [start]
    while frontier:
        s = frontier.pop()
        for t in frame.successors(s):
            if t not in reached:
                reached.add(t)
                frontier.append(t)
    return restrict(frame, reached)


def weakly_connected_components(frame: Frame) -> list[frozenset[World]]:
    """Components under edges read in both directions, in canonical order."""
    remaining = set(frame.worlds)
    neighbours: dict[World, set[World]] = {w: set() for w in frame.worlds}
    for (s, t) in frame.edges:
        neighbours[s].add(t)
        neighbours[t].add(s)
    components = []
    while remaining:
        seed = min(remaining, key=world_sort_key)
        block = {seed}
        frontier = [seed]
        while frontier:
            s = frontier.pop()
            for t in neighbours[s]:
                if t not in block:
                    block.add(t)
                    frontier.append(t)
        remaining -= block
        components.append(frozenset(block))
    components.sort(key=lambda c: world_sort_key(min(c, key=world_sort_key)))
    return components


def disjoint_union(frames: list[Frame]) -> Frame:
    if not frames:
        raise ValueError("disjoint_union needs at least one frame")
    worlds: set[World] = set()
    edges: set[tuple[World, World]] = set()
    for frame in frames:
        clash = worlds & frame.worlds
        if clash:
            raise Overlap(f"world sets overlap on {sorted(clash)[:3]}")
        worlds |= frame.worlds
        edges |= frame.edges
    return Frame(frozenset(worlds), frozenset(edges))


def rename_apart(frames: list[Frame]) -> list[Frame]:
    """Prefix each frame's worlds with its index so the union is disjoint."""
    renamed = []
    for i, frame in enumerate(frames):
        mapping = {w: f"u{i}:{w}" for w in frame.worlds}
        renamed.append(Frame(
            frozenset(mapping.values()),
            frozenset((mapping[s], mapping[t]) for (s, t) in frame.edges)))
    return renamed


# ---------------------------------------------------------------------------
# Galaxies.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Galaxy:
    """Presentation (A, B, rho) of a Euclidean frame piece: upper-part points
    A (dust and roots), clique kernel B, and arrows rho(s) inside B."""

    upper: frozenset[World]
    lower: frozenset[World]
    rho: tuple[tuple[World, frozenset[World]], ...]

    def __post_init__(self):
        if self.upper & self.lower:
            raise ValueError("upper and lower parts must be disjoint")
        if not (self.upper | self.lower):
            raise ValueError("a galaxy needs at least one point")
        keys = [s for (s, _) in self.rho]
        if set(keys) != set(self.upper) or len(keys) != len(self.upper):
            raise ValueError("rho must be defined exactly on the upper part")
        if list(keys) != sorted(keys, key=world_sort_key):
            raise ValueError("rho entries must be in canonical world order")
        for (s, targets) in self.rho:
            if not targets <= self.lower:
                raise ValueError(f"rho({s}) leaves the lower part")

    @staticmethod
    def make(upper: Iterable[World], lower: Iterable[World],
             rho: Mapping[World, Iterable[World]]) -> "Galaxy":
        upper_set = frozenset(upper)
        entries = tuple(
            (s, frozenset(rho.get(s, frozenset())))
            for s in sorted(upper_set, key=world_sort_key))
        return Galaxy(upper_set, frozenset(lower), entries)

    @property
    def rho_map(self) -> dict[World, frozenset[World]]:
        return dict(self.rho)

    def rho_of(self, s: World) -> frozenset[World]:
        for (u, targets) in self.rho:
            if u == s:
                return targets
        raise WorldNotFound(s)

    def dust(self) -> frozenset[World]:
        return frozenset(s for (s, targets) in self.rho if not targets)

    def roots(self) -> frozenset[World]:
        return frozenset(s for (s, targets) in self.rho if targets)

    def kernel(self) -> frozenset[World]:
        return self.lower

    def worlds(self) -> frozenset[World]:
        return self.upper | self.lower


def galaxy_to_frame(galaxy: Galaxy) -> Frame:
    edges = {(s, t) for (s, targets) in galaxy.rho for t in targets}
    edges |= {(s, t) for s in galaxy.lower for t in galaxy.lower}
    return Frame(galaxy.worlds(), frozenset(edges))


def frame_to_galaxies(frame: Frame) -> list[Galaxy]:
    """Decompose a Euclidean frame into one galaxy per weakly connected
    component (isolated points become kernel-free galaxies)."""
    if not is_euclidean(frame):
        raise NotEuclidean("decomposition requires a Euclidean frame")
    galaxies = []
    for block in weakly_connected_components(frame):
        piece = restrict(frame, block)
        dust, root, kernel = partition(piece)
        upper = dust | root
        rho = {s: piece.successors(s) for s in upper}
        galaxy = Galaxy.make(upper, kernel, rho)
        expected = galaxy_to_frame(galaxy)
        assert expected.edges == piece.edges, "component is not a galaxy"
        galaxies.append(galaxy)
    return galaxies


def is_simple(galaxy: Galaxy) -> bool:
    """Nonempty kernel, and every upper point sees at most one or all but at
    most one kernel point."""
    if not galaxy.lower:
        return False
    for (_, targets) in galaxy.rho:
        if len(targets) > 1 and len(galaxy.lower - targets) > 1:
            return False
    return True


def is_headed(galaxy: Galaxy) -> bool:
    return any(targets for (_, targets) in galaxy.rho)


def in_k2(galaxy: Galaxy) -> bool:
    return (len(galaxy.upper) >= 4 and len(galaxy.lower) >= 4
            and all(len(targets) == 2 for (_, targets) in galaxy.rho))


def in_l2(galaxy: Galaxy) -> bool:
    return (len(galaxy.upper) >= 4 and len(galaxy.lower) >= 4
            and all(len(galaxy.lower - targets) == 2
                    for (_, targets) in galaxy.rho))


# ---------------------------------------------------------------------------
# Flowers.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlowerIndex:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < -1 or (self.m == 0 and self.n != 0):
            raise InvalidIndex(f"no flower with m={self.m}, n={self.n}")


def flower(m: int, n: int) -> Frame:
    """The rooted Euclidean frame with root out-degree m and kernel size m+n,
    the bare m-clique when n=-1, and the isolated point when m=0, n=0."""
    FlowerIndex(m, n)
    if m == 0:
        return Frame.make(["0"], [])
    if n == -1:
        worlds = [str(i) for i in range(1, m + 1)]
        return Frame.make(worlds, [(s, t) for s in worlds for t in worlds])
    kernel = [str(i) for i in range(1, m + n + 1)]
    edges = [("0", str(i)) for i in range(1, m + 1)]
    edges += [(s, t) for s in kernel for t in kernel]
    return Frame.make(["0"] + kernel, edges)


def flower_as_galaxy(m: int, n: int) -> Galaxy:
    return frame_to_galaxies(flower(m, n))[0]


def is_rooted(frame: Frame, start: World) -> bool:
    return generated_subframe(frame, start).worlds == frame.worlds


# ---------------------------------------------------------------------------
# Canonical labeling and isomorphism-free enumeration.
# ---------------------------------------------------------------------------

_CANONICAL_WORLD_CAP = 8


def canonical_form(frame: Frame) -> Frame:
    """Relabel worlds as 0..n-1 minimizing the adjacency encoding over all
    permutations.  Intended for desk scale; guards against blowup."""
    n = len(frame.worlds)
    if n > _CANONICAL_WORLD_CAP:
        raise ResourceLimit(f"canonical labeling capped at "
                            f"{_CANONICAL_WORLD_CAP} worlds, got {n}")
    ordered = frame.sorted_worlds()
    index = {w: i for i, w in enumerate(ordered)}
    int_edges = [(index[s], index[t]) for (s, t) in frame.edges]
    best: Optional[tuple[tuple[int, int], ...]] = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted((perm[s], perm[t]) for (s, t) in int_edges))
        if best is None or key < best:
            best = key
    assert best is not None
    return Frame.make([str(i) for i in range(n)],
                      [(str(s), str(t)) for (s, t) in best])


def canonical_key(frame: Frame) -> tuple:
    canon = canonical_form(frame)
    return (len(canon.worlds), tuple(sorted(canon.edges)))


def _component_classes(size: int) -> list[tuple]:
    """Isomorphism classes of weakly connected Euclidean frames with `size`
    worlds, encoded as (kernel_size, sorted tuple of root bitmasks)."""
    classes: set[tuple] = set()
    if size == 1:
        classes.add((0, ()))   # isolated dust point
    for b in range(1, size + 1):
        a = size - b
        masks = list(range(1, 2 ** b))   # nonempty subsets of the kernel
        perms = list(itertools.permutations(range(b)))

        def remap(mask: int, perm: tuple[int, ...]) -> int:
            out = 0
            for bit in range(b):
                if mask >> bit & 1:
                    out |= 1 << perm[bit]
            return out

        for combo in itertools.combinations_with_replacement(masks, a):
            key = min(tuple(sorted(remap(mask, perm) for mask in combo))
                      for perm in perms)
            classes.add((b, key))
    return sorted(classes)


def _component_frame(cls: tuple, tag: str) -> Frame:
    b, masks = cls
    if b == 0:
        return Frame.make([f"{tag}d"], [])
    kernel = [f"{tag}k{i}" for i in range(b)]
    worlds = list(kernel)
    edges = [(s, t) for s in kernel for t in kernel]
    for j, mask in enumerate(masks):
        root = f"{tag}r{j}"
        worlds.append(root)
        for bit in range(b):
            if mask >> bit & 1:
                edges.append((root, kernel[bit]))
    return Frame.make(worlds, edges)


def enumerate_euclidean_frames(max_worlds: int,
                               limits: Limits = DEFAULT_LIMITS) -> Iterator[Frame]:
    """One canonically labeled representative per isomorphism class of
    Euclidean frames with at most max_worlds worlds, smallest first."""
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    by_size: dict[int, list[tuple]] = {
        size: _component_classes(size) for size in range(1, max_worlds + 1)}
    yielded = 0
    for total in range(1, max_worlds + 1):
        frames = []
        for multiset in _component_multisets(total, by_size):
            parts = [_component_frame(cls, f"c{i}:")
                     for i, cls in enumerate(multiset)]
            frames.append(canonical_form(disjoint_union(parts)))
        frames.sort(key=lambda f: tuple(sorted(f.edges)))
        for frame in frames:
            yielded += 1
            if yielded > limits.max_frames:
                raise ResourceLimit(
                    f"enumeration exceeded {limits.max_frames} frames")
            yield frame


def _component_multisets(total: int,
                         by_size: dict[int, list[tuple]]) -> Iterator[tuple]:
    """Multisets of component classes whose sizes sum to `total`, encoded as
    non-decreasing tuples over a fixed class order."""
    ordered: list[tuple[int, tuple]] = []
    for size in sorted(by_size):
        for cls in by_size[size]:
            ordered.append((size, cls))

    def extend(start: int, remaining: int) -> Iterator[tuple]:
        if remaining == 0:
            yield ()
            return
        for i in range(start, len(ordered)):
            size, cls = ordered[i]
            if size > remaining:
                continue
            for rest in extend(i, remaining - size):
                yield (cls,) + rest

    return extend(0, total)


# ---------------------------------------------------------------------------
# File formats.
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> list[list[str]]:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    return rows


def parse_frame_text(text: str) -> Frame:
    """Line format: one `worlds` header (a count, or explicit names), then
    `edge <src> <dst>` lines; `#` starts a comment."""
    rows = _content_lines(text)
    if not rows or rows[0][0] != "worlds":
        raise FrameFormatError("expected a 'worlds' header line")
    header = rows[0][1:]
    if not header:
        raise FrameFormatError("empty 'worlds' header")
    if len(header) == 1 and header[0].isdigit():
        count = int(header[0])
        if count < 1:
            raise FrameFormatError("world count must be at least 1")
        worlds = [str(i) for i in range(count)]
    else:
        worlds = header
        if len(set(worlds)) != len(worlds):
            raise FrameFormatError("duplicate world names")
    world_set = set(worlds)
    edges = []
    for row in rows[1:]:
        if row[0] != "edge" or len(row) != 3:
            raise FrameFormatError(f"expected 'edge <src> <dst>', got {row}")
        if row[1] not in world_set or row[2] not in world_set:
            raise FrameFormatError(f"edge endpoint not declared: {row[1:]}")
        edges.append((row[1], row[2]))
    return Frame.make(worlds, edges)


def serialize_frame(frame: Frame) -> str:
    names = frame.sorted_worlds()
    if frame.worlds == {str(i) for i in range(len(names))}:
        header = f"worlds {len(names)}"
    elif len(names) == 1 and names[0].isdigit():
        # A single all-digit name would be read back as a world count.
        raise FrameFormatError(
            f"cannot serialize a one-world frame named {names[0]!r}; "
            "the name collides with the count form of the header")
    else:
        header = "worlds " + " ".join(names)
    lines = [header]
    for (s, t) in sorted(frame.edges,
                         key=lambda e: (world_sort_key(e[0]), world_sort_key(e[1]))):
        lines.append(f"edge {s} {t}")
    return "\n".join(lines) + "\n"


def parse_galaxy_text(text: str) -> Galaxy:
    """Line format: `upper <ids>`, `lower <ids>`, then `rho <id> : <ids>`
    lines for upper points (missing lines mean no arrows)."""
    rows = _content_lines(text)
    upper: Optional[list[str]] = None
    lower: Optional[list[str]] = None
    rho: dict[str, frozenset[str]] = {}
    for row in rows:
        if row[0] == "upper":
            upper = row[1:]
        elif row[0] == "lower":
            lower = row[1:]
        elif row[0] == "rho":
            if len(row) < 3 or row[2] != ":":
                raise FrameFormatError(f"expected 'rho <id> : <ids>', got {row}")
            rho[row[1]] = frozenset(row[3:])
        else:
            raise FrameFormatError(f"unknown directive {row[0]!r}")
    if upper is None or lower is None:
        raise FrameFormatError("galaxy needs 'upper' and 'lower' lines")
    extra = set(rho) - set(upper)
    if extra:
        raise FrameFormatError(f"rho defined outside the upper part: {extra}")
    try:
        return Galaxy.make(upper, lower, rho)
    except ValueError as exc:
        raise FrameFormatError(str(exc)) from exc


def serialize_galaxy(galaxy: Galaxy) -> str:
    lines = ["upper " + " ".join(sorted(galaxy.upper, key=world_sort_key)),
             "lower " + " ".join(sorted(galaxy.lower, key=world_sort_key))]
    for (s, targets) in galaxy.rho:
        lines.append(f"rho {s} : " +
                     " ".join(sorted(targets, key=world_sort_key)))
    return "\n".join(lines) + "\n"
