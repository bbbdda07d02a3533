"""Size reductions on galaxies and galaxy families, with certificates.

Three stages shrink a Euclidean frame while preserving elementary
equivalence up to a move budget q:

  alpha: collapse upper-part points with identical arrow sets, keeping at
         most q representatives per class;
  gamma: on simple parts whose exact-preimage counts are already bounded by
         q, collapse kernel points with identical preimage-count signatures,
         keeping at most q per class;
  delta: collapse isomorphic parts of a family, keeping at most q per class.

Each stage emits a certificate with independently re-checkable witnesses:
alpha and delta give global surjective bounded morphisms, gamma gives one
generated-subframe morphism per output point (a global morphism need not
exist for gamma), and every stage records the part correspondence on which
its game-equivalence claim rests.  Validation replays the morphism checks,
runs the per-part games, and re-derives the delta iso classes from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InvalidBudget, NotEuclidean, PreconditionViolated
from .frames import (Frame, Galaxy, World, frame_to_galaxies, galaxy_to_frame,
                     generated_subframe, disjoint_union, is_euclidean,
                     is_simple, world_sort_key)
from .limits import DEFAULT_LIMITS, Limits
from .morphisms_games import (are_isomorphic, ef_second_player_wins,
                              is_bounded_morphism, is_surjective)

WitnessMap = "tuple[tuple[World, World], ...]"


def _as_map(pairs: Iterable[tuple[World, World]]) -> tuple[tuple[World, World], ...]:
    return tuple(sorted(pairs, key=lambda p: world_sort_key(p[0])))


@dataclass(frozen=True)
class GalaxyFamily:
    parts: tuple[Galaxy, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("a family needs at least one part")
        seen: set[World] = set()
        for part in self.parts:
            worlds = part.worlds()
            if seen & worlds:
                raise ValueError("family parts must have disjoint carriers")
            seen |= worlds

    @staticmethod
    def make(parts: Iterable[Galaxy]) -> "GalaxyFamily":
        return GalaxyFamily(tuple(parts))

    def union_frame(self) -> Frame:
        return disjoint_union([galaxy_to_frame(part) for part in self.parts])


def _require_budget(q: int) -> None:
    if q < 3:
        raise InvalidBudget(f"reduction budget must be at least 3, got {q}")


def _kept(elements: frozenset[World], q: int) -> list[World]:
    ordered = sorted(elements, key=world_sort_key)
    return ordered[: min(q, len(ordered))]


def preimage_exact(galaxy: Galaxy, value: frozenset[World]) -> frozenset[World]:
    """Upper-part points whose arrow set equals the given value exactly."""
    return frozenset(s for (s, targets) in galaxy.rho if targets == value)


# ---------------------------------------------------------------------------
# alpha
# ---------------------------------------------------------------------------

def _alpha_classes(galaxy: Galaxy) -> list[list[World]]:
    by_value: dict[frozenset[World], list[World]] = {}
    for (s, targets) in galaxy.rho:
        by_value.setdefault(targets, []).append(s)
    keys = sorted(by_value, key=lambda v: sorted(v, key=world_sort_key))
    return [sorted(by_value[key], key=world_sort_key) for key in keys]


def alpha_reduce(galaxy: Galaxy, q: int) -> Galaxy:
    """Keep at most q upper-part points per identical-arrow-set class."""
    _require_budget(q)
    keep: set[World] = set()
    for cls in _alpha_classes(galaxy):
        keep.update(cls[: min(q, len(cls))])
    rho = {s: galaxy.rho_of(s) for s in keep}
    return Galaxy.make(keep, galaxy.lower, rho)


def alpha_witness(galaxy: Galaxy, reduced: Galaxy) -> dict[World, World]:
    """Surjective bounded morphism from the input onto the alpha output:
    kept points map to themselves, removed points to the least kept member
    of their class."""
    mapping = {w: w for w in reduced.worlds()}
    for cls in _alpha_classes(galaxy):
        kept = [s for s in cls if s in reduced.upper]
        for s in cls:
            if s not in reduced.upper:
                mapping[s] = kept[0]
    return mapping


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------

def alpha_items_hold(galaxy: Galaxy, q: int) -> bool:
    """The exact-preimage cardinality conditions: empty and full arrow sets
    have at most q points each, and so do every singleton and cosingleton."""
    if len(preimage_exact(galaxy, frozenset())) > q:
        return False
    if len(preimage_exact(galaxy, galaxy.lower)) > q:
        return False
    for u in galaxy.lower:
        if len(preimage_exact(galaxy, frozenset({u}))) > q:
            return False
        if len(preimage_exact(galaxy, galaxy.lower - {u})) > q:
            return False
    return True


def gamma_applicable(galaxy: Galaxy, q: int) -> bool:
    return is_simple(galaxy) and alpha_items_hold(galaxy, q)


def _gamma_signature(galaxy: Galaxy, u: World) -> tuple[int, int]:
    return (len(preimage_exact(galaxy, frozenset({u}))),
            len(preimage_exact(galaxy, galaxy.lower - {u})))


def gamma_reduce(galaxy: Galaxy, q: int) -> Galaxy:
    """Keep at most q kernel points per preimage-count signature class, then
    restrict the upper part to the points whose arrows survive."""
    _require_budget(q)
    if not gamma_applicable(galaxy, q):
        raise PreconditionViolated(
            "gamma needs a simple galaxy with q-bounded exact preimages")
    by_sig: dict[tuple[int, int], list[World]] = {}
    for u in sorted(galaxy.lower, key=world_sort_key):
        by_sig.setdefault(_gamma_signature(galaxy, u), []).append(u)
    lower: set[World] = set()
    for sig in sorted(by_sig):
        cls = by_sig[sig]
        lower.update(cls[: min(q, len(cls))])
    upper: set[World] = set()
    upper |= preimage_exact(galaxy, frozenset())
    upper |= preimage_exact(galaxy, galaxy.lower)
    for u in lower:
        upper |= preimage_exact(galaxy, frozenset({u}))
        upper |= preimage_exact(galaxy, galaxy.lower - {u})
    rho = {s: galaxy.rho_of(s) & frozenset(lower) for s in upper}
    return Galaxy.make(upper, lower, rho)


def gamma_point_witness(galaxy: Galaxy, reduced: Galaxy,
                        point: World) -> tuple[World, dict[World, World]]:
    """For an output point, an input point whose generated subframe maps
    onto the output point's generated subframe, with the witness map."""
    source = galaxy_to_frame(galaxy)
    target = galaxy_to_frame(reduced)
    kept_lower = sorted(reduced.lower, key=world_sort_key)
    mapping: dict[World, World] = {point: point}
    if point in reduced.lower:
        for u in galaxy.lower:
            mapping[u] = u if u in reduced.lower else kept_lower[0]
    elif reduced.rho_of(point):
        arrows = reduced.rho_of(point)
        fallback_in = sorted(arrows, key=world_sort_key)[0]
        for u in galaxy.lower:
            if u in reduced.lower:
                mapping[u] = u
            elif u in galaxy.rho_of(point):
                mapping[u] = fallback_in
            else:
                mapping[u] = kept_lower[0]
    gen_source = generated_subframe(source, point)
    gen_target = generated_subframe(target, point)
    witness = {w: mapping[w] for w in gen_source.worlds}
    return point, witness


# ---------------------------------------------------------------------------
# delta
# ---------------------------------------------------------------------------

def _iso_classes(parts: tuple[Galaxy, ...],
                 limits: Limits) -> list[list[int]]:
    """Indices grouped by frame isomorphism, in first-seen order."""
    classes: list[list[int]] = []
    frames = [galaxy_to_frame(part) for part in parts]
    for i, frame in enumerate(frames):
        placed = False
        for cls in classes:
            if are_isomorphic(frames[cls[0]], frame, limits) is not None:
                cls.append(i)
                placed = True
                break
        if not placed:
            classes.append([i])
    return classes


def delta_reduce(family: GalaxyFamily, q: int,
                 limits: Limits = DEFAULT_LIMITS) -> GalaxyFamily:
    """Keep at most q parts per isomorphism class, in index order."""
    _require_budget(q)
    keep: set[int] = set()
    for cls in _iso_classes(family.parts, limits):
        keep.update(cls[: min(q, len(cls))])
    return GalaxyFamily.make(
        part for i, part in enumerate(family.parts) if i in keep)


def delta_witness(family: GalaxyFamily, q: int,
                  limits: Limits = DEFAULT_LIMITS
                  ) -> tuple[GalaxyFamily, dict[World, World],
                             tuple[tuple[int, int, tuple], ...]]:
    """Reduced family, the global surjective bounded morphism (identity on
    kept parts, isomorphism onto the class representative on removed parts),
    and the per-removed-part iso witnesses."""
    _require_budget(q)
    classes = _iso_classes(family.parts, limits)
    keep: set[int] = set()
    for cls in classes:
        keep.update(cls[: min(q, len(cls))])
    reduced = GalaxyFamily.make(
        part for i, part in enumerate(family.parts) if i in keep)
    mapping: dict[World, World] = {}
    isos: list[tuple[int, int, tuple]] = []
    frames = [galaxy_to_frame(part) for part in family.parts]
    for cls in classes:
        rep = cls[0]
        for i in cls:
            if i in keep:
                for w in frames[i].worlds:
                    mapping[w] = w
            else:
                iso = are_isomorphic(frames[i], frames[rep], limits)
                assert iso is not None
                mapping.update(iso)
                isos.append((i, rep, _as_map(iso.items())))
    return reduced, mapping, tuple(isos)


def delta_class_count_bound(q: int, max_part_size: int) -> int:
    """Cap on the number of output parts when all parts have at most
    max_part_size worlds."""
    big_q = max_part_size
    return q * (big_q + 1) ** 2 * 2 ** (big_q ** 2)


# ---------------------------------------------------------------------------
# Certificates.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaStage:
    q: int
    source: Frame
    target: Frame
    witness: tuple[tuple[World, World], ...]
    part_pairs: tuple[tuple[Frame, Frame], ...]


@dataclass(frozen=True)
class GammaStage:
    q: int
    source: Frame
    target: Frame
    point_witnesses: tuple[
        tuple[World, World, tuple[tuple[World, World], ...]], ...]
    part_pairs: tuple[tuple[Frame, Frame], ...]


@dataclass(frozen=True)
class DeltaStage:
    q: int
    source: Frame
    target: Frame
    witness: tuple[tuple[World, World], ...]
    source_parts: tuple[Frame, ...]
    kept_indices: tuple[int, ...]
    isos: tuple[tuple[int, int, tuple[tuple[World, World], ...]], ...]


@dataclass(frozen=True)
class ReductionCertificate:
    q: int
    k: int
    alpha: AlphaStage
    gamma: GammaStage
    delta: DeltaStage

    @property
    def input_frame(self) -> Frame:
        return self.alpha.source

    @property
    def output_frame(self) -> Frame:
        return self.delta.target


def validate_alpha_stage(stage: AlphaStage,
                         limits: Limits = DEFAULT_LIMITS) -> list[str]:
    problems = []
    witness = dict(stage.witness)
    if set(witness) != set(stage.source.worlds):
        problems.append("alpha witness is not total on the source")
        return problems
    if not is_bounded_morphism(witness, stage.source, stage.target):
        problems.append("alpha witness is not a bounded morphism")
    if not is_surjective(witness, stage.source, stage.target):
        problems.append("alpha witness is not surjective")
    for (src, dst) in stage.part_pairs:
        if not ef_second_player_wins(src, dst, stage.q, limits):
            problems.append(
                f"alpha part with worlds {sorted(src.worlds)[:3]}... fails "
                f"the {stage.q}-move game")
    return problems


def validate_gamma_stage(stage: GammaStage,
                         limits: Limits = DEFAULT_LIMITS) -> list[str]:
    problems = []
    witnessed = {point for (point, _, _) in stage.point_witnesses}
    if witnessed != stage.target.worlds:
        problems.append("gamma stage misses per-point witnesses")
        return problems
    for (point, origin, raw) in stage.point_witnesses:
        source_gen = generated_subframe(stage.source, origin)
        target_gen = generated_subframe(stage.target, point)
        witness = dict(raw)
        if set(witness) != set(source_gen.worlds):
            problems.append(f"gamma witness for {point} has a wrong domain")
            continue
        if not is_bounded_morphism(witness, source_gen, target_gen):
            problems.append(f"gamma witness for {point} is not a morphism")
        if not is_surjective(witness, source_gen, target_gen):
            problems.append(f"gamma witness for {point} is not surjective")
    for (src, dst) in stage.part_pairs:
        if not ef_second_player_wins(src, dst, stage.q, limits):
            problems.append(
                f"gamma part with worlds {sorted(src.worlds)[:3]}... fails "
                f"the {stage.q}-move game")
    return problems


def validate_delta_stage(stage: DeltaStage,
                         limits: Limits = DEFAULT_LIMITS) -> list[str]:
    problems = []
    witness = dict(stage.witness)
    if set(witness) != set(stage.source.worlds):
        problems.append("delta witness is not total on the source")
        return problems
    if not is_bounded_morphism(witness, stage.source, stage.target):
        problems.append("delta witness is not a bounded morphism")
    if not is_surjective(witness, stage.source, stage.target):
        problems.append("delta witness is not surjective")
    for (removed, rep, raw) in stage.isos:
        iso = dict(raw)
        left = stage.source_parts[removed]
        right = stage.source_parts[rep]
        if (set(iso) != set(left.worlds)
                or {iso[w] for w in left.worlds} != right.worlds
                or len({iso[w] for w in left.worlds}) != len(left.worlds)):
            problems.append(f"delta iso for part {removed} is not a bijection")
            continue
        ok = all(((s, t) in left.edges) == ((iso[s], iso[t]) in right.edges)
                 for s in left.worlds for t in left.worlds)
        if not ok:
            problems.append(f"delta iso for part {removed} breaks edges")
    # Game equivalence of the unions follows from class counting: each iso
    # class must keep min(q, input count) parts.  Re-derive the classes
    # independently of the recorded witnesses.
    classes = []
    for i, frame in enumerate(stage.source_parts):
        for cls in classes:
            if are_isomorphic(stage.source_parts[cls[0]], frame, limits):
                cls.append(i)
                break
        else:
            classes.append([i])
    kept = set(stage.kept_indices)
    for cls in classes:
        expected = min(stage.q, len(cls))
        if len([i for i in cls if i in kept]) != expected:
            problems.append(
                f"delta keeps the wrong number of parts in class {cls}")
    return problems


def validate_certificate(cert: ReductionCertificate,
                         limits: Limits = DEFAULT_LIMITS) -> list[str]:
    problems = []
    if cert.alpha.target != cert.gamma.source:
        problems.append("alpha and gamma stages do not chain")
    if cert.gamma.target != cert.delta.source:
        problems.append("gamma and delta stages do not chain")
    problems += validate_alpha_stage(cert.alpha, limits)
    problems += validate_gamma_stage(cert.gamma, limits)
    problems += validate_delta_stage(cert.delta, limits)
    return problems


# ---------------------------------------------------------------------------
# The pipeline and the size bound.
# ---------------------------------------------------------------------------

def _family_of(frame: Frame) -> GalaxyFamily:
    return GalaxyFamily.make(frame_to_galaxies(frame))


def alpha_stage_for(family: GalaxyFamily, q: int) -> tuple[GalaxyFamily, AlphaStage]:
    source = family.union_frame()
    outputs = []
    mapping: dict[World, World] = {}
    part_pairs = []
    for part in family.parts:
        reduced = alpha_reduce(part, q)
        outputs.append(reduced)
        mapping.update(alpha_witness(part, reduced))
        part_pairs.append((galaxy_to_frame(part), galaxy_to_frame(reduced)))
    reduced_family = GalaxyFamily.make(outputs)
    stage = AlphaStage(q, source, reduced_family.union_frame(),
                       _as_map(mapping.items()), tuple(part_pairs))
    return reduced_family, stage


def gamma_stage_for(family: GalaxyFamily, q: int) -> tuple[GalaxyFamily, GammaStage]:
    source = family.union_frame()
    outputs = []
    part_pairs = []
    witnesses: list[tuple[World, World, tuple]] = []
    for part in family.parts:
        if gamma_applicable(part, q):
            reduced = gamma_reduce(part, q)
            for point in sorted(reduced.worlds(), key=world_sort_key):
                _, witness = gamma_point_witness(part, reduced, point)
                witnesses.append((point, point, _as_map(witness.items())))
        else:
            reduced = part
            frame = galaxy_to_frame(part)
            for point in sorted(part.worlds(), key=world_sort_key):
                gen = generated_subframe(frame, point)
                witnesses.append(
                    (point, point, _as_map((w, w) for w in gen.worlds)))
        outputs.append(reduced)
        part_pairs.append((galaxy_to_frame(part), galaxy_to_frame(reduced)))
    reduced_family = GalaxyFamily.make(outputs)
    stage = GammaStage(q, source, reduced_family.union_frame(),
                       tuple(witnesses), tuple(part_pairs))
    return reduced_family, stage


def delta_stage_for(family: GalaxyFamily, q: int,
                    limits: Limits = DEFAULT_LIMITS) -> tuple[GalaxyFamily, DeltaStage]:
    source = family.union_frame()
    reduced, mapping, isos = delta_witness(family, q, limits)
    kept = []
    position = 0
    for i, part in enumerate(family.parts):
        if position < len(reduced.parts) and part is reduced.parts[position]:
            kept.append(i)
            position += 1
    assert len(kept) == len(reduced.parts), (len(kept), len(reduced.parts))
    stage = DeltaStage(q, source, reduced.union_frame(), _as_map(mapping.items()),
                       tuple(galaxy_to_frame(part) for part in family.parts),
                       tuple(kept), isos)
    return reduced, stage


def reduce_frame(frame: Frame, q: int, k: int,
                 limits: Limits = DEFAULT_LIMITS) -> tuple[Frame, ReductionCertificate]:
    """Full pipeline: decompose, alpha, gamma on eligible parts, delta."""
    _require_budget(q)
    if k < 4:
        raise PreconditionViolated(f"k must be at least 4, got {k}")
    if not is_euclidean(frame):
        raise NotEuclidean("reduction requires a Euclidean frame")
    family = _family_of(frame)
    family, alpha = alpha_stage_for(family, q)
    family, gamma = gamma_stage_for(family, q)
    family, delta = delta_stage_for(family, q, limits)
    cert = ReductionCertificate(q, k, alpha, gamma, delta)
    return delta.target, cert


def bound_parts(q: int, k: int) -> tuple[int, int]:
    """The bound as coefficient * 2^shift with an integer coefficient."""
    if q < 3:
        raise InvalidBudget(f"bound needs q >= 3, got {q}")
    if k < 4:
        raise PreconditionViolated(f"bound needs k >= 4, got {k}")
    big_q = 2 * q * (q * (q + 1) ** 2 + 1)
    big_k = 2 ** k
    qk = big_q * big_k
    return 2 * q * (qk + 1) ** 2 * qk, qk ** 2


def bound(q: int, k: int) -> int:
    """Exact world-count bound for the reduced frame: with Q = 2q(q(q+1)^2+1)
    and K = 2^k, the value 2q((QK)+1)^2 2^((QK)^2) QK."""
    coefficient, shift = bound_parts(q, k)
    return coefficient << shift


def bound_exceeds(q: int, k: int, value: int) -> bool:
    """Whether bound(q, k) > value, without materializing the power of two:
    for q or k beyond the smallest admissible pair the bound does not fit in
    memory, while any feasible exploration budget is microscopic next to it."""
    coefficient, shift = bound_parts(q, k)
    if value < 0:
        return True
    return (value >> shift) < coefficient
