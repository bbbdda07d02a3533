"""The three-stage size reduction and the explicit world-count bound."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frozen_constants import (BOUND34_COEFF, BOUND34_DIGITS,
                              BOUND34_LEAD12, BOUND34_MOD_1E9_7,
                              BOUND34_MOD_M61, BOUND34_SHIFT, BOUND34_TAIL12)
from modef.errors import InvalidBudget, NotEuclidean, PreconditionViolated
from modef.frames import (Frame, Galaxy, flower_as_galaxy, galaxy_to_frame,
                          frame_to_galaxies)
from modef.morphisms_games import (ef_second_player_wins, is_bounded_morphism,
                                   is_surjective, q_equivalent)
from modef.reductions import (AlphaStage, GalaxyFamily, alpha_items_hold,
                              alpha_reduce, alpha_witness, bound, bound_exceeds,
                              bound_parts, delta_class_count_bound,
                              delta_reduce, gamma_applicable,
                              gamma_point_witness, gamma_reduce,
                              preimage_exact, reduce_frame,
                              validate_certificate)

_Q = 3


def _random_galaxy(rng: random.Random, tag: str, max_upper: int = 4,
                   max_lower: int = 4) -> Galaxy:
    lower = [f"{tag}k{i}" for i in range(rng.randint(1, max_lower))]
    upper = [f"{tag}u{i}" for i in range(rng.randint(0, max_upper))]
    rho = {u: tuple(rng.sample(lower, rng.randint(0, len(lower))))
           for u in upper}
    return Galaxy.make(upper, lower, rho)


def _wide_galaxy() -> Galaxy:
    """Ten dust points, eight roots with the same arrow set: alpha fodder."""
    lower = ["k0", "k1"]
    upper = [f"d{i}" for i in range(10)] + [f"r{i}" for i in range(8)]
    rho = {u: () for u in upper if u.startswith("d")}
    rho.update({u: ("k0",) for u in upper if u.startswith("r")})
    return Galaxy.make(upper, lower, rho)


# ---------------------------------------------------------------------------
# alpha: trim identical-arrow-set classes to q points.
# ---------------------------------------------------------------------------

def test_alpha_collapses_duplicate_arrow_sets():
    galaxy = _wide_galaxy()
    reduced = alpha_reduce(galaxy, _Q)
    assert reduced.lower == galaxy.lower
    dust = [u for u in reduced.upper if u.startswith("d")]
    roots = [u for u in reduced.upper if u.startswith("r")]
    assert len(dust) == _Q and len(roots) == _Q
    assert alpha_items_hold(reduced, _Q)


def test_alpha_witness_is_a_surjective_morphism():
    rng = random.Random(7)
    for trial in range(25):
        galaxy = _random_galaxy(rng, f"t{trial}")
        reduced = alpha_reduce(galaxy, _Q)
        witness = alpha_witness(galaxy, reduced)
        source = galaxy_to_frame(galaxy)
        target = galaxy_to_frame(reduced)
        assert is_bounded_morphism(witness, source, target), galaxy
        assert is_surjective(witness, source, target), galaxy


def test_alpha_preserves_small_galaxies():
    galaxy = flower_as_galaxy(2, 1)
    assert alpha_reduce(galaxy, _Q) == galaxy


def test_alpha_output_is_game_equivalent_at_budget():
    galaxy = _wide_galaxy()
    reduced = alpha_reduce(galaxy, _Q)
    assert ef_second_player_wins(galaxy_to_frame(galaxy),
                                 galaxy_to_frame(reduced), _Q)


def test_budget_floor():
    with pytest.raises(InvalidBudget):
        alpha_reduce(flower_as_galaxy(1, 0), 2)


# ---------------------------------------------------------------------------
# gamma: trim kernel signature classes on simple galaxies.
# ---------------------------------------------------------------------------

def _big_simple_galaxy() -> Galaxy:
    """A head seeing one kernel point of a large clique: simple, and the
    kernel has many points with the same preimage signature."""
    lower = [f"k{i}" for i in range(9)]
    return Galaxy.make({"r"}, lower, {"r": ("k0",)})


def test_gamma_shrinks_kernel():
    galaxy = _big_simple_galaxy()
    assert gamma_applicable(galaxy, _Q)
    reduced = gamma_reduce(galaxy, _Q)
    assert len(reduced.lower) < len(galaxy.lower)
    assert len(reduced.lower) <= _Q * (_Q + 1) ** 2
    assert "k0" in reduced.lower, "the seen point has its own signature"
    assert reduced.rho_of("r") == frozenset({"k0"})


def test_gamma_requires_simplicity():
    lower = ["k0", "k1", "k2", "k3"]
    not_simple = Galaxy.make({"r"}, lower, {"r": ("k0", "k1")})
    assert not gamma_applicable(not_simple, _Q)
    with pytest.raises(PreconditionViolated):
        gamma_reduce(not_simple, _Q)


def test_gamma_point_witnesses_cover_output():
    galaxy = _big_simple_galaxy()
    reduced = gamma_reduce(galaxy, _Q)
    source = galaxy_to_frame(galaxy)
    target = galaxy_to_frame(reduced)
    from modef.frames import generated_subframe
    for point in sorted(reduced.worlds()):
        origin, witness = gamma_point_witness(galaxy, reduced, point)
        gen_source = generated_subframe(source, origin)
        gen_target = generated_subframe(target, point)
        assert is_bounded_morphism(witness, gen_source, gen_target), point
        assert is_surjective(witness, gen_source, gen_target), point


def test_gamma_output_is_game_equivalent_at_budget():
    galaxy = _big_simple_galaxy()
    reduced = gamma_reduce(galaxy, _Q)
    assert ef_second_player_wins(galaxy_to_frame(galaxy),
                                 galaxy_to_frame(reduced), _Q)


def test_preimage_exact():
    galaxy = Galaxy.make({"a", "b", "c"}, {"k0", "k1"},
                         {"a": ("k0",), "b": ("k0",), "c": ()})
    assert preimage_exact(galaxy, frozenset({"k0"})) == frozenset({"a", "b"})
    assert preimage_exact(galaxy, frozenset()) == frozenset({"c"})
    assert preimage_exact(galaxy, frozenset({"k1"})) == frozenset()


# ---------------------------------------------------------------------------
# delta: trim isomorphism classes of parts to q copies.
# ---------------------------------------------------------------------------

def _copies(galaxy_maker, count: int) -> GalaxyFamily:
    parts = []
    for i in range(count):
        base = galaxy_maker()
        mapping = {w: f"c{i}_{w}" for w in base.worlds()}
        parts.append(Galaxy.make(
            {mapping[u] for u in base.upper},
            {mapping[v] for v in base.lower},
            {mapping[u]: tuple(mapping[v] for v in targets)
             for (u, targets) in base.rho}))
    return GalaxyFamily.make(parts)


def test_delta_keeps_q_copies_per_class():
    family = _copies(lambda: flower_as_galaxy(1, 0), 7)
    reduced = delta_reduce(family, _Q)
    assert len(reduced.parts) == _Q
    # The unions agree on all sentences up to quantifier depth q.
    assert q_equivalent(family.union_frame(), reduced.union_frame(), _Q)


def test_delta_distinguishes_classes():
    copies_a = _copies(lambda: flower_as_galaxy(1, 0), 4).parts
    copies_b = _copies(lambda: flower_as_galaxy(2, -1), 2).parts
    renamed_b = []
    for i, part in enumerate(copies_b):
        mapping = {w: f"b{i}_{w}" for w in part.worlds()}
        renamed_b.append(Galaxy.make(
            {mapping[u] for u in part.upper},
            {mapping[v] for v in part.lower},
            {mapping[u]: tuple(mapping[v] for v in targets)
             for (u, targets) in part.rho}))
    family = GalaxyFamily.make(list(copies_a) + renamed_b)
    reduced = delta_reduce(family, _Q)
    assert len(reduced.parts) == _Q + 2, "three of one class, both of the other"


def test_delta_class_count_bound_grows():
    assert delta_class_count_bound(3, 1) == 3 * 4 * 2
    assert delta_class_count_bound(3, 2) > delta_class_count_bound(3, 1)


# ---------------------------------------------------------------------------
# The full pipeline and its certificate.
# ---------------------------------------------------------------------------

def test_reduce_frame_round_trip_and_certificate():
    galaxy = _wide_galaxy()
    frame = galaxy_to_frame(galaxy)
    reduced, cert = reduce_frame(frame, _Q, 4)
    assert cert.input_frame == frame
    assert cert.output_frame == reduced
    assert len(reduced.worlds) <= len(frame.worlds)
    assert validate_certificate(cert) == []
    assert q_equivalent(frame, reduced, _Q)


def test_reduce_frame_is_idempotent_up_to_identity():
    galaxy = _wide_galaxy()
    frame = galaxy_to_frame(galaxy)
    reduced, _ = reduce_frame(frame, _Q, 4)
    again, _ = reduce_frame(reduced, _Q, 4)
    assert again == reduced


def test_reduce_frame_requires_euclidean():
    chain = Frame.make({"0", "1"}, {("0", "1")})
    with pytest.raises(NotEuclidean):
        reduce_frame(chain, _Q, 4)
    loop = Frame.make({"0"}, {("0", "0")})
    with pytest.raises(PreconditionViolated):
        reduce_frame(loop, _Q, 3)
    with pytest.raises(InvalidBudget):
        reduce_frame(loop, 2, 4)


def test_validate_certificate_catches_tampering():
    galaxy = _wide_galaxy()
    frame = galaxy_to_frame(galaxy)
    _, cert = reduce_frame(frame, _Q, 4)

    broken_pairs = list(cert.alpha.witness)
    # Redirect one non-identity source point to a wrong world.
    moved = [p for p in broken_pairs if p[0] != p[1]]
    assert moved, "the wide galaxy must force a real collapse"
    victim = moved[0][0]
    wrong = next(w for w in cert.alpha.target.worlds
                 if w != dict(cert.alpha.witness)[victim]
                 and not galaxy_to_frame(galaxy).has_edge(victim, w))
    tampered_witness = tuple(
        (s, wrong if s == victim else t) for (s, t) in cert.alpha.witness)
    tampered = AlphaStage(cert.alpha.q, cert.alpha.source, cert.alpha.target,
                          tampered_witness, cert.alpha.part_pairs)
    from modef.reductions import ReductionCertificate
    bad = ReductionCertificate(cert.q, cert.k, tampered, cert.gamma,
                               cert.delta)
    assert validate_certificate(bad) != []


def test_multi_part_reduction():
    rng = random.Random(11)
    parts = [_random_galaxy(rng, f"p{i}_") for i in range(5)]
    frame = GalaxyFamily.make(parts).union_frame()
    reduced, cert = reduce_frame(frame, _Q, 4)
    assert validate_certificate(cert) == []
    assert q_equivalent(frame, reduced, _Q)


# ---------------------------------------------------------------------------
# The explicit bound.
# ---------------------------------------------------------------------------

def test_bound_small_values_match_direct_formula():
    for q, k in [(3, 4), (3, 5), (4, 4)]:
        big_q = 2 * q * (q * (q + 1) ** 2 + 1)
        big_k = 2 ** k
        qk = big_q * big_k
        direct = 2 * q * (qk + 1) ** 2 * 2 ** (qk ** 2) * qk
        assert bound(q, k) == direct


def test_bound_parts_for_the_smallest_admissible_pair():
    coefficient, shift = bound_parts(3, 4)
    assert coefficient == BOUND34_COEFF
    assert shift == BOUND34_SHIFT
    value = bound(3, 4)
    assert value.bit_length() == BOUND34_SHIFT + BOUND34_COEFF.bit_length()
    assert value % (10 ** 9 + 7) == BOUND34_MOD_1E9_7
    assert value % (2 ** 61 - 1) == BOUND34_MOD_M61


def test_bound_digit_statistics_without_decimal_conversion():
    # Digit count and the leading window come from the exact log10 position;
    # the tail comes from modular arithmetic.  All were frozen from two
    # independent derivations.
    value = bound(3, 4)
    assert value % 10 ** 12 == BOUND34_TAIL12

    import decimal
    decimal.getcontext().prec = 50
    log10 = (decimal.Decimal(BOUND34_COEFF).ln()
             + BOUND34_SHIFT * decimal.Decimal(2).ln()) / decimal.Decimal(10).ln()
    digits = int(log10) + 1
    assert digits == BOUND34_DIGITS
    frac = log10 - int(log10)
    lead = int((decimal.Decimal(10) ** (frac + 11)))
    assert lead == BOUND34_LEAD12


def test_bound_exceeds_is_exact_at_the_boundary():
    value = bound(3, 4)
    assert bound_exceeds(3, 4, value - 1)
    assert not bound_exceeds(3, 4, value)
    assert bound_exceeds(3, 4, 0)
    assert bound_exceeds(3, 4, -5)
    assert not bound_exceeds(3, 4, value + 1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(3, 4), (3, 5), (4, 4)]),
       st.integers(min_value=0, max_value=2 ** 64))
def test_bound_exceeds_matches_comparison(pair, probe):
    q, k = pair
    assert bound_exceeds(q, k, probe) == (bound(q, k) > probe)


def test_bound_rejects_bad_parameters():
    with pytest.raises(InvalidBudget):
        bound_parts(2, 4)
    with pytest.raises(PreconditionViolated):
        bound_parts(3, 3)
