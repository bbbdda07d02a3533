"""Definability and correspondence decisions with checkable certificates."""

from __future__ import annotations

import pytest

from modef.characteristic import IndexPair
from modef.definability import (CORRESPONDING, DEFINABLE, NOT_CORRESPONDING,
                                NOT_DEFINABLE, PROVISIONAL, Verdict,
                                decide_correspondence, decide_definability,
                                jf_prefix, rooted_biconditional, sla_set,
                                synth_defining_formula, synthesized_validity)
from modef.errors import PreconditionViolated
from modef.formulas import (Rel, fiv, m_top, parse_fo, parse_modal, qdd,
                            var_of)
from modef.frames import Frame, enumerate_euclidean_frames, flower
from modef.semantics import sat_fo, valid_fo, valid_modal, validates_logic

_TRANS = parse_modal("box p -> box box p")
_TOP = parse_modal("~bot")
_SERIAL_FO = parse_fo("forall x exists y R(x,y)")
_TWO_POINTS = parse_fo("exists x exists y x != y")


def test_rooted_biconditional_shape():
    bic = rooted_biconditional(_SERIAL_FO)
    assert fiv(bic) == frozenset()
    # On a frame where seriality is a local property the two sides agree.
    loop = Frame.make({"0"}, {("0", "0")})
    assert sat_fo(loop, {}, bic)
    # On a frame with a serial whole but a non-serial generated part the
    # biconditional fails: the union of a loop and a dead end is not serial,
    # but take a frame where the sentence holds globally yet fails locally.
    # Seriality is preserved under generated subframes, so use the converse:
    # the two-point frame below satisfies "some point is irreflexive" only
    # globally.
    witness = parse_fo("exists x exists y x != y")
    bic2 = rooted_biconditional(witness)
    two = Frame.make({"a", "b"}, {("a", "a"), ("b", "b")})
    assert not sat_fo(two, {}, bic2), "each generated part has one point"


def test_rooted_biconditional_requires_sentence():
    with pytest.raises(PreconditionViolated):
        rooted_biconditional(Rel("x", "y"))


# ---------------------------------------------------------------------------
# decide_definability.
# ---------------------------------------------------------------------------

def test_two_points_is_not_definable_with_checkable_certificate():
    verdict = decide_definability(_TWO_POINTS, _TRANS, 3)
    assert verdict.outcome == NOT_DEFINABLE
    frame = verdict.certificate_frame
    assert frame is not None
    # The certificate re-validates: the frame belongs to the class and the
    # sentence disagrees with its rooted form there.
    assert validates_logic(frame, _TRANS)
    assert not sat_fo(frame, {}, rooted_biconditional(_TWO_POINTS))


def test_seriality_is_provisional_at_desk_budgets():
    verdict = decide_definability(_SERIAL_FO, _TRANS, 4)
    assert verdict.outcome == PROVISIONAL
    assert verdict.explored_bound == 4
    assert verdict.certificate_frame is None
    assert verdict.certificate_pair is None


def test_reflexivity_is_definable_hence_provisional():
    # Reflexivity matches "box p -> p" on every frame, so no budget can
    # refute it; the verdict stays provisional below the full bound.
    reflexive = parse_fo("forall x R(x,x)")
    verdict = decide_definability(reflexive, _TRANS, 4)
    assert verdict.outcome == PROVISIONAL


def test_branching_floor_fails_flower_monotonicity():
    # "Every point has at least two successors" holds on the flower with two
    # petals but fails on the one-petal flower sitting below it, so no modal
    # formula can define it: validity always travels down the flower order.
    two_successors = parse_fo(
        "forall x exists y exists z (y != z & R(x,y) & R(x,z))")
    verdict = decide_definability(two_successors, _TRANS, 4)
    assert verdict.outcome == NOT_DEFINABLE
    assert verdict.certificate_pair is not None
    upper, lower = verdict.certificate_pair
    assert sat_fo(flower(upper.m, upper.n), {}, two_successors)
    assert not sat_fo(flower(lower.m, lower.n), {}, two_successors)
    assert lower.m <= upper.m and lower.n <= upper.n
    assert validates_logic(flower(upper.m, upper.n), _TRANS)


def test_definability_refuses_undecidable_axioms():
    with pytest.raises(PreconditionViolated):
        decide_definability(_SERIAL_FO, _TOP, 4)


def test_definability_rejects_open_formulas_and_bad_budgets():
    with pytest.raises(PreconditionViolated):
        decide_definability(Rel("x", "y"), _TRANS, 4)
    with pytest.raises(PreconditionViolated):
        decide_definability(_SERIAL_FO, _TRANS, 0)


# ---------------------------------------------------------------------------
# The index set and synthesis.
# ---------------------------------------------------------------------------

def test_sla_set_for_seriality():
    # Seriality fails exactly on the flowers with dust, and among the
    # candidates only the isolated point qualifies.
    indices = sla_set(_SERIAL_FO, _TRANS)
    assert (0, 0) in indices
    for (m, n) in indices:
        assert not sat_fo(flower(m, n), {}, _SERIAL_FO)
        assert validates_logic(flower(m, n), _TRANS)


def test_sla_set_empty_for_a_theory_member():
    # The Euclidean property itself holds on every frame of the class.
    euclid = parse_fo("forall x forall y forall z (R(x,y) & R(x,z) -> R(y,z))")
    assert sla_set(euclid, _TRANS) == frozenset()


def test_jf_prefix_is_injective_on_indices():
    seen = {}
    for m in range(0, 4):
        for n in range(-1, 4):
            prefix = jf_prefix(m, n)
            assert prefix not in seen, (seen[prefix], (m, n))
            seen[prefix] = (m, n)


def test_synth_for_theory_member_is_top():
    euclid = parse_fo("forall x forall y forall z (R(x,y) & R(x,z) -> R(y,z))")
    assert synth_defining_formula(euclid, _TRANS, 4) == m_top()


def test_synth_for_seriality_matches_sentence_on_the_class():
    phi = synth_defining_formula(_SERIAL_FO, _TRANS, 4)
    indices = sla_set(_SERIAL_FO, _TRANS)
    assert phi != m_top()
    # Per-conjunct variables stay disjoint.
    prefixes = [jf_prefix(m, n) for (m, n) in sorted(indices)]
    for var in var_of(phi):
        assert sum(var.startswith(p) for p in prefixes) == 1, var
    # Semantic equivalence on every explored frame of the class: the
    # synthesized formula is valid exactly where the sentence holds.
    for frame in enumerate_euclidean_frames(4):
        if not validates_logic(frame, _TRANS):
            continue
        assert (synthesized_validity(frame, indices)
                == sat_fo(frame, {}, _SERIAL_FO)), frame


def test_synth_refuses_conclusively_non_definable_input():
    with pytest.raises(PreconditionViolated):
        synth_defining_formula(_TWO_POINTS, _TRANS, 3)


def test_synthesized_validity_routes_through_characteristic_formulas():
    indices = frozenset({(1, 0)})
    assert not synthesized_validity(flower(1, 0), indices)
    assert synthesized_validity(flower(0, 0), indices)


# ---------------------------------------------------------------------------
# decide_correspondence.
# ---------------------------------------------------------------------------

def test_correspondence_positive_cases_are_provisional():
    # Seriality against the formula it is expected to match.
    dia_top = parse_modal("dia ~bot")
    verdict = decide_correspondence(dia_top, _SERIAL_FO, _TRANS, 4)
    assert verdict.outcome == PROVISIONAL
    assert verdict.certificate_formula == dia_top


def test_correspondence_negative_case_with_certificate():
    box_bot = parse_modal("box bot")
    verdict = decide_correspondence(box_bot, _SERIAL_FO, _TRANS, 4)
    assert verdict.outcome == NOT_CORRESPONDING
    frame = verdict.certificate_frame
    assert frame is not None
    assert validates_logic(frame, _TRANS)
    assert (valid_modal(frame, box_bot).valid
            != sat_fo(frame, {}, _SERIAL_FO))


def test_correspondence_with_undecidable_axiom_still_searches():
    # No classifier support, so the verdict can never be conclusive, but
    # counterexamples still come out.
    box_bot = parse_modal("box bot")
    verdict = decide_correspondence(box_bot, _SERIAL_FO, _TOP, 4)
    assert verdict.outcome == NOT_CORRESPONDING
    assert verdict.certificate_frame is not None

    dia_top = parse_modal("dia ~bot")
    agree = decide_correspondence(dia_top, _SERIAL_FO, _TOP, 3)
    assert agree.outcome == PROVISIONAL


def test_correspondence_custom_validity_callable():
    calls = []

    def fake_validity(frame: Frame) -> bool:
        calls.append(frame)
        return sat_fo(frame, {}, _SERIAL_FO)

    verdict = decide_correspondence(parse_modal("bot"), _SERIAL_FO, _TRANS, 3,
                                    modal_validity=fake_validity)
    assert verdict.outcome == PROVISIONAL, "the callable overrides the check"
    assert calls, "the callable must actually be consulted"


def test_correspondence_rejects_open_formulas_and_bad_budgets():
    with pytest.raises(PreconditionViolated):
        decide_correspondence(_TOP, Rel("x", "y"), _TRANS, 3)
    with pytest.raises(PreconditionViolated):
        decide_correspondence(_TOP, _SERIAL_FO, _TRANS, 0)
