"""Decide whether a first-order sentence is modally definable over the
Euclidean frames of an axiom, decide correspondence with a given modal
formula, and synthesize defining formulas.

Negative answers are conclusive at any exploration budget and always carry a
certificate that re-validates independently: either a frame where the
sentence disagrees with its rooted form (or with the candidate formula), or
a pair of flowers breaking monotonicity.  Positive answers are conclusive
only at the full theoretical bound, which is astronomically large, so at any
realistic budget they are reported as provisional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .characteristic import IndexPair, jankov_fine, jf_valid_on, pi
from .classifier import (DECIDABLE, LogicHandle, classify_handle, pi_k_a,
                         sl_member)
from .errors import PreconditionViolated
from .formulas import (FOFormula, Forall, ModalFormula, all_vars, big_and,
                       fresh_variable, is_sentence, m_top, qdd,
                       rooted_translation)
from .frames import Frame, enumerate_euclidean_frames, flower
from .limits import DEFAULT_LIMITS, Limits
from .reductions import bound, bound_exceeds
from .semantics import (biconditional_with_rooted_form, sat_fo,
                        theory_membership_bounded, valid_modal,
                        validates_logic)

DEFINABLE = "definable"
NOT_DEFINABLE = "not_definable"
PROVISIONAL = "provisional"
CORRESPONDING = "corresponding"
NOT_CORRESPONDING = "not_corresponding"


@dataclass(frozen=True)
class Verdict:
    outcome: str
    explored_bound: int
    certificate_frame: Optional[Frame] = None
    certificate_pair: Optional[tuple[IndexPair, IndexPair]] = None
    certificate_formula: Optional[ModalFormula] = None


def rooted_biconditional(sentence: FOFormula) -> FOFormula:
    """The sentence 'A holds iff A holds at every point's generated part',
    with a fresh root variable."""
    if not is_sentence(sentence):
        raise PreconditionViolated("the rooted form needs a sentence")
    root = fresh_variable(all_vars(sentence))
    return biconditional_with_rooted_form(
        sentence, Forall(root, rooted_translation(root, sentence)))


def _conclusive_bound(q: int, k: int, explored: int) -> bool:
    return not bound_exceeds(q, k, explored)


def decide_definability(sentence: FOFormula, axiom: ModalFormula,
                        budget: int,
                        limits: Limits = DEFAULT_LIMITS) -> Verdict:
    """Two checks: the sentence must be equivalent to its rooted form on
    every explored frame of the class, and flower validity of the sentence
    must be monotone downward on the candidate index set.  Either failure is
    conclusive; both passing is conclusive only at the full bound."""
    if not is_sentence(sentence):
        raise PreconditionViolated("definability is about sentences")
    if budget < 1:
        raise PreconditionViolated(f"budget must be positive, got {budget}")
    handle = LogicHandle(axiom)
    report = classify_handle(handle, limits)
    if report.verdict != DECIDABLE:
        raise PreconditionViolated(
            "no decision procedure exists for this axiom; "
            "bounded counterexample search is still available through "
            "correspondence with the formula top")
    k = report.k
    assert k is not None
    q = qdd(sentence)
    explored = budget if bound_exceeds(q, k, budget) else bound(q, k)
    membership = theory_membership_bounded(
        rooted_biconditional(sentence), axiom, explored, limits)
    if not membership.holds_up_to_bound:
        return Verdict(NOT_DEFINABLE, explored,
                       certificate_frame=membership.counterexample)
    for idx in sorted(pi_k_a(k, q)):
        if not sl_member(handle, idx, limits):
            continue
        if not sat_fo(flower(idx.m, idx.n), {}, sentence):
            continue
        for below in sorted(pi(idx)):
            if not sat_fo(flower(below.m, below.n), {}, sentence):
                return Verdict(NOT_DEFINABLE, explored,
                               certificate_pair=(idx, below))
    outcome = DEFINABLE if _conclusive_bound(q, k, explored) else PROVISIONAL
    return Verdict(outcome, explored)


def sla_set(sentence: FOFormula, axiom: ModalFormula,
            limits: Limits = DEFAULT_LIMITS) -> frozenset[tuple[int, int]]:
    """Indices of the axiom-validating flowers falsifying the sentence, in
    the square with side qdd; (0, 0) stands for the isolated point."""
    if not is_sentence(sentence):
        raise PreconditionViolated("the index set is about sentences")
    q = qdd(sentence)
    handle = LogicHandle(axiom)
    out = set()
    for m in range(0, q + 1):
        for n in range(-1, q + 1):
            if m == 0 and n != 0:
                continue
            if m == 0:
                in_logic = validates_logic(flower(0, 0), axiom, limits)
            else:
                in_logic = sl_member(handle, IndexPair(m, n), limits)
            if in_logic and not sat_fo(flower(m, n), {}, sentence):
                out.add((m, n))
    return frozenset(out)


def jf_prefix(m: int, n: int) -> str:
    """Variable prefix for the (m, n) conjunct; the second figure is n + 1
    so the name stays a single identifier for every n >= -1."""
    return f"_jf{m}_{n + 1}_"


def synth_defining_formula(sentence: FOFormula, axiom: ModalFormula,
                           budget: int,
                           limits: Limits = DEFAULT_LIMITS) -> ModalFormula:
    """The conjunction of the characteristic formulas of the sla_set
    flowers, with disjoint variables per conjunct; top when the set is
    empty.  Refuses when the sentence is conclusively not definable."""
    verdict = decide_definability(sentence, axiom, budget, limits)
    if verdict.outcome == NOT_DEFINABLE:
        raise PreconditionViolated(
            "synthesis needs a definable or provisional sentence")
    indices = sla_set(sentence, axiom, limits)
    if not indices:
        return m_top()
    return big_and([jankov_fine(m, n, prefix=jf_prefix(m, n))
                    for (m, n) in sorted(indices)])


def synthesized_validity(frame: Frame, indices: frozenset[tuple[int, int]],
                         limits: Limits = DEFAULT_LIMITS) -> bool:
    """Validity of the synthesized conjunction on a frame, evaluated one
    characteristic formula at a time through the structural route."""
    return all(jf_valid_on(frame, m, n, limits) for (m, n) in sorted(indices))


def decide_correspondence(formula: ModalFormula, sentence: FOFormula,
                          axiom: ModalFormula, budget: int,
                          limits: Limits = DEFAULT_LIMITS,
                          modal_validity: Optional[
                              Callable[[Frame], bool]] = None) -> Verdict:
    """Compare the formula's modal validity with the sentence's truth on
    every enumerated frame of the class up to the budget.  A custom
    modal_validity callable replaces the brute-force model check, for
    formulas whose validity has a cheaper equivalent test."""
    if not is_sentence(sentence):
        raise PreconditionViolated("correspondence is about sentences")
    if budget < 1:
        raise PreconditionViolated(f"budget must be positive, got {budget}")
    handle = LogicHandle(axiom)
    report = classify_handle(handle, limits)
    k = report.k
    q = qdd(sentence)
    if k is not None and not bound_exceeds(q, k, budget):
        explored = bound(q, k)
    else:
        explored = budget
    if modal_validity is None:
        def modal_validity(frame: Frame) -> bool:
            return valid_modal(frame, formula, limits).valid
    for frame in enumerate_euclidean_frames(explored, limits):
        if not valid_modal(frame, axiom, limits).valid:
            continue
        if modal_validity(frame) != sat_fo(frame, {}, sentence):
            return Verdict(NOT_CORRESPONDING, explored,
                           certificate_frame=frame,
                           certificate_formula=formula)
    conclusive = k is not None and _conclusive_bound(q, k, explored)
    outcome = CORRESPONDING if conclusive else PROVISIONAL
    return Verdict(outcome, explored, certificate_formula=formula)
