"""Model checking on finite frames for both languages.

Modal validity quantifies over valuations of the variables that actually
occur in the formula; first-order satisfaction walks assignments.  Searches
are deterministic: worlds in canonical (shortlex) order in the outer loop,
valuations as a binary counter (variable-major, world-minor bit layout).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import (PreconditionViolated, ResourceLimit, UncoveredVariable,
                     WorldNotFound)
from .formulas import (Bottom, Box, Eq, FONot, FOOr, FOFormula, Forall,
                       ModalFormula, Not, Or, PropVar, Rel, fiv, fo_iff,
                       is_sentence, var_of)
from .frames import (Frame, World, enumerate_euclidean_frames, is_euclidean,
                     world_sort_key)
from .limits import DEFAULT_LIMITS, Limits

Valuation = Mapping[str, frozenset[World]]
Assignment = Mapping[str, World]


def _check_valuation(frame: Frame, valuation: Valuation,
                     phi: ModalFormula) -> None:
    for var in var_of(phi):
        if var not in valuation:
            raise UncoveredVariable(var)
        stray = valuation[var] - frame.worlds
        if stray:
            raise WorldNotFound(sorted(stray, key=world_sort_key)[0])


def sat_modal(frame: Frame, valuation: Valuation, world: World,
              phi: ModalFormula) -> bool:
    """Truth of a modal formula at a world, by structural recursion."""
    if world not in frame.worlds:
        raise WorldNotFound(world)
    _check_valuation(frame, valuation, phi)
    memo: dict[tuple[ModalFormula, World], bool] = {}
    successors = {w: frame.successors(w) for w in frame.worlds}

    def truth(sub: ModalFormula, at: World) -> bool:
        key = (sub, at)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if isinstance(sub, PropVar):
            value = at in valuation[sub.name]
        elif isinstance(sub, Bottom):
            value = False
        elif isinstance(sub, Not):
            value = not truth(sub.sub, at)
        elif isinstance(sub, Or):
            value = truth(sub.left, at) or truth(sub.right, at)
        elif isinstance(sub, Box):
            value = all(truth(sub.sub, t) for t in successors[at])
        else:
            raise TypeError(f"not a modal formula: {sub!r}")
        memo[key] = value
        return value

    return truth(phi, world)


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    witness_world: Optional[World] = None
    witness_valuation: Optional[dict[str, frozenset[World]]] = None


def valuation_counter(frame: Frame, variables: list[str]):
    """All valuations of the given variables, in binary-counter order."""
    worlds = frame.sorted_worlds()
    n = len(worlds)
    total_bits = n * len(variables)
    for counter in range(2 ** total_bits):
        valuation = {}
        for i, var in enumerate(variables):
            valuation[var] = frozenset(
                worlds[j] for j in range(n) if counter >> (i * n + j) & 1)
        yield valuation


def valid_modal(frame: Frame, phi: ModalFormula,
                limits: Limits = DEFAULT_LIMITS) -> ValidityReport:
    """Validity on a frame: true at every world under every valuation of the
    occurring variables.  On failure reports the first counter-witness."""
    variables = sorted(var_of(phi), key=world_sort_key)
    total = 2 ** (len(frame.worlds) * len(variables))
    if total > limits.max_valuations:
        raise ResourceLimit(
            f"{total} valuations exceed the ceiling {limits.max_valuations}")
    for world in frame.sorted_worlds():
        for valuation in valuation_counter(frame, variables):
            if not sat_modal(frame, valuation, world, phi):
                return ValidityReport(False, world, valuation)
    return ValidityReport(True)


def validates_logic(frame: Frame, axiom: ModalFormula,
                    limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether the frame belongs to the class of the least normal logic
    containing the Euclidean axiom and the given axiom."""
    return is_euclidean(frame) and valid_modal(frame, axiom, limits).valid


def _check_assignment(frame: Frame, assignment: Assignment,
                      formula: FOFormula) -> None:
    for var in fiv(formula):
        if var not in assignment:
            raise UncoveredVariable(var)
        if assignment[var] not in frame.worlds:
            raise WorldNotFound(assignment[var])


def sat_fo(frame: Frame, assignment: Assignment, formula: FOFormula) -> bool:
    """First-order truth under an assignment, by structural recursion."""
    _check_assignment(frame, assignment, formula)
    worlds = frame.sorted_worlds()

    def truth(sub: FOFormula, env: dict[str, World]) -> bool:
        if isinstance(sub, Rel):
            return (env[sub.x], env[sub.y]) in frame.edges
        if isinstance(sub, Eq):
            return env[sub.x] == env[sub.y]
        if isinstance(sub, FONot):
            return not truth(sub.sub, env)
        if isinstance(sub, FOOr):
            return truth(sub.left, env) or truth(sub.right, env)
        if isinstance(sub, Forall):
            saved = env.get(sub.var)
            for world in worlds:
                env[sub.var] = world
                if not truth(sub.sub, env):
                    if saved is None:
                        env.pop(sub.var, None)
                    else:
                        env[sub.var] = saved
                    return False
            if saved is None:
                env.pop(sub.var, None)
            else:
                env[sub.var] = saved
            return True
        raise TypeError(f"not a first-order formula: {sub!r}")

    return truth(formula, dict(assignment))


class FOEvaluator:
    """First-order truth on one fixed frame, with memoization.

    Subformula results are cached per assignment restricted to that
    subformula's free variables, so repeated queries that share structure
    (such as a pair-defining formula evaluated over every ordered pair)
    reuse work across calls.  Agrees with sat_fo on every input; the test
    suite cross-checks the two routes."""

    def __init__(self, frame: Frame) -> None:
        self.frame = frame
        self.worlds = frame.sorted_worlds()
        self._free: dict[int, tuple[str, ...]] = {}
        self._nodes: dict[int, FOFormula] = {}
        self._memo: dict[tuple[int, tuple[World, ...]], bool] = {}

    def _free_vars(self, sub: FOFormula) -> tuple[str, ...]:
        key = id(sub)
        got = self._free.get(key)
        if got is None:
            # Holding the node alive keeps id() keys from being recycled.
            self._nodes[key] = sub
            got = tuple(sorted(fiv(sub)))
            self._free[key] = got
        return got

    def check(self, formula: FOFormula, assignment: Assignment) -> bool:
        _check_assignment(self.frame, assignment, formula)
        return self._truth(formula, dict(assignment))

    def _truth(self, sub: FOFormula, env: dict[str, World]) -> bool:
        if isinstance(sub, Rel):
            return (env[sub.x], env[sub.y]) in self.frame.edges
        if isinstance(sub, Eq):
            return env[sub.x] == env[sub.y]
        key = (id(sub), tuple(env[v] for v in self._free_vars(sub)))
        got = self._memo.get(key)
        if got is not None:
            return got
        if isinstance(sub, FONot):
            result = not self._truth(sub.sub, env)
        elif isinstance(sub, FOOr):
            result = self._truth(sub.left, env) or self._truth(sub.right, env)
        elif isinstance(sub, Forall):
            saved = env.get(sub.var)
            result = True
            for world in self.worlds:
                env[sub.var] = world
                if not self._truth(sub.sub, env):
                    result = False
                    break
            if saved is None:
                env.pop(sub.var, None)
            else:
                env[sub.var] = saved
        else:
            raise TypeError(f"not a first-order formula: {sub!r}")
        self._memo[key] = result
        return result


@dataclass(frozen=True)
class FOValidityReport:
    valid: bool
    witness_assignment: Optional[dict[str, World]] = None


def valid_fo(frame: Frame, formula: FOFormula) -> FOValidityReport:
    """Truth under every assignment of the free variables (plain truth for
    sentences).  On failure reports the first falsifying assignment."""
    free = sorted(fiv(formula), key=world_sort_key)
    if not free:
        holds = sat_fo(frame, {}, formula)
        return FOValidityReport(holds, None if holds else {})
    worlds = frame.sorted_worlds()

    def assignments(index: int, env: dict[str, World]):
        if index == len(free):
            yield dict(env)
            return
        for world in worlds:
            env[free[index]] = world
            yield from assignments(index + 1, env)
        env.pop(free[index], None)

    for assignment in assignments(0, {}):
        if not sat_fo(frame, assignment, formula):
            return FOValidityReport(False, assignment)
    return FOValidityReport(True)


@dataclass(frozen=True)
class TheoryCheck:
    holds_up_to_bound: bool
    size_bound: int
    frames_checked: int
    counterexample: Optional[Frame] = None


def theory_membership_bounded(sentence: FOFormula, axiom: ModalFormula,
                              size_bound: int,
                              limits: Limits = DEFAULT_LIMITS) -> TheoryCheck:
    """Check a sentence against every enumerated Euclidean frame validating
    the axiom, up to the size bound.  Conclusive for membership only when the
    bound reaches the theoretical reduction bound; any counterexample is
    conclusive on its own."""
    if not is_sentence(sentence):
        raise PreconditionViolated("theory membership needs a sentence")
    checked = 0
    for frame in enumerate_euclidean_frames(size_bound, limits):
        if not valid_modal(frame, axiom, limits).valid:
            continue
        checked += 1
        if not sat_fo(frame, {}, sentence):
            return TheoryCheck(False, size_bound, checked, frame)
    return TheoryCheck(True, size_bound, checked)


def biconditional_with_rooted_form(sentence: FOFormula,
                                   translated: FOFormula) -> FOFormula:
    """The sentence 'A holds iff A holds in every generated subframe'."""
    return fo_iff(sentence, translated)
