"""Classify an axiom by whether definability and correspondence over its
Euclidean frame class are decidable problems.

The test is four flower validity probes: with l = 2^(number of variables),
the problems are decidable exactly when the axiom fails on the flower with l
petals and a 2-point extra kernel, and also fails on one of the three small
2-petal flowers.  For decidable axioms the budget k is the largest m + n over
the finite set of validated indices with both components at least 2, floored
at 4; that set lives inside a rectangle located by the least falsified column
and row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .characteristic import IndexPair, pi
from .errors import PreconditionViolated
from .formulas import ModalFormula, qdd, var_of
from .frames import flower
from .limits import DEFAULT_LIMITS, Limits
from .semantics import validates_logic

DECIDABLE = "decidable"
UNDECIDABLE = "undecidable"


@dataclass
class LogicHandle:
    """An axiom together with a memo of flower validity checks."""
    axiom: ModalFormula
    cache: dict = field(default_factory=dict)

    @property
    def l(self) -> int:
        return 2 ** len(var_of(self.axiom))


def sl_member(handle: LogicHandle, idx: IndexPair,
              limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether the flower with this index validates the axiom."""
    cached = handle.cache.get(idx)
    if cached is None:
        cached = validates_logic(flower(idx.m, idx.n), handle.axiom, limits)
        handle.cache[idx] = cached
    return cached


@dataclass(frozen=True)
class ClassifierReport:
    l: int
    probes: tuple[tuple[IndexPair, bool], ...]
    verdict: str
    k: Optional[int]
    finite_core: Optional[frozenset[IndexPair]]

    def condition_holds(self) -> bool:
        return self.verdict == DECIDABLE


def _probe_indices(l: int) -> tuple[IndexPair, ...]:
    return (IndexPair(l, 2), IndexPair(2, -1), IndexPair(2, 0),
            IndexPair(2, l))


def classify(axiom: ModalFormula,
             limits: Limits = DEFAULT_LIMITS) -> ClassifierReport:
    """Evaluate the four-probe condition and, when it holds, compute k and
    the finite set of validated indices off the two strips."""
    return classify_handle(LogicHandle(axiom), limits)


def classify_handle(handle: LogicHandle,
                    limits: Limits = DEFAULT_LIMITS) -> ClassifierReport:
    l = handle.l
    probes = tuple((idx, sl_member(handle, idx, limits))
                   for idx in _probe_indices(l))
    outcomes = dict(probes)
    condition = (not outcomes[IndexPair(l, 2)]
                 and (not outcomes[IndexPair(2, -1)]
                      or not outcomes[IndexPair(2, 0)]
                      or not outcomes[IndexPair(2, l)]))
    if not condition:
        return ClassifierReport(l, probes, UNDECIDABLE, None, None)
    k, core = _k_and_core(handle, limits)
    return ClassifierReport(l, probes, DECIDABLE, k, core)


def _k_and_core(handle: LogicHandle,
                limits: Limits) -> tuple[int, frozenset[IndexPair]]:
    l = handle.l
    m0 = next(m for m in range(1, l + 1)
              if not sl_member(handle, IndexPair(m, 2), limits))
    # Some row with n >= 2 is falsified whenever the probe condition holds:
    # a falsified row at -1 or 0 pushes up to row 2 by downward closure, and
    # otherwise row l >= 2 itself is falsified.
    n0 = next(n for n in range(2, max(2, l) + 1)
              if not sl_member(handle, IndexPair(2, n), limits))
    core = frozenset(IndexPair(m, n)
                     for m in range(2, m0)
                     for n in range(2, n0)
                     if sl_member(handle, IndexPair(m, n), limits))
    k = max([4] + [p.m + p.n for p in core])
    return k, core


def compute_k(handle: LogicHandle, limits: Limits = DEFAULT_LIMITS) -> int:
    """The reduction budget for a decidable axiom."""
    report = classify_handle(handle, limits)
    if report.verdict != DECIDABLE:
        raise PreconditionViolated(
            "k is defined only when the classifier verdict is decidable")
    assert report.k is not None
    return report.k


def pi_k_a(k: int, qdd_value: int) -> frozenset[IndexPair]:
    """Candidate indices for a sentence with the given depth measure: inner
    pairs capped by m + n <= k, the m = 1 column and the n <= 1 rows capped
    by the depth measure."""
    if k < 4:
        raise PreconditionViolated(f"k must be at least 4, got {k}")
    if qdd_value < 3:
        raise PreconditionViolated(
            f"the depth measure is at least 3 by definition, got {qdd_value}")
    side = max(k, qdd_value)
    out = set()
    for m in range(1, side + 1):
        for n in range(-1, side + 1):
            if m >= 2 and n >= 2 and m + n > k:
                continue
            if m == 1 and n > qdd_value:
                continue
            if n <= 1 and m > qdd_value:
                continue
            out.add(IndexPair(m, n))
    bounding = pi(IndexPair(side, side))
    assert out <= bounding
    return frozenset(out)


@dataclass(frozen=True)
class KernelBoundDiagnostic:
    l: int
    m_probed: tuple[int, ...]
    m_falsified: tuple[int, ...]
    n_probed: tuple[int, ...]
    n_falsified: tuple[int, ...]
    holds: bool


def kernel_bound_check(axiom: ModalFormula, probe_up_to: int = 6,
                       limits: Limits = DEFAULT_LIMITS) -> KernelBoundDiagnostic:
    """Self-test: if some probed column flower falsifies the axiom then one
    with index at most l does, and likewise for row flowers."""
    handle = LogicHandle(axiom)
    l = handle.l
    ms = tuple(range(1, probe_up_to + 1))
    ns = tuple(range(-1, probe_up_to + 1))
    m_bad = tuple(m for m in ms
                  if not sl_member(handle, IndexPair(m, 2), limits))
    n_bad = tuple(n for n in ns
                  if not sl_member(handle, IndexPair(2, n), limits))
    holds = ((not m_bad or m_bad[0] <= l)
             and (not n_bad or n_bad[0] <= l))
    return KernelBoundDiagnostic(l, ms, m_bad, ns, n_bad, holds)
