"""Encoding irreflexive symmetric frames as two-successor galaxies and back.

The forward direction (encode) attaches, to each graph, a galaxy whose upper
part holds one point per undirected edge plus two tag points per vertex and
whose kernel holds two points per vertex.  Three fixed first-order formulas
(a pair formula U, an equivalence formula E, an adjacency formula A) then
recover the graph from the galaxy's frame alone: U carves out the ordered
kernel pairs belonging to a single vertex, E identifies the two orders, and
A reads the edges off the edge points.  decode evaluates those formulas and
returns the quotient, verifying on the way that E is an equivalence and a
congruence, since an arbitrary galaxy need not satisfy either.

The module also provides relativized reducts (the induced subframe on the
set defined by a formula with parameters) and the stability witness pairs
for logics of Euclidean frames, split on whether the isolated point
validates the extra axiom.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import (ArityMismatch, NotACongruence, PreconditionViolated,
                     WorldNotFound)
from .formulas import (Eq, FOFormula, FONot, FOOr, Forall, ModalFormula, Rel,
                       exists, exists_eq1, exists_eq2, fiv, fo_and,
                       fo_big_and, fo_big_or, fo_iff, fo_implies, neq,
                       pair_disjoint, pair_equal, substitute,
                       successors_equal_pair,
                       successors_equal_pair_complement)
from .frames import (Frame, Galaxy, World, flower, galaxy_to_frame, in_k2,
                     in_l2, restrict, world_sort_key)
from .limits import DEFAULT_LIMITS, Limits
from .semantics import FOEvaluator, sat_fo, valid_modal

K2 = "k2"
L2 = "l2"
FLAVORS = (K2, L2)

SERIAL = "serial"
NON_SERIAL = "non_serial"


# ---------------------------------------------------------------------------
# Interpretation schemes.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InterpretationScheme:
    """The three fixed formulas of one flavor of the encoding.

    u has free variables x1, x2; e and a have free variables x1, x2, y1, y2.
    Flavor k2 matches kernel pairs through exact two-element successor sets;
    flavor l2 through complements of two-element sets inside the reflexive
    points."""

    flavor: str
    u: FOFormula
    e: FOFormula
    a: FOFormula


def _successor_set_macro(flavor: str):
    if flavor == K2:
        return successors_equal_pair
    assert flavor == L2, flavor
    return successors_equal_pair_complement


def _build_scheme(flavor: str) -> InterpretationScheme:
    succ = _successor_set_macro(flavor)
    # U(x1,x2): x1 != x2, mutually related, and exactly two predecessor-free
    # points see exactly {x1,x2} (k2) or its reflexive complement (l2).
    u = fo_big_and([
        neq("x1", "x2"),
        Rel("x1", "x2"),
        Rel("x2", "x1"),
        exists_eq2("y", fo_and(succ("y", "x1", "x2", "t"),
                               FONot(exists("z", Rel("z", "y"))))),
    ])
    u_on_y = substitute(substitute(u, "x1", "y1"), "x2", "y2")
    # E(x1,x2,y1,y2): both are U-pairs and equal as unordered pairs.
    e = fo_big_and([u, u_on_y, pair_equal("x1", "x2", "y1", "y2")])
    # A(x1,x2,y1,y2): both are U-pairs, disjoint, and some cross pair
    # {x_i,y_j} is the successor set (or complement) of exactly one
    # predecessor-free point.
    links = []
    for xi in ("x1", "x2"):
        for yj in ("y1", "y2"):
            links.append(exists_eq1(
                "z", fo_and(succ("z", xi, yj, "t"),
                            FONot(exists("t", Rel("t", "z"))))))
    a = fo_big_and([u, u_on_y,
                    pair_disjoint("x1", "x2", "y1", "y2"),
                    fo_big_or(links)])
    assert fiv(u) == {"x1", "x2"}, sorted(fiv(u))
    assert fiv(e) == {"x1", "x2", "y1", "y2"}, sorted(fiv(e))
    assert fiv(a) == {"x1", "x2", "y1", "y2"}, sorted(fiv(a))
    return InterpretationScheme(flavor=flavor, u=u, e=e, a=a)


K2_SCHEME = _build_scheme(K2)
L2_SCHEME = _build_scheme(L2)


def scheme_for(flavor: str) -> InterpretationScheme:
    if flavor == K2:
        return K2_SCHEME
    if flavor == L2:
        return L2_SCHEME
    raise PreconditionViolated(f"unknown flavor: {flavor!r}")


# ---------------------------------------------------------------------------
# Encoding.
# ---------------------------------------------------------------------------

def _vertex_point(s: World, tag: int) -> World:
    return f"pt:{s}:{tag}"


def _edge_point(u: World, v: World) -> World:
    lo, hi = sorted((u, v), key=world_sort_key)
    return f"edge:{lo},{hi}"


def encode(frame: Frame, flavor: str) -> Galaxy:
    """Galaxy presentation of an irreflexive symmetric frame: one upper
    point per undirected edge, two tagged upper points and two tagged kernel
    points per vertex, with rho given by the chosen flavor."""
    scheme = scheme_for(flavor)
    if len(frame.worlds) < 2:
        raise PreconditionViolated("encoding needs at least 2 worlds")
    for s in frame.worlds:
        if frame.has_edge(s, s):
            raise PreconditionViolated(f"frame is not irreflexive at {s!r}")
        if "," in s:
            raise PreconditionViolated(
                f"world name {s!r} contains a comma, which the edge-point "
                f"naming scheme reserves")
    for (s, t) in frame.edges:
        if not frame.has_edge(t, s):
            raise PreconditionViolated(f"frame is not symmetric at {(s, t)}")

    vertices = frame.sorted_worlds()
    undirected = sorted(
        {(min(u, v, key=world_sort_key), max(u, v, key=world_sort_key))
         for (u, v) in frame.edges},
        key=lambda p: (world_sort_key(p[0]), world_sort_key(p[1])))
    lower = [_vertex_point(s, tag) for s in vertices for tag in (1, 2)]
    lower_set = frozenset(lower)
    upper = ([_edge_point(u, v) for (u, v) in undirected]
             + [_vertex_point(s, tag) for s in vertices for tag in (3, 4)])
    assert len(set(upper)) == len(upper), upper

    rho: dict[World, frozenset[World]] = {}
    for (u, v) in undirected:
        pair = frozenset({_vertex_point(u, 1), _vertex_point(v, 1)})
        rho[_edge_point(u, v)] = pair if flavor == K2 else lower_set - pair
    for s in vertices:
        pair = frozenset({_vertex_point(s, 1), _vertex_point(s, 2)})
        for tag in (3, 4):
            rho[_vertex_point(s, tag)] = (pair if flavor == K2
                                          else lower_set - pair)

    galaxy = Galaxy.make(upper=upper, lower=lower, rho=rho)
    member = in_k2(galaxy) if scheme.flavor == K2 else in_l2(galaxy)
    assert member, ("encoded galaxy left the target class", flavor)
    return galaxy


# ---------------------------------------------------------------------------
# Decoding.
# ---------------------------------------------------------------------------

def decode(galaxy: Galaxy, scheme: InterpretationScheme,
           limits: Limits = DEFAULT_LIMITS) -> Frame:
    """Evaluate the scheme's formulas on the galaxy's frame and return the
    quotient of the defined pair set by the equivalence formula.

    The pair set must be non-empty and the equivalence formula must define
    an equivalence that is a congruence for the adjacency formula; these are
    checked at runtime because arbitrary galaxies can violate them."""
    frame = galaxy_to_frame(galaxy)
    evaluator = FOEvaluator(frame)
    worlds = frame.sorted_worlds()

    pairs = [(a, b)
             for a in worlds for b in worlds
             if evaluator.check(scheme.u, {"x1": a, "x2": b})]
    if not pairs:
        raise NotACongruence(
            "the pair formula defines no pair on this galaxy, so there is "
            "no quotient to take")

    def related(formula: FOFormula, p: tuple[World, World],
                q: tuple[World, World]) -> bool:
        return evaluator.check(formula, {"x1": p[0], "x2": p[1],
                                         "y1": q[0], "y2": q[1]})

    same = {(p, q) for p in pairs for q in pairs if related(scheme.e, p, q)}
    for p in pairs:
        if (p, p) not in same:
            raise NotACongruence(f"equivalence formula is not reflexive "
                                 f"at {p}")
    for (p, q) in same:
        if (q, p) not in same:
            raise NotACongruence(f"equivalence formula is not symmetric "
                                 f"on {p}, {q}")
    for (p, q) in same:
        for r in pairs:
            if (q, r) in same and (p, r) not in same:
                raise NotACongruence(f"equivalence formula is not "
                                     f"transitive on {p}, {q}, {r}")

    adjacent = {(p, q) for p in pairs for q in pairs
                if related(scheme.a, p, q)}
    for (p, p_alt) in same:
        for (q, q_alt) in same:
            if ((p, q) in adjacent) != ((p_alt, q_alt) in adjacent):
                raise NotACongruence(
                    f"adjacency formula is not compatible with the "
                    f"equivalence: {p} ~ {p_alt} and {q} ~ {q_alt} but "
                    f"exactly one of the two pairs is adjacent")

    classes: list[list[tuple[World, World]]] = []
    for p in pairs:
        for members in classes:
            if (p, members[0]) in same:
                members.append(p)
                break
        else:
            classes.append([p])
    names = [f"c{index}" for index in range(len(classes))]
    edges = {(names[i], names[j])
             for i in range(len(classes)) for j in range(len(classes))
             if (classes[i][0], classes[j][0]) in adjacent}
    return Frame.make(names, edges)


# ---------------------------------------------------------------------------
# Relativized reducts.
# ---------------------------------------------------------------------------

def relativized_reduct(frame: Frame, formula: FOFormula,
                       params: Mapping[str, World],
                       y: str) -> Optional[Frame]:
    """Induced subframe on the set defined by the formula with the given
    parameter assignment and distinguished variable y, or None when that set
    is empty (in which case no reduct exists)."""
    if y in params:
        raise ArityMismatch(f"distinguished variable {y!r} is also bound "
                            f"by the parameter assignment")
    free = fiv(formula)
    if free - {y} != set(params):
        raise ArityMismatch(
            f"formula parameters {sorted(free - {y})} do not match the "
            f"assignment over {sorted(params)}")
    for value in params.values():
        if value not in frame.worlds:
            raise WorldNotFound(value)
    base = dict(params)
    defined = [t for t in frame.sorted_worlds()
               if sat_fo(frame, {**base, y: t}, formula)]
    if not defined:
        return None
    return restrict(frame, defined)


# ---------------------------------------------------------------------------
# Stability witnesses.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StabilityWitness:
    """Pair (formula A(x1,x2,y), sentence B) witnessing that the frame class
    of the logic is stable, together with which proof case produced it."""

    formula: FOFormula
    sentence: FOFormula
    case: str


def _only_neighbor_is_self(v: str) -> FOFormula:
    return Forall("x", fo_iff(FOOr(Rel("x", v), Rel(v, "x")), Eq("x", v)))


def _has_no_successor(v: str) -> FOFormula:
    return Forall("x", FONot(Rel(v, "x")))


def _witness_pair(case: str) -> tuple[FOFormula, FOFormula]:
    marker = (_only_neighbor_is_self if case == SERIAL
              else _has_no_successor)
    formula = fo_implies(fo_and(marker("x1"), marker("x2")),
                         fo_and(neq("y", "x1"), neq("y", "x2")))
    sentence = exists("x1", exists("x2", fo_big_and([
        marker("x1"), marker("x2"), neq("x1", "x2")])))
    return formula, sentence


def stability_witness(phi: ModalFormula,
                      limits: Limits = DEFAULT_LIMITS) -> StabilityWitness:
    """Witness of stability for the class of Euclidean frames validating
    phi.  The serial case applies exactly when the isolated point falsifies
    phi (then every frame of the class is serial, and the markers pick out
    points whose only neighbor is themselves); otherwise the non-serial case
    applies and the markers pick out successor-free points."""
    isolated = flower(0, 0)
    case = SERIAL if not valid_modal(isolated, phi, limits).valid else NON_SERIAL
    formula, sentence = _witness_pair(case)
    return StabilityWitness(formula=formula, sentence=sentence, case=case)


def padded_frame(frame: Frame,
                 case: str) -> tuple[Frame, tuple[World, World]]:
    """The frame extended with two fresh marker points for the given case:
    two fresh self-loop-only points (serial) or two fresh isolated points
    (non-serial).  Returns the extension and the two fresh points."""
    if case not in (SERIAL, NON_SERIAL):
        raise PreconditionViolated(f"unknown case: {case!r}")
    pads: list[World] = []
    index = 0
    while len(pads) < 2:
        name = f"pad{index}"
        if name not in frame.worlds:
            pads.append(name)
        index += 1
    extra = {(p, p) for p in pads} if case == SERIAL else set()
    padded = Frame.make(set(frame.worlds) | set(pads),
                        set(frame.edges) | extra)
    return padded, (pads[0], pads[1])


def contrast_frame(case: str) -> Frame:
    """One-point frame falsifying the witness sentence of the given case: a
    single reflexive point (serial) or a single isolated point
    (non-serial)."""
    if case == SERIAL:
        return Frame.make({"c"}, {("c", "c")})
    if case == NON_SERIAL:
        return Frame.make({"c"}, set())
    raise PreconditionViolated(f"unknown case: {case!r}")
