"""Graph encodings into galaxies and back, reducts, stability witnesses."""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modef.errors import (ArityMismatch, NotACongruence, PreconditionViolated,
                          WorldNotFound)
from modef.formulas import fiv, parse_fo, parse_modal, relativize
from modef.frames import (Frame, Galaxy, flower_as_galaxy, galaxy_to_frame,
                          in_k2, in_l2)
from modef.interpretations import (FLAVORS, K2, K2_SCHEME, L2, L2_SCHEME,
                                   NON_SERIAL, SERIAL, contrast_frame, decode,
                                   encode, padded_frame, relativized_reduct,
                                   scheme_for, stability_witness)
from modef.morphisms_games import are_isomorphic
from modef.semantics import FOEvaluator, sat_fo, valid_modal


def _graph(vertices: list[str], undirected: list[tuple[str, str]]) -> Frame:
    edges = set()
    for (u, v) in undirected:
        edges.add((u, v))
        edges.add((v, u))
    return Frame.make(vertices, edges)


def _all_graphs(vertices: list[str]):
    pairs = list(itertools.combinations(vertices, 2))
    for size in range(len(pairs) + 1):
        for chosen in itertools.combinations(pairs, size):
            yield _graph(vertices, list(chosen))


# ---------------------------------------------------------------------------
# Schemes.
# ---------------------------------------------------------------------------

def test_scheme_lookup():
    assert scheme_for(K2) is K2_SCHEME
    assert scheme_for(L2) is L2_SCHEME
    with pytest.raises(PreconditionViolated):
        scheme_for("m2")


def test_scheme_free_variables():
    for scheme in (K2_SCHEME, L2_SCHEME):
        assert fiv(scheme.u) == {"x1", "x2"}
        assert fiv(scheme.e) == {"x1", "x2", "y1", "y2"}
        assert fiv(scheme.a) == {"x1", "x2", "y1", "y2"}
    assert K2_SCHEME.u != L2_SCHEME.u


# ---------------------------------------------------------------------------
# Encoding.
# ---------------------------------------------------------------------------

def test_encode_cardinalities_and_membership():
    graph = _graph(["a", "b", "c"], [("a", "b"), ("b", "c")])
    for flavor in FLAVORS:
        galaxy = encode(graph, flavor)
        assert len(galaxy.lower) == 2 * 3
        assert len(galaxy.upper) == 2 + 2 * 3, "edges plus two tags a vertex"
        if flavor == K2:
            assert in_k2(galaxy)
        else:
            assert in_l2(galaxy)


def test_encode_rejects_bad_inputs():
    with pytest.raises(PreconditionViolated):
        encode(Frame.make({"a"}, set()), K2)
    with pytest.raises(PreconditionViolated):
        encode(Frame.make({"a", "b"}, {("a", "a")}), K2)
    with pytest.raises(PreconditionViolated):
        encode(Frame.make({"a", "b"}, {("a", "b")}), K2)
    with pytest.raises(PreconditionViolated):
        encode(_graph(["a,b", "c"], [("a,b", "c")]), K2)


def test_pair_formula_carves_exactly_the_vertex_pairs():
    # On an encoded galaxy, U holds precisely on the ordered pairs of the
    # two kernel points of one vertex, in both flavors.
    graph = _graph(["a", "b", "c"], [("a", "b")])
    for flavor in FLAVORS:
        scheme = scheme_for(flavor)
        galaxy = encode(graph, flavor)
        frame = galaxy_to_frame(galaxy)
        evaluator = FOEvaluator(frame)
        found = {(p, q)
                 for p in frame.sorted_worlds() for q in frame.sorted_worlds()
                 if evaluator.check(scheme.u, {"x1": p, "x2": q})}
        expected = set()
        for s in graph.sorted_worlds():
            one, two = f"pt:{s}:1", f"pt:{s}:2"
            expected.add((one, two))
            expected.add((two, one))
        assert found == expected, flavor


def test_decode_inverts_encode_on_samples():
    samples = [
        _graph(["a", "b"], []),
        _graph(["a", "b"], [("a", "b")]),
        _graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")]),
        _graph(["a", "b", "c", "d"], [("a", "b"), ("c", "d")]),
    ]
    for graph in samples:
        for flavor in FLAVORS:
            scheme = scheme_for(flavor)
            decoded = decode(encode(graph, flavor), scheme)
            assert are_isomorphic(decoded, graph) is not None, (
                graph, flavor)


def test_decode_round_trip_all_two_vertex_graphs():
    for graph in _all_graphs(["a", "b"]):
        for flavor in FLAVORS:
            decoded = decode(encode(graph, flavor), scheme_for(flavor))
            assert are_isomorphic(decoded, graph) is not None


def test_decode_refuses_galaxies_without_pairs():
    with pytest.raises(NotACongruence):
        decode(flower_as_galaxy(2, 2), K2_SCHEME)
    with pytest.raises(NotACongruence):
        decode(flower_as_galaxy(1, 0), L2_SCHEME)


def test_decode_on_random_galaxies_never_crashes():
    rng = random.Random(3)
    outcomes = {"frame": 0, "refusal": 0}
    for trial in range(60):
        lower = [f"k{i}" for i in range(rng.randint(1, 4))]
        upper = [f"u{i}" for i in range(rng.randint(0, 4))]
        rho = {u: tuple(rng.sample(lower, rng.randint(0, len(lower))))
               for u in upper}
        galaxy = Galaxy.make(upper, lower, rho)
        scheme = scheme_for(rng.choice(FLAVORS))
        try:
            frame = decode(galaxy, scheme)
            outcomes["frame"] += 1
            assert frame.worlds
        except NotACongruence:
            outcomes["refusal"] += 1
    assert outcomes["refusal"] > 0, "random galaxies mostly lack the pairs"


# ---------------------------------------------------------------------------
# Relativized reducts.
# ---------------------------------------------------------------------------

def test_reduct_on_successor_set():
    frame = Frame.make({"0", "1", "2"},
                       {("0", "1"), ("0", "2"), ("1", "2"), ("1", "1"),
                        ("2", "2"), ("2", "1")})
    successors_of_x = parse_fo("R(x,y)")
    reduct = relativized_reduct(frame, successors_of_x, {"x": "0"}, "y")
    assert reduct is not None
    assert reduct.worlds == frozenset({"1", "2"})
    assert reduct.has_edge("1", "2") and reduct.has_edge("1", "1")

    empty = relativized_reduct(frame, successors_of_x, {"x": "2"}, "y")
    assert empty is not None, "2 has successors"
    none_at_all = relativized_reduct(
        Frame.make({"a"}, set()), successors_of_x, {"x": "a"}, "y")
    assert none_at_all is None


def test_reduct_parameter_validation():
    frame = Frame.make({"0"}, set())
    formula = parse_fo("R(x,y)")
    with pytest.raises(ArityMismatch):
        relativized_reduct(frame, formula, {"x": "0", "y": "0"}, "y")
    with pytest.raises(ArityMismatch):
        relativized_reduct(frame, formula, {}, "y")
    with pytest.raises(ArityMismatch):
        relativized_reduct(frame, formula, {"x": "0", "z": "0"}, "y")
    with pytest.raises(WorldNotFound):
        relativized_reduct(frame, formula, {"x": "missing"}, "y")


def test_reduct_satisfies_relativization_equivalence():
    # Truth of the relativized sentence in the host frame under the
    # parameters equals plain truth in the reduct, whenever it exists.
    rng = random.Random(9)
    sentences = [
        parse_fo("forall u exists v R(u,v)"),
        parse_fo("exists u exists v u != v"),
        parse_fo("forall u forall v (R(u,v) -> R(v,u))"),
    ]
    bound = parse_fo("R(x,y)")  # member of the successor set of x
    for trial in range(25):
        worlds = ["0", "1", "2"]
        edges = {(s, t) for s in worlds for t in worlds
                 if rng.random() < 0.5}
        frame = Frame.make(worlds, edges)
        for anchor in worlds:
            reduct = relativized_reduct(frame, bound, {"x": anchor}, "y")
            for sentence in sentences:
                relativized = relativize(sentence, bound, "y")
                host_truth = sat_fo(frame, {"x": anchor}, relativized)
                if reduct is None:
                    # Universal sentences hold vacuously on the empty set.
                    continue
                assert host_truth == sat_fo(reduct, {}, sentence), (
                    frame, anchor, sentence)


# ---------------------------------------------------------------------------
# Stability witnesses.
# ---------------------------------------------------------------------------

def test_stability_case_split():
    assert stability_witness(parse_modal("dia ~bot")).case == SERIAL
    assert stability_witness(parse_modal("~bot")).case == NON_SERIAL
    assert stability_witness(parse_modal("box p -> box box p")).case == NON_SERIAL
    assert stability_witness(parse_modal("box bot & dia ~bot")).case == SERIAL


def test_witness_formula_shapes():
    witness = stability_witness(parse_modal("dia ~bot"))
    assert fiv(witness.formula) == {"x1", "x2", "y"}
    assert fiv(witness.sentence) == frozenset()


def test_padded_frame_and_contrast_frame():
    base = Frame.make({"0", "1"}, {("0", "1"), ("1", "1")})
    for case in (SERIAL, NON_SERIAL):
        padded, (p0, p1) = padded_frame(base, case)
        assert {p0, p1} <= padded.worlds
        assert base.worlds <= padded.worlds
        assert p0 not in base.worlds and p1 not in base.worlds
        loops_expected = case == SERIAL
        assert padded.has_edge(p0, p0) == loops_expected
        assert padded.has_edge(p1, p1) == loops_expected
        # No edges between the padding and the original frame.
        for pad in (p0, p1):
            for w in base.worlds:
                assert not padded.has_edge(pad, w)
                assert not padded.has_edge(w, pad)
    with pytest.raises(PreconditionViolated):
        padded_frame(base, "other")
    with pytest.raises(PreconditionViolated):
        contrast_frame("other")


def test_padding_avoids_name_collisions():
    base = Frame.make({"pad0", "pad1"}, set())
    _, (p0, p1) = padded_frame(base, NON_SERIAL)
    assert {p0, p1}.isdisjoint(base.worlds)


def test_witness_pair_separates_padded_from_contrast():
    # The sentence holds on any padded frame and fails on the contrast
    # frame, in both cases.
    for case, phi in ((SERIAL, parse_modal("dia ~bot")),
                      (NON_SERIAL, parse_modal("~bot"))):
        witness = stability_witness(phi)
        assert witness.case == case
        base = Frame.make({"0", "1"}, {("0", "1"), ("1", "1")})
        padded, _ = padded_frame(base, case)
        assert sat_fo(padded, {}, witness.sentence), case
        assert not sat_fo(contrast_frame(case), {}, witness.sentence), case


def test_witness_formula_excludes_markers():
    # On a padded frame, the formula (under parameters naming the two fresh
    # markers) defines exactly the original worlds.
    base = Frame.make({"0", "1"}, {("0", "1"), ("1", "1")})
    for case, phi in ((SERIAL, parse_modal("dia ~bot")),
                      (NON_SERIAL, parse_modal("~bot"))):
        witness = stability_witness(phi)
        padded, (p0, p1) = padded_frame(base, case)
        reduct = relativized_reduct(padded, witness.formula,
                                    {"x1": p0, "x2": p1}, "y")
        assert reduct is not None
        assert reduct.worlds == base.worlds, case
        assert reduct.edges == base.edges, case
