"""Command-line interface: one subcommand per library operation.

Reports are line-oriented `key: value` blocks, deterministic for identical
inputs; `--digest` appends a sha256 of the block.  Formula arguments accept
literal text, a path to a file holding the text, or `-` for stdin.  Frame
and galaxy arguments are paths (or `-` for stdin) in the formats of the
frames module.

Exit codes: 0 for success and positive verdicts, 1 for negative verdicts
(falsified validity, no morphism, non-equivalence, not definable, not
corresponding, no reduct, failed quotient), 2 for provisional verdicts, 3
for refusals (operations that need a decidable classification first), 64
for usage errors, 75 for resource exhaustion.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path
from typing import Callable, Optional

from .characteristic import jankov_fine
from .classifier import (DECIDABLE, LogicHandle, classify_handle,
                         compute_k)
from .definability import (CORRESPONDING, DEFINABLE, NOT_CORRESPONDING,
                           NOT_DEFINABLE, PROVISIONAL,
                           decide_correspondence, decide_definability,
                           sla_set, synth_defining_formula)
from .errors import (FormulaSyntaxError, FrameFormatError, ModefError,
                     NotACongruence, PreconditionViolated, ResourceLimit)
from .formulas import (fiv, is_sentence, modal_length, parse_fo, parse_modal,
                       print_fo, print_modal, qd, qdd, var_of)
from .frames import (Frame, flower, flower_as_galaxy, frame_to_galaxies,
                     is_euclidean, is_simple, parse_frame_text,
                     parse_galaxy_text, partition, serialize_frame,
                     serialize_galaxy, weakly_connected_components,
                     world_sort_key)
from .interpretations import (FLAVORS, decode, encode, relativized_reduct,
                              scheme_for, stability_witness)
from .limits import Limits
from .morphisms_games import find_surjective_bm, q_equivalent, sample_play
from .reductions import bound_exceeds, bound_parts, reduce_frame, validate_certificate
from .semantics import valid_fo, valid_modal

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PROVISIONAL = 2
EXIT_REFUSED = 3
EXIT_USAGE = 64
EXIT_RESOURCE = 75

_OUTCOME_EXIT = {
    DEFINABLE: EXIT_OK,
    CORRESPONDING: EXIT_OK,
    NOT_DEFINABLE: EXIT_NEGATIVE,
    NOT_CORRESPONDING: EXIT_NEGATIVE,
    PROVISIONAL: EXIT_PROVISIONAL,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports bad invocations through UsageError so
    that main can map them to exit code 64."""

    def error(self, message: str):
        raise UsageError(message)


class Report:
    """Ordered `key: value` lines plus optional raw trailing lines (frame
    or galaxy bodies, which are line-oriented themselves)."""

    def __init__(self) -> None:
        self.lines: list[str] = []

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def raw(self, text: str) -> None:
        self.lines.extend(text.rstrip("\n").split("\n"))

    def render(self, with_digest: bool) -> str:
        body = "\n".join(self.lines) + "\n"
        if with_digest:
            digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
            body += f"digest: {digest}\n"
        return body


# ---------------------------------------------------------------------------
# Argument helpers.
# ---------------------------------------------------------------------------

def _read_path(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    path = Path(value)
    if not path.is_file():
        raise UsageError(f"no such file: {value}")
    return path.read_text(encoding="utf-8")


def _formula_text(value: str) -> str:
    """Literal formula text, unless the value names a readable file or is
    `-` for stdin."""
    if value == "-":
        return sys.stdin.read()
    if Path(value).is_file():
        return Path(value).read_text(encoding="utf-8")
    return value


def _load_frame(value: str) -> Frame:
    return parse_frame_text(_read_path(value))


def _load_galaxy(value: str):
    return parse_galaxy_text(_read_path(value))


def _write_text(path: str, text: str) -> None:
    target = Path(path)
    if target.parent != Path("."):
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")


def _join_worlds(worlds) -> str:
    names = sorted(worlds, key=world_sort_key)
    return " ".join(names) if names else "(none)"


def _pair_text(pair) -> str:
    return f"{pair[0]},{pair[1]}"


def _append_frame(report: Report, frame: Frame, out: Optional[str],
                  label: str) -> None:
    text = serialize_frame(frame)
    if out is not None:
        _write_text(out, text)
        report.add(f"{label}-written", out)
    else:
        report.raw(text)


# ---------------------------------------------------------------------------
# Subcommand handlers.  Each returns (exit code, report).
# ---------------------------------------------------------------------------

def cmd_parse_modal(args, limits: Limits):
    phi = parse_modal(_formula_text(args.formula))
    rendered = print_modal(phi)
    assert parse_modal(rendered) == phi, rendered
    report = Report()
    report.add("procedure", "modal parse and canonical print round trip")
    report.add("formula", rendered)
    report.add("variables", " ".join(sorted(var_of(phi))) or "(none)")
    report.add("modal-length", modal_length(phi))
    return EXIT_OK, report


def cmd_parse_fo(args, limits: Limits):
    sentence = parse_fo(_formula_text(args.formula))
    rendered = print_fo(sentence)
    assert parse_fo(rendered) == sentence, rendered
    report = Report()
    report.add("procedure", "first-order parse and canonical print round trip")
    report.add("formula", rendered)
    report.add("free-variables", " ".join(sorted(fiv(sentence))) or "(none)")
    report.add("sentence", "true" if is_sentence(sentence) else "false")
    report.add("quantifier-depth", qd(sentence))
    report.add("effective-depth", qdd(sentence))
    return EXIT_OK, report


def cmd_frame_info(args, limits: Limits):
    frame = _load_frame(args.frame)
    report = Report()
    report.add("procedure", "partition into dust, roots and kernel")
    report.add("worlds-count", len(frame.worlds))
    report.add("edges-count", len(frame.edges))
    euclidean = is_euclidean(frame)
    report.add("euclidean", "true" if euclidean else "false")
    if euclidean:
        dust, roots, kernel = partition(frame)
        report.add("dust", _join_worlds(dust))
        report.add("roots", _join_worlds(roots))
        report.add("kernel", _join_worlds(kernel))
    report.add("components", len(weakly_connected_components(frame)))
    return EXIT_OK, report


def cmd_decompose(args, limits: Limits):
    frame = _load_frame(args.frame)
    galaxies = frame_to_galaxies(frame)
    report = Report()
    report.add("procedure", "one galaxy per weakly connected component")
    report.add("components", len(galaxies))
    for index, galaxy in enumerate(galaxies):
        report.add(f"component {index} upper", _join_worlds(galaxy.upper))
        report.add(f"component {index} lower", _join_worlds(galaxy.lower))
        if args.out_dir is not None:
            path = Path(args.out_dir) / f"component{index}.galaxy"
            _write_text(str(path), serialize_galaxy(galaxy))
            report.add(f"component {index} written", str(path))
    return EXIT_OK, report


def cmd_flower(args, limits: Limits):
    frame = flower(args.m, args.n)
    report = Report()
    report.add("procedure", "flower construction from the index pair")
    report.add("m", args.m)
    report.add("n", args.n)
    report.add("worlds-count", len(frame.worlds))
    if args.m >= 1:
        report.add("simple",
                   "true" if is_simple(flower_as_galaxy(args.m, args.n))
                   else "false")
    _append_frame(report, frame, args.out, "frame")
    return EXIT_OK, report


def cmd_jankov_fine(args, limits: Limits):
    phi = jankov_fine(args.m, args.n)
    report = Report()
    report.raw(print_modal(phi))
    return EXIT_OK, report


def cmd_validity(args, limits: Limits):
    frame = _load_frame(args.frame)
    phi = parse_modal(_formula_text(args.formula))
    outcome = valid_modal(frame, phi, limits)
    report = Report()
    report.add("procedure", "validity by exhaustive valuation search")
    report.add("formula", print_modal(phi))
    report.add("valid", "true" if outcome.valid else "false")
    if not outcome.valid:
        report.add("witness-world", outcome.witness_world)
        report.add("witness-valuation",
                   " ".join(
                       var + "="
                       + ",".join(sorted(worlds, key=world_sort_key))
                       for var, worlds in
                       sorted(outcome.witness_valuation.items()))
                   or "(empty)")
    return (EXIT_OK if outcome.valid else EXIT_NEGATIVE), report


def cmd_fo_validity(args, limits: Limits):
    frame = _load_frame(args.frame)
    sentence = parse_fo(_formula_text(args.formula))
    outcome = valid_fo(frame, sentence)
    report = Report()
    report.add("procedure", "truth under every assignment of free variables")
    report.add("formula", print_fo(sentence))
    report.add("valid", "true" if outcome.valid else "false")
    if not outcome.valid:
        assignment = outcome.witness_assignment or {}
        report.add("witness-assignment",
                   " ".join(f"{var}={world}"
                            for var, world in sorted(assignment.items()))
                   or "(empty)")
    return (EXIT_OK if outcome.valid else EXIT_NEGATIVE), report


def cmd_bm_search(args, limits: Limits):
    source = _load_frame(args.source)
    target = _load_frame(args.target)
    mapping = find_surjective_bm(source, target, limits,
                                 prune=not args.no_prune)
    report = Report()
    report.add("procedure", "backtracking search for a surjective bounded "
                            "morphism")
    report.add("found", "true" if mapping is not None else "false")
    if mapping is None:
        return EXIT_NEGATIVE, report
    lines = [f"map {s} {t}"
             for s, t in sorted(mapping.items(),
                                key=lambda kv: world_sort_key(kv[0]))]
    report.raw("\n".join(lines))
    if args.out is not None:
        _write_text(args.out, "\n".join(lines) + "\n")
        report.add("certificate-written", args.out)
    return EXIT_OK, report


def cmd_ef_game(args, limits: Limits):
    left = _load_frame(args.left)
    right = _load_frame(args.right)
    equivalent = q_equivalent(left, right, args.rounds, limits)
    report = Report()
    report.add("procedure", "pebble game value by exhaustive search with "
                            "position memoization")
    report.add("rounds", args.rounds)
    report.add("equivalent", "true" if equivalent else "false")
    if args.transcript:
        play = sample_play(left, right, args.rounds, limits)
        for index, (side, pick, reply) in enumerate(play):
            report.add(f"move {index}", f"{side} {pick} -> {reply}")
    return (EXIT_OK if equivalent else EXIT_NEGATIVE), report


def cmd_reduce(args, limits: Limits):
    frame = _load_frame(args.frame)
    _, certificate = reduce_frame(frame, args.q, args.k, limits)
    problems = validate_certificate(certificate, limits)
    assert not problems, problems
    report = Report()
    report.add("procedure", "kernel merge, exact-preimage trim and part "
                            "deduplication with game certificates")
    report.add("q", args.q)
    report.add("k", args.k)
    report.add("input-worlds", len(certificate.input_frame.worlds))
    report.add("after-kernel-merge", len(certificate.alpha.target.worlds))
    report.add("after-preimage-trim", len(certificate.gamma.target.worlds))
    report.add("output-worlds", len(certificate.output_frame.worlds))
    report.add("parts", len(certificate.delta.source_parts))
    report.add("validated", "true")
    if args.out_dir is not None:
        out = Path(args.out_dir)
        _write_text(str(out / "before.frame"),
                    serialize_frame(certificate.input_frame))
        _write_text(str(out / "after.frame"),
                    serialize_frame(certificate.output_frame))
        lines = [f"budget {certificate.q}"]
        lines.append("stage kernel-merge")
        lines.extend(f"map {s} {t}" for s, t in certificate.alpha.witness)
        lines.append("stage preimage-trim")
        for point, origin, mapping in certificate.gamma.point_witnesses:
            lines.append(f"point {point} {origin}")
            lines.extend(f"map {s} {t}" for s, t in mapping)
        lines.append("stage deduplication")
        lines.extend(f"map {s} {t}" for s, t in certificate.delta.witness)
        _write_text(str(out / "certificate.txt"), "\n".join(lines) + "\n")
        report.add("files-written", str(out))
    return EXIT_OK, report


def cmd_bound(args, limits: Limits):
    coefficient, shift = bound_parts(args.q, args.k)
    report = Report()
    report.add("procedure", "closed-form world-count bound as coefficient "
                            "times a power of two")
    report.add("q", args.q)
    report.add("k", args.k)
    report.add("coefficient", coefficient)
    report.add("shift", shift)
    report.add("bit-length", coefficient.bit_length() + shift)
    if args.compare is not None:
        report.add("bound-exceeds-value",
                   "true" if bound_exceeds(args.q, args.k, args.compare)
                   else "false")
    return EXIT_OK, report


def cmd_classify(args, limits: Limits):
    axiom = parse_modal(_formula_text(args.axiom))
    handle = LogicHandle(axiom)
    outcome = classify_handle(handle, limits)
    report = Report()
    report.add("procedure", "finite flower validity probes")
    report.add("axiom", print_modal(axiom))
    report.add("l", outcome.l)
    for index, member in outcome.probes:
        report.add(f"probe {_pair_text((index.m, index.n))}",
                   "valid" if member else "falsified")
    report.add("verdict", outcome.verdict)
    if outcome.verdict == DECIDABLE:
        report.add("k", outcome.k)
        core = sorted((idx.m, idx.n) for idx in outcome.finite_core)
        report.add("finite-core",
                   " ".join(_pair_text(p) for p in core) or "(empty)")
    return EXIT_OK, report


def cmd_compute_k(args, limits: Limits):
    axiom = parse_modal(_formula_text(args.axiom))
    handle = LogicHandle(axiom)
    report = Report()
    report.add("procedure", "least index cover of the falsified flower "
                            "rectangle")
    report.add("axiom", print_modal(axiom))
    try:
        k = compute_k(handle, limits)
    except PreconditionViolated as err:
        report.add("outcome", "refused")
        report.add("reason", str(err))
        return EXIT_REFUSED, report
    report.add("k", k)
    return EXIT_OK, report


def cmd_decide_definability(args, limits: Limits):
    axiom = parse_modal(_formula_text(args.axiom))
    sentence = parse_fo(_formula_text(args.sentence))
    report = Report()
    report.add("procedure", "rooted-form equivalence scan plus flower "
                            "image monotonicity scan")
    report.add("axiom", print_modal(axiom))
    report.add("sentence", print_fo(sentence))
    try:
        verdict = decide_definability(sentence, axiom, args.budget, limits)
    except PreconditionViolated as err:
        report.add("outcome", "refused")
        report.add("reason", str(err))
        return EXIT_REFUSED, report
    report.add("outcome", verdict.outcome)
    report.add("explored-bound", verdict.explored_bound)
    if verdict.certificate_pair is not None:
        small, large = verdict.certificate_pair
        report.add("certificate-pair",
                   f"{_pair_text((small.m, small.n))} -> "
                   f"{_pair_text((large.m, large.n))}")
    if verdict.certificate_frame is not None:
        _append_frame(report, verdict.certificate_frame, args.certificate,
                      "certificate")
    return _OUTCOME_EXIT[verdict.outcome], report


def cmd_decide_correspondence(args, limits: Limits):
    axiom = parse_modal(_formula_text(args.axiom))
    phi = parse_modal(_formula_text(args.formula))
    sentence = parse_fo(_formula_text(args.sentence))
    verdict = decide_correspondence(phi, sentence, axiom, args.budget,
                                    limits)
    report = Report()
    report.add("procedure", "frame-by-frame comparison of modal validity "
                            "and sentence truth")
    report.add("axiom", print_modal(axiom))
    report.add("formula", print_modal(phi))
    report.add("sentence", print_fo(sentence))
    report.add("outcome", verdict.outcome)
    report.add("explored-bound", verdict.explored_bound)
    if verdict.certificate_frame is not None:
        _append_frame(report, verdict.certificate_frame, args.certificate,
                      "certificate")
    return _OUTCOME_EXIT[verdict.outcome], report


def cmd_synth_formula(args, limits: Limits):
    axiom = parse_modal(_formula_text(args.axiom))
    sentence = parse_fo(_formula_text(args.sentence))
    report = Report()
    report.add("procedure", "conjunction of characteristic formulas over "
                            "the falsified-flower set")
    try:
        phi = synth_defining_formula(sentence, axiom, args.budget, limits)
        indices = sla_set(sentence, axiom, limits)
    except PreconditionViolated as err:
        report.add("outcome", "refused")
        report.add("reason", str(err))
        return EXIT_REFUSED, report
    report.add("indices",
               " ".join(_pair_text(p) for p in sorted(indices)) or "(empty)")
    report.add("formula", print_modal(phi))
    return EXIT_OK, report


def cmd_encode(args, limits: Limits):
    frame = _load_frame(args.frame)
    galaxy = encode(frame, args.flavor)
    report = Report()
    report.add("procedure", "edge-point and tag-point galaxy construction")
    report.add("flavor", args.flavor)
    report.add("upper-count", len(galaxy.upper))
    report.add("lower-count", len(galaxy.lower))
    text = serialize_galaxy(galaxy)
    if args.out is not None:
        _write_text(args.out, text)
        report.add("galaxy-written", args.out)
    else:
        report.raw(text)
    return EXIT_OK, report


def cmd_decode(args, limits: Limits):
    galaxy = _load_galaxy(args.galaxy)
    scheme = scheme_for(args.flavor)
    report = Report()
    report.add("procedure", "pair-formula quotient of the galaxy frame")
    report.add("flavor", args.flavor)
    try:
        frame = decode(galaxy, scheme, limits)
    except NotACongruence as err:
        report.add("outcome", "no-quotient")
        report.add("reason", str(err))
        return EXIT_NEGATIVE, report
    report.add("worlds-count", len(frame.worlds))
    report.add("edges-count", len(frame.edges))
    _append_frame(report, frame, args.out, "frame")
    return EXIT_OK, report


def cmd_reduct(args, limits: Limits):
    frame = _load_frame(args.frame)
    formula = parse_fo(_formula_text(args.formula))
    params = {}
    for item in args.param:
        if "=" not in item:
            raise UsageError(f"expected VAR=WORLD, got {item!r}")
        var, _, world = item.partition("=")
        if var in params:
            raise UsageError(f"parameter {var!r} given twice")
        params[var] = world
    report = Report()
    report.add("procedure", "induced subframe on the set defined by the "
                            "formula")
    report.add("formula", print_fo(formula))
    reduced = relativized_reduct(frame, formula, params, args.y)
    if reduced is None:
        report.add("reduct", "empty")
        return EXIT_NEGATIVE, report
    report.add("defined-set", _join_worlds(reduced.worlds))
    _append_frame(report, reduced, args.out, "frame")
    return EXIT_OK, report


def cmd_stability_witness(args, limits: Limits):
    axiom = parse_modal(_formula_text(args.axiom))
    witness = stability_witness(axiom, limits)
    report = Report()
    report.add("procedure", "marker-point witness pair selected by the "
                            "isolated-point check")
    report.add("axiom", print_modal(axiom))
    report.add("case", witness.case)
    report.add("formula", print_fo(witness.formula))
    report.add("sentence", print_fo(witness.sentence))
    return EXIT_OK, report


# ---------------------------------------------------------------------------
# Parser construction and entry point.
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="modef",
                     description="Decision procedures for logics of "
                                 "Euclidean frames.")
    subs = parser.add_subparsers(dest="command", required=True)

    def sub(name: str, handler: Callable, help_text: str):
        p = subs.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--digest", action="store_true",
                       help="append a sha256 of the report")
        p.add_argument("--format", choices=("text", "structured"),
                       default="text",
                       help="output format (both render the same "
                            "line-oriented block)")
        return p

    p = sub("parse-modal", cmd_parse_modal, "parse and reprint a modal formula")
    p.add_argument("formula")
    p = sub("parse-fo", cmd_parse_fo, "parse and reprint a first-order formula")
    p.add_argument("formula")

    p = sub("frame-info", cmd_frame_info, "structure report for a frame")
    p.add_argument("--frame", required=True)
    p = sub("decompose", cmd_decompose, "split a frame into galaxies")
    p.add_argument("--frame", required=True)
    p.add_argument("--out-dir")
    p = sub("flower", cmd_flower, "build the flower with index (m, n)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--out")

    p = sub("jankov-fine", cmd_jankov_fine,
            "characteristic formula of the flower with index (m, n)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)

    p = sub("validity", cmd_validity, "modal validity on a frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--formula", required=True)
    p = sub("fo-validity", cmd_fo_validity, "first-order truth on a frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--formula", required=True)

    p = sub("bm-search", cmd_bm_search,
            "search for a surjective bounded morphism")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--no-prune", action="store_true",
                   help="disable search-space filters (oracle mode)")
    p.add_argument("--out")
    p = sub("ef-game", cmd_ef_game, "bounded game equivalence of two frames")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--transcript", action="store_true",
                   help="print an illustrative optimal play")

    p = sub("reduce", cmd_reduce,
            "shrink a frame preserving q-round game equivalence")
    p.add_argument("--frame", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out-dir")
    p = sub("bound", cmd_bound, "exact reduced-size bound for (q, k)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--compare", type=int,
                   help="report whether the bound exceeds this value")

    p = sub("classify", cmd_classify,
            "decide decidability of definability for the axiom's logic")
    p.add_argument("--axiom", required=True)
    p = sub("compute-k", cmd_compute_k,
            "index cover constant for a decidable case")
    p.add_argument("--axiom", required=True)

    p = sub("decide-definability", cmd_decide_definability,
            "is the sentence equivalent to a modal formula on the class")
    p.add_argument("--axiom", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--certificate", help="write a certificate frame here")
    p = sub("decide-correspondence", cmd_decide_correspondence,
            "does the modal formula match the sentence on the class")
    p.add_argument("--axiom", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--certificate", help="write a certificate frame here")
    p = sub("synth-formula", cmd_synth_formula,
            "synthesize a defining modal formula for the sentence")
    p.add_argument("--axiom", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--budget", type=int, required=True)

    p = sub("encode", cmd_encode,
            "galaxy encoding of an irreflexive symmetric frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--flavor", choices=FLAVORS, required=True)
    p.add_argument("--out")
    p = sub("decode", cmd_decode, "quotient decoding of a galaxy")
    p.add_argument("--galaxy", required=True)
    p.add_argument("--flavor", choices=FLAVORS, required=True)
    p.add_argument("--out")

    p = sub("reduct", cmd_reduct,
            "relativized reduct of a frame under a formula")
    p.add_argument("--frame", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--param", action="append", default=[],
                   metavar="VAR=WORLD")
    p.add_argument("--y", default="y",
                   help="distinguished variable (default y)")
    p.add_argument("--out")
    p = sub("stability-witness", cmd_stability_witness,
            "stability witness pair for the axiom's frame class")
    p.add_argument("--axiom", required=True)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    limits = Limits.from_env()
    try:
        code, report = args.handler(args, limits)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as err:
        print(f"resource limit: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except (FormulaSyntaxError, FrameFormatError) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ModefError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(report.render(args.digest))
    return code
