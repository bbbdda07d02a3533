"""Formula ASTs, parsers, printers, measures, and syntactic transforms.

Two languages live here: the modal language (propositional variables, bottom,
negation, disjunction, box) and the first-order language of one binary
relation R with equality.  Both parsers expand every derived connective at
parse time, so downstream code only ever sees the core constructors.

Reserved identifier namespaces: names starting with "_v" are produced by the
fresh-variable generator and are rejected by both parsers on input; names
starting with "_e" are used for the bound variables introduced when expanding
counting quantifiers, and stay legal as input so printed formulas re-parse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import FormulaSyntaxError, VariableClash

RESERVED_FRESH_PREFIX = "_v"
EXPANSION_PREFIX = "_e"


# ---------------------------------------------------------------------------
# Modal AST (core cases only; everything else is sugar).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropVar:
    name: str

    def __str__(self) -> str:
        return print_modal(self)


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return print_modal(self)


@dataclass(frozen=True)
class Not:
    sub: "ModalFormula"

    def __str__(self) -> str:
        return print_modal(self)


@dataclass(frozen=True)
class Or:
    left: "ModalFormula"
    right: "ModalFormula"

    def __str__(self) -> str:
        return print_modal(self)


@dataclass(frozen=True)
class Box:
    sub: "ModalFormula"

    def __str__(self) -> str:
        return print_modal(self)


ModalFormula = Union[PropVar, Bottom, Not, Or, Box]


def m_top() -> ModalFormula:
    return Not(Bottom())


def m_and(left: ModalFormula, right: ModalFormula) -> ModalFormula:
    return Not(Or(Not(left), Not(right)))


def m_implies(left: ModalFormula, right: ModalFormula) -> ModalFormula:
    return Or(Not(left), right)


def m_iff(left: ModalFormula, right: ModalFormula) -> ModalFormula:
    return m_and(m_implies(left, right), m_implies(right, left))


def dia(sub: ModalFormula) -> ModalFormula:
    return Not(Box(Not(sub)))


def box_u(sub: ModalFormula) -> ModalFormula:
    """Universal-style modality: on Euclidean frames it quantifies over the
    whole generated subframe.  Defined as sub and box box sub."""
    return m_and(sub, Box(Box(sub)))


def dia_u(sub: ModalFormula) -> ModalFormula:
    return Not(box_u(Not(sub)))


def big_and(parts: list) -> "ModalFormula":
    """Conjunction of a nonempty list, associated to the right."""
    assert parts, "big_and needs at least one conjunct"
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = m_and(part, result)
    return result


def big_or(parts: list) -> "ModalFormula":
    assert parts, "big_or needs at least one disjunct"
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Or(part, result)
    return result


# ---------------------------------------------------------------------------
# First-order AST (core cases only).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rel:
    x: str
    y: str

    def __str__(self) -> str:
        return print_fo(self)


@dataclass(frozen=True)
class Eq:
    x: str
    y: str

    def __str__(self) -> str:
        return print_fo(self)


@dataclass(frozen=True)
class FONot:
    sub: "FOFormula"

    def __str__(self) -> str:
        return print_fo(self)


@dataclass(frozen=True)
class FOOr:
    left: "FOFormula"
    right: "FOFormula"

    def __str__(self) -> str:
        return print_fo(self)


@dataclass(frozen=True)
class Forall:
    var: str
    sub: "FOFormula"

    def __str__(self) -> str:
        return print_fo(self)


FOFormula = Union[Rel, Eq, FONot, FOOr, Forall]


def fo_and(left: FOFormula, right: FOFormula) -> FOFormula:
    return FONot(FOOr(FONot(left), FONot(right)))


def fo_implies(left: FOFormula, right: FOFormula) -> FOFormula:
    return FOOr(FONot(left), right)


def fo_iff(left: FOFormula, right: FOFormula) -> FOFormula:
    return fo_and(fo_implies(left, right), fo_implies(right, left))


def neq(x: str, y: str) -> FOFormula:
    return FONot(Eq(x, y))


def exists(var: str, sub: FOFormula) -> FOFormula:
    return FONot(Forall(var, FONot(sub)))


def fo_big_and(parts: list) -> "FOFormula":
    assert parts, "fo_big_and needs at least one conjunct"
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = fo_and(part, result)
    return result


def fo_big_or(parts: list) -> "FOFormula":
    assert parts, "fo_big_or needs at least one disjunct"
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = FOOr(part, result)
    return result


def exists_eq1(var: str, sub: FOFormula, fresh: Optional[str] = None) -> FOFormula:
    """Exactly-one quantifier: exists x (A(x) and forall y (A(y) -> y=x))."""
    y = fresh if fresh is not None else fresh_variable(all_vars(sub) | {var}, EXPANSION_PREFIX)
    assert y != var and y not in all_vars(sub), y
    body = fo_and(sub, Forall(y, fo_implies(substitute(sub, var, y), Eq(y, var))))
    return exists(var, body)


def exists_eq2(var: str, sub: FOFormula,
               fresh: Optional[tuple[str, str, str]] = None) -> FOFormula:
    """Exactly-two quantifier:
    exists x1 exists x2 (A(x1) and A(x2) and x1 != x2 and
    forall y (A(y) -> y=x1 or y=x2))."""
    if fresh is not None:
        x1, x2, y = fresh
    else:
        avoid = all_vars(sub) | {var}
        x1 = fresh_variable(avoid, EXPANSION_PREFIX)
        x2 = fresh_variable(avoid | {x1}, EXPANSION_PREFIX)
        y = fresh_variable(avoid | {x1, x2}, EXPANSION_PREFIX)
    names = {x1, x2, y}
    assert len(names) == 3 and var not in names and not names & all_vars(sub)
    a_x1 = substitute(sub, var, x1)
    a_x2 = substitute(sub, var, x2)
    a_y = substitute(sub, var, y)
    body = fo_big_and([
        a_x1,
        a_x2,
        neq(x1, x2),
        Forall(y, fo_implies(a_y, FOOr(Eq(y, x1), Eq(y, x2)))),
    ])
    return exists(x1, exists(x2, body))


# Set-style macros.  These have no surface syntax; they are building blocks
# for the fixed interpretation formulas.

def pair_disjoint(x1: str, x2: str, y1: str, y2: str) -> FOFormula:
    """{x1,x2} and {y1,y2} are disjoint."""
    return fo_big_and([neq(x1, y1), neq(x1, y2), neq(x2, y1), neq(x2, y2)])


def pair_equal(x1: str, x2: str, y1: str, y2: str) -> FOFormula:
    """{x1,x2} = {y1,y2}."""
    return FOOr(fo_and(Eq(x1, y1), Eq(x2, y2)),
                fo_and(Eq(x1, y2), Eq(x2, y1)))


def successors_equal_pair(z: str, a: str, b: str, t: str) -> FOFormula:
    """R(z) = {a, b}, via the fresh variable t."""
    assert t not in {z, a, b}
    return Forall(t, fo_iff(Rel(z, t), FOOr(Eq(t, a), Eq(t, b))))


def successors_equal_pair_complement(z: str, a: str, b: str, t: str) -> FOFormula:
    """R(z) = {reflexive points} minus {a, b}, via the fresh variable t."""
    assert t not in {z, a, b}
    return Forall(t, fo_iff(Rel(z, t),
                            fo_big_and([Rel(t, t), neq(t, a), neq(t, b)])))


# ---------------------------------------------------------------------------
# Measures and variable bookkeeping.
# ---------------------------------------------------------------------------

def var_of(phi: ModalFormula) -> frozenset[str]:
    """Propositional variables occurring in a modal formula."""
    if isinstance(phi, PropVar):
        return frozenset({phi.name})
    if isinstance(phi, Bottom):
        return frozenset()
    if isinstance(phi, (Not, Box)):
        return var_of(phi.sub)
    if isinstance(phi, Or):
        return var_of(phi.left) | var_of(phi.right)
    raise TypeError(f"not a modal formula: {phi!r}")


def modal_length(phi: ModalFormula) -> int:
    """Number of core symbols (atoms and connectives)."""
    if isinstance(phi, (PropVar, Bottom)):
        return 1
    if isinstance(phi, (Not, Box)):
        return 1 + modal_length(phi.sub)
    if isinstance(phi, Or):
        return 1 + modal_length(phi.left) + modal_length(phi.right)
    raise TypeError(f"not a modal formula: {phi!r}")


def fiv(formula: FOFormula) -> frozenset[str]:
    """Free individual variables."""
    if isinstance(formula, (Rel, Eq)):
        return frozenset({formula.x, formula.y})
    if isinstance(formula, FONot):
        return fiv(formula.sub)
    if isinstance(formula, FOOr):
        return fiv(formula.left) | fiv(formula.right)
    if isinstance(formula, Forall):
        return fiv(formula.sub) - {formula.var}
    raise TypeError(f"not a first-order formula: {formula!r}")


def all_vars(formula: FOFormula) -> frozenset[str]:
    """All individual variables, free or bound."""
    if isinstance(formula, (Rel, Eq)):
        return frozenset({formula.x, formula.y})
    if isinstance(formula, FONot):
        return all_vars(formula.sub)
    if isinstance(formula, FOOr):
        return all_vars(formula.left) | all_vars(formula.right)
    if isinstance(formula, Forall):
        return all_vars(formula.sub) | {formula.var}
    raise TypeError(f"not a first-order formula: {formula!r}")


def qd(formula: FOFormula) -> int:
    """Quantifier depth."""
    if isinstance(formula, (Rel, Eq)):
        return 0
    if isinstance(formula, FONot):
        return qd(formula.sub)
    if isinstance(formula, FOOr):
        return max(qd(formula.left), qd(formula.right))
    if isinstance(formula, Forall):
        return 1 + qd(formula.sub)
    raise TypeError(f"not a first-order formula: {formula!r}")


def qdd(formula: FOFormula) -> int:
    """Quantifier depth clamped from below by 3."""
    return max(qd(formula), 3)


def fo_length(formula: FOFormula) -> int:
    if isinstance(formula, (Rel, Eq)):
        return 1
    if isinstance(formula, FONot):
        return 1 + fo_length(formula.sub)
    if isinstance(formula, FOOr):
        return 1 + fo_length(formula.left) + fo_length(formula.right)
    if isinstance(formula, Forall):
        return 1 + fo_length(formula.sub)
    raise TypeError(f"not a first-order formula: {formula!r}")


@dataclass(frozen=True)
class SyntaxMeasures:
    length: int
    var: Optional[frozenset[str]] = None
    fiv: Optional[frozenset[str]] = None
    qd: Optional[int] = None
    qdd: Optional[int] = None


def measures(formula: Union[ModalFormula, FOFormula]) -> SyntaxMeasures:
    if isinstance(formula, (PropVar, Bottom, Not, Or, Box)):
        return SyntaxMeasures(length=modal_length(formula), var=var_of(formula))
    if isinstance(formula, (Rel, Eq, FONot, FOOr, Forall)):
        return SyntaxMeasures(length=fo_length(formula), fiv=fiv(formula),
                              qd=qd(formula), qdd=qdd(formula))
    raise TypeError(f"not a formula: {formula!r}")


def is_sentence(formula: FOFormula) -> bool:
    return not fiv(formula)


def fresh_variable(avoid: frozenset[str] | set[str],
                   prefix: str = RESERVED_FRESH_PREFIX) -> str:
    i = 0
    while f"{prefix}{i}" in avoid:
        i += 1
    return f"{prefix}{i}"


# ---------------------------------------------------------------------------
# Substitution, rooted translation, relativization.
# ---------------------------------------------------------------------------

def substitute(formula: FOFormula, x: str, y: str) -> FOFormula:
    """Replace every free occurrence of x by y, avoiding capture.

    Bound variables equal to y are renamed into the reserved namespace when a
    free x actually occurs below them.
    """
    if isinstance(formula, Rel):
        return Rel(y if formula.x == x else formula.x,
                   y if formula.y == x else formula.y)
    if isinstance(formula, Eq):
        return Eq(y if formula.x == x else formula.x,
                  y if formula.y == x else formula.y)
    if isinstance(formula, FONot):
        return FONot(substitute(formula.sub, x, y))
    if isinstance(formula, FOOr):
        return FOOr(substitute(formula.left, x, y),
                    substitute(formula.right, x, y))
    if isinstance(formula, Forall):
        if formula.var == x or x not in fiv(formula.sub):
            return formula
        if formula.var == y:
            renamed = fresh_variable(all_vars(formula.sub) | {x, y})
            body = substitute(formula.sub, y, renamed)
            return Forall(renamed, substitute(body, x, y))
        return Forall(formula.var, substitute(formula.sub, x, y))
    raise TypeError(f"not a first-order formula: {formula!r}")


def rooted_translation(x: str, formula: FOFormula) -> FOFormula:
    """Relativize every quantifier to the reach of x.

    On Euclidean frames the sentence forall-x of this translation holds
    exactly when the input sentence holds in every generated subframe.
    """
    if x in all_vars(formula):
        raise VariableClash(f"translation variable {x!r} occurs in the formula")
    counter = [0]
    avoid = all_vars(formula) | {x}

    def fresh_z() -> str:
        while True:
            candidate = f"{RESERVED_FRESH_PREFIX}{counter[0]}"
            counter[0] += 1
            if candidate not in avoid:
                return candidate

    def walk(sub: FOFormula) -> FOFormula:
        if isinstance(sub, (Rel, Eq)):
            return sub
        if isinstance(sub, FONot):
            return FONot(walk(sub.sub))
        if isinstance(sub, FOOr):
            return FOOr(walk(sub.left), walk(sub.right))
        if isinstance(sub, Forall):
            y = sub.var
            z = fresh_z()
            guard = FOOr(Eq(x, y), exists(z, fo_and(Rel(x, z), Rel(z, y))))
            return Forall(y, fo_implies(guard, walk(sub.sub)))
        raise TypeError(f"not a first-order formula: {sub!r}")

    return walk(formula)


def relativize(formula: FOFormula, bound: FOFormula, x: str) -> FOFormula:
    """Relativize every quantifier of `formula` to the set defined by `bound`
    (with distinguished variable x).  Requires variable-disjointness between
    the two formulas."""
    overlap = all_vars(formula) & all_vars(bound)
    if overlap:
        raise VariableClash(f"shared variables between formula and bound: "
                            f"{sorted(overlap)}")

    def walk(sub: FOFormula) -> FOFormula:
        if isinstance(sub, (Rel, Eq)):
            return sub
        if isinstance(sub, FONot):
            return FONot(walk(sub.sub))
        if isinstance(sub, FOOr):
            return FOOr(walk(sub.left), walk(sub.right))
        if isinstance(sub, Forall):
            guard = substitute(bound, x, sub.var)
            return Forall(sub.var, fo_implies(guard, walk(sub.sub)))
        raise TypeError(f"not a first-order formula: {sub!r}")

    return walk(formula)


# ---------------------------------------------------------------------------
# Tokenizer shared by both parsers.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


_PUNCT = [
    ("<->", "IFF"), ("->", "IMP"), ("<U>", "DIAU"), ("[U]", "BOXU"),
    ("!=", "NEQ"), ("(", "LPAR"), (")", "RPAR"), (",", "COMMA"),
    ("~", "NOT"), ("|", "OR"), ("&", "AND"), ("=", "EQ"), (".", "DOT"),
]


def _tokenize(text: str, keywords: dict[str, str]) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        matched = False
        for lexeme, kind in _PUNCT:
            if text.startswith(lexeme, i):
                tokens.append(_Token(kind, lexeme, i))
                i += len(lexeme)
                matched = True
                break
        if matched:
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word == "exists" and text.startswith("=1", j):
                tokens.append(_Token("EXISTS1", "exists=1", i))
                i = j + 2
                continue
            if word == "exists" and text.startswith("=2", j):
                tokens.append(_Token("EXISTS2", "exists=2", i))
                i = j + 2
                continue
            kind = keywords.get(word, "IDENT")
            tokens.append(_Token(kind, word, i))
            i = j
            continue
        raise FormulaSyntaxError(f"unexpected character {ch!r}", i,
                                 frozenset({"identifier", "operator"}))
    tokens.append(_Token("EOF", "", n))
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0

    def peek(self) -> _Token:
        return self._tokens[self._pos]

    def advance(self) -> _Token:
        token = self._tokens[self._pos]
        self._pos += 1
        return token

    def accept(self, kind: str) -> Optional[_Token]:
        if self.peek().kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, expected: frozenset[str]) -> _Token:
        token = self.peek()
        if token.kind != kind:
            raise FormulaSyntaxError(f"unexpected token {token.text!r}",
                                     token.offset, expected)
        return self.advance()


def _check_identifier(token: _Token) -> str:
    if token.text.startswith(RESERVED_FRESH_PREFIX):
        raise FormulaSyntaxError(
            f"identifier {token.text!r} uses the reserved fresh-variable "
            f"prefix", token.offset, frozenset({"identifier"}))
    return token.text


# ---------------------------------------------------------------------------
# Modal parser.
# ---------------------------------------------------------------------------

_MODAL_KEYWORDS = {"bot": "BOT", "top": "TOP", "box": "BOX", "dia": "DIA"}


def parse_modal(text: str) -> ModalFormula:
    """Parse the ASCII modal grammar into a core AST.

    Precedence, loosest to tightest: <-> then -> then | then & then the
    prefix operators (~, box, dia, [U], <U>).  -> and <-> associate to the
    right, | and & to the left.
    """
    stream = _TokenStream(_tokenize(text, _MODAL_KEYWORDS))
    formula = _parse_modal_iff(stream)
    stream.expect("EOF", frozenset({"end of input"}))
    return formula


def _parse_modal_iff(stream: _TokenStream) -> ModalFormula:
    left = _parse_modal_imp(stream)
    if stream.accept("IFF"):
        right = _parse_modal_iff(stream)
        return m_iff(left, right)
    return left


def _parse_modal_imp(stream: _TokenStream) -> ModalFormula:
    left = _parse_modal_or(stream)
    if stream.accept("IMP"):
        right = _parse_modal_imp(stream)
        return m_implies(left, right)
    return left


def _parse_modal_or(stream: _TokenStream) -> ModalFormula:
    left = _parse_modal_and(stream)
    while stream.accept("OR"):
        left = Or(left, _parse_modal_and(stream))
    return left


def _parse_modal_and(stream: _TokenStream) -> ModalFormula:
    left = _parse_modal_unary(stream)
    while stream.accept("AND"):
        left = m_and(left, _parse_modal_unary(stream))
    return left


_MODAL_ATOM_EXPECTED = frozenset(
    {"bot", "top", "identifier", "(", "~", "box", "dia", "[U]", "<U>"})


def _parse_modal_unary(stream: _TokenStream) -> ModalFormula:
    token = stream.peek()
    if token.kind == "NOT":
        stream.advance()
        return Not(_parse_modal_unary(stream))
    if token.kind == "BOX":
        stream.advance()
        return Box(_parse_modal_unary(stream))
    if token.kind == "DIA":
        stream.advance()
        return dia(_parse_modal_unary(stream))
    if token.kind == "BOXU":
        stream.advance()
        return box_u(_parse_modal_unary(stream))
    if token.kind == "DIAU":
        stream.advance()
        return dia_u(_parse_modal_unary(stream))
    return _parse_modal_atom(stream)


def _parse_modal_atom(stream: _TokenStream) -> ModalFormula:
    token = stream.peek()
    if token.kind == "BOT":
        stream.advance()
        return Bottom()
    if token.kind == "TOP":
        stream.advance()
        return m_top()
    if token.kind == "IDENT":
        stream.advance()
        return PropVar(_check_identifier(token))
    if token.kind == "LPAR":
        stream.advance()
        inner = _parse_modal_iff(stream)
        stream.expect("RPAR", frozenset({")"}))
        return inner
    raise FormulaSyntaxError(f"unexpected token {token.text!r}", token.offset,
                             _MODAL_ATOM_EXPECTED)


# ---------------------------------------------------------------------------
# Modal printer (core connectives only, minimal parentheses).
# ---------------------------------------------------------------------------

_LEVEL_OR = 3
_LEVEL_UNARY = 5
_LEVEL_ATOM = 6


def print_modal(phi: ModalFormula) -> str:
    return _print_modal(phi, 0)


def _print_modal(phi: ModalFormula, minimum: int) -> str:
    if isinstance(phi, PropVar):
        return phi.name
    if isinstance(phi, Bottom):
        return "bot"
    if isinstance(phi, Not):
        inner = _print_modal(phi.sub, _LEVEL_UNARY)
        # A space keeps the negation visually apart from word operators.
        text = ("~ " if inner[0].isalpha() else "~") + inner
        return f"({text})" if _LEVEL_UNARY < minimum else text
    if isinstance(phi, Box):
        text = "box " + _print_modal(phi.sub, _LEVEL_UNARY)
        return f"({text})" if _LEVEL_UNARY < minimum else text
    if isinstance(phi, Or):
        text = (_print_modal(phi.left, _LEVEL_OR) + " | "
                + _print_modal(phi.right, _LEVEL_OR + 1))
        return f"({text})" if _LEVEL_OR < minimum else text
    raise TypeError(f"not a modal formula: {phi!r}")


# ---------------------------------------------------------------------------
# First-order parser.
# ---------------------------------------------------------------------------

_FO_KEYWORDS = {"forall": "FORALL", "exists": "EXISTS", "R": "REL"}


def parse_fo(text: str) -> FOFormula:
    """Parse the ASCII first-order grammar into a core AST.

    Quantifier bodies extend as far right as possible; an optional "." may
    follow the bound variable.  Counting quantifiers expand with bound
    variables from the "_e" namespace.
    """
    stream = _TokenStream(_tokenize(text, _FO_KEYWORDS))
    formula = _parse_fo_iff(stream)
    stream.expect("EOF", frozenset({"end of input"}))
    return formula


def _parse_fo_iff(stream: _TokenStream) -> FOFormula:
    left = _parse_fo_imp(stream)
    if stream.accept("IFF"):
        right = _parse_fo_iff(stream)
        return fo_iff(left, right)
    return left


def _parse_fo_imp(stream: _TokenStream) -> FOFormula:
    left = _parse_fo_or(stream)
    if stream.accept("IMP"):
        right = _parse_fo_imp(stream)
        return fo_implies(left, right)
    return left


def _parse_fo_or(stream: _TokenStream) -> FOFormula:
    left = _parse_fo_and(stream)
    while stream.accept("OR"):
        left = FOOr(left, _parse_fo_and(stream))
    return left


def _parse_fo_and(stream: _TokenStream) -> FOFormula:
    left = _parse_fo_unary(stream)
    while stream.accept("AND"):
        left = fo_and(left, _parse_fo_unary(stream))
    return left


_FO_ATOM_EXPECTED = frozenset(
    {"R(", "identifier", "(", "~", "forall", "exists", "exists=1", "exists=2"})


def _parse_fo_unary(stream: _TokenStream) -> FOFormula:
    token = stream.peek()
    if token.kind == "NOT":
        stream.advance()
        return FONot(_parse_fo_unary(stream))
    if token.kind in ("FORALL", "EXISTS", "EXISTS1", "EXISTS2"):
        stream.advance()
        var_token = stream.expect("IDENT", frozenset({"identifier"}))
        var = _check_identifier(var_token)
        stream.accept("DOT")
        body = _parse_fo_iff(stream)
        if token.kind == "FORALL":
            return Forall(var, body)
        if token.kind == "EXISTS":
            return exists(var, body)
        if token.kind == "EXISTS1":
            return exists_eq1(var, body)
        return exists_eq2(var, body)
    return _parse_fo_atom(stream)


def _parse_fo_atom(stream: _TokenStream) -> FOFormula:
    token = stream.peek()
    if token.kind == "REL":
        stream.advance()
        stream.expect("LPAR", frozenset({"("}))
        x = _check_identifier(stream.expect("IDENT", frozenset({"identifier"})))
        stream.expect("COMMA", frozenset({","}))
        y = _check_identifier(stream.expect("IDENT", frozenset({"identifier"})))
        stream.expect("RPAR", frozenset({")"}))
        return Rel(x, y)
    if token.kind == "IDENT":
        stream.advance()
        x = _check_identifier(token)
        op = stream.peek()
        if op.kind == "EQ":
            stream.advance()
            y = _check_identifier(stream.expect("IDENT", frozenset({"identifier"})))
            return Eq(x, y)
        if op.kind == "NEQ":
            stream.advance()
            y = _check_identifier(stream.expect("IDENT", frozenset({"identifier"})))
            return neq(x, y)
        raise FormulaSyntaxError(f"unexpected token {op.text!r}", op.offset,
                                 frozenset({"=", "!="}))
    if token.kind == "LPAR":
        stream.advance()
        inner = _parse_fo_iff(stream)
        stream.expect("RPAR", frozenset({")"}))
        return inner
    raise FormulaSyntaxError(f"unexpected token {token.text!r}", token.offset,
                             _FO_ATOM_EXPECTED)


# ---------------------------------------------------------------------------
# First-order printer.
# ---------------------------------------------------------------------------

def print_fo(formula: FOFormula) -> str:
    return _print_fo(formula, 0)


def _print_fo(formula: FOFormula, minimum: int) -> str:
    if isinstance(formula, Rel):
        return f"R({formula.x},{formula.y})"
    if isinstance(formula, Eq):
        return f"{formula.x}={formula.y}"
    if isinstance(formula, FONot):
        text = "~" + _print_fo(formula.sub, _LEVEL_UNARY)
        return f"({text})" if _LEVEL_UNARY < minimum else text
    if isinstance(formula, FOOr):
        text = (_print_fo(formula.left, _LEVEL_OR) + " | "
                + _print_fo(formula.right, _LEVEL_OR + 1))
        return f"({text})" if _LEVEL_OR < minimum else text
    if isinstance(formula, Forall):
        text = f"forall {formula.var} " + _print_fo(formula.sub, 0)
        return f"({text})" if 0 < minimum else text
    raise TypeError(f"not a first-order formula: {formula!r}")
