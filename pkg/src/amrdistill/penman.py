"""Reading and writing sentence-level AMR graphs in PENMAN notation.

Only the subset of the notation emitted by AMR 3.0 style parsers is
accepted: one rooted expression, ``(var / concept :role target ...)``,
with quoted strings, bare symbols and integers as attribute values.
ISI-style alignment markers (``~e.3`` or ``~3,4``) are stripped from
concepts and constants and kept as token indices.

Example::

    >>> g = parse_penman('(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))')
    >>> [n.label for n in concept_nodes(g)]
    ['want-01', 'boy', 'go-02']
    >>> serialize_penman(g)
    '(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b))'
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

__all__ = [
    "AmrGraph",
    "ConceptNode",
    "Constant",
    "Relation",
    "PenmanError",
    "PenmanSyntaxError",
    "UnbalancedParens",
    "DuplicateVariable",
    "DanglingReference",
    "EmptyInput",
    "UnknownVariable",
    "parse_penman",
    "serialize_penman",
    "concept_nodes",
    "attributes_of",
    "has_sense_suffix",
    "strip_sense_suffix",
]

SENSE_SUFFIX = re.compile(r"-\d{2}$")
VARIABLE = re.compile(r"^[a-z]\d*$")
INTEGER = re.compile(r"^[+-]?\d+$")

# Concepts treated as graph plumbing rather than content words.
SPECIAL_CONCEPTS = frozenset({
    "name", "and", "or", "multi-sentence", "amr-unknown", "amr-choice",
    "date-interval", "string-entity", "url-entity", "ordinal-entity",
    "percentage-entity", "phone-number-entity", "email-address-entity",
    "value-interval", "rate-entity-91", "have-org-role-91", "have-rel-role-91",
})
MODIFIER_ROLES = frozenset({
    ":mod", ":manner", ":degree", ":quant", ":poss", ":frequency",
    ":duration", ":extent", ":time", ":location", ":domain-of", ":mod-of",
})


class PenmanError(ValueError):
    """Base class for PENMAN reading errors."""


class PenmanSyntaxError(PenmanError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnbalancedParens(PenmanSyntaxError):
    def __init__(self, position: int):
        super().__init__("unbalanced parentheses", position)


class DuplicateVariable(PenmanError):
    def __init__(self, variable: str):
        super().__init__(f"variable {variable!r} is introduced more than once")
        self.variable = variable


class DanglingReference(PenmanError):
    def __init__(self, variable: str):
        super().__init__(f"variable {variable!r} is referenced but never introduced")
        self.variable = variable


class EmptyInput(PenmanError):
    def __init__(self):
        super().__init__("no PENMAN expression found")


class UnknownVariable(KeyError):
    def __init__(self, variable: str):
        super().__init__(variable)
        self.variable = variable


@dataclass(frozen=True)
class Constant:
    """An attribute value: ``kind`` is one of ``"symbol"``, ``"integer"``, ``"string"``.

    ``"string"`` values are quoted literals; ``value`` holds the text
    between the quotes with escapes resolved.
    """
    value: Union[str, int]
    kind: str
    alignment: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ("symbol", "integer", "string"):
            raise ValueError(f"unknown constant kind {self.kind!r}")
        if (self.kind == "integer") != isinstance(self.value, int):
            raise ValueError("integer constants must carry int values")
        if self.kind == "symbol" and not self.value:
            raise ValueError("symbol constants cannot be empty")

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class ConceptNode:
    variable: str
    label: str
    # derived from the graph on parse; not part of node identity
    node_kind: str = field(default="entity", compare=False)
    alignment: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if not self.label:
            raise ValueError(f"node {self.variable!r} has an empty label")
        if self.node_kind not in ("predicate", "entity", "modifier", "special"):
            raise ValueError(f"unknown node kind {self.node_kind!r}")


@dataclass(frozen=True)
class Relation:
    source: str
    role: str
    target: Union[str, Constant]

    def __post_init__(self):
        if not self.role.startswith(":"):
            raise ValueError(f"role {self.role!r} does not start with ':'")

    @property
    def is_attribute(self) -> bool:
        return isinstance(self.target, Constant)


@dataclass(frozen=True, eq=False)
class AmrGraph:
    """A parsed AMR graph.

    Relations are kept in document order, which for parsed graphs is the
    depth-first order of the PENMAN text. Graphs compare equal when root,
    nodes and sentence index agree and the relations match as a multiset,
    so moving where a re-entrant node is expanded does not change identity.
    """
    root: str
    nodes: Dict[str, ConceptNode]
    relations: Tuple[Relation, ...] = ()
    source_sentence_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.root not in self.nodes:
            raise ValueError(f"root {self.root!r} is not a node")
        for var, node in self.nodes.items():
            if node.variable != var:
                raise ValueError(f"node keyed {var!r} carries variable {node.variable!r}")
        for rel in self.relations:
            if rel.source not in self.nodes:
                raise ValueError(f"relation source {rel.source!r} is not a node")
            if not rel.is_attribute and rel.target not in self.nodes:
                raise ValueError(f"relation target {rel.target!r} is not a node")
        if self.source_sentence_index < 0:
            raise ValueError("source_sentence_index must be >= 0")

    def _key(self):
        return (self.root, self.nodes, Counter(self.relations), self.source_sentence_index)

    def __eq__(self, other):
        if not isinstance(other, AmrGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((self.root, frozenset(self.nodes.items()), frozenset(Counter(self.relations).items()),
                     self.source_sentence_index))

    def outgoing(self, variable: str) -> List[Relation]:
        return [r for r in self.relations if r.source == variable]


def has_sense_suffix(label: str) -> bool:
    return SENSE_SUFFIX.search(label) is not None


def strip_sense_suffix(label: str) -> str:
    """``"establish-01"`` -> ``"establish"``; other labels pass through."""
    stripped = SENSE_SUFFIX.sub("", label)
    return stripped or label


# -- lexer --------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<slash>/)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<role>:[^\s()"~]*)
  | (?P<align>~(?:[a-z]+\.)?\d+(?:,\d+)*)
  | (?P<symbol>[^\s()"~/:][^\s()"~]*)
    """,
    re.VERBOSE,
)

_Tok = Tuple[str, str, int]


def _lex(text: str) -> List[_Tok]:
    tokens: List[_Tok] = []
    pos = 0
    at_line_start = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos] == '"':
                raise PenmanSyntaxError("unterminated string literal", pos)
            raise PenmanSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            at_line_start = at_line_start or "\n" in value
        elif kind == "comment" and at_line_start:
            pass  # metadata line
        elif kind == "comment":
            raise PenmanSyntaxError("'#' is only allowed at the start of a line", pos)
        else:
            tokens.append((kind, value, pos))
            at_line_start = False
        pos = m.end()
    return tokens


def _parse_alignment(raw: str) -> Tuple[int, ...]:
    digits = raw[1:].split(".")[-1]
    return tuple(int(d) for d in digits.split(","))


def _unescape(quoted: str) -> str:
    return re.sub(r"\\(.)", r"\1", quoted[1:-1])


def _escape(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


# -- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: List[_Tok], end: int):
        self.tokens = tokens
        self.i = 0
        self.end = end
        self.labels: Dict[str, Tuple[str, Optional[Tuple[int, ...]]]] = {}
        # relation targets are provisional until every variable is known
        self.raw_relations: List[Tuple[str, str, object, int]] = []

    def peek(self) -> Optional[_Tok]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise UnbalancedParens(self.end)
        self.i += 1
        return tok

    def alignment(self) -> Optional[Tuple[int, ...]]:
        tok = self.peek()
        if tok is not None and tok[0] == "align":
            self.i += 1
            return _parse_alignment(tok[1])
        return None

    def node(self) -> str:
        kind, value, pos = self.take()
        if kind != "lparen":
            raise PenmanSyntaxError(f"expected '(' but found {value!r}", pos)
        kind, var, pos = self.take()
        if kind != "symbol":
            raise PenmanSyntaxError(f"expected a variable but found {var!r}", pos)
        if var in self.labels:
            raise DuplicateVariable(var)
        kind, value, pos = self.take()
        if kind != "slash":
            raise PenmanSyntaxError(f"expected '/' after variable {var!r}", pos)
        kind, label, pos = self.take()
        if kind != "symbol":
            raise PenmanSyntaxError(f"expected a concept but found {label!r}", pos)
        self.labels[var] = (label, self.alignment())
        while True:
            kind, value, pos = self.take()
            if kind == "rparen":
                return var
            if kind != "role":
                raise PenmanSyntaxError(f"expected a role or ')' but found {value!r}", pos)
            if value == ":":
                raise PenmanSyntaxError("empty role", pos)
            self.relation(var, value, pos)

    def relation(self, source: str, role: str, role_pos: int) -> None:
        tok = self.peek()
        if tok is None:
            raise UnbalancedParens(self.end)
        kind, value, pos = tok
        if kind == "lparen":
            # reserve the slot so relations stay in document order
            slot = len(self.raw_relations)
            self.raw_relations.append((source, role, None, role_pos))
            target = self.node()
            self.raw_relations[slot] = (source, role, ("var", target), role_pos)
        elif kind == "string":
            self.i += 1
            const = Constant(_unescape(value), "string", self.alignment())
            self.raw_relations.append((source, role, const, pos))
        elif kind == "symbol":
            self.i += 1
            self.raw_relations.append((source, role, ("atom", value, self.alignment()), pos))
        elif kind == "rparen":
            raise PenmanSyntaxError(f"role {role} has no target", pos)
        else:
            raise PenmanSyntaxError(f"unexpected {value!r} after role {role}", pos)


def _classify(graph_nodes: Dict[str, Tuple[str, object]], relations: List[Relation], root: str
              ) -> Dict[str, str]:
    incoming: Dict[str, List[str]] = {}
    for rel in relations:
        if not rel.is_attribute:
            incoming.setdefault(rel.target, []).append(rel.role)
    kinds = {}
    for var, (label, _) in graph_nodes.items():
        if label in SPECIAL_CONCEPTS or label.endswith("-entity") or label.endswith("-quantity"):
            kinds[var] = "special"
        elif has_sense_suffix(label):
            kinds[var] = "predicate"
        elif var != root and incoming.get(var) and all(r in MODIFIER_ROLES for r in incoming[var]):
            kinds[var] = "modifier"
        else:
            kinds[var] = "entity"
    return kinds


def parse_penman(text: str, source_sentence_index: int = 0) -> AmrGraph:
    """Parse a single PENMAN expression into an :class:`AmrGraph`.

    Lines starting with ``#`` are treated as metadata and skipped. A bare
    symbol that names a variable introduced anywhere in the graph becomes
    a re-entrant edge to that node; a bare symbol that looks like a
    variable (letter plus optional digits) but is never introduced raises
    :class:`DanglingReference`.
    """
    tokens = _lex(text)
    if not tokens:
        raise EmptyInput()
    depth = 0
    for kind, _, pos in tokens:
        if kind == "lparen":
            depth += 1
        elif kind == "rparen":
            depth -= 1
            if depth < 0:
                raise UnbalancedParens(pos)
    if depth != 0:
        raise UnbalancedParens(len(text))

    parser = _Parser(tokens, len(text))
    root = parser.node()
    if parser.peek() is not None:
        _, value, pos = parser.peek()
        raise PenmanSyntaxError(f"trailing content {value!r} after the graph", pos)

    relations = []
    for source, role, target, _ in parser.raw_relations:
        if isinstance(target, tuple) and target[0] == "var":
            target = target[1]
        elif isinstance(target, tuple):
            _, atom, align = target
            if atom in parser.labels and align is None:
                target = atom
            elif VARIABLE.match(atom) and align is None:
                raise DanglingReference(atom)
            elif INTEGER.match(atom):
                target = Constant(int(atom), "integer", align)
            else:
                target = Constant(atom, "symbol", align)
        relations.append(Relation(source, role, target))

    kinds = _classify(parser.labels, relations, root)
    nodes = {
        var: ConceptNode(var, label, kinds[var], align)
        for var, (label, align) in parser.labels.items()
    }
    return AmrGraph(root, nodes, tuple(relations), source_sentence_index)


# -- serialization ------------------------------------------------------------

def _align_suffix(alignment: Optional[Tuple[int, ...]]) -> str:
    if not alignment:
        return ""
    return "~e." + ",".join(str(i) for i in alignment)


def _format_constant(const: Constant) -> str:
    if const.kind == "string":
        text = _escape(const.value)
    else:
        text = str(const.value)
    return text + _align_suffix(const.alignment)


def serialize_penman(g: AmrGraph) -> str:
    """Render ``g`` on a single line.

    The first mention of each variable expands the node; later mentions
    emit the bare variable. Output is deterministic for equal graphs.
    """
    by_source: Dict[str, List[Relation]] = {}
    for rel in g.relations:
        by_source.setdefault(rel.source, []).append(rel)
    expanded = set()
    parts: List[str] = []

    def emit(var: str) -> None:
        expanded.add(var)
        node = g.nodes[var]
        parts.append(f"({var} / {node.label}{_align_suffix(node.alignment)}")
        for rel in by_source.get(var, ()):
            parts.append(f" {rel.role} ")
            if rel.is_attribute:
                parts.append(_format_constant(rel.target))
            elif rel.target in expanded:
                parts.append(rel.target)
            else:
                emit(rel.target)
        parts.append(")")

    emit(g.root)
    return "".join(parts)


def _walk(g: AmrGraph) -> Iterator[str]:
    by_source: Dict[str, List[Relation]] = {}
    for rel in g.relations:
        by_source.setdefault(rel.source, []).append(rel)
    seen = set()
    stack = [g.root]
    while stack:
        var = stack.pop()
        if var in seen:
            continue
        seen.add(var)
        yield var
        children = [r.target for r in by_source.get(var, ()) if not r.is_attribute]
        stack.extend(reversed(children))
    # nodes unreachable from the root (only possible for hand-built graphs)
    for var in g.nodes:
        if var not in seen:
            yield var


def concept_nodes(g: AmrGraph) -> List[ConceptNode]:
    """All concept nodes in first-appearance order; attributes are not nodes."""
    return [g.nodes[var] for var in _walk(g)]


def attributes_of(g: AmrGraph, variable: str) -> List[Tuple[str, Constant]]:
    """``(role, Constant)`` pairs whose source is ``variable``, in document order."""
    if variable not in g.nodes:
        raise UnknownVariable(variable)
    return [(r.role, r.target) for r in g.relations if r.source == variable and r.is_attribute]
