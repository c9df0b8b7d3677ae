"""Path/predicate expression language over catalog entries.

Grammar (full EBNF in docs/expression-language.md):

    expression = step { step } [ "[" predicate "]" ]
    step       = ("/" | "//") (NAME | "*")
    predicate  = or-term
    or-term    = and-term { "or" and-term }
    and-term   = condition { "and" condition }
    condition  = "(" or-term ")"
               | "contains" "(" NAME "," STRING ")"
               | NAME "=" STRING

`/` selects children, `//` selects descendants at any depth. The predicate
applies to the final step only. Entries are elements named after their
collection; their children are `name`, `description`, `url`, `section`
(with `field` children), `field` and `link` elements. Evaluation always
resolves matches back to whole entries, in document order. String
comparisons are case-insensitive, matching the search facilities.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .model import COLLECTION_NAMES, Entry, KeywordEntry, PersonDescriptor, ResourceDescriptor
from .store import Catalog

MAX_PREDICATE_DEPTH = 32

CHILD = "child"
DESCENDANT = "descendant"


class ExpressionError(ValueError):
    """Syntax error with position and the token set that was expected."""

    def __init__(self, position: int, expected: tuple[str, ...], found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(
            f"at position {position}: expected {' or '.join(expected)}, found {found}"
        )


@dataclass(frozen=True)
class Contains:
    field: str
    text: str


@dataclass(frozen=True)
class Equals:
    field: str
    text: str


@dataclass(frozen=True)
class And:
    left: "Predicate"
    right: "Predicate"


@dataclass(frozen=True)
class Or:
    left: "Predicate"
    right: "Predicate"


Predicate = Union[Contains, Equals, And, Or]


@dataclass(frozen=True)
class Step:
    axis: str  # CHILD or DESCENDANT
    name: str  # element name, or "*"


@dataclass(frozen=True)
class PathExpression:
    steps: tuple[Step, ...]
    predicate: Optional[Predicate] = None

    def __post_init__(self) -> None:
        if not self.steps:
            raise ExpressionError(0, ("/", "//"), "empty expression")

    def __str__(self) -> str:
        return print_expression(self)


# --------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<DSLASH>//)
  | (?P<SLASH>/)
  | (?P<LBRACKET>\[) | (?P<RBRACKET>\])
  | (?P<LPAREN>\()   | (?P<RPAREN>\))
  | (?P<COMMA>,)
  | (?P<EQ>=)
  | (?P<STAR>\*)
  | (?P<STRING>'(?:[^']|'')*')
  | (?P<NAME>[^\W\d_][\w.-]*)
  | (?P<WS>\s+)
    """,
    re.VERBOSE | re.UNICODE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _lex(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExpressionError(pos, ("token",), repr(text[pos]))
        kind = match.lastgroup or ""
        if kind != "WS":
            tokens.append(_Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(_Token("END", "", len(text)))
    return tokens


def _unquote(literal: str) -> str:
    return literal[1:-1].replace("''", "'")


def _quote(text: str) -> str:
    return "'" + text.replace("'", "''") + "'"


# --------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def take(self, *kinds: str) -> _Token:
        token = self.peek()
        if token.kind not in kinds:
            found = token.text or "end of input"
            raise ExpressionError(token.position, kinds, found)
        self.index += 1
        return token

    def parse(self) -> PathExpression:
        steps = [self.step()]
        while self.peek().kind in ("SLASH", "DSLASH"):
            steps.append(self.step())
        predicate = None
        if self.peek().kind == "LBRACKET":
            self.take("LBRACKET")
            predicate = self.or_term(depth=1)
            self.take("RBRACKET")
        self.take("END")
        return PathExpression(tuple(steps), predicate)

    def step(self) -> Step:
        token = self.take("SLASH", "DSLASH")
        axis = CHILD if token.kind == "SLASH" else DESCENDANT
        name = self.take("NAME", "STAR")
        return Step(axis, name.text)

    def or_term(self, depth: int) -> Predicate:
        self._check_depth(depth)
        node = self.and_term(depth)
        while self.peek().kind == "NAME" and self.peek().text == "or":
            self.take("NAME")
            node = Or(node, self.and_term(depth + 1))
        return node

    def and_term(self, depth: int) -> Predicate:
        self._check_depth(depth)
        node = self.condition(depth)
        while self.peek().kind == "NAME" and self.peek().text == "and":
            self.take("NAME")
            node = And(node, self.condition(depth + 1))
        return node

    def condition(self, depth: int) -> Predicate:
        token = self.peek()
        if token.kind == "LPAREN":
            self.take("LPAREN")
            node = self.or_term(depth + 1)
            self.take("RPAREN")
            return node
        name = self.take("NAME")
        if name.text == "contains" and self.peek().kind == "LPAREN":
            self.take("LPAREN")
            field = self.take("NAME")
            self.take("COMMA")
            text = self.take("STRING")
            self.take("RPAREN")
            return Contains(field.text, _unquote(text.text))
        self.take("EQ")
        text = self.take("STRING")
        return Equals(name.text, _unquote(text.text))

    def _check_depth(self, depth: int) -> None:
        if depth > MAX_PREDICATE_DEPTH:
            raise ExpressionError(self.peek().position,
                                  ("predicate nesting <= %d" % MAX_PREDICATE_DEPTH,),
                                  "deeper nesting")


def parse_expression(text: str) -> PathExpression:
    """Parse an expression; raises ExpressionError with position on failure."""
    return _Parser(text).parse()


def _print_predicate(node: Predicate, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(node, Contains):
        return f"contains({node.field},{_quote(node.text)})"
    if isinstance(node, Equals):
        return f"{node.field}={_quote(node.text)}"
    prec = 2 if isinstance(node, And) else 1
    op = "and" if isinstance(node, And) else "or"
    text = (f"{_print_predicate(node.left, prec, False)} {op} "
            f"{_print_predicate(node.right, prec, True)}")
    # Parenthesize when precedence demands it, or to keep right-nested
    # chains distinct from the parser's left-associative default.
    if prec < parent_prec or (prec == parent_prec and right_side):
        return f"({text})"
    return text


def print_expression(expr: PathExpression) -> str:
    """Render the canonical text form; parse(print(e)) reproduces `e`'s meaning."""
    parts = []
    for step in expr.steps:
        parts.append("/" if step.axis == CHILD else "//")
        parts.append(step.name)
    if expr.predicate is not None:
        parts.append(f"[{_print_predicate(expr.predicate)}]")
    return "".join(parts)


# --------------------------------------------------------------------------
# Evaluation over the virtual catalog tree

@dataclass(frozen=True)
class _VNode:
    """One element of the virtual document an expression walks."""

    tag: str
    owner: Optional[Entry]
    fields: tuple[tuple[str, str], ...]  # (lowercased field name, value)
    children: tuple["_VNode", ...]


def _leaf(tag: str, owner: Entry, pairs: list[tuple[str, str]],
          children: tuple[_VNode, ...] = ()) -> _VNode:
    return _VNode(tag, owner, tuple((k.lower(), v) for k, v in pairs), children)


def _field_node(entry: Entry, fname: str, fvalue: str) -> _VNode:
    return _leaf("field", entry, [("name", fname), (fname, fvalue)])


def _entry_node(entry: Entry) -> _VNode:
    children: list[_VNode] = []
    fields: list[tuple[str, str]] = []

    if isinstance(entry, ResourceDescriptor):
        fields += [("name", entry.name),
                   ("description", entry.short_description),
                   ("description", entry.long_description)]
        children.append(_leaf("name", entry, [("name", entry.name)]))
        children.append(_leaf("description", entry, [("description", entry.short_description)]))
        children.append(_leaf("description", entry, [("description", entry.long_description)]))
        if entry.url is not None:
            fields.append(("url", entry.url))
            children.append(_leaf("url", entry, [("url", entry.url)]))
        for section in entry.sections:
            fields.extend(section.fields)
            field_nodes = tuple(_field_node(entry, k, v) for k, v in section.fields)
            children.append(_leaf("section", entry,
                                  [("name", section.name), *section.fields], field_nodes))
        links = entry.links
    elif isinstance(entry, PersonDescriptor):
        fields += [("name", entry.name), *entry.free_fields]
        children.append(_leaf("name", entry, [("name", entry.name)]))
        children.extend(_field_node(entry, k, v) for k, v in entry.free_fields)
        links = (entry.institute,) if entry.institute is not None else ()
    elif isinstance(entry, KeywordEntry):
        fields.append(("name", entry.name))
        children.append(_leaf("name", entry, [("name", entry.name)]))
        links = (entry.type_id,)
    else:
        fields += list(entry.fields)
        children.extend(_field_node(entry, k, v) for k, v in entry.fields)
        links = ()

    children.extend(_leaf("link", entry, [("ref", link.ref)]) for link in links)
    return _leaf(entry.id.collection, entry, fields, tuple(children))


def _descendants(node: _VNode) -> Iterator[_VNode]:
    for child in node.children:
        yield child
        yield from _descendants(child)


def _field_values(node: _VNode, field: str) -> list[str]:
    wanted = field.lower()
    return [v for k, v in node.fields if k == wanted]


def _holds(node: _VNode, predicate: Predicate) -> bool:
    if isinstance(predicate, Contains):
        needle = predicate.text.lower()
        return any(needle in v.lower() for v in _field_values(node, predicate.field))
    if isinstance(predicate, Equals):
        wanted = predicate.text.lower()
        return any(v.lower() == wanted for v in _field_values(node, predicate.field))
    if isinstance(predicate, And):
        return _holds(node, predicate.left) and _holds(node, predicate.right)
    return _holds(node, predicate.left) or _holds(node, predicate.right)


def evaluate(catalog: Catalog, expr: PathExpression) -> list[Entry]:
    """Evaluate `expr` against the catalog's virtual tree.

    Returns the owning entries of every matched node, deduplicated, in
    document order. Unknown element names simply select nothing.
    """
    entry_nodes = tuple(
        _entry_node(entry)
        for name in COLLECTION_NAMES
        for entry in catalog.collections[name]
    )
    root = _VNode("", None, (), entry_nodes)

    current: list[_VNode] = [root]
    for step in expr.steps:
        matched: list[_VNode] = []
        for node in current:
            pool = node.children if step.axis == CHILD else tuple(_descendants(node))
            matched.extend(c for c in pool if step.name == "*" or c.tag == step.name)
        current = matched

    if expr.predicate is not None:
        current = [node for node in current if _holds(node, expr.predicate)]

    hits: list[Entry] = []
    seen: set = set()
    for node in current:
        owner = node.owner
        if owner is not None and owner.id not in seen:
            seen.add(owner.id)
            hits.append(owner)
    return hits
