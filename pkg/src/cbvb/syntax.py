"""Concrete syntax: parsing, printing, JSON, and tree rendering.

Lambda terms::

    term  ::= '\\' ident+ '.' term | atom+ ['\\' ident+ '.' term]
    atom  ::= ident | 'bot' | '(' term ')'

Resource terms::

    rterm  ::= value | simple
    value  ::= ident | '\\' ident '.' simple
    simple ::= satom+
    satom  ::= '[' [value (',' value)*] ']' | '(' simple ')'

``λ`` and ``⊥`` are accepted for ``\\`` and ``bot``.  Printing regenerates
binder names ``x0, x1, …`` by depth, skipping names that occur free.
"""

from __future__ import annotations

import itertools
import json
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from .resource import Bag, RAbs, RApp, TermSet, is_rvalue, is_simple
from .terms import Abs, App, Bot, Bound, BOT, Node, Term, Var, free_vars

__all__ = [
    "SourceSpan", "ParseError", "parse_term", "parse_resource", "parse_termset",
    "parse_termset_lines", "show", "show_set", "to_json", "from_json",
    "render_tree", "tree_nodes", "binder_names",
]

IDENT_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_']*")
RESERVED = {"bot"}


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan, text: str = ""):
        self.message = message
        self.span = span
        self.text = text
        super().__init__(self.__str__())

    @property
    def line_col(self) -> tuple[int, int]:
        before = self.text[: self.span.start]
        line = before.count("\n") + 1
        col = self.span.start - (before.rfind("\n") + 1) + 1
        return line, col

    def __str__(self):
        line, col = self.line_col
        return f"{line}:{col}: {self.message}"


@dataclass(frozen=True)
class _Tok:
    kind: str  # lam . ( ) [ ] , ; { } ident bot eof
    text: str
    start: int
    end: int


_PUNCT = {"\\": "lam", "λ": "lam", ".": ".", "(": "(", ")": ")", "[": "[",
          "]": "]", ",": ",", ";": ";", "{": "{", "}": "}", "⊥": "bot"}


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in _PUNCT:
            toks.append(_Tok(_PUNCT[c], c, i, i + 1))
            i += 1
        else:
            m = IDENT_RE.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {c!r}", SourceSpan(i, i + 1), text)
            word = m.group()
            toks.append(_Tok("bot" if word == "bot" else "ident", word, i, m.end()))
            i = m.end()
    toks.append(_Tok("eof", "", n, n))
    return toks


_DESCR = {"lam": "'\\'", "ident": "identifier", "eof": "end of input", "bot": "'bot'"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.scope: list[str] = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def error(self, expected: str) -> ParseError:
        t = self.tok
        found = _DESCR.get(t.kind, repr(t.text)) if t.kind != "ident" else repr(t.text)
        return ParseError(f"expected {expected}, found {found}", SourceSpan(t.start, t.end), self.text)

    def eat(self, kind: str, expected: str | None = None) -> _Tok:
        if self.tok.kind != kind:
            raise self.error(expected or _DESCR.get(kind, repr(kind)))
        t = self.tok
        self.pos += 1
        return t

    def variable(self, name: str):
        for depth, bound in enumerate(reversed(self.scope)):
            if bound == name:
                return Bound(depth)
        return Var(name)

    # lambda terms -----------------------------------------------------------

    def term(self) -> Term:
        if self.tok.kind == "lam":
            return self.abstraction()
        atoms = [self.atom()]
        while self.tok.kind in ("ident", "bot", "("):
            atoms.append(self.atom())
        if self.tok.kind == "lam":
            atoms.append(self.abstraction())
        t = atoms[0]
        for a in atoms[1:]:
            t = App(t, a)
        return t

    def abstraction(self) -> Term:
        self.eat("lam")
        names = [self.eat("ident", "binder name").text]
        while self.tok.kind == "ident":
            names.append(self.eat("ident").text)
        self.eat(".", "'.'")
        self.scope.extend(names)
        if self.tok.kind in ("eof", ")", ";", "}"):
            raise self.error("abstraction body")
        body = self.term()
        del self.scope[len(self.scope) - len(names):]
        for _ in names:
            body = Abs(body)
        return body

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "ident":
            self.pos += 1
            return self.variable(t.text)
        if t.kind == "bot":
            self.pos += 1
            return BOT
        if t.kind == "(":
            self.pos += 1
            inner = self.term()
            self.eat(")", "')'")
            return inner
        raise self.error("a term")

    # resource terms ---------------------------------------------------------

    def rterm(self) -> Node:
        if self.tok.kind in ("ident", "lam"):
            return self.rvalue()
        return self.simple()

    def rvalue(self) -> Node:
        t = self.tok
        if t.kind == "ident":
            self.pos += 1
            return self.variable(t.text)
        if t.kind == "lam":
            self.pos += 1
            name = self.eat("ident", "binder name").text
            if self.tok.kind == "ident":
                raise self.error("'.' (resource abstractions take one binder)")
            self.eat(".", "'.'")
            self.scope.append(name)
            if self.tok.kind not in ("[", "("):
                raise self.error("a bag or '(' as abstraction body")
            body = self.simple()
            self.scope.pop()
            return RAbs(body)
        raise self.error("a resource value")

    def simple(self) -> Node:
        t = self.satom()
        while self.tok.kind in ("[", "("):
            t = RApp(t, self.satom())
        return t

    def satom(self) -> Node:
        if self.tok.kind == "[":
            self.pos += 1
            elems = []
            if self.tok.kind != "]":
                elems.append(self.rvalue())
                while self.tok.kind == ",":
                    self.pos += 1
                    elems.append(self.rvalue())
            self.eat("]", "',' or ']'")
            return Bag(elems)
        if self.tok.kind == "(":
            self.pos += 1
            inner = self.simple()
            self.eat(")", "')'")
            return inner
        raise self.error("a bag or '('")

    def finish(self):
        if self.tok.kind != "eof":
            raise self.error("end of input")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


def parse_resource(text: str) -> Node:
    p = _Parser(text)
    t = p.rterm()
    p.finish()
    return t


def parse_termset(text: str) -> TermSet:
    """``{ t1 ; t2 ; … }`` or ``{}``; a bare term is read as a singleton."""
    p = _Parser(text)
    if p.tok.kind != "{":
        t = p.rterm()
        p.finish()
        return TermSet([t])
    p.pos += 1
    elems = []
    if p.tok.kind != "}":
        elems.append(p.rterm())
        while p.tok.kind == ";":
            p.pos += 1
            elems.append(p.rterm())
    p.eat("}", "';' or '}'")
    p.finish()
    return TermSet(elems)


def parse_termset_lines(text: str) -> TermSet:
    """One resource term per line; ``#`` starts a comment."""
    elems = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            try:
                elems.append(parse_resource(body))
            except ParseError as exc:
                span = SourceSpan(exc.span.start + offset, exc.span.end + offset)
                raise ParseError(exc.message, span, text) from None
        offset += len(line)
    return TermSet(elems)


# ----------------------------------------------------------------------------
# printing

def binder_names(free: Iterable[str]) -> Iterator[str]:
    free = set(free)
    return (n for n in (f"x{i}" for i in itertools.count()) if n not in free)


class _Namer:
    def __init__(self, t: Node):
        self._gen = binder_names(free_vars(t))
        self._names: list[str] = []

    def at(self, depth: int) -> str:
        while len(self._names) <= depth:
            self._names.append(next(self._gen))
        return self._names[depth]

    def bound(self, index: int, depth: int) -> str:
        if index >= depth:
            return f"#{index - depth}"
        return self.at(depth - 1 - index)


def show(t: Node, unicode: bool = False) -> str:
    """Canonical text of a lambda term or resource term."""
    namer = _Namer(t)
    lam = "λ" if unicode else "\\"
    bot = "⊥" if unicode else "bot"
    out: list[str] = []

    def atom_like(u: Node) -> bool:
        return isinstance(u, (Var, Bound, Bot, Bag))

    def go(u: Node, depth: int):
        match u:
            case Var(name):
                out.append(name)
            case Bound(i):
                out.append(namer.bound(i, depth))
            case Bot():
                out.append(bot)
            case Abs(body) | RAbs(body):
                out.append(f"{lam}{namer.at(depth)}.")
                go(body, depth + 1)
            case App(f, a) | RApp(f, a):
                wrap_f = isinstance(f, Abs)
                if wrap_f:
                    out.append("(")
                go(f, depth)
                if wrap_f:
                    out.append(")")
                if atom_like(a):
                    if not isinstance(a, Bag):
                        out.append(" ")
                    go(a, depth)
                else:
                    out.append("(")
                    go(a, depth)
                    out.append(")")
            case Bag(elems):
                out.append("[")
                for k, e in enumerate(elems):
                    if k:
                        out.append(", ")
                    go(e, depth)
                out.append("]")
            case _:
                raise TypeError(f"cannot print {u!r}")

    go(t, 0)
    return "".join(out)


def show_set(es: Iterable[Node], unicode: bool = False) -> str:
    items = [show(e, unicode) for e in (es.elems if isinstance(es, TermSet) else sorted(es))]
    return "{ " + " ; ".join(items) + " }" if items else "{}"


# ----------------------------------------------------------------------------
# JSON

def to_json(t: Node) -> dict:
    namer = _Namer(t)

    def go(u: Node, depth: int):
        match u:
            case Var(name):
                return {"var": name}
            case Bound(i):
                return {"var": namer.bound(i, depth)}
            case Bot():
                return {"bot": True}
            case Abs(body) | RAbs(body):
                return {"abs": {"binder": namer.at(depth), "body": go(body, depth + 1)}}
            case App(f, a) | RApp(f, a):
                return {"app": [go(f, depth), go(a, depth)]}
            case Bag(elems):
                return {"bag": [go(e, depth) for e in elems]}
        raise TypeError(f"cannot serialise {u!r}")

    return go(t, 0)


def from_json(obj, resource: bool = False) -> Node:
    """Inverse of ``to_json``; ``resource`` selects the resource constructors."""
    scope: list[str] = []

    def go(o):
        if not isinstance(o, dict) or len(o) != 1:
            raise ValueError(f"malformed AST node: {o!r}")
        (tag, val), = o.items()
        if tag == "var":
            for depth, name in enumerate(reversed(scope)):
                if name == val:
                    return Bound(depth)
            return Var(val)
        if tag == "bot" and not resource:
            return BOT
        if tag == "abs":
            scope.append(val["binder"])
            body = go(val["body"])
            scope.pop()
            return RAbs(body) if resource else Abs(body)
        if tag == "app":
            f, a = val
            return RApp(go(f), go(a)) if resource else App(go(f), go(a))
        if tag == "bag" and resource:
            return Bag(go(e) for e in val)
        raise ValueError(f"unknown AST tag {tag!r}")

    return go(obj)


# ----------------------------------------------------------------------------
# tree rendering

def _tree_nodes(t: Term, truncated: set, namer: _Namer):
    """(label, children) in the style of the drawn Böhm trees.

    Applications are flattened into one ``@`` node over the head and its
    arguments; truncated positions show ``?``.
    """

    def go(u: Term, depth: int, path: tuple):
        if path in truncated:
            return ("?", [])
        match u:
            case Var(name):
                return (name, [])
            case Bound(i):
                return (namer.bound(i, depth), [])
            case Bot():
                return ("⊥", [])
            case Abs(body):
                return (f"λ{namer.at(depth)}", [go(body, depth + 1, path + (0,))])
            case App():
                parts = []
                p = path
                while isinstance(u, App) and p not in truncated:
                    parts.append((u.arg, p + (1,)))
                    u, p = u.fun, p + (0,)
                parts.append((u, p))
                parts.reverse()
                return ("@", [go(x, depth, q) for x, q in parts])
        raise TypeError(f"cannot render {u!r}")

    return go(t, 0, ())


def tree_nodes(bt) -> tuple | None:
    """The ``(label, children)`` tree of a ``BTResult``; None for the empty tree."""
    if bt.tree is None:
        return None
    return _tree_nodes(bt.tree, set(bt.truncated_positions), _Namer(bt.tree))


def render_tree(bt, style: str = "ascii") -> str:
    """Draw a ``BTResult`` as an indented tree, or serialise it as JSON."""
    tree = bt.tree
    if style == "json":
        doc = {
            "bt": None if tree is None else to_json(tree),
            "status": bt.status.value.lower(),
            "truncated": [list(p) for p in sorted(bt.truncated_positions)],
        }
        return json.dumps(doc, ensure_ascii=False)
    if tree is None:
        return "∅"
    label, kids = tree_nodes(bt)
    lines = [label]

    def walk(children: Sequence, prefix: str):
        for k, (lab, sub) in enumerate(children):
            last = k == len(children) - 1
            lines.append(prefix + ("└── " if last else "├── ") + lab)
            walk(sub, prefix + ("    " if last else "│   "))

    walk(kids, "")
    return "\n".join(lines)


def is_resource_node(t: Node) -> bool:
    return is_rvalue(t) or is_simple(t)
