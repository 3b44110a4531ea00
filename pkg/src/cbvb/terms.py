"""Terms of the call-by-value lambda calculus extended with an undefined value.

Bound variables are stored as de Bruijn indices (``Bound``), free variables by
name (``Var``).  Every node therefore *is* its canonical nameless form:
structural equality is alpha-equivalence, and hashing and ordering are
well-defined on alpha-classes.  Names only reappear when printing.

The total order on nodes compares the head constructor first
(variables < abstractions < applications < bot) and then the components
lexicographically.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

__all__ = [
    "Node", "Var", "Bound", "Abs", "App", "Bot", "BOT", "Term",
    "free_vars", "is_value", "contains_bot", "subst", "alpha_eq", "size",
    "shift", "instantiate", "abstract", "lam", "apps", "spine",
    "HeadContext", "NonValueArg", "plug_head_context", "subterm_at",
    "replace_at", "fresh_name",
]


class Node:
    """Base class of every syntax node (lambda terms and resource terms).

    ``key`` is the nested tuple used for ordering; ``loose`` is one more than
    the largest de Bruijn index that escapes the node (0 when the node has no
    dangling indices), which lets shifting skip whole subtrees.
    """

    __slots__ = ("key", "loose", "_hash")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Node) or self._hash != other._hash:
            return False
        return self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _init(self, key, loose, h):
        object.__setattr__(self, "key", key)
        object.__setattr__(self, "loose", loose)
        object.__setattr__(self, "_hash", h)

    def __reduce__(self):
        return (type(self), self._args())

    def children(self) -> tuple:
        return ()

    def __repr__(self):
        args = ", ".join(repr(a) for a in self._args())
        return f"{type(self).__name__}({args})"


class Var(Node):
    """A free variable, identified by its name."""

    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        self._init((0, 1, name), 0, hash((0, 1, name)))

    def _args(self):
        return (self.name,)


class Bound(Node):
    """A bound variable as a de Bruijn index (0 = innermost binder)."""

    __slots__ = ("index",)
    __match_args__ = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise ValueError("negative de Bruijn index")
        object.__setattr__(self, "index", index)
        self._init((0, 0, index), index + 1, hash((0, 0, index)))

    def _args(self):
        return (self.index,)


class Abs(Node):
    __slots__ = ("body",)
    __match_args__ = ("body",)

    def __init__(self, body: Term):
        object.__setattr__(self, "body", body)
        # hash from the children's cached hashes keeps construction linear
        self._init((1, body.key), max(body.loose - 1, 0), hash((1, body._hash)))

    def _args(self):
        return (self.body,)

    def children(self):
        return (self.body,)


class App(Node):
    __slots__ = ("fun", "arg")
    __match_args__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        object.__setattr__(self, "fun", fun)
        object.__setattr__(self, "arg", arg)
        self._init((2, fun.key, arg.key), max(fun.loose, arg.loose),
                   hash((2, fun._hash, arg._hash)))

    def _args(self):
        return (self.fun, self.arg)

    def children(self):
        return (self.fun, self.arg)


class Bot(Node):
    """The undefined value."""

    __slots__ = ()
    __match_args__ = ()

    def __init__(self):
        self._init((3,), 0, hash((3,)))

    def _args(self):
        return ()


BOT = Bot()

Term = Var | Bound | Abs | App | Bot


def is_value(t: Term) -> bool:
    return isinstance(t, (Var, Bound, Abs, Bot))


def free_vars(t: Node) -> frozenset[str]:
    """Names of the free variables of ``t``; bot has none."""
    out: set[str] = set()
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            out.add(n.name)
        else:
            stack.extend(_children(n))
    return frozenset(out)


def contains_bot(t: Term) -> bool:
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, Bot):
            return True
        stack.extend(_children(n))
    return False


def size(t: Node) -> int:
    """Number of constructors."""
    count = 0
    stack = [t]
    while stack:
        n = stack.pop()
        count += 1
        stack.extend(_children(n))
    return count


def _children(n: Node) -> Sequence[Node]:
    return n.children()


# ----------------------------------------------------------------------------
# de Bruijn plumbing

def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every index >= ``cutoff``."""
    if by == 0 or t.loose <= cutoff:
        return t
    match t:
        case Bound(i):
            return Bound(i + by)
        case Abs(body):
            return Abs(shift(body, by, cutoff + 1))
        case App(f, a):
            return App(shift(f, by, cutoff), shift(a, by, cutoff))
    return t


def instantiate(body: Term, value: Term, depth: int = 0) -> Term:
    """Replace index ``depth`` in ``body`` by ``value`` and close the gap.

    ``value`` lives outside the binder being removed; it is shifted as it
    moves under the binders of ``body``.
    """
    if body.loose <= depth:
        return body
    match body:
        case Bound(i):
            if i == depth:
                return shift(value, depth)
            return Bound(i - 1) if i > depth else body
        case Abs(b):
            return Abs(instantiate(b, value, depth + 1))
        case App(f, a):
            return App(instantiate(f, value, depth), instantiate(a, value, depth))
    return body


def _close(t: Term, name: str, depth: int) -> Term:
    match t:
        case Var(n):
            return Bound(depth) if n == name else t
        case Bound(i):
            return Bound(i + 1) if i >= depth else t
        case Abs(b):
            return Abs(_close(b, name, depth + 1))
        case App(f, a):
            return App(_close(f, name, depth), _close(a, name, depth))
    return t


def abstract(name: str, body: Term) -> Abs:
    """``λname.body``: the free occurrences of ``name`` become bound."""
    return Abs(_close(body, name, 0))


def lam(names: str | Iterable[str], body: Term) -> Term:
    """``λx1…xn.body`` from a name or a sequence of names."""
    if isinstance(names, str):
        names = [names]
    for n in reversed(list(names)):
        body = abstract(n, body)
    return body


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h N1 … Nk`` into its head and argument list."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


# ----------------------------------------------------------------------------

def subst(m: Term, x: str, n: Term) -> Term:
    """Capture-avoiding ``m[x := n]`` for a free variable ``x``."""
    if x not in free_vars(m):
        return m

    def go(t: Term, depth: int) -> Term:
        match t:
            case Var(name):
                return shift(n, depth) if name == x else t
            case Abs(b):
                return Abs(go(b, depth + 1))
            case App(f, a):
                return App(go(f, depth), go(a, depth))
        return t

    return go(m, 0)


def alpha_eq(m: Term, n: Term) -> bool:
    return m == n


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """Lowest-indexed ``base<i>`` not in ``avoid``."""
    avoid = set(avoid)
    stem = base.rstrip("0123456789'") or "x"
    i = 0
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


# ----------------------------------------------------------------------------
# paths: 0 = abstraction body / application function, 1 = application argument

def subterm_at(t: Node, path: Sequence[int]) -> Node:
    for i in path:
        t = _children(t)[i]
    return t


def replace_at(t: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match t:
        case Abs(b) if i == 0:
            return Abs(replace_at(b, rest, new))
        case App(f, a) if i == 0:
            return App(replace_at(f, rest, new), a)
        case App(f, a) if i == 1:
            return App(f, replace_at(a, rest, new))
    raise IndexError(f"no child {i} at this position")


def iter_positions(t: Node) -> Iterator[tuple[tuple[int, ...], Node]]:
    """Pre-order traversal yielding ``(path, subterm)``."""
    stack: list[tuple[tuple[int, ...], Node]] = [((), t)]
    while stack:
        path, n = stack.pop()
        yield path, n
        ch = _children(n)
        for i in range(len(ch) - 1, -1, -1):
            stack.append((path + (i,), ch[i]))


# ----------------------------------------------------------------------------

class NonValueArg(ValueError):
    """A head context was given an argument that is not a value."""


@dataclass(frozen=True)
class HeadContext:
    """``(λx1…xn.[-]) V1 … Vm``."""

    binders: tuple[str, ...] = ()
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "binders", tuple(self.binders))
        object.__setattr__(self, "args", tuple(self.args))


def plug_head_context(c: HeadContext, m: Term) -> Term:
    """Fill the hole with ``m``; the context binders capture free variables of ``m``."""
    for v in c.args:
        if not is_value(v):
            raise NonValueArg(f"head context argument is not a value: {v!r}")
    return apps(lam(c.binders, m), *c.args)
