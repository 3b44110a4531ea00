"""Approximants, the approximation order, and bounded Böhm trees.

Approximants are the terms of::

    A ::= B | C
    B ::= x | λx.A | bot | x B A1 … Ak
    C ::= (λx.A)(y B A1 … Ak)

``A ⊑ N`` holds when ``N`` is obtained from ``A`` by replacing occurrences of
bot with values.  The greatest approximant below a term is computed directly
(``direct_approximant``); a Böhm tree is the limit of these along a
reduction, so a finite run yields a lower bound of it.
"""

from __future__ import annotations

import enum
from collections.abc import Iterator
from dataclasses import dataclass, field

from .reduction import LeftmostOutermost, first_redex, iter_reducts
from .terms import Abs, App, Bot, Bound, BOT, Term, Var, is_value, spine

__all__ = [
    "ApproxClass", "approximant_class", "is_approximant", "leq", "Incompatible",
    "join", "direct_approximant", "BTStatus", "BTResult", "boehm_tree",
    "truncate", "Verdict", "is_approximant_of", "is_potentially_valuable",
    "MonotonicityViolation",
]


class ApproxClass(enum.Enum):
    A_B = "A_B"
    A_C = "A_C"

    def __str__(self):
        return self.value


def _is_var(t: Term) -> bool:
    return isinstance(t, (Var, Bound))


def _neutral(t: Term) -> bool:
    """``y B A1 … Ak``."""
    head, args = spine(t)
    return _is_var(head) and bool(args) and _is_b(args[0]) and all(_is_a(a) for a in args[1:])


def _is_b(t: Term) -> bool:
    if _is_var(t) or isinstance(t, Bot):
        return True
    if isinstance(t, Abs):
        return _is_a(t.body)
    return _neutral(t)


def _is_c(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Abs) and _is_a(t.fun.body) and _neutral(t.arg)


def _is_a(t: Term) -> bool:
    return _is_b(t) or _is_c(t)


def approximant_class(t: Term) -> ApproxClass | None:
    if _is_b(t):
        return ApproxClass.A_B
    if _is_c(t):
        return ApproxClass.A_C
    return None


def is_approximant(t: Term) -> bool:
    return approximant_class(t) is not None


def leq(a: Term, n: Term) -> bool:
    """``a ⊑ n``: equal up to bot in ``a`` standing for values of ``n``."""
    if a is n or a == n:
        return True
    match a:
        case Bot():
            return is_value(n)
        case Abs(body):
            return isinstance(n, Abs) and leq(body, n.body)
        case App(f, x):
            return isinstance(n, App) and leq(f, n.fun) and leq(x, n.arg)
    return False


class Incompatible(ValueError):
    """Two approximants without a common upper bound."""


def join(a1: Term, a2: Term) -> Term:
    """Least upper bound of two compatible terms."""
    if a1 == a2:
        return a1
    if isinstance(a1, Bot) and is_value(a2):
        return a2
    if isinstance(a2, Bot) and is_value(a1):
        return a1
    match a1, a2:
        case Abs(b1), Abs(b2):
            return Abs(join(b1, b2))
        case App(f1, x1), App(f2, x2):
            return App(join(f1, f2), join(x1, x2))
    raise Incompatible("shapes clash outside bot positions")


def direct_approximant(n: Term) -> Term | None:
    """The greatest approximant ``A ⊑ n``, or None if there is none."""
    match n:
        case Var() | Bound() | Bot():
            return n
        case Abs(body):
            d = direct_approximant(body)
            return BOT if d is None else Abs(d)
    head, args = spine(n)
    if _is_var(head):
        ds = []
        for a in args:
            d = direct_approximant(a)
            if d is None:
                return None
            ds.append(d)
        if not _is_b(ds[0]):
            return None
        out = head
        for d in ds:
            out = App(out, d)
        return out
    if isinstance(head, Abs) and len(args) == 1 and isinstance(args[0], App):
        arg_head, _ = spine(args[0])
        if not _is_var(arg_head):
            return None
        d_arg = direct_approximant(args[0])
        d_body = direct_approximant(head.body)
        if d_arg is None or d_body is None:
            return None
        return App(Abs(d_body), d_arg)
    return None


# ----------------------------------------------------------------------------

class BTStatus(enum.Enum):
    EXACT = "Exact"
    PARTIAL = "Partial"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BTResult:
    """A finite prefix of a Böhm tree; ``tree is None`` is the empty tree."""

    tree: Term | None
    status: BTStatus
    truncated_positions: frozenset[tuple[int, ...]] = field(default_factory=frozenset)
    steps: int = 0


class MonotonicityViolation(AssertionError):
    pass


def truncate(a: Term, depth: int) -> tuple[Term, frozenset]:
    """Cut an approximant below ``depth`` tree layers.

    The result keeps ``depth`` layers of the drawn tree: every abstraction
    node and every application node is one layer, and an application node
    covers its head and all its arguments.  A variable below the last layer
    becomes bot, and so does an abstraction whose body would fall below it.
    Heads of applications and the abstraction of a ``(λx.A)(y …)`` node are
    kept since bot cannot stand there; their subtrees are cut further down.
    """
    cut: set[tuple[int, ...]] = set()

    def go(t: Term, level: int, path: tuple) -> Term:
        room = depth - 1 if isinstance(t, Abs) else depth
        if level >= room and is_value(t) and not isinstance(t, Bot):
            cut.add(path)
            return BOT
        match t:
            case Abs(body):
                return Abs(go(body, level + 1, path + (0,)))
            case App(Abs(body), arg):
                # (λx.A)(y …): the abstraction is a child layer, its body the next
                new_body = go(body, level + 2, path + (0, 0))
                return App(Abs(new_body), go(arg, level + 1, path + (1,)))
            case App():
                head, args = spine(t)
                k = len(args)
                out = head
                for i, x in enumerate(args):
                    p = path + (0,) * (k - 1 - i) + (1,)
                    out = App(out, go(x, level + 1, p))
                return out
        return t

    return go(a, 0, ()), frozenset(cut)


def _trace(m: Term, fuel: int) -> Iterator[Term]:
    yield m
    if fuel <= 0:
        return
    for k, t in enumerate(iter_reducts(m, LeftmostOutermost()), start=1):
        yield t
        if k >= fuel:
            return


def boehm_tree(m: Term, fuel: int = 500, depth: int | None = None,
               check_monotone: bool = False) -> BTResult:
    """Reduce leftmost-outermost for at most ``fuel`` steps, read off the tree.

    ``Exact`` means a normal form was reached and nothing was cut away.
    With ``check_monotone`` every intermediate approximant is checked to lie
    below the next one.
    """
    last = m
    steps = -1
    prev = None
    for steps, last in enumerate(_trace(m, fuel)):
        if check_monotone:
            cur = direct_approximant(last)
            if prev is not None and (cur is None or not leq(prev, cur)):
                raise MonotonicityViolation(f"approximant shrank at step {steps}")
            prev = cur
    normal = first_redex(last) is None
    tree = direct_approximant(last)
    cut: frozenset = frozenset()
    if tree is not None and depth is not None:
        tree, cut = truncate(tree, depth)
    status = BTStatus.EXACT if normal and not cut else BTStatus.PARTIAL
    return BTResult(tree, status, cut, max(steps, 0))


class Verdict(enum.Enum):
    YES = "Yes"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def is_approximant_of(a: Term, m: Term, fuel: int = 500) -> Verdict:
    """Yes when ``a`` is certified to be an approximant of ``m``.

    Membership is only semi-decidable, so a negative answer is Unknown.
    """
    if not is_approximant(a):
        return Verdict.UNKNOWN
    tree = boehm_tree(m, fuel).tree
    if tree is not None and leq(a, tree):
        return Verdict.YES
    return Verdict.UNKNOWN


def is_potentially_valuable(m: Term, fuel: int = 500) -> Verdict:
    """Yes once some approximant of ``m`` has been found.

    A term is potentially valuable exactly when it has an approximant; the
    bare bot counts (``λx.Ω`` is a value and its tree is bot).
    """
    return Verdict.YES if boehm_tree(m, fuel).tree is not None else Verdict.UNKNOWN
