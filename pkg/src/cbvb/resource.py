"""The call-by-value resource calculus.

Resource values are variables and abstractions ``λx.t`` over simple terms;
simple terms are bags ``[v1, …, vk]`` of values and applications ``s t``.
Variables are shared with the lambda-term syntax (``Var`` for free names,
``Bound`` for de Bruijn indices).  Bags keep their elements sorted by the
term order, so equal multisets are equal nodes.

Reduction works on finite sets of terms.  A beta step replaces the bound
variable linearly (one bag element per occurrence, all assignments taken),
a bag of cardinality other than one in function position erases the whole
term, and two sigma rules permute applications as in the lambda calculus.
"""

from __future__ import annotations

import enum
import itertools
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from more_itertools import distinct_permutations

from .reduction import RandomSeeded
from .terms import Bound, Node, Var, iter_positions, subterm_at

__all__ = [
    "RAbs", "RApp", "Bag", "RValue", "Simple", "ResourceTerm", "TermSet",
    "is_rvalue", "is_simple", "r_shift", "r_abstract", "degree", "linear_subst",
    "RKind", "ROccurrence", "r_redex_kind", "r_contract", "r_find_redexes",
    "r_first_redex", "r_step", "r_normalize", "nf_term", "nf_stepwise", "Deterministic",
    "RandomSeeded", "NotMember", "InvalidResourceRedex", "is_resource_approximant",
    "height", "size", "is_r_normal", "rspine", "rapps", "bag_of",
]


class RAbs(Node):
    __slots__ = ("body",)
    __match_args__ = ("body",)

    def __init__(self, body: Simple):
        if not is_simple(body):
            raise TypeError("resource abstraction body must be a simple term")
        object.__setattr__(self, "body", body)
        self._init((5, body.key), max(body.loose - 1, 0), hash((5, body._hash)))

    def _args(self):
        return (self.body,)

    def children(self):
        return (self.body,)


class RApp(Node):
    __slots__ = ("fun", "arg")
    __match_args__ = ("fun", "arg")

    def __init__(self, fun: Simple, arg: Simple):
        if not (is_simple(fun) and is_simple(arg)):
            raise TypeError("resource application needs simple terms on both sides")
        object.__setattr__(self, "fun", fun)
        object.__setattr__(self, "arg", arg)
        self._init((6, fun.key, arg.key), max(fun.loose, arg.loose),
                   hash((6, fun._hash, arg._hash)))

    def _args(self):
        return (self.fun, self.arg)

    def children(self):
        return (self.fun, self.arg)


class Bag(Node):
    """A finite multiset of resource values, stored sorted."""

    __slots__ = ("elems",)
    __match_args__ = ("elems",)

    def __init__(self, elems: Iterable[RValue] = ()):
        elems = tuple(sorted(elems))
        for e in elems:
            if not is_rvalue(e):
                raise TypeError("bag elements must be resource values")
        object.__setattr__(self, "elems", elems)
        loose = max((e.loose for e in elems), default=0)
        self._init((4, tuple(e.key for e in elems)), loose,
                   hash((4,) + tuple(e._hash for e in elems)))

    def _args(self):
        return (self.elems,)

    def children(self):
        return self.elems

    def __len__(self):
        return len(self.elems)


RValue = Var | Bound | RAbs
Simple = Bag | RApp
ResourceTerm = RValue | Simple


def is_rvalue(t) -> bool:
    return isinstance(t, (Var, Bound, RAbs))


def is_simple(t) -> bool:
    return isinstance(t, (Bag, RApp))


def bag_of(*elems: RValue) -> Bag:
    return Bag(elems)


def rapps(head: Simple, *args: Simple) -> Simple:
    for a in args:
        head = RApp(head, a)
    return head


def rspine(t: Simple) -> tuple[Simple, list[Simple]]:
    args = []
    while isinstance(t, RApp):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


class TermSet:
    """A finite set of resource terms iterated in canonical order."""

    __slots__ = ("_set", "_sorted")

    def __init__(self, elems: Iterable[Node] = ()):
        self._set = frozenset(elems)
        self._sorted = None

    @property
    def elems(self) -> tuple[Node, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self._set))
        return self._sorted

    def as_frozenset(self) -> frozenset:
        return self._set

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self._set)

    def __bool__(self):
        return bool(self._set)

    def __contains__(self, item):
        return item in self._set

    def __eq__(self, other):
        if isinstance(other, TermSet):
            return self._set == other._set
        if isinstance(other, (set, frozenset)):
            return self._set == other
        return NotImplemented

    def __hash__(self):
        return hash(self._set)

    def __or__(self, other):
        return TermSet(self._set | _as_set(other))

    def __and__(self, other):
        return TermSet(self._set & _as_set(other))

    def __sub__(self, other):
        return TermSet(self._set - _as_set(other))

    def __le__(self, other):
        return self._set <= _as_set(other)

    def __ge__(self, other):
        return self._set >= _as_set(other)

    def filter(self, pred) -> TermSet:
        return TermSet(e for e in self._set if pred(e))

    def __repr__(self):
        return f"TermSet({list(self.elems)!r})"


def _as_set(x) -> frozenset:
    return x._set if isinstance(x, TermSet) else frozenset(x)


# ----------------------------------------------------------------------------
# index plumbing

def r_shift(t: Node, by: int, cutoff: int = 0) -> Node:
    if by == 0 or t.loose <= cutoff:
        return t
    match t:
        case Bound(i):
            return Bound(i + by)
        case RAbs(body):
            return RAbs(r_shift(body, by, cutoff + 1))
        case RApp(f, a):
            return RApp(r_shift(f, by, cutoff), r_shift(a, by, cutoff))
        case Bag(elems):
            return Bag(r_shift(e, by, cutoff) for e in elems)
    return t


def _r_close(t: Node, name: str, depth: int) -> Node:
    match t:
        case Var(n):
            return Bound(depth) if n == name else t
        case Bound(i):
            return Bound(i + 1) if i >= depth else t
        case RAbs(body):
            return RAbs(_r_close(body, name, depth + 1))
        case RApp(f, a):
            return RApp(_r_close(f, name, depth), _r_close(a, name, depth))
        case Bag(elems):
            return Bag(_r_close(e, name, depth) for e in elems)
    return t


def r_abstract(name: str, body: Simple) -> RAbs:
    """``λname.body`` for a resource body."""
    return RAbs(_r_close(body, name, 0))


def _count_index(t: Node, depth: int) -> int:
    if t.loose <= depth:
        return 0
    match t:
        case Bound(i):
            return int(i == depth)
        case RAbs(body):
            return _count_index(body, depth + 1)
    return sum(_count_index(c, depth) for c in t.children())


def degree(e: Node, x: str | int) -> int:
    """Free occurrences of ``x``: a variable name, or a de Bruijn index."""
    if isinstance(x, int):
        return _count_index(e, x)
    return sum(1 for _, n in iter_positions(e) if isinstance(n, Var) and n.name == x)


def _fill(t: Node, depth: int, supply: Iterator[Node]) -> Node:
    # replace occurrences of index ``depth`` in traversal order, close the gap
    if t.loose <= depth:
        return t
    match t:
        case Bound(i):
            if i == depth:
                return r_shift(next(supply), depth)
            return Bound(i - 1)
        case RAbs(body):
            return RAbs(_fill(body, depth + 1, supply))
        case RApp(f, a):
            f2 = _fill(f, depth, supply)
            return RApp(f2, _fill(a, depth, supply))
        case Bag(elems):
            return Bag([_fill(e, depth, supply) for e in elems])
    return t


def _linear_subst_index(body: Node, values: Sequence[Node]) -> frozenset:
    """Linear substitution for index 0 of ``body`` (the body of a binder)."""
    if _count_index(body, 0) != len(values):
        return frozenset()
    out = set()
    for perm in distinct_permutations(values):
        out.add(_fill(body, 0, iter(perm)))
    return frozenset(out)


def linear_subst(e: Node, x: str, vs: Sequence[RValue]) -> TermSet:
    """All ways of giving each free occurrence of ``x`` one element of ``vs``.

    Empty when the number of occurrences differs from ``len(vs)``.
    """
    if degree(e, x) != len(vs):
        return TermSet()
    return TermSet(_linear_subst_index(_r_close(e, x, 0), vs))


# ----------------------------------------------------------------------------
# reduction

class RKind(enum.Enum):
    BETA_R = "BetaR"
    ZERO = "Zero"
    SIGMA1_R = "Sigma1R"
    SIGMA3_R = "Sigma3R"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ROccurrence:
    kind: RKind
    position: tuple[int, ...]


class NotMember(KeyError):
    pass


class InvalidResourceRedex(ValueError):
    pass


@dataclass(frozen=True)
class Deterministic:
    pass


def _single_abs(t: Node) -> bool:
    return isinstance(t, Bag) and len(t.elems) == 1 and isinstance(t.elems[0], RAbs)


def r_redex_kind(t: Node) -> RKind | None:
    if not isinstance(t, RApp):
        return None
    f, a = t.fun, t.arg
    if isinstance(f, Bag):
        if len(f.elems) != 1:
            return RKind.ZERO
        if isinstance(f.elems[0], RAbs) and isinstance(a, Bag):
            return RKind.BETA_R
        if isinstance(a, RApp) and _single_abs(a.fun):
            return RKind.SIGMA3_R
        return None
    if isinstance(f, RApp) and _single_abs(f.fun):
        return RKind.SIGMA1_R
    return None


def r_contract(t: Node, kind: RKind) -> frozenset:
    """The set of terms produced by contracting the redex at the root."""
    if r_redex_kind(t) is not kind:
        raise InvalidResourceRedex(f"not a {kind} redex")
    match kind:
        case RKind.ZERO:
            return frozenset()
        case RKind.BETA_R:
            return _linear_subst_index(t.fun.elems[0].body, t.arg.elems)
        case RKind.SIGMA1_R:
            lam_t, s1, s2 = t.fun.fun.elems[0], t.fun.arg, t.arg
            return frozenset([RApp(Bag([RAbs(RApp(lam_t.body, r_shift(s2, 1)))]), s1)])
        case RKind.SIGMA3_R:
            v, lam_t, s = t.fun.elems[0], t.arg.fun.elems[0], t.arg.arg
            new_body = RApp(Bag([r_shift(v, 1)]), lam_t.body)
            return frozenset([RApp(Bag([RAbs(new_body)]), s)])
    raise AssertionError(kind)


def _iter_r_redexes(e: Node) -> Iterator[ROccurrence]:
    for path, n in iter_positions(e):
        kind = r_redex_kind(n)
        if kind is not None:
            yield ROccurrence(kind, path)


def r_find_redexes(e: Node) -> list[ROccurrence]:
    return list(_iter_r_redexes(e))


def r_first_redex(e: Node) -> ROccurrence | None:
    return next(_iter_r_redexes(e), None)


def is_r_normal(e: Node) -> bool:
    return r_first_redex(e) is None


def _r_replace(t: Node, path: Sequence[int], new: Node) -> Node:
    if not path:
        return new
    i, rest = path[0], path[1:]
    match t:
        case RAbs(body) if i == 0:
            return RAbs(_r_replace(body, rest, new))
        case RApp(f, a) if i == 0:
            return RApp(_r_replace(f, rest, new), a)
        case RApp(f, a) if i == 1:
            return RApp(f, _r_replace(a, rest, new))
        case Bag(elems) if 0 <= i < len(elems):
            return Bag(elems[:i] + (_r_replace(elems[i], rest, new),) + elems[i + 1:])
    raise InvalidResourceRedex(f"no child {i} at this position")


def _contract_at(e: Node, occ: ROccurrence) -> frozenset:
    try:
        sub = subterm_at(e, occ.position)
    except IndexError as exc:
        raise InvalidResourceRedex(f"no subterm at {list(occ.position)}") from exc
    # multilinearity: an empty contractum empties the whole context
    return frozenset(_r_replace(e, occ.position, c) for c in r_contract(sub, occ.kind))


def r_step(es: TermSet, element: Node, occ: ROccurrence) -> TermSet:
    if element not in es:
        raise NotMember(element)
    return TermSet((es.as_frozenset() - {element}) | _contract_at(element, occ))


_NF_CACHE: dict[Node, frozenset] = {}
_NF_CACHE_LIMIT = 200_000
_NF_STEP_CACHE: dict[Node, frozenset] = {}


def nf_term(t: Node) -> frozenset:
    """Normal form of a single term, memoised per subterm.

    Reduction is confluent and terminating, so children are normalised
    first and only the root is contracted afterwards.  This shares the work
    between bags that have elements in common.
    """
    memo = _NF_CACHE
    hit = memo.get(t)
    if hit is not None:
        return hit
    if len(memo) > _NF_CACHE_LIMIT:
        memo.clear()
    match t:
        case Var() | Bound():
            out = frozenset([t])
        case RAbs(body):
            out = frozenset(RAbs(u) for u in nf_term(body))
        case Bag(elems):
            choices = [nf_term(v) for v in elems]
            out = frozenset(Bag(c) for c in itertools.product(*choices))
        case RApp(s, u):
            out = set()
            for s1 in nf_term(s):
                for u1 in nf_term(u):
                    e = RApp(s1, u1)
                    kind = r_redex_kind(e)
                    if kind is None:
                        out.add(e)
                    else:
                        for c in r_contract(e, kind):
                            out |= nf_term(c)
            out = frozenset(out)
        case _:
            raise TypeError(f"not a resource term: {t!r}")
    memo[t] = out
    return out


def nf_stepwise(t: Node) -> frozenset:
    """Normal form by contracting the leftmost-outermost redex, memoised."""
    memo = _NF_STEP_CACHE
    if t in memo:
        return memo[t]
    if len(memo) > _NF_CACHE_LIMIT:
        memo.clear()
    successors: dict[Node, frozenset] = {}
    stack = [t]
    while stack:
        u = stack[-1]
        if u in memo:
            stack.pop()
            continue
        succ = successors.get(u)
        if succ is None:
            occ = r_first_redex(u)
            if occ is None:
                memo[u] = frozenset([u])
                stack.pop()
                continue
            succ = successors[u] = _contract_at(u, occ)
        pending = [r for r in succ if r not in memo]
        if pending:
            stack.extend(pending)
            continue
        memo[u] = frozenset().union(*(memo[r] for r in succ))
        del successors[u]
        stack.pop()
    return memo[t]


def r_normalize(es: Iterable[Node] | Node, order: Deterministic | RandomSeeded = Deterministic()) -> TermSet:
    """Normal form of a finite set of resource terms (a single term is lifted)."""
    if isinstance(es, Node):
        es = (es,)
    if isinstance(order, Deterministic):
        out: set = set()
        for e in es:
            out |= nf_term(e)
        return TermSet(out)
    rng = random.Random(order.seed)
    current = set(es)
    while True:
        pending = sorted(e for e in current if not is_r_normal(e))
        if not pending:
            return TermSet(current)
        e = rng.choice(pending)
        occ = rng.choice(r_find_redexes(e))
        current.discard(e)
        current |= _contract_at(e, occ)


# ----------------------------------------------------------------------------
# resource approximants
#   a ::= b | c
#   b ::= [x^n] | [λx.a1, …, λx.an] | [x] b a1 … ak
#   c ::= [λx.a]([y] b a1 … ak)

def _single_var(t: Node) -> bool:
    return isinstance(t, Bag) and len(t.elems) == 1 and isinstance(t.elems[0], (Var, Bound))


def _neutral_r(t: Node) -> bool:
    head, args = rspine(t)
    return (_single_var(head) and bool(args) and _is_b(args[0])
            and all(_is_a(a) for a in args[1:]))


def _is_b(t: Node) -> bool:
    if isinstance(t, Bag):
        es = t.elems
        if all(isinstance(e, (Var, Bound)) for e in es):
            return len(set(es)) <= 1
        return all(isinstance(e, RAbs) and _is_a(e.body) for e in es)
    return _neutral_r(t)


def _is_c(t: Node) -> bool:
    return (isinstance(t, RApp) and _single_abs(t.fun) and _is_a(t.fun.elems[0].body)
            and _neutral_r(t.arg))


def _is_a(t: Node) -> bool:
    return _is_b(t) or _is_c(t)


def is_resource_approximant(t: Node) -> bool:
    return is_simple(t) and _is_a(t)


def height(e: Node) -> int:
    match e:
        case Var() | Bound():
            return 0
        case RAbs(body):
            return height(body) + 1
        case RApp(f, a):
            return max(height(f), height(a)) + 1
        case Bag(elems):
            return max((height(v) for v in elems), default=0) + 1
    raise TypeError(f"not a resource term: {e!r}")


def size(e: Node) -> int:
    """Number of constructors (a bag counts once, plus its elements)."""
    return 1 + sum(size(c) for c in e.children())
