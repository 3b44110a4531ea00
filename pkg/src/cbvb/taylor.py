"""Bounded Taylor expansion and its normal form.

The Taylor expansion of a term is an infinite set of resource terms:

* a variable ``x`` gives the bags ``[x, …, x]`` of any size,
* ``λx.N`` gives bags ``[λx.t1, …, λx.tn]`` with each ``ti`` from ``N``,
* ``P Q`` gives ``s t`` for ``s`` from ``P`` and ``t`` from ``Q``,
* bot gives the empty bag.

``Bounds`` caps bag cardinality and term height, which turns the set into
a finite one that is exactly the bounds-filter of the infinite set.

For the normal form a pruned enumeration is used.  It drops elements that
are certain to reduce to the empty set (a function-position bag that is not
a singleton, or a beta redex whose argument bag has the wrong size), so it
yields the same normal form at a fraction of the cost.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from .approx import BTStatus, boehm_tree, is_approximant
from .resource import Bag, RAbs, RApp, TermSet, degree, height, is_simple, nf_term
from .terms import Abs, App, Bot, Bound, HeadContext, Node, Term, Var, is_value, plug_head_context

__all__ = [
    "Bounds", "taylor", "taylor_nf", "within_bounds", "in_taylor", "coherent",
    "is_clique", "is_clique_pairwise", "NotAClique", "Ambiguous", "infer_term",
    "normalized_taylor_of_approximant", "normalized_taylor_of_bt",
    "CommutationReport", "check_commutation", "taylor_context_check",
    "max_bag_size",
]


@dataclass(frozen=True, order=True)
class Bounds:
    max_bag: int
    max_height: int

    def __post_init__(self):
        if self.max_bag < 0 or self.max_height < 0:
            raise ValueError("bounds must be non-negative")

    def enlarged(self) -> Bounds:
        return Bounds(self.max_bag + 1, self.max_height + 2)

    def covers(self, other: Bounds) -> bool:
        return self.max_bag >= other.max_bag and self.max_height >= other.max_height


def max_bag_size(e: Node) -> int:
    own = len(e.elems) if isinstance(e, Bag) else 0
    return max([own] + [max_bag_size(c) for c in e.children()])


def within_bounds(e: Node, b: Bounds) -> bool:
    return height(e) <= b.max_height and max_bag_size(e) <= b.max_bag


class _Enumerator:
    """Elements of the Taylor expansion below a height budget.

    With ``normalise`` every node keeps only the normal forms of what lies
    below it; normal forms commute with the term formers, so the result is
    the set of normal forms.  A ``keep`` budget marks positions that are
    copied unchanged into every normal form of the whole term (the top, and
    bags and abstraction bodies reached from it through values).  There the
    filter applies directly, with ``keep`` the height still available.
    """

    def __init__(self, bounds: Bounds, pruned: bool, normalise: bool = False,
                 flt: Bounds | None = None):
        self.k = bounds.max_bag
        self.pruned = pruned or normalise
        self.normalise = normalise
        self.flt = flt if normalise else None
        self._terms: dict = {}
        self._values: dict = {}
        self._bags: dict = {}

    def values(self, m: Term, h: int, keep: int | None = None) -> tuple:
        key = (m, h, keep)
        hit = self._values.get(key)
        if hit is not None:
            return hit
        match m:
            case Var() | Bound():
                out = (m,) if h >= 0 and (keep is None or keep >= 0) else ()
            case Abs(body):
                inner = None if keep is None else keep - 1
                out = tuple(sorted(RAbs(t) for t in self.terms(body, h - 1, keep=inner)))
            case _:
                out = ()
        self._values[key] = out
        return out

    def bags(self, m: Term, h: int, sizes: Iterable[int], keep: int | None = None) -> set:
        if h < 1:
            return set()
        sizes = list(sizes)
        if sizes == [0]:
            return {Bag()}
        vals = self.values(m, h - 1, None if keep is None else keep - 1)
        return {Bag(c) for n in sizes for c in itertools.combinations_with_replacement(vals, n)}

    def bags_of_size(self, m: Term, h: int, n: int) -> tuple:
        key = (m, h, n)
        hit = self._bags.get(key)
        if hit is None:
            hit = self._bags[key] = tuple(self.bags(m, h, (n,)))
        return hit

    def _close(self, items: Iterable[Node]) -> frozenset:
        return frozenset(_nf_union(items) if self.normalise else items)

    def _apply_to_bags(self, funs: Iterable[Node], arg: Term, h: int) -> Iterator[Node]:
        """Applications of ``funs`` to bags of ``arg``, skipping those that vanish.

        A head bag that is not a singleton is a 0-redex, and ``[λx.b]`` only
        survives a bag whose size is the degree of ``x`` in ``b``; argument
        bags of other sizes are never built.
        """
        for s in funs:
            sizes: Iterable[int] = range(self.k + 1)
            if isinstance(s, Bag):
                if len(s.elems) != 1:
                    continue
                if isinstance(s.elems[0], RAbs):
                    d = degree(s.elems[0].body, 0)
                    sizes = (d,) if d <= self.k else ()
            for n in sizes:
                for bag in self.bags_of_size(arg, h, n):
                    yield RApp(s, bag)

    def terms(self, m: Term, h: int, head: bool = False, keep: int | None = None) -> frozenset:
        if self.flt is None:
            keep = None
        if h < 1 or (keep is not None and keep < 1):
            return frozenset()
        head = head and self.pruned and is_value(m)
        key = (m, h, head, keep)
        hit = self._terms.get(key)
        if hit is not None:
            return hit
        if is_value(m):
            top = self.k if keep is None else min(self.k, self.flt.max_bag)
            sizes = (1,) if head else range(top + 1)
            out = frozenset(self.bags(m, h, sizes, keep))
        elif self.pruned and isinstance(m.fun, Abs) and is_value(m.arg):
            # [λx.t] applied to a bag: only the bag size matching the degree survives
            funs = [Bag([RAbs(t)]) for t in self.terms(m.fun.body, h - 3)]
            out = self._close(self._apply_to_bags(funs, m.arg, h - 1))
        else:
            funs = self.terms(m.fun, h - 1, head=True)
            if not funs:
                out = frozenset()
            elif self.pruned and is_value(m.arg):
                out = self._close(self._apply_to_bags(funs, m.arg, h - 1))
            else:
                args = self.terms(m.arg, h - 1)
                if self.pruned:
                    funs = [f for f in funs if not isinstance(f, Bag) or len(f.elems) == 1]
                out = self._close(RApp(f, t) for f in funs for t in args)
        if keep is not None:
            cap = Bounds(self.flt.max_bag, keep)
            out = frozenset(t for t in out if within_bounds(t, cap))
        self._terms[key] = out
        return out


def taylor(m: Term, b: Bounds) -> TermSet:
    """Elements of the Taylor expansion within ``b`` (bags and height capped)."""
    return TermSet(_Enumerator(b, pruned=False).terms(m, b.max_height))


def _nf_union(elems: Iterable[Node]) -> set:
    out: set = set()
    for e in elems:
        out |= nf_term(e)
    return out


def _nf_filtered(m: Term, b: Bounds, flt: Bounds) -> frozenset:
    enum = _Enumerator(b, pruned=True, normalise=True, flt=flt)
    elems = enum.terms(m, b.max_height, keep=flt.max_height)
    return frozenset(t for t in elems if within_bounds(t, flt))


def taylor_nf(m: Term, b: Bounds, flt: Bounds | None = None) -> tuple[TermSet, bool]:
    """Normal form of the bounded Taylor expansion, restricted to ``flt``.

    The flag reports saturation: enlarging ``b`` leaves the filtered set as
    it is.
    """
    flt = b if flt is None else flt
    if not b.covers(flt):
        raise ValueError("filter must not exceed the enumeration bounds")
    first = _nf_filtered(m, b, flt)
    second = _nf_filtered(m, b.enlarged(), flt)
    return TermSet(first), first == second


# ----------------------------------------------------------------------------
# membership and coherence

def in_taylor(t: Node, m: Term) -> bool:
    """``t`` is an element of the Taylor expansion of ``m`` (no enumeration)."""
    match m:
        case Var() | Bound():
            return isinstance(t, Bag) and all(v == m for v in t.elems)
        case Bot():
            return isinstance(t, Bag) and not t.elems
        case Abs(body):
            return isinstance(t, Bag) and all(
                isinstance(v, RAbs) and in_taylor(v.body, body) for v in t.elems)
        case App(f, a):
            return isinstance(t, RApp) and in_taylor(t.fun, f) and in_taylor(t.arg, a)
    return False


def coherent(e1: Node, e2: Node) -> bool:
    match e1, e2:
        case (Var() | Bound()), (Var() | Bound()):
            return e1 == e2
        case RAbs(s), RAbs(t):
            return coherent(s, t)
        case Bag(vs), Bag(ws):
            pool = list(set(vs) | set(ws))
            return all(coherent(pool[i], pool[j])
                       for i in range(len(pool)) for j in range(i, len(pool)))
        case RApp(s1, t1), RApp(s2, t2):
            return coherent(s1, s2) and coherent(t1, t2)
    return False


def _clique(es: set) -> bool:
    if not es:
        return True
    kinds = {type(e) for e in es}
    if len(kinds) > 1:
        return False
    kind = kinds.pop()
    if kind in (Var, Bound):
        return len(es) == 1
    if kind is RAbs:
        return _clique({e.body for e in es})
    if kind is Bag:
        return _clique({v for e in es for v in e.elems})
    if kind is RApp:
        return _clique({e.fun for e in es}) and _clique({e.arg for e in es})
    return False


def is_clique(es: Iterable[Node]) -> bool:
    """Every pair of elements is coherent, each element with itself included."""
    return _clique(set(es))


def is_clique_pairwise(es: Iterable[Node]) -> bool:
    es = list(set(es))
    return all(coherent(es[i], es[j]) for i in range(len(es)) for j in range(i, len(es)))


class NotAClique(ValueError):
    pass


class Ambiguous(ValueError):
    """Some position is only witnessed by empty bags."""

    def __init__(self, position: tuple[int, ...]):
        self.position = position
        super().__init__(f"position {list(position)} only witnessed by []")


def infer_term(es: Iterable[Node]) -> Term:
    """A lambda term whose Taylor expansion contains every element of ``es``."""
    es = set(es)
    if not all(is_simple(e) for e in es):
        raise NotAClique("only simple terms can come from a Taylor expansion")
    if not is_clique(es):
        raise NotAClique("the set is not a clique")

    def simple(group: set, path: tuple) -> Term:
        sample = next(iter(group))
        if isinstance(sample, RApp):
            return App(simple({e.fun for e in group}, path + (0,)),
                       simple({e.arg for e in group}, path + (1,)))
        vals = {v for e in group for v in e.elems}
        if not vals:
            raise Ambiguous(path)
        v = next(iter(vals))
        if isinstance(v, RAbs):
            return Abs(simple({w.body for w in vals}, path + (0,)))
        return v

    if not es:
        raise Ambiguous(())
    return simple(es, ())


# ----------------------------------------------------------------------------
# normalized Taylor expansion of approximants

class _TnEnumerator:
    def __init__(self, bounds: Bounds):
        self.k = bounds.max_bag
        self._memo: dict = {}

    def approx(self, a: Term, h: int) -> frozenset:
        if h < 1:
            return frozenset()
        key = (a, h)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        match a:
            case Var() | Bound():
                out = frozenset(Bag([a] * n) for n in range(self.k + 1))
            case Bot():
                out = frozenset([Bag()])
            case Abs(body):
                vals = sorted(RAbs(t) for t in self.approx(body, h - 2))
                out = frozenset(Bag(c) for n in range(self.k + 1)
                                for c in itertools.combinations_with_replacement(vals, n))
            case App(Abs(body), arg):
                bodies = self.approx(body, h - 3)
                args = self.neutral(arg, h - 1) if bodies else ()
                out = frozenset(RApp(Bag([RAbs(s)]), t) for s in bodies for t in args)
            case App():
                out = self.neutral(a, h)
            case _:
                raise TypeError(f"not an approximant: {a!r}")
        self._memo[key] = out
        return out

    def neutral(self, a: Term, h: int) -> frozenset:
        """``x B A1 … Ak`` with a singleton head bag."""
        if h < 1:
            return frozenset()
        if isinstance(a, (Var, Bound)):
            return frozenset([Bag([a])])
        funs = self.neutral(a.fun, h - 1)
        args = self.approx(a.arg, h - 1) if funs else ()
        return frozenset(RApp(s, t) for s in funs for t in args)


def normalized_taylor_of_approximant(a: Term, b: Bounds) -> TermSet:
    if not is_approximant(a):
        raise ValueError("not an approximant")
    return TermSet(_TnEnumerator(b).approx(a, b.max_height))


def normalized_taylor_of_bt(m: Term, fuel: int, b: Bounds) -> tuple[TermSet, BTStatus]:
    """Normalized Taylor expansion of the computed Böhm-tree prefix.

    The prefix is finite, and the height bound already keeps the
    enumeration small, so the tree is used uncut.
    """
    bt = boehm_tree(m, fuel)
    if bt.tree is None:
        return TermSet(), bt.status
    return normalized_taylor_of_approximant(bt.tree, b), bt.status


@dataclass(frozen=True)
class CommutationReport:
    left: TermSet
    right: TermSet
    filter: Bounds
    bt_status: BTStatus
    equal: bool
    saturated: bool
    left_only: TermSet = field(default_factory=TermSet)
    right_only: TermSet = field(default_factory=TermSet)

    @property
    def witnesses(self) -> TermSet:
        return self.left_only | self.right_only

    @property
    def verdict(self) -> str:
        if self.equal:
            return "equal"
        if self.bt_status is BTStatus.EXACT and self.saturated:
            return "mismatch"
        return "inconclusive"


def check_commutation(m: Term, fuel: int, b: Bounds, flt: Bounds | None = None) -> CommutationReport:
    """Compare the normal form of the Taylor expansion with that of the Böhm tree."""
    flt = b if flt is None else flt
    left, saturated = taylor_nf(m, b, flt)
    right_all, status = normalized_taylor_of_bt(m, fuel, b)
    right = right_all.filter(lambda t: within_bounds(t, flt))
    return CommutationReport(
        left=left, right=right, filter=flt, bt_status=status,
        equal=left == right, saturated=saturated,
        left_only=left - right, right_only=right - left,
    )


def taylor_context_check(m: Term, n: Term, ctx: HeadContext, b: Bounds,
                         flt: Bounds | None = None) -> bool:
    """Whether the bounded Taylor normal forms of ``C[m]`` and ``C[n]`` agree.

    Only the two sets at ``b`` are compared; no saturation run is made.
    """
    flt = b if flt is None else flt
    if not b.covers(flt):
        raise ValueError("filter must not exceed the enumeration bounds")
    left = _nf_filtered(plug_head_context(ctx, m), b, flt)
    right = _nf_filtered(plug_head_context(ctx, n), b, flt)
    return left == right
