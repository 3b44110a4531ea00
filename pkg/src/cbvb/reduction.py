"""Call-by-value reduction with the sigma permutation rules.

Three notions of reduction are contracted anywhere in a term:

* ``BetaV``  ``(λx.M)V -> M[x:=V]`` when ``V`` is a value (bot counts as one),
* ``Sigma1`` ``(λx.M)N P -> (λx.M P)N``,
* ``Sigma3`` ``V((λx.M)N) -> (λx.V M)N``.

With de Bruijn indices the binder freshness side conditions are automatic:
the term moved under the new binder is shifted by one.
"""

from __future__ import annotations

import enum
import random
from collections.abc import Collection, Iterator
from dataclasses import dataclass

from .terms import (
    Abs, App, Bot, Bound, Term, Var, instantiate, is_value, replace_at, shift,
    spine, subterm_at,
)

__all__ = [
    "RedexKind", "RedexOccurrence", "InvalidRedex", "Status", "ReductionOutcome",
    "LeftmostOutermost", "RandomSeeded", "Strategy", "redex_kind", "contract",
    "find_redexes", "first_redex", "step", "reduce", "iter_reducts",
    "NFClass", "classify_nf", "is_normal",
]


class RedexKind(enum.Enum):
    BETA_V = "BetaV"
    SIGMA1 = "Sigma1"
    SIGMA3 = "Sigma3"

    def __str__(self):
        return self.value


SIGMA_KINDS = frozenset({RedexKind.SIGMA1, RedexKind.SIGMA3})


@dataclass(frozen=True)
class RedexOccurrence:
    kind: RedexKind
    position: tuple[int, ...]


class InvalidRedex(ValueError):
    pass


class Status(enum.Enum):
    NORMAL_FORM = "NormalForm"
    FUEL_EXHAUSTED = "FuelExhausted"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ReductionOutcome:
    term: Term
    steps_used: int
    status: Status
    trace: tuple[Term, ...] | None = None


@dataclass(frozen=True)
class LeftmostOutermost:
    pass


@dataclass(frozen=True)
class RandomSeeded:
    seed: int


Strategy = LeftmostOutermost | RandomSeeded


def redex_kind(t: Term) -> RedexKind | None:
    """Kind of redex rooted at ``t``; the three patterns are mutually exclusive."""
    if not isinstance(t, App):
        return None
    f, a = t.fun, t.arg
    if isinstance(f, Abs) and is_value(a):
        return RedexKind.BETA_V
    if isinstance(f, App) and isinstance(f.fun, Abs):
        return RedexKind.SIGMA1
    if is_value(f) and isinstance(a, App) and isinstance(a.fun, Abs):
        return RedexKind.SIGMA3
    return None


def contract(t: Term, kind: RedexKind) -> Term:
    if redex_kind(t) is not kind:
        raise InvalidRedex(f"not a {kind} redex")
    match kind:
        case RedexKind.BETA_V:
            return instantiate(t.fun.body, t.arg)
        case RedexKind.SIGMA1:
            (lam_m, n), p = (t.fun.fun, t.fun.arg), t.arg
            return App(Abs(App(lam_m.body, shift(p, 1))), n)
        case RedexKind.SIGMA3:
            v, (lam_m, n) = t.fun, (t.arg.fun, t.arg.arg)
            return App(Abs(App(shift(v, 1), lam_m.body)), n)
    raise AssertionError(kind)


def _iter_redexes(m: Term) -> Iterator[RedexOccurrence]:
    # explicit stack: reducts of recursive terms can get deep
    stack: list[tuple[tuple[int, ...], Term]] = [((), m)]
    while stack:
        path, t = stack.pop()
        kind = redex_kind(t)
        if kind is not None:
            yield RedexOccurrence(kind, path)
        if isinstance(t, App):
            stack.append((path + (1,), t.arg))
            stack.append((path + (0,), t.fun))
        elif isinstance(t, Abs):
            stack.append((path + (0,), t.body))


def find_redexes(m: Term, kinds: Collection[RedexKind] | None = None) -> list[RedexOccurrence]:
    """All redex occurrences, leftmost-outermost first."""
    return [r for r in _iter_redexes(m) if kinds is None or r.kind in kinds]


def first_redex(m: Term, kinds: Collection[RedexKind] | None = None) -> RedexOccurrence | None:
    for r in _iter_redexes(m):
        if kinds is None or r.kind in kinds:
            return r
    return None


def step(m: Term, r: RedexOccurrence) -> Term:
    try:
        sub = subterm_at(m, r.position)
    except IndexError as exc:
        raise InvalidRedex(f"no subterm at {list(r.position)}") from exc
    return replace_at(m, r.position, contract(sub, r.kind))


def iter_reducts(m: Term, strategy: Strategy = LeftmostOutermost(),
                 kinds: Collection[RedexKind] | None = None) -> Iterator[Term]:
    """The reduction sequence chosen by ``strategy``, starting after ``m``."""
    rng = random.Random(strategy.seed) if isinstance(strategy, RandomSeeded) else None
    while True:
        if rng is None:
            r = first_redex(m, kinds)
        else:
            rs = find_redexes(m, kinds)
            r = rng.choice(rs) if rs else None
        if r is None:
            return
        m = step(m, r)
        yield m


def reduce(m: Term, strategy: Strategy = LeftmostOutermost(), fuel: int = 500,
           kinds: Collection[RedexKind] | None = None, trace: bool = False) -> ReductionOutcome:
    """Contract redexes chosen by ``strategy`` until none is left or ``fuel`` runs out.

    ``kinds`` restricts which redexes count (e.g. only the sigma rules).
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    seen = [m] if trace else None
    used = 0
    if fuel > 0:
        for used, m in enumerate(iter_reducts(m, strategy, kinds), start=1):
            if seen is not None:
                seen.append(m)
            if used == fuel:
                break
    done = first_redex(m, kinds) is None
    status = Status.NORMAL_FORM if done else Status.FUEL_EXHAUSTED
    return ReductionOutcome(m, used, status, tuple(seen) if seen is not None else None)


# ----------------------------------------------------------------------------
# normal-form grammar
#   G ::= H | R
#   H ::= x | λx.G | x H G1 … Gk
#   R ::= (λx.G)(y H G1 … Gk)
# bot behaves as a head variable so the grammar also covers terms with bot.

class NFClass(enum.Enum):
    G_H = "G_H"
    G_R = "G_R"
    NOT_NORMAL = "NotNormal"

    def __str__(self):
        return self.value


def _atomic(t: Term) -> bool:
    return isinstance(t, (Var, Bound, Bot))


def _neutral(t: Term) -> bool:
    """``y H G1 … Gk`` with at least one argument."""
    head, args = spine(t)
    return (_atomic(head) and bool(args) and _is_h(args[0])
            and all(_is_g(a) for a in args[1:]))


def _is_h(t: Term) -> bool:
    if _atomic(t):
        return True
    if isinstance(t, Abs):
        return _is_g(t.body)
    return _neutral(t)


def _is_r(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Abs) and _is_g(t.fun.body) and _neutral(t.arg)


def _is_g(t: Term) -> bool:
    return _is_h(t) or _is_r(t)


def classify_nf(m: Term) -> NFClass:
    if _is_h(m):
        return NFClass.G_H
    if _is_r(m):
        return NFClass.G_R
    return NFClass.NOT_NORMAL


def is_normal(m: Term) -> bool:
    return first_redex(m) is None
