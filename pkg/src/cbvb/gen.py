"""Random and exhaustive term generators for tests and the command line.

Sizes count constructors, as ``terms.size`` does.  Every generator takes a
``random.Random`` so runs are reproducible from a seed.
"""

from __future__ import annotations

import random
from collections.abc import Iterator, Sequence

from .resource import Bag, RAbs, RApp
from .terms import BOT, Abs, App, Bound, HeadContext, Term, Var

__all__ = [
    "random_term", "random_value", "random_resource", "random_resource_value",
    "random_termset", "random_head_context", "all_terms",
]

FREE = ("x", "y", "z")


def _leaf(rng: random.Random, depth: int, free: Sequence[str], bot: bool) -> Term:
    choices: list[Term] = [Bound(i) for i in range(depth)] + [Var(n) for n in free]
    if bot:
        choices.append(BOT)
    return rng.choice(choices)


def random_term(rng: random.Random, size: int, free: Sequence[str] = FREE,
                bot: bool = False, depth: int = 0) -> Term:
    """A term with ``size`` constructors (at least 2 when nothing can be a leaf).

    ``depth`` binders are already open around it, so ``Bound(i)`` with
    ``i < depth`` may occur free.
    """
    has_leaf = depth > 0 or bool(free) or bot
    if size <= 1:
        return _leaf(rng, depth, free, bot) if has_leaf else Abs(Bound(0))
    if size == 2 or not has_leaf or rng.random() < 0.4:
        return Abs(random_term(rng, size - 1, free, bot, depth + 1))
    left = rng.randint(1, size - 2)
    return App(random_term(rng, left, free, bot, depth),
               random_term(rng, size - 1 - left, free, bot, depth))


def random_value(rng: random.Random, size: int, free: Sequence[str] = FREE,
                 bot: bool = False, depth: int = 0) -> Term:
    if size <= 1 and (depth > 0 or free or bot):
        return _leaf(rng, depth, free, bot)
    return Abs(random_term(rng, max(size - 1, 1), free, bot, depth + 1))


def random_resource_value(rng: random.Random, size: int, free: Sequence[str] = FREE,
                          depth: int = 0, max_bag: int = 3):
    if size <= 2 or rng.random() < 0.3:
        leaves = [Bound(i) for i in range(depth)] + [Var(n) for n in free]
        if leaves:
            return rng.choice(leaves)
    return RAbs(random_resource(rng, max(size - 1, 1), free, depth + 1, max_bag))


def random_resource(rng: random.Random, size: int, free: Sequence[str] = FREE,
                    depth: int = 0, max_bag: int = 3):
    """A simple resource term of roughly ``size`` constructors."""
    if size <= 1:
        return Bag(())
    if size >= 3 and rng.random() < 0.45:
        left = rng.randint(1, size - 2)
        return RApp(random_resource(rng, left, free, depth, max_bag),
                    random_resource(rng, size - 1 - left, free, depth, max_bag))
    k = rng.randint(0, min(max_bag, size - 1))
    if k == 0:
        return Bag(())
    share = max((size - 1) // k, 1)
    return Bag([random_resource_value(rng, share, free, depth, max_bag) for _ in range(k)])


def random_termset(rng: random.Random, count: int, size: int, free: Sequence[str] = FREE,
                   max_bag: int = 3) -> list:
    return [random_resource(rng, size, free, 0, max_bag) for _ in range(count)]


def random_head_context(rng: random.Random, max_binders: int = 2, max_args: int = 2,
                        arg_size: int = 4, free: Sequence[str] = FREE) -> HeadContext:
    """Binders drawn from ``free`` and value arguments of at most ``arg_size``."""
    names = list(free)
    rng.shuffle(names)
    binders = tuple(names[: rng.randint(0, min(max_binders, len(names)))])
    args = tuple(random_value(rng, rng.randint(1, arg_size), free)
                 for _ in range(rng.randint(0, max_args)))
    return HeadContext(binders, args)


def all_terms(max_size: int, free: Sequence[str] = ("x",), bot: bool = True,
              depth: int = 0) -> Iterator[Term]:
    """Every term with at most ``max_size`` constructors, smallest first."""
    for n in range(1, max_size + 1):
        yield from _terms_of_size(n, tuple(free), bot, depth)


def _terms_of_size(n: int, free: tuple, bot: bool, depth: int) -> Iterator[Term]:
    if n == 1:
        yield from (Bound(i) for i in range(depth))
        yield from (Var(v) for v in free)
        if bot:
            yield BOT
        return
    for body in _terms_of_size(n - 1, free, bot, depth + 1):
        yield Abs(body)
    for left in range(1, n - 1):
        for f in _terms_of_size(left, free, bot, depth):
            for a in _terms_of_size(n - 1 - left, free, bot, depth):
                yield App(f, a)
