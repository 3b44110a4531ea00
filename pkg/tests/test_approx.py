import random

import pytest

from cbvb.approx import (
    ApproxClass, BTStatus, Incompatible, MonotonicityViolation, Verdict, approximant_class,
    boehm_tree, direct_approximant, is_approximant, is_approximant_of,
    is_potentially_valuable, join, leq, truncate,
)
from cbvb.corpus import BUILTIN
from cbvb.gen import random_term
from cbvb.reduction import is_normal, reduce
from cbvb.syntax import parse_term as P
from cbvb.terms import BOT, Abs, alpha_eq

OMEGA = BUILTIN["Omega"]


def test_approximants_of_i_delta_xx():
    m = P(r"(\x.x)((\x.x x)(x x))")
    for y in ("y", "bot"):
        for z in ("z", "bot"):
            for x in ("x", "bot"):
                a = P(rf"(\z.(\y.{y})(z {z}))(x {x})")
                assert is_approximant_of(a, m) is Verdict.YES
    # grammatical, but bot cannot stand below the application I(zz)
    assert is_approximant_of(P(r"(\z.bot)(x x)"), m) is Verdict.UNKNOWN
    assert is_approximant_of(P(r"(\z.bot)(x bot)"), m) is Verdict.UNKNOWN


def test_approximant_grammar():
    assert approximant_class(P(r"(\z.(\y.y)(z z))(x x)")) is ApproxClass.A_C
    assert is_approximant(P(r"(\z.bot)(x x)"))
    assert not is_approximant(P(r"(\x.x)(z z) y"))
    assert approximant_class(BOT) is ApproxClass.A_B
    assert is_approximant(P(r"x (\y.bot) bot"))


def test_approximants_are_normal():
    rng = random.Random(11)
    for _ in range(2000):
        t = random_term(rng, rng.randint(1, 10), bot=True)
        if is_approximant(t):
            assert is_normal(t)


def test_leq():
    assert leq(BOT, Abs(OMEGA))
    assert not leq(BOT, P("x x"))
    assert leq(P(r"\x.bot"), P(r"\x.x"))
    assert not leq(P(r"\x.x"), P(r"\x.bot"))


def test_join():
    assert join(BOT, P(r"\x.bot")) == P(r"\x.bot")
    assert join(P(r"(\z.(\y.y)(z bot))(x bot)"),
                P(r"(\z.(\y.bot)(z z))(x x)")) == P(r"(\z.(\y.y)(z z))(x x)")
    with pytest.raises(Incompatible):
        join(P("x"), P(r"\x.bot"))


def test_join_of_truncations():
    rng = random.Random(12)
    for _ in range(300):
        a = direct_approximant(reduce(random_term(rng, rng.randint(3, 10)), fuel=50).term)
        if a is None:
            continue
        t1, t2 = truncate(a, rng.randint(1, 3))[0], truncate(a, rng.randint(1, 4))[0]
        j = join(t1, t2)
        assert leq(t1, j) and leq(t2, j) and leq(j, a)


def test_direct_approximant():
    assert direct_approximant(P(r"(\x.x)(z z)")) == P(r"(\x.x)(z z)")
    assert direct_approximant(OMEGA) is None
    assert direct_approximant(Abs(OMEGA)) == BOT
    assert direct_approximant(P(r"\x.x")) == P(r"\x.x")


def test_direct_approximant_is_below_the_term():
    rng = random.Random(13)
    for _ in range(1000):
        m = random_term(rng, rng.randint(1, 10))
        a = direct_approximant(m)
        if a is not None:
            assert is_approximant(a) and leq(a, m)


def test_boehm_tree_examples():
    r = boehm_tree(OMEGA, 100)
    assert r.tree is None and r.status is BTStatus.PARTIAL
    r = boehm_tree(Abs(OMEGA), 100)
    assert r.tree == BOT and r.status is BTStatus.PARTIAL
    r = boehm_tree(P(r"(\x.x)(z z)"), 10)
    assert r.tree == P(r"(\x.x)(z z)") and r.status is BTStatus.EXACT


def test_boehm_tree_of_fixed_points():
    r = boehm_tree(BUILTIN["Z"], 500, depth=5)
    assert alpha_eq(r.tree, P(r"\f.f (\z.f bot z)"))
    assert r.status is BTStatus.PARTIAL and r.truncated_positions
    r = boehm_tree(BUILTIN["Kstar"], 500, depth=4)
    assert alpha_eq(r.tree, P(r"\a b c.bot"))
    assert boehm_tree(BUILTIN["Xi"], 500).tree is None


def test_truncate_counts_layers():
    a = P(r"(\x.x)(z z)")
    assert truncate(a, 3) == (a, frozenset())
    cut, where = truncate(P(r"\x.\y.x"), 2)
    assert cut == P(r"\x.bot") and where == {(0,)}
    assert truncate(P(r"\x.x"), 1)[0] == BOT


def test_truncation_stays_below():
    rng = random.Random(14)
    for _ in range(500):
        a = direct_approximant(reduce(random_term(rng, rng.randint(3, 12)), fuel=30).term)
        if a is None:
            continue
        for d in range(1, 5):
            t, _ = truncate(a, d)
            assert is_approximant(t) and leq(t, a)


def test_monotone_approximants_along_reduction():
    for name in ("Z", "ZB", "Kstar", "Xi", "DeltaI"):
        boehm_tree(BUILTIN[name], 200, check_monotone=True)
    assert issubclass(MonotonicityViolation, AssertionError)


def test_is_approximant_of():
    assert is_approximant_of(P(r"\x.bot"), P(r"\x.x"), 5) is Verdict.YES
    assert is_approximant_of(P(r"\f.f (\z.f bot z)"), BUILTIN["Z"], 200) is Verdict.YES
    assert is_approximant_of(P("x"), OMEGA, 50) is Verdict.UNKNOWN
    assert is_approximant_of(P(r"(\z.bot)(x x)"), BUILTIN["A"]) is Verdict.UNKNOWN


def test_is_potentially_valuable():
    assert is_potentially_valuable(P(r"\x.x"), 5) is Verdict.YES
    assert is_potentially_valuable(OMEGA, 100) is Verdict.UNKNOWN
    assert is_potentially_valuable(P(r"(\x.x)(z z)"), 10) is Verdict.YES
    assert is_potentially_valuable(Abs(OMEGA)) is Verdict.YES


def test_potentially_valuable_witness():
    # the witness context binds z to λw.λu.u; the plugged term then reaches a value
    plugged = P(r"(\z.(\x.x)(z z))(\w.\u.u)")
    out = reduce(plugged, fuel=10)
    assert isinstance(out.term, Abs)
