import itertools
import random

import pytest

from cbvb.approx import BTStatus
from cbvb.corpus import BUILTIN
from cbvb.gen import random_term, random_value
from cbvb.reduction import first_redex, step
from cbvb.resource import Bag, RAbs, RApp, TermSet, degree, height, linear_subst, nf_term
from cbvb.syntax import parse_resource as R
from cbvb.syntax import parse_term as P
from cbvb.syntax import parse_termset as S
from cbvb.taylor import (
    Ambiguous, Bounds, NotAClique, check_commutation, coherent, in_taylor, infer_term,
    is_clique, is_clique_pairwise, normalized_taylor_of_approximant, normalized_taylor_of_bt,
    taylor, taylor_context_check, taylor_nf, within_bounds,
)
from cbvb.terms import BOT, Abs, Bound, HeadContext, subst

I, DELTA, OMEGA, DELTA_I = BUILTIN["I"], BUILTIN["Delta"], BUILTIN["Omega"], BUILTIN["DeltaI"]


def test_taylor_examples():
    assert taylor(P("x"), Bounds(2, 1)) == S("{ [] ; [x] ; [x,x] }")
    assert taylor(I, Bounds(1, 3)) == S(r"{ [] ; [\x.[]] ; [\x.[x]] }")
    assert taylor(BOT, Bounds(3, 5)) == S("[]")
    assert taylor(BOT, Bounds(3, 0)) == TermSet()


def test_taylor_of_application_has_no_empty_bag():
    assert R("[]") not in taylor(P("x x"), Bounds(2, 4))


def test_enumeration_matches_membership():
    rng = random.Random(31)
    small, big = Bounds(1, 4), Bounds(2, 5)
    for _ in range(60):
        m = random_term(rng, rng.randint(1, 5))
        es = taylor(m, small)
        assert all(in_taylor(e, m) and within_bounds(e, small) for e in es)
        for e in taylor(m, big):
            assert (e in es) == within_bounds(e, small)


def test_membership_rejects_other_terms():
    rng = random.Random(32)
    for _ in range(60):
        m, n = random_term(rng, rng.randint(1, 7)), random_term(rng, rng.randint(1, 7))
        for e in taylor(n, Bounds(2, 4)):
            if e not in taylor(m, Bounds(2, 4)):
                assert not in_taylor(e, m)


def test_height_law():
    rng = random.Random(33)
    big = Bounds(1, 9)
    for _ in range(40):
        n = random_term(rng, rng.randint(1, 5), depth=1)
        top_body = max(map(height, taylor(n, Bounds(1, 7))), default=None)
        top_abs = max(map(height, taylor(Abs(n), big)))
        if top_body is not None:
            assert top_abs == top_body + 2


def test_substitution_instances():
    rng = random.Random(34)
    # substituting values never lowers a height or shrinks a bag, so both
    # ingredients can be enumerated at the same bounds
    b = Bounds(2, 5)
    for _ in range(40):
        m = random_term(rng, rng.randint(1, 6))
        v = random_value(rng, rng.randint(1, 3), free=("y", "z"))
        direct = taylor(subst(m, "x", v), b)
        via = set()
        vals = set()
        for bag in taylor(v, b):
            vals |= set(bag.elems)
        vals = sorted(vals)
        for t in taylor(m, b):
            k = degree(t, "x")
            for combo in itertools.combinations_with_replacement(vals, k):
                for u in linear_subst(t, "x", combo):
                    if within_bounds(u, b):
                        via.add(u)
        assert direct == via


def test_in_taylor_examples():
    assert in_taylor(R(r"[\x.[x][x,x], \x.[x][x,x,x]]"), DELTA)
    assert not in_taylor(R(r"[\x.[x,x,x], \x.[y,y,y]]"), P(r"\x.x"))
    assert not in_taylor(R("[]"), P("x x"))


def test_coherence():
    assert coherent(R("[x]"), R("[x,x]"))
    assert not coherent(R("[x,y]"), R("[x,y]"))
    assert not coherent(R("[x]"), R("[y]"))
    assert coherent(R("[x]"), R("[]")) and coherent(R("[]"), R("[y]"))


def test_cliques():
    assert is_clique(taylor(I, Bounds(2, 3)))
    assert not is_clique(S("{ [x] ; [y] }"))
    assert is_clique(TermSet())
    assert not is_clique(S("[x, y]"))


def test_clique_agrees_with_pairwise_check():
    rng = random.Random(35)
    for _ in range(60):
        m, n = random_term(rng, rng.randint(1, 6)), random_term(rng, rng.randint(1, 6))
        es = list(taylor(m, Bounds(2, 4)).elems[:15]) + list(taylor(n, Bounds(2, 4)).elems[:3])
        assert is_clique(es) == is_clique_pairwise(es)


def test_infer_term():
    assert infer_term(S("{ [x] ; [x,x] }")) == P("x")
    assert infer_term(S(r"{ [\x.[x]] ; [\x.[x,x]] }")) == P(r"\x.x")
    with pytest.raises(NotAClique):
        infer_term(S("{ [x] ; [y] }"))
    with pytest.raises(Ambiguous) as err:
        infer_term(S(r"[\x.[]][z]"))
    assert err.value.position == (0, 0)


def test_infer_term_recovers_random_terms():
    rng = random.Random(36)
    for _ in range(100):
        m = random_term(rng, rng.randint(1, 6))
        es = taylor(m, Bounds(2, 6))
        try:
            found = infer_term(es)
        except Ambiguous:
            continue
        assert all(in_taylor(e, found) for e in es)


def test_taylor_nf_examples():
    assert taylor_nf(OMEGA, Bounds(2, 8)) == (TermSet(), True)
    assert taylor_nf(Abs(OMEGA), Bounds(2, 8)) == (S("[]"), True)
    left, _ = taylor_nf(DELTA_I, Bounds(2, 6), Bounds(1, 4))
    right, _ = taylor_nf(I, Bounds(2, 6), Bounds(1, 4))
    assert left == right == S(r"{ [] ; [\x.[]] ; [\x.[x]] }")
    with pytest.raises(ValueError):
        taylor_nf(I, Bounds(1, 4), Bounds(2, 4))


def test_taylor_nf_matches_brute_force():
    terms = [I, DELTA, DELTA_I, OMEGA, Abs(OMEGA), BUILTIN["K"], BUILTIN["A"],
             P(r"(\x.x)(z z)"), P(r"(\y.\x.x x)(x x)(\x.x x)")]
    for m in terms:
        for b, f in ((Bounds(2, 6), Bounds(2, 6)), (Bounds(2, 6), Bounds(1, 4))):
            raw = set()
            for e in taylor(m, b):
                raw |= nf_term(e)
            expected = {t for t in raw if within_bounds(t, f)}
            assert taylor_nf(m, b, f)[0] == expected


def test_conversion_invariance():
    rng = random.Random(37)
    b, f = Bounds(2, 6), Bounds(1, 4)
    checked = 0
    for _ in range(40):
        m = random_term(rng, rng.randint(3, 8))
        r = first_redex(m)
        if r is None:
            continue
        n = step(m, r)
        (lm, sm), (ln, sn) = taylor_nf(m, b, f), taylor_nf(n, b, f)
        if sm and sn:
            checked += 1
            assert lm == ln
    assert checked > 5


def test_normalized_taylor_of_approximants():
    assert normalized_taylor_of_approximant(BOT, Bounds(2, 5)) == S("[]")
    assert normalized_taylor_of_approximant(I, Bounds(1, 3)) == S(r"{ [] ; [\x.[]] ; [\x.[x]] }")
    assert normalized_taylor_of_approximant(P("x bot"), Bounds(1, 3)) == S("[x][]")
    with pytest.raises(ValueError):
        normalized_taylor_of_approximant(OMEGA, Bounds(1, 3))


def _a_closed_form(b: Bounds) -> set:
    # [λz.[λy.[y^l]]([z][z^m])([x][x^n])]-style elements, filtered
    out = set()
    k = b.max_bag
    z, y = Bound(0), Bound(0)
    for l, m_, n in itertools.product(range(k + 1), repeat=3):
        inner = RApp(Bag([RAbs(Bag([y] * l))]), RApp(Bag([z]), Bag([z] * m_)))
        e = RApp(Bag([RAbs(inner)]), RApp(R("[x]"), R("[" + ",".join(["x"] * n) + "]")))
        if within_bounds(e, b):
            out.add(e)
    return out


def test_normalized_taylor_of_bt_examples():
    assert normalized_taylor_of_bt(OMEGA, 100, Bounds(2, 8)) == (TermSet(), BTStatus.PARTIAL)
    es, status = normalized_taylor_of_bt(I, 5, Bounds(1, 3))
    assert es == S(r"{ [] ; [\x.[]] ; [\x.[x]] }") and status is BTStatus.EXACT
    b = Bounds(1, 6)
    es, status = normalized_taylor_of_bt(BUILTIN["A"], 10, b)
    assert status is BTStatus.EXACT and es == _a_closed_form(b)


def test_commutation_examples():
    assert check_commutation(I, 5, Bounds(2, 5)).equal
    assert check_commutation(DELTA, 5, Bounds(2, 6)).equal
    rep = check_commutation(OMEGA, 100, Bounds(2, 8))
    assert rep.equal and not rep.left and not rep.right and rep.verdict == "equal"


def test_commutation_report_on_a_partial_tree():
    rep = check_commutation(BUILTIN["Z"], 50, Bounds(2, 6))
    assert rep.bt_status is BTStatus.PARTIAL
    assert rep.witnesses == rep.left_only | rep.right_only
    assert rep.verdict in ("equal", "inconclusive")


def test_context_check_examples():
    b, f = Bounds(3, 8), Bounds(2, 6)
    assert taylor_context_check(DELTA_I, I, HeadContext((), ()), b, f)
    assert taylor_context_check(DELTA, DELTA, HeadContext(("x",), (P("y"),)), b, f)
    assert taylor_context_check(DELTA_I, I, HeadContext(("f",), (P(r"\u.u"),)), b, f)
    assert not taylor_context_check(I, DELTA, HeadContext((), ()), b, f)
    with pytest.raises(ValueError):
        taylor_context_check(I, I, HeadContext((), ()), Bounds(1, 4), Bounds(2, 4))
