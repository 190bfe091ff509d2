import random

import pytest

from opct import generators as gen
from opct.combinatorics import (
    Relation,
    cap_order_leq,
    identity,
    is_band,
    is_cap,
    oracle,
    order_relation,
    refines,
)
from opct.errors import EndpointMismatch, OpctError, SizeBound
from opct.poset import build, from_order

from oracles import FinitePoset, random_order


def test_identity_relation_is_bijective(arc):
    r = identity(arc)
    assert r.is_surjective() and r.is_injective()


def test_f1_inclusion_not_injective(f1):
    a, b, c, d = (f1.element(x) for x in "abcd")
    r = Relation.of([(a, c), (b, c), (b, d)], target={a, b}, source={c, d})
    assert r.is_surjective()
    assert not r.is_injective()
    assert r.injectivity_gap() == d


def test_compose_functions():
    f = Relation.of([(1, "x"), (2, "y")])
    g = Relation.of([("x", True), ("y", False)])
    assert f.compose(g).pairs == {(1, True), (2, False)}
    with pytest.raises(EndpointMismatch):
        g.compose(f)


def test_image_preimage_inverse():
    r = Relation.of([(1, "x"), (1, "y"), (2, "y")])
    assert r.preimage({1}) == {"x", "y"}
    assert r.image({"y"}) == {1, 2}
    assert r.inverse().inverse() == r


def test_pairs_outside_carriers_rejected():
    with pytest.raises(EndpointMismatch):
        Relation(frozenset({1}), frozenset({2}), frozenset({(1, 3)}))


def test_refines(arc, f1):
    for n in range(4):
        assert refines(arc.level(n + 1), arc.level(n), arc)
    s = arc.level(2)
    assert refines(s, s, arc)
    assert not refines({f1.element("c")}, {f1.element("d")}, f1)
    r = order_relation(arc, arc.level(2), arc.level(1))
    assert refines(arc.level(2), arc.level(1), r)


def test_band_examples(f1, arc):
    a, d = f1.element("a"), f1.element("d")
    assert is_band(f1, {a, d}).holds
    v = is_band(f1, {a})
    assert v.fails and v.witness == d
    for n in range(5):
        assert is_band(arc, arc.level(n), 5).holds


def test_cap_examples(arc):
    for n in range(5):
        v = is_cap(arc, arc.level(n), 5)
        assert v.holds and v.witness == n
    assert is_cap(arc, set(), 5).fails
    named = arc.elements_named(["[0,1/2)", "(1/4,3/4)", "(1/2,1]"])
    assert is_cap(arc, named, 3).holds


def test_cap_undecided_outside_refining_levels():
    a = gen.gen_arc(3)
    half = a.elements_named(["[0,1/2)", "(1/2,1]"])
    assert is_cap(a, half, 4).unknown


def test_cap_order(f1, f5):
    a, b = f1.element("a"), f1.element("b")
    v = cap_order_leq(f1, a, b)
    assert v.fails
    orc = oracle(f1)
    f = v.witness
    assert orc.cap(f | {a}) and not orc.cap(f | {b})
    assert cap_order_leq(f1, a, f1.element("c")).holds
    assert cap_order_leq(f5, f5.element("(0,1)"), f5.element("(0,0)")).holds


def test_antichain_oracle():
    p = from_order(["a", "b", "c"], [])
    orc = oracle(p)
    assert orc.caps == (frozenset(p.elements()),)
    assert sorted(orc.minimal_selectors) == sorted(frozenset({x}) for x in p.elements())


def test_chain_oracle():
    p = from_order(["y", "x"], [("x", "y")])
    orc = oracle(p)
    x, y = p.element("x"), p.element("y")
    assert set(orc.bands) == {frozenset({x}), frozenset({y}), frozenset({x, y})}
    assert orc.minimal_selectors == (frozenset({x, y}),)


# frozen from oracles.FinitePoset on F1
F1_MINIMAL_SELECTORS = [{"a", "c"}, {"b", "c", "d"}]
F1_MINIMAL_CAPS = [{"c"}, {"a", "d"}, {"a", "b"}]


def test_f1_oracle_frozen(f1):
    orc = oracle(f1)
    got = sorted((set(f1.names(s)) for s in orc.minimal_selectors), key=sorted)
    assert got == F1_MINIMAL_SELECTORS
    assert sorted(map(sorted, (f1.names(c) for c in orc.minimal_caps))) == sorted(map(sorted, F1_MINIMAL_CAPS))
    for s in orc.minimal_selectors:
        assert f1.up_closure(s) == s


def test_f1_frozen_values_match_reference():
    ref = FinitePoset(list("abcd"), [("a", "c"), ("b", "c"), ("b", "d")])
    assert [set(s) for s in ref.minimal_selectors()] == F1_MINIMAL_SELECTORS


def test_oracle_bounds():
    big = from_order([f"x{i}" for i in range(17)], [])
    with pytest.raises(SizeBound):
        oracle(big)
    with pytest.raises(OpctError):
        oracle(gen.gen_arc(2))


def test_oracle_matches_reference_on_random_orders():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(1, 7)
        names, pairs = random_order(rng, n, 0.4)
        ref = FinitePoset(names, pairs)
        p = from_order(names, pairs)
        orc = oracle(p)
        conv = lambda s: frozenset(p.names(s))  # noqa: E731
        assert {conv(s) for s in orc.minimal_selectors} == set(ref.minimal_selectors())
        assert {conv(c) for c in orc.caps} == {ref.members(m) for m in ref.caps()}


def test_truncation_band_semidecision():
    p = build([["X"], ["a", "b"]], [("a", "X"), ("b", "X")])
    v = is_band(p, p.elements_named(["a", "b"]))
    assert v.holds and v.complete
