import pytest

from opct import generators as gen
from opct.combinatorics import Relation
from opct.errors import EndpointMismatch, StageMismatch
from opct.generators import Stages
from opct.poset import build
from opct.refiners import (
    apply_refiner,
    check_birefinable,
    check_refiner,
    check_strong,
    check_wedge_preserving,
    identity_refiner,
    inclusion_refiners,
    make_refiner,
    order_refiner,
    star_compose,
    star_of_refiner,
    stages_from_relations,
    verify_back_and_forth,
)
from opct.spectrum import Thread, star_closure_prefix, thread_prefix
from opct.stars import star_below


@pytest.fixture(scope="module")
def arc4():
    return gen.gen_arc(4)


@pytest.fixture(scope="module")
def even_arc():
    return gen.level_subsequence(gen.gen_arc(8), 2, depth=4)


def test_identity_and_order_are_refiners(arc4, f1):
    assert check_refiner(identity_refiner(arc4), 3).holds
    assert check_refiner(order_refiner(arc4), 3).holds
    assert check_wedge_preserving(identity_refiner(f1)).holds


def test_unrefined_level(f1):
    c = f1.element("c")
    r = make_refiner(f1, f1, [(c, c)])
    v = check_refiner(r)
    assert v.fails and v.kind == "unrefined_level"


def test_wedge_breaking_relation(arc4):
    x, y = arc4.element("[0,1/2)"), arc4.element("(1/2,1]")
    a, b = arc4.element("[0,1/4)"), arc4.element("(1/8,3/8)")
    r = make_refiner(arc4, arc4, [(x, a), (y, b)])
    v = check_wedge_preserving(r, 3)
    assert v.fails and v.kind == "wedge_broken"


def test_missing_posets():
    r = Relation.of([(1, 2)])
    with pytest.raises(EndpointMismatch):
        check_refiner(r)


def test_star_of_order_is_star_below(arc4):
    st = star_of_refiner(order_refiner(arc4), 3)
    expected = {(y, x) for x in arc4.elements() for y in arc4.elements()
                if x.level <= 3 and star_below(arc4, x, y, 3).holds}
    assert set(st.pairs) == expected


def test_tree_identity_star_composite(tree):
    i = identity_refiner(tree)
    tri = star_of_refiner(order_refiner(tree), 5)
    assert set(star_compose(i, i, 5).pairs) == set(tri.pairs)
    assert check_strong(tri, 5).holds


def test_apply_identity_on_tree(tree):
    s = thread_prefix(Thread.leftmost(tree, 6))
    out = apply_refiner(identity_refiner(tree), s, 6)
    assert out.elements == s.elements and out.certified


def test_apply_identity_on_arc_is_star_closure(arc4):
    s = thread_prefix(Thread.leftmost(arc4, 4))
    assert apply_refiner(identity_refiner(arc4), s, 4).elements == \
        star_closure_prefix(s, 4).elements


def test_apply_rejects_foreign_prefix(arc4, f1):
    with pytest.raises(EndpointMismatch):
        apply_refiner(identity_refiner(arc4), f1.elements())


def test_birefinable_inclusion(even_arc):
    full = gen.gen_arc(8)
    r, s = inclusion_refiners(even_arc, full)
    assert check_birefinable(r, s, 3).holds


def test_birefinable_mismatch(arc4):
    other = gen.gen_tree(2, 4)
    with pytest.raises(EndpointMismatch):
        check_birefinable(identity_refiner(arc4), identity_refiner(other))


def test_birefinable_escape(f1):
    a, b, c, d = (f1.element(x) for x in "abcd")
    swap = make_refiner(f1, f1, [(c, c), (d, d), (a, b), (b, a)])
    v = check_birefinable(swap, identity_refiner(f1))
    assert v.fails


def test_back_and_forth_gradification(even_arc):
    _, st = gen.gradify_with_stages(even_arc, 4)
    v = verify_back_and_forth(st, 4)
    assert v.holds and "regular" in v.assumptions


def test_back_and_forth_not_surjective(arc4):
    _, st = gen.gradify_with_stages(arc4, 2)
    f2 = st.fwd[2]
    drop = min(f2.source)
    thin = Relation(f2.target, f2.source, frozenset(p for p in f2.pairs if p[1] != drop),
                    f2.target_poset, f2.source_poset)
    bad = Stages(st.left, st.right, st.c_levels, st.d_levels, st.fwd[:2] + (thin,), st.back)
    v = verify_back_and_forth(bad, 2)
    assert v.fails and v.kind == "not_surjective" and v.witness[0] == 2


def test_stage_count_checked(arc4):
    with pytest.raises(StageMismatch):
        stages_from_relations(arc4, arc4, [[], []], [])


def test_finite_stages():
    p = build([["t"], ["a", "b"]], [("a", "t"), ("b", "t")], ["finite_complete"])
    e = {n: p.element(n) for n in ("t", "a", "b")}
    st = stages_from_relations(p, p, [[(e["t"], e["t"])], [(e["a"], e["a"]), (e["b"], e["b"])]],
                               [[(e["a"], e["t"]), (e["b"], e["t"])]])
    assert verify_back_and_forth(st, 1).holds


def test_staged_refiner_maps_thread_to_graded_thread():
    arc = gen.gen_arc(5)
    g, st = gen.gradify_with_stages(arc, 5)
    r = make_refiner(g, st.right, frozenset().union(*(f.pairs for f in st.fwd)))
    t = Thread.leftmost(st.right, 5)
    for d in (2, 3, 4):
        out = apply_refiner(r, thread_prefix(t), d)
        gt = Thread(g, tuple(g.element(f"{arc.name(x)}@{n}") for n, x in enumerate(t.elements[:d + 1])))
        want = thread_prefix(gt).elements
        if d < 4:
            assert out.elements == want
        else:
            # the deepest entry needs wedges one level past the thread
            assert out.elements <= want <= out.elements | out.pending


def test_arc_against_its_gradification():
    arc = gen.gen_arc(4)
    _, st = gen.gradify_with_stages(arc, 3)
    assert verify_back_and_forth(st, 3).holds


def test_star_then_compose_inside_star_composite(arc4):
    a = order_refiner(arc4, 3)
    b = identity_refiner(arc4.deepen(3))
    assert set(star_of_refiner(a, 3).compose(b).pairs) <= set(star_compose(a, b, 3).pairs)
