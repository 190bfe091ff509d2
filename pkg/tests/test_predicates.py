import pytest

from opct import generators as gen
from opct.poset import build, from_order
from opct.predicates import (
    IMPLICATIONS,
    check_branching,
    check_graded,
    check_level_injective,
    check_level_injective_all,
    check_predetermined,
    check_prime,
    check_weakly_graded,
    implication_violations,
    property_profile,
)
from opct.verdict import holds, fails

H, F, U = "Holds", "Fails", "Unknown"


def profile_of(p):
    return {k: str(v.outcome) for k, v in property_profile(p).items()}


@pytest.mark.parametrize("fixture,expected", [
    ("f1", {"graded": H, "weakly-graded": H, "predetermined": F, "level-injective": F,
            "branching": F, "prime": H, "cap-determined": F}),
    ("f3", {"graded": F, "weakly-graded": H, "predetermined": H, "level-injective": H,
            "branching": H, "prime": H, "cap-determined": H}),
    ("f6", {"graded": H, "weakly-graded": H, "predetermined": H, "level-injective": H,
            "branching": H, "prime": U, "cap-determined": H}),
])
def test_fixture_profiles(request, fixture, expected):
    got = profile_of(request.getfixturevalue(fixture))
    assert {k: got[k] for k in expected} == expected


def test_f3_graded_witness(f3):
    v = check_graded(f3)
    assert v.fails and v.kind == "rank_gap"
    assert [f3.name(x) for x in v.witness] == ["(1/4,2/3)", "(1/4,1]"]


def test_f5_not_predetermined(f5):
    v = check_predetermined(f5)
    assert v.fails
    assert v.kind == "no_private_lower" and f5.name(v.witness) == "(0,1)"


def test_arc_properties(arc):
    for fn in (check_graded, check_weakly_graded, check_predetermined, check_branching):
        assert fn(arc).holds, fn.__name__
    assert check_level_injective_all(arc).verdict.holds


def test_level_injective_pairs(arc, f1):
    assert check_level_injective(arc, 0, 2).holds
    assert check_level_injective(f1, 0, 1).fails


def test_chain_is_not_branching():
    p = build([["a"], ["b"], ["c"]], [("b", "a"), ("c", "b")], ["finite_complete"])
    assert check_branching(p).fails


def test_prime_on_finite_fixtures(f1, f3):
    assert check_prime(f1).holds
    assert check_prime(f3).holds


def test_implications_flag_violation():
    prof = {name: holds() for arrow in IMPLICATIONS for name in arrow[0] + (arrow[1],)}
    premises, conclusion = IMPLICATIONS[0]
    prof[conclusion] = fails()
    assert (premises, conclusion) in implication_violations(prof)


@pytest.mark.parametrize("p", [gen.gen_arc(5), gen.gen_tree(2, 5), gen.gen_cofinite(5),
                               gen.gen_f5(5), gen.gen_circle(4)],
                         ids=["arc", "tree", "cofinite", "f5", "circle"])
def test_generated_families_respect_implications(p):
    assert implication_violations(property_profile(p)) == []


def test_size_bound_becomes_unknown():
    p = from_order([f"x{i}" for i in range(20)], [])
    prof = property_profile(p)
    assert all(v.outcome is not None for v in prof.values())
    assert implication_violations(prof) == []
