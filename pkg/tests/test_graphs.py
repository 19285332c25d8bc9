import math
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmes.graphs import (
    CensusLimitError,
    NotCactusError,
    SlotPermutation,
    all_pinches,
    cactus_value,
    canonical_form,
    census,
    degeneracy_bound,
    degeneracy_bound_check,
    graph_of_permutation,
    has_loop,
    is_cactus,
    is_cactus_by_reduction,
    label_name,
    loop_bound_check,
    loop_contributions,
    parse_label,
    pinch,
    pinch_case,
    remove_leaf,
)
from mmes.moments import bracket_dense

P = SlotPermutation.parse
CACTUS2 = "[1 2, 1' 2']"
EYE = "[2 2', 1 1']"


def g(text):
    return graph_of_permutation(P(text))


def test_labels_roundtrip():
    for a in range(8):
        assert parse_label(label_name(a)) == a
    assert label_name(3) == "2'"
    with pytest.raises(ValueError):
        parse_label("0")


def test_bracket_notation_roundtrip():
    for q in permutations(range(6)):
        p = SlotPermutation(q)
        assert P(p.bracket()) == p


def test_invalid_permutations():
    with pytest.raises(ValueError):
        SlotPermutation((0, 0))
    with pytest.raises(ValueError):
        SlotPermutation((0, 1, 2))
    with pytest.raises(ValueError):
        P("[1, 1']")


@settings(max_examples=100)
@given(st.integers(1, 5).flatmap(lambda m: st.permutations(list(range(2 * m)))))
def test_degree_invariant(images):
    gr = graph_of_permutation(images)
    adj = gr.adjacency
    assert (adj.sum(axis=0) == 2).all() and (adj.sum(axis=1) == 2).all()


def test_single_vertex_graph():
    gr = g("[1 1']")
    assert gr.edges == ((0, 0), (0, 0))
    assert is_cactus(gr) and gr.connected


def test_cactus_and_eye_examples():
    c, e = g(CACTUS2), g(EYE)
    assert c.connected and is_cactus(c)
    assert e.connected and not is_cactus(e)
    assert sorted(e.edges) == [(0, 1), (0, 1), (1, 0), (1, 0)]
    assert canonical_form(c) != canonical_form(e)
    assert canonical_form(c) == canonical_form(g("[2 1, 2' 1']"))


def test_three_cycle_is_not_cactus():
    # 0 -> 1 -> 2 -> 0 twice over
    cyc = graph_of_permutation((4, 5, 0, 1, 2, 3))
    assert sorted(set(cyc.edges)) == [(0, 2), (1, 0), (2, 1)]
    assert not is_cactus(cyc)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_cactus_tests_agree(m):
    for cls in census(m).classes:
        assert is_cactus(cls.graph) == is_cactus_by_reduction(cls.graph) == cls.cactus


def test_canonical_form_invariant_under_relabeling():
    for cls in census(3).classes:
        p = cls.representative
        for sigma in permutations(range(3)):
            # relabel vertex j as sigma[j], keeping primes attached
            def mv(a):
                return 2 * sigma[a // 2] + a % 2
            images = [0] * 6
            for a in range(6):
                images[mv(a)] = mv(p(a))
            assert canonical_form(graph_of_permutation(images)) == cls.canonical


def test_census_m1():
    c = census(1)
    assert [cls.degeneracy for cls in c.classes] == [2]


def test_census_m2():
    c = census(2)
    by = {(cls.cactus, cls.connected): cls.degeneracy for cls in c.classes}
    assert by == {(True, True): 16, (False, True): 4, (True, False): 4}
    assert c.total_degeneracy == 24
    assert c.by_canonical()[canonical_form(g(EYE))].degeneracy == 4


def test_census_m3():
    c = census(3)
    assert c.total_degeneracy == 720
    noncactus_connected = sorted(cls.degeneracy for cls in c.classes if cls.connected and not cls.cactus)
    assert noncactus_connected == [16, 64, 192]
    assert degeneracy_bound_check(c)


def test_census_workers_agree():
    assert census(3, workers=2) == census(3)


@pytest.mark.slow
def test_census_m4_total():
    c = census(4, workers=2)
    assert c.total_degeneracy == math.factorial(8)
    assert degeneracy_bound_check(c)


def test_census_limit():
    with pytest.raises(CensusLimitError):
        census(5)
    with pytest.raises(ValueError):
        census(0)


def test_degeneracy_bound_values():
    assert [degeneracy_bound(v) for v in (1, 2, 3)] == [4, 32, 384]
    for m in (1, 2, 3):
        assert degeneracy_bound_check(census(m))


def test_cactus_value_examples():
    assert cactus_value(g("[1 1']"), 4, 2, 2) == 8
    assert cactus_value(g(CACTUS2), 4, 2, 2) == 16
    assert cactus_value(g("[1 1', 2 2']"), 4, 2, 2) == 64
    with pytest.raises(NotCactusError):
        cactus_value(g(EYE), 4, 2, 2)


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2)])
def test_cactus_value_matches_dense_bracket(n, d):
    big_n, na, nab = d**n, d ** (n // 2), d ** (n - n // 2)
    for m in (1, 2, 3):
        for cls in census(m).classes:
            if cls.cactus:
                assert abs(bracket_dense(cls.representative, n, d) - cactus_value(cls.graph, big_n, na, nab)) <= 1e-9


# ------------------------------------------------------------ loops

def test_has_loop():
    assert has_loop(g(EYE)) and has_loop(g(CACTUS2))
    assert not has_loop(g("[1 1']"))


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 5)])
def test_loop_bound(n, d):
    assert loop_bound_check(g(EYE), n, d)
    assert loop_contributions(n, d).min() >= 0


def test_loop_bound_requires_loop():
    with pytest.raises(ValueError):
        loop_bound_check(g("[1 1']"), 2, 2)


# ---------------------------------------------------------- pinching

def test_leaf_germination_gives_cactus():
    mother = g("[1 1']")
    daughter = pinch(mother, (0,))
    assert pinch_case(mother, (0,)) == "leaf"
    assert canonical_form(daughter) == canonical_form(g(CACTUS2))


def test_degenerate_pinch_gives_eye():
    mother = g("[1 1']")
    assert pinch_case(mother, (0, 1)) == "b"
    assert canonical_form(pinch(mother, (0, 1))) == canonical_form(g(EYE))


def test_eye_pinches_give_m3_noncactus():
    targets = {cls.canonical for cls in census(3).classes if cls.connected and not cls.cactus}
    reached = {canonical_form(d) for _, d in all_pinches(g(EYE))}
    assert targets <= reached


@pytest.mark.parametrize("v", [1, 2])
def test_pinching_closure(v):
    reached = set()
    for cls in census(v).classes:
        reached |= {canonical_form(d) for _, d in all_pinches(cls.graph)}
    targets = {cls.canonical for cls in census(v + 1).classes if cls.connected}
    assert targets <= reached


@pytest.mark.parametrize("v", [2, 3])
def test_noncactus_mothers_have_noncactus_daughters(v):
    for cls in census(v).classes:
        if cls.connected and not cls.cactus:
            for _, d in all_pinches(cls.graph):
                assert not is_cactus(d)


def test_pinch_preserves_degree_and_grows():
    for cls in census(2).classes:
        for _, d in all_pinches(cls.graph):
            assert d.m == 3
            assert (d.adjacency.sum(axis=0) == 2).all()


def test_invalid_pinch():
    with pytest.raises(ValueError):
        pinch(g(EYE), (0, 0))
    with pytest.raises(ValueError):
        pinch(g(EYE), (7,))
    with pytest.raises(ValueError):
        pinch(g(EYE), (0, 1, 2))


@pytest.mark.parametrize("m", [2, 3])
def test_leaf_removal_preserves_cactus(m):
    checked = 0
    for cls in census(m).classes:
        if not (cls.cactus and cls.connected):
            continue
        gr = cls.graph
        for v in range(m):
            if (v, v) in gr.edges:
                smaller = remove_leaf(gr, v)
                assert smaller.m == m - 1 and is_cactus(smaller)
                checked += 1
    assert checked > 0


def test_remove_leaf_rejects_non_leaf():
    with pytest.raises(ValueError):
        remove_leaf(g(EYE), 0)
