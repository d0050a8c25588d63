from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from splaylab import (
    KeyNotFoundError,
    StepCase,
    Tree,
    bst_of,
    classify_step,
    format_tree,
    insertion_splay,
    insertion_splay_sequence,
    parse_tree,
    splay,
    splay_sequence,
    splay_step,
)


def test_classify_zig():
    tree = parse_tree("[2 [1] [3]]")
    kind = classify_step(tree, tree.search(1))
    assert kind.case is StepCase.ZIG and kind.side == "L"
    kind = classify_step(tree, tree.search(3))
    assert kind.case is StepCase.ZIG and kind.side == "R"


def test_classify_zigzig_zigzag():
    tree = parse_tree("[3 [2 [1]]]")
    assert classify_step(tree, tree.search(1)).case is StepCase.ZIGZIG
    tree = parse_tree("[3 [1 ∅ [2]]]")
    kind = classify_step(tree, tree.search(2))
    assert kind.case is StepCase.ZIGZAG and kind.side == "RL"


def test_zigzig_rotates_parent_first():
    # splaying 1 in the spine [3 [2 [1]]] must give [1 ∅ [2 ∅ [3]]],
    # not the [1 ∅ [3 [2]]] produced by two bottom rotations
    tree = parse_tree("[3 [2 [1]]]")
    splay_step(tree, tree.search(1))
    assert format_tree(tree) == "[1 ∅ [2 ∅ [3]]]"


def test_zigzag_shape():
    tree = parse_tree("[3 [1 ∅ [2]]]")
    splay_step(tree, tree.search(2))
    assert format_tree(tree) == "[2 [1] [3]]"


def test_splay_cost_is_depth_plus_one():
    tree = bst_of([4, 2, 1, 3, 6, 5])
    h = tree.search(5)
    d, _, _ = tree.depths(h)
    sc = splay(tree, h)
    assert sc == (d, d + 1, d)
    assert tree.root == h
    assert tree.validate().ok


def test_splay_root_costs_one():
    tree = bst_of([2, 1, 3])
    sc = splay(tree, tree.root)
    assert sc.cost == 1 and sc.rotations == 0


def test_splay_sequence_missing_key():
    tree = bst_of([2, 1, 3])
    with pytest.raises(KeyNotFoundError):
        splay_sequence(tree, [2, 9])


def test_insertion_splay():
    tree = Tree()
    assert insertion_splay(tree, 5).cost == 1
    assert insertion_splay(tree, 2).cost == 2
    assert tree.key[tree.root] == 2


def test_sequential_cost_formula():
    # splaying after each append keeps the tree a left spine of depth 1
    for n in range(1, 11):
        assert insertion_splay_sequence(list(range(1, n + 1))).total == 2 * n - 1


def test_insertion_splay_sequence_rejects_nonempty_tree():
    tree = bst_of([1, 2])
    with pytest.raises(ValueError):
        insertion_splay_sequence([1, 2], tree)


def test_insertion_equals_splaying_from_insertion_tree_exhaustive():
    for n in range(1, 7):
        for p in permutations(range(1, n + 1)):
            pi = list(p)
            t1 = Tree()
            c1 = insertion_splay_sequence(pi, t1)
            t2 = bst_of(pi)
            c2 = splay_sequence(t2, pi)
            assert c1.total == c2.total
            assert [op.cost for op in c1.per_op] == [op.cost for op in c2.per_op]
            assert t1.same_shape(t2)


@settings(deadline=None)
@given(st.permutations(list(range(1, 60))))
def test_insertion_equals_splaying_random(perm):
    t1 = Tree()
    c1 = insertion_splay_sequence(perm, t1)
    t2 = bst_of(perm)
    c2 = splay_sequence(t2, perm)
    assert c1.total == c2.total
    assert t1.same_shape(t2)


@settings(deadline=None)
@given(st.permutations(list(range(1, 40))), st.permutations(list(range(1, 40))))
def test_splay_sequence_keeps_tree_valid(build, xs):
    tree = bst_of(build)
    cost = splay_sequence(tree, xs)
    assert tree.validate().ok
    assert cost.m == len(xs)
    assert tree.key[tree.root] == xs[-1]
    assert cost.total >= len(xs)
