import pytest
from hypothesis import given, strategies as st

from splaylab import (
    NONE,
    DuplicateKeyError,
    InvalidHandleError,
    RotateAtRootError,
    SymmetricOrderError,
    Tree,
    TreeSyntaxError,
    format_tree,
    parse_tree,
)


def build(keys):
    tree = Tree()
    for k in keys:
        tree.insert(k)
    return tree


def inorder_keys(tree):
    out = []
    stack, v = [], tree.root
    while stack or v != NONE:
        while v != NONE:
            stack.append(v)
            v = tree.left[v]
        v = stack.pop()
        out.append(tree.key[v])
        v = tree.right[v]
    return out


def test_empty_tree():
    tree = Tree()
    assert tree.size == 0
    assert tree.root == NONE
    assert tree.search(1) == NONE
    assert tree.validate().ok
    assert format_tree(tree) == "∅"


def test_insert_search():
    tree = build([2, 1, 3])
    assert tree.size == 3
    for k in (1, 2, 3):
        h = tree.search(k)
        assert h != NONE and tree.key[h] == k
    assert tree.search(4) == NONE
    assert inorder_keys(tree) == [1, 2, 3]


def test_insert_duplicate():
    tree = build([5, 2])
    with pytest.raises(DuplicateKeyError):
        tree.insert(5)


def test_insert_returns_leaf_handle():
    tree = build([2, 3])
    h = tree.insert(1)
    assert tree.left[h] == NONE and tree.right[h] == NONE
    assert tree.key[tree.parent[h]] == 2


def test_rotate_left_child():
    # [2 [1] [3]] rotated at 1 -> [1 ∅ [2 ∅ [3]]]
    tree = parse_tree("[2 [1] [3]]")
    tree.rotate(tree.search(1))
    assert format_tree(tree) == "[1 ∅ [2 ∅ [3]]]"
    assert tree.validate().ok


def test_rotate_right_child():
    tree = parse_tree("[1 ∅ [2 ∅ [3]]]")
    tree.rotate(tree.search(2))
    assert format_tree(tree) == "[2 [1] [3]]"


def test_rotate_root_rejected():
    tree = build([1])
    with pytest.raises(RotateAtRootError):
        tree.rotate(tree.root)


def test_rotate_moves_middle_subtree():
    # y=[4], x its left child [2] with right subtree [3]; after rotate(x)
    # the middle subtree hangs left of y
    tree = parse_tree("[4 [2 [1] [3]] [5]]")
    tree.rotate(tree.search(2))
    assert format_tree(tree) == "[2 [1] [4 [3] [5]]]"
    assert tree.validate().ok


def test_depths():
    tree = parse_tree("[4 [2 [1] [3]] [5]]")
    assert tree.depths(tree.search(4)) == (0, 0, 0)
    assert tree.depths(tree.search(1)) == (2, 2, 0)
    assert tree.depths(tree.search(3)) == (2, 1, 1)
    assert tree.depths(tree.search(5)) == (1, 0, 1)


def test_lca():
    tree = parse_tree("[4 [2 [1] [3]] [6 [5] [7]]]")
    k = lambda h: tree.key[h]
    assert k(tree.lca(tree.search(1), tree.search(3))) == 2
    assert k(tree.lca(tree.search(1), tree.search(5))) == 4
    assert k(tree.lca(tree.search(5), tree.search(5))) == 5
    assert k(tree.lca(tree.search(6), tree.search(7))) == 6


def test_invalid_handle():
    tree = build([1, 2])
    with pytest.raises(InvalidHandleError):
        tree.depths(99)
    with pytest.raises(InvalidHandleError):
        tree.rotate(-2)


def test_copy_and_same_shape():
    tree = build([3, 1, 4, 2])
    dup = tree.copy()
    assert tree.same_shape(dup)
    dup.insert(5)
    assert not tree.same_shape(dup)


def test_parse_format_examples():
    for text in ("∅", "[7]", "[2 [1] [3]]", "[3 [1 ∅ [2]]]", "[1 ∅ [2]]"):
        assert format_tree(parse_tree(text)) == text


def test_parse_rejects_garbage():
    for bad in ("", "[", "[1 [2]", "[]", "[1 2 3 4]", "x"):
        with pytest.raises(TreeSyntaxError):
            parse_tree(bad)


def test_parse_rejects_symmetric_order_violation():
    with pytest.raises(SymmetricOrderError):
        parse_tree("[1 [2]]")
    with pytest.raises(SymmetricOrderError):
        parse_tree("[2 ∅ [1]]")


@given(st.permutations(list(range(1, 12))))
def test_random_insertions_valid(perm):
    tree = build(perm)
    assert tree.validate().ok
    assert inorder_keys(tree) == sorted(perm)


@given(st.permutations(list(range(1, 10))))
def test_format_parse_roundtrip(perm):
    tree = build(perm)
    again = parse_tree(format_tree(tree))
    assert tree.same_shape(again)


@given(st.permutations(list(range(1, 10))), st.integers(0, 8))
def test_rotate_preserves_inorder(perm, which):
    tree = build(perm)
    h = tree.search(perm[which])
    if tree.parent[h] == NONE:
        return
    before = inorder_keys(tree)
    tree.rotate(h)
    assert inorder_keys(tree) == before
    assert tree.validate().ok
