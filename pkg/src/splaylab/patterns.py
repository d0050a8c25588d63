"""Traversals, insertion trees, and pattern-avoidance recognizers."""

from __future__ import annotations

from bisect import bisect_left
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import LengthMismatchError, NotAPermutationError
from .tree import NONE, Tree

# object-based code below is the reference; large inputs take the jitted
# array route, which tests hold to byte-for-byte agreement
_FAST_MIN_N = 2048

Permutation = list[int]


def check_permutation(items: Sequence[int]) -> Permutation:
    """Return items as a list, verifying it is a permutation of 1..n."""
    pi = list(items)
    n = len(pi)
    seen = [False] * (n + 1)
    for k in pi:
        if not isinstance(k, int) or not (1 <= k <= n) or seen[k]:
            raise NotAPermutationError(f"not a permutation of 1..{n}")
        seen[k] = True
    return pi


def preorder(tree: Tree) -> Permutation:
    """Root, then left subtree, then right subtree."""
    out: list[int] = []
    if tree.root == NONE:
        return out
    stack = [tree.root]
    while stack:
        v = stack.pop()
        out.append(tree.key[v])
        if tree.right[v] != NONE:
            stack.append(tree.right[v])
        if tree.left[v] != NONE:
            stack.append(tree.left[v])
    return out


def postorder(tree: Tree) -> Permutation:
    """Left subtree, then right subtree, then root."""
    out: list[int] = []
    if tree.root == NONE:
        return out
    stack = [tree.root]
    while stack:
        v = stack.pop()
        out.append(tree.key[v])
        if tree.left[v] != NONE:
            stack.append(tree.left[v])
        if tree.right[v] != NONE:
            stack.append(tree.right[v])
    out.reverse()
    return out


def bst_of(pi: Sequence[int]) -> Tree:
    """Insertion tree BST(pi): leaf-insert keys in order of appearance.

    Runs in O(n) using the neighbor trick: when a key arrives, its parent
    is whichever of its predecessor/successor among earlier keys was
    inserted later.  Walking the sorted linked list backwards over the
    insertion order recovers those neighbors without any tree descent.
    """
    pi = check_permutation(pi)
    n = len(pi)
    tree = Tree()
    if n == 0:
        return tree
    pos = [0] * (n + 2)
    for i, k in enumerate(pi):
        pos[k] = i
    prv = list(range(-1, n + 1))  # prv[k] = k - 1, keys 1..n plus sentinels
    nxt = list(range(1, n + 3))  # nxt[k] = k + 1
    parent_key = [0] * (n + 1)
    goes_left = [False] * (n + 1)
    for i in range(n - 1, 0, -1):
        k = pi[i]
        p, s = prv[k], nxt[k]
        if p >= 1 and (s > n or pos[p] > pos[s]):
            parent_key[k] = p  # right child of predecessor
        else:
            parent_key[k] = s
            goes_left[k] = True
        nxt[p] = s
        prv[s] = p
    h_of = [0] * (n + 1)
    for i, k in enumerate(pi):
        h_of[k] = tree._alloc(k, NONE)
    tree.root = h_of[pi[0]]
    for k in pi[1:]:
        h, ph = h_of[k], h_of[parent_key[k]]
        tree.parent[h] = ph
        if goes_left[k]:
            tree.left[ph] = h
        else:
            tree.right[ph] = h
    return tree


def _ranks(seq: Sequence[int]) -> list[int]:
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    r = [0] * len(seq)
    for rank, i in enumerate(order):
        r[i] = rank
    return r


def order_isomorphic(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff the two sequences have the same relative order of entries."""
    if len(a) != len(b):
        raise LengthMismatchError(f"lengths differ: {len(a)} vs {len(b)}")
    return _ranks(a) == _ranks(b)


def contains_pattern(pi: Sequence[int], alpha: Sequence[int]) -> bool:
    """Naive pattern containment oracle: enumerate all |alpha|-subsequences.

    Only patterns of length <= 4 are accepted; this is a small-n test
    oracle, not a matcher.
    """
    m = len(alpha)
    if m > 4:
        raise ValueError("pattern length is limited to 4")
    if m > len(pi):
        return False
    alpha_ranks = _ranks(alpha)
    for idx in combinations(range(len(pi)), m):
        if _ranks([pi[i] for i in idx]) == alpha_ranks:
            return True
    return False


def _is_preorder_fast(pi: list[int]) -> bool:
    from . import _kernels

    arr = np.asarray(pi, dtype=np.int64)
    left, right, _, root = _kernels._build_bst(arr)
    out = _kernels.preorder_kernel(left, right, root, len(pi))
    return bool(np.array_equal(out, arr))


def is_preorder(pi: Sequence[int]) -> bool:
    """True iff pi is the preorder of some BST (equivalently avoids (2,3,1))."""
    pi = check_permutation(pi)
    if len(pi) >= _FAST_MIN_N:
        return _is_preorder_fast(pi)
    return pi == preorder(bst_of(pi))


def is_postorder(pi: Sequence[int]) -> bool:
    """True iff pi is the postorder of some BST (equivalently avoids (3,1,2)).

    Reversing a postorder and complementing its keys yields the preorder
    of the mirrored tree, so the preorder recognizer does the work.
    """
    pi = check_permutation(pi)
    n = len(pi)
    rc = [n + 1 - k for k in reversed(pi)]
    if n >= _FAST_MIN_N:
        return _is_preorder_fast(rc)
    return rc == preorder(bst_of(rc))


def decreasing_pattern_length(pi: Sequence[int]) -> int:
    """Length of the longest strictly decreasing subsequence.

    pi avoids (k,...,2,1) iff the result is <= k-1.  Patience-style
    O(n log n): the longest strictly decreasing subsequence of pi equals
    the longest strictly increasing subsequence of the negated entries.
    """
    pi = check_permutation(pi)
    tails: list[int] = []
    for k in pi:
        v = -k
        i = bisect_left(tails, v)
        if i == len(tails):
            tails.append(v)
        else:
            tails[i] = v
    return len(tails)


def mirror(pi: Sequence[int]) -> Permutation:
    """Complement map k -> n+1-k; swaps the (2,3,1)/(2,1,3) and
    (3,1,2)/(1,3,2) avoidance classes."""
    pi = check_permutation(pi)
    n = len(pi)
    return [n + 1 - k for k in pi]
