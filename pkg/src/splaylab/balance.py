"""Weight balance, balanced/random tree generators, ranks, and the
dynamic-finger sum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import KeyNotFoundError, SizeNotPerfectError
from .patterns import bst_of
from .tree import NONE, Tree


@dataclass
class DfSum:
    """Dynamic-finger sum: total bits plus the per-step log terms."""

    value: float
    terms: np.ndarray


def rank(tree: Tree, k: int) -> int:
    """Number of keys in the tree that are <= k (k must be present).

    Counted structurally; with normalized keys 1..n this equals k, which
    tests use as a cross-check.
    """
    if tree.search(k) == NONE:
        raise KeyNotFoundError(f"key {k} not in tree")
    count = 0
    stack = [tree.root]
    while stack:
        v = stack.pop()
        if v == NONE:
            continue
        if tree.key[v] <= k:
            count += 1
            stack.append(tree.left[v])
            stack.append(tree.right[v])
        else:
            stack.append(tree.left[v])
    return count


def df_sum(tree: Tree, xs: Sequence[int]) -> DfSum:
    """Sum of log2(|rank gap| + 1) over consecutive requests.

    Depends only on the key set of the tree, not its shape.  Terms are
    accumulated in sequence order in double precision.
    """
    keys = sorted(tree.key)
    rank_of = {k: i + 1 for i, k in enumerate(keys)}
    try:
        r = np.array([rank_of[x] for x in xs], dtype=np.int64)
    except KeyError as e:
        raise KeyNotFoundError(f"key {e.args[0]} not in tree") from None
    if len(r) <= 1:
        return DfSum(0.0, np.zeros(0))
    terms = np.log2(np.abs(np.diff(r)) + 1.0)
    return DfSum(float(np.sum(terms)), terms)


def is_weight_balanced(tree: Tree, alpha) -> bool:
    """True iff min(|L|,|R|)+1 >= alpha*(|x|+1) at every node.

    The comparison is exact: alpha is converted to a Fraction and the
    inequality cross-multiplied in integers.
    """
    a = Fraction(alpha)
    if not 0 < a <= Fraction(1, 2):
        raise ValueError("alpha must be in (0, 1/2]")
    if tree.root == NONE:
        return True
    n = tree.size
    size = [1] * n
    order: list[int] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        for c in (tree.left[v], tree.right[v]):
            if c != NONE:
                stack.append(c)
    for v in reversed(order):
        for c in (tree.left[v], tree.right[v]):
            if c != NONE:
                size[v] += size[c]
    p, q = a.numerator, a.denominator
    for v in order:
        l = size[tree.left[v]] if tree.left[v] != NONE else 0
        r = size[tree.right[v]] if tree.right[v] != NONE else 0
        if (min(l, r) + 1) * q < p * (size[v] + 1):
            return False
    return True


def gen_perfect_tree(n: int) -> Tree:
    """Perfectly balanced tree over keys 1..n; n must be 2**k - 1."""
    if n < 0 or (n + 1) & n != 0:
        raise SizeNotPerfectError(f"{n} is not 2**k - 1")
    tree = Tree()
    if n == 0:
        return tree
    stack = [(1, n, NONE, True)]
    while stack:
        lo, hi, ph, is_left = stack.pop()
        mid = (lo + hi) // 2
        h = tree._alloc(mid, ph)
        if ph == NONE:
            tree.root = h
        elif is_left:
            tree.left[ph] = h
        else:
            tree.right[ph] = h
        if mid + 1 <= hi:
            stack.append((mid + 1, hi, h, False))
        if lo <= mid - 1:
            stack.append((lo, mid - 1, h, True))
    return tree


def random_permutation(n: int, seed: int) -> list[int]:
    """Seeded uniform permutation of 1..n (numpy PCG64 generator)."""
    rng = np.random.default_rng(seed)
    return [int(k) + 1 for k in rng.permutation(n)]


def gen_random_tree(n: int, seed: int) -> Tree:
    """Insertion tree of a seeded uniform random permutation of 1..n."""
    if n == 0:
        return Tree()
    return bst_of(random_permutation(n, seed))
