"""Splay steps, splaying to root, insertion splaying, and cost accounting."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

from .errors import KeyNotFoundError, RotateAtRootError
from .patterns import bst_of, check_permutation
from .tree import NONE, Tree


class StepCase(Enum):
    ZIG = "zig"
    ZIGZAG = "zig-zag"
    ZIGZIG = "zig-zig"


@dataclass(frozen=True)
class StepKind:
    """Splay-step classification.

    side encodes orientation: for ZIG a single char ('L' if x is a left
    child); for ZIGZAG/ZIGZIG two chars, x's side then its parent's side.
    """

    case: StepCase
    side: str


class SplayCost(NamedTuple):
    depth_before: int
    cost: int
    rotations: int


@dataclass
class SequenceCost:
    m: int = 0
    total: int = 0
    per_op: list[SplayCost] = field(default_factory=list)

    def add(self, op: SplayCost) -> None:
        self.m += 1
        self.total += op.cost
        self.per_op.append(op)


def classify_step(tree: Tree, x: int) -> StepKind:
    """Classify the splay step at x without executing it."""
    tree._check_handle(x)
    p = tree.parent[x]
    if p == NONE:
        raise RotateAtRootError("no splay step at the root")
    x_side = "L" if tree.left[p] == x else "R"
    g = tree.parent[p]
    if g == NONE:
        return StepKind(StepCase.ZIG, x_side)
    p_side = "L" if tree.left[g] == p else "R"
    case = StepCase.ZIGZIG if x_side == p_side else StepCase.ZIGZAG
    return StepKind(case, x_side + p_side)


def splay_step(tree: Tree, x: int) -> StepKind:
    """Execute one splay step at x; x rises one (zig) or two levels."""
    kind = classify_step(tree, x)
    if kind.case is StepCase.ZIG:
        tree.rotate(x)
    elif kind.case is StepCase.ZIGZAG:
        tree.rotate(x)
        tree.rotate(x)
    else:  # zig-zig: rotate at the parent first
        tree.rotate(tree.parent[x])
        tree.rotate(x)
    return kind


def splay(tree: Tree, x: int) -> SplayCost:
    """Splay x to the root; cost is its depth before splaying plus one."""
    tree._check_handle(x)
    depth_before, _, _ = tree.depths(x)
    rotations = 0
    while tree.parent[x] != NONE:
        kind = splay_step(tree, x)
        rotations += 1 if kind.case is StepCase.ZIG else 2
    assert rotations == depth_before
    return SplayCost(depth_before, depth_before + 1, rotations)


def splay_sequence(tree: Tree, xs: Sequence[int]) -> SequenceCost:
    """Splay the keys of xs in order, accumulating exact costs."""
    cost = SequenceCost()
    for k in xs:
        h = tree.search(k)
        if h == NONE:
            raise KeyNotFoundError(f"key {k} not in tree")
        cost.add(splay(tree, h))
    return cost


def insertion_splay(tree: Tree, k: int) -> SplayCost:
    """Leaf-insert k, then splay the new node to the root."""
    return splay(tree, tree.insert(k))


def insertion_splay_sequence(
    pi: Sequence[int], tree: Tree | None = None
) -> SequenceCost:
    """Insertion-splay a permutation starting from an empty tree.

    If a tree is supplied it must be empty; it is left holding the final
    state, which matches the final state of splaying pi from BST(pi).
    """
    pi = check_permutation(pi)
    if tree is None:
        tree = Tree()
    elif tree.size != 0:
        raise ValueError("insertion_splay_sequence requires an empty tree")
    cost = SequenceCost()
    for k in pi:
        cost.add(insertion_splay(tree, k))
    return cost
