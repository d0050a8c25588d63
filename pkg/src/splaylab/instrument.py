"""Touched/untouched bookkeeping, the potential function, amortized-cost
ledgers, and checkers for the structural invariants of insertion splaying.

Two engines produce ledgers: a readable reference engine that recomputes
the potential from scratch after every splay, and the incremental flat-array
kernel in _kernels.py.  They must agree step for step; tests enforce this.
All quantities are exact integers.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import WrongClassError
from .patterns import (
    bst_of,
    check_permutation,
    decreasing_pattern_length,
    is_postorder,
    is_preorder,
)
from .splay import StepCase, splay, splay_step
from .tree import NONE, Tree


@dataclass
class MarkState:
    """Evolving splayed tree plus touched flags, against the immutable
    insertion tree it started from."""

    tree: Tree
    touched: list[bool]
    original: Tree

    def touched_count(self) -> int:
        return sum(self.touched)


@dataclass
class RunLedger:
    """Per-splay record of an insertion-splay run."""

    keys: Sequence[int]
    t: Sequence[int]
    phi: Sequence[int]
    c: Sequence[int]
    rotations: Sequence[int]
    invariants_ok: bool = True
    violation_step: int | None = None
    subroot_snapshots: list[list[int]] | None = None

    @property
    def n(self) -> int:
        return len(self.keys)

    @property
    def total_cost(self) -> int:
        return int(sum(self.t))

    @property
    def max_amortized(self) -> int:
        return int(max(self.c)) if len(self.c) else 0

    def write_csv(self, f) -> None:
        f.write("i,key,t_i,phi_i,c_i,rotations,invariant_ok\n")
        ok = "true" if self.invariants_ok else "false"
        for i in range(self.n):
            step_ok = ok if self.violation_step in (None, -1) or i < self.violation_step else "false"
            f.write(
                f"{i + 1},{self.keys[i]},{self.t[i]},{self.phi[i]},"
                f"{self.c[i]},{self.rotations[i]},{step_ok}\n"
            )


def sub_roots(state: MarkState) -> list[int]:
    """Handles of all sub-roots (untouched nodes with touched parents),
    in increasing key order.

    Convention: before anything is touched the set is the tree root, so
    the selection-rule checkers are total at step one.
    """
    tree = state.tree
    if tree.root == NONE:
        return []
    if not state.touched[tree.root]:
        return [tree.root]
    out: list[int] = []
    # in-order over the touched region; untouched children are sub-roots
    stack = [(tree.root, 0)]
    while stack:
        v, phase = stack.pop()
        if phase == 0:
            stack.append((v, 1))
            c = tree.left[v]
            if c != NONE:
                if state.touched[c]:
                    stack.append((c, 0))
                else:
                    out.append(c)
        else:
            c = tree.right[v]
            if c != NONE:
                if state.touched[c]:
                    stack.append((c, 0))
                else:
                    out.append(c)
    return out


def potential(state: MarkState) -> int:
    """Twice the number of touched nodes that are proper ancestors of
    sub-roots, computed from scratch."""
    tree = state.tree
    if tree.root == NONE:
        return 0
    order: list[int] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        if tree.left[v] != NONE:
            stack.append(tree.left[v])
        if tree.right[v] != NONE:
            stack.append(tree.right[v])
    has_untouched = [False] * tree.size
    count = 0
    for v in reversed(order):
        h = not state.touched[v]
        for c in (tree.left[v], tree.right[v]):
            if c != NONE and has_untouched[c]:
                h = True
        has_untouched[v] = h
        if state.touched[v] and h:
            count += 1
    return 2 * count


def check_touched_connected(state: MarkState) -> bool:
    """Touched nodes must form a connected subtree containing the root."""
    tree = state.tree
    total = state.touched_count()
    if total == 0:
        return True
    if tree.root == NONE or not state.touched[tree.root]:
        return False
    seen = 0
    stack = [tree.root]
    while stack:
        v = stack.pop()
        seen += 1
        for c in (tree.left[v], tree.right[v]):
            if c != NONE and state.touched[c]:
                stack.append(c)
    return seen == total


def check_untouched_identity(state: MarkState) -> bool:
    """Subtrees hanging below sub-roots must be shape-identical to their
    counterparts in the original insertion tree."""
    tree, orig = state.tree, state.original
    for s in sub_roots(state):
        o = orig.search(tree.key[s])
        if o == NONE:
            return False
        stack = [(s, o)]
        while stack:
            a, b = stack.pop()
            if (a == NONE) != (b == NONE):
                return False
            if a == NONE:
                continue
            if tree.key[a] != orig.key[b]:
                return False
            stack.append((tree.left[a], orig.left[b]))
            stack.append((tree.right[a], orig.right[b]))
    return True


def check_preorder_invariant(state: MarkState) -> bool:
    """Every sub-root sits at left-depth 0 or 1 in the splayed tree."""
    tree = state.tree
    for s in sub_roots(state):
        _, ld, _ = tree.depths(s)
        if ld > 1:
            return False
    return True


def _upward_path_info(tree: Tree, s: int) -> tuple[bool, int, int]:
    """(lefts-then-rights?, left_depth, right_depth) of the access path."""
    lefts = rights = 0
    shape_ok = True
    v = s
    while True:
        p = tree.parent[v]
        if p == NONE:
            break
        if tree.left[p] == v:
            lefts += 1
        else:
            if lefts > 0:
                shape_ok = False  # a right edge above a left edge
            rights += 1
        v = p
    return shape_ok, lefts, rights


def check_postorder_invariant(state: MarkState) -> bool:
    """Sub-root paths are lefts-then-rights and sub-root left-depths
    strictly decrease in increasing key order.

    (No lower bound is put on the right-pointer count: states such as
    the one after splaying key 3 of the postorder (2,3,1) leave a
    sub-root on a pure-left path.)
    """
    tree = state.tree
    prev_ld = None
    for s in sub_roots(state):
        shape_ok, ld, _ = _upward_path_info(tree, s)
        if not shape_ok:
            return False
        if prev_ld is not None and ld >= prev_ld:
            return False
        prev_ld = ld
    return True


def check_ancestor_precedence(pi: Sequence[int]) -> bool:
    """Every proper ancestor in BST(pi) precedes its descendants in pi."""
    pi = check_permutation(pi)
    tree = bst_of(pi)
    pos = {k: i for i, k in enumerate(pi)}
    for h in range(tree.size):
        p = tree.parent[h]
        if p != NONE and pos[tree.key[p]] >= pos[tree.key[h]]:
            return False
    return True


def check_subroot_rule(pi: Sequence[int], kind: str) -> bool:
    """Verify the sub-root selection rule along the insertion-splay run.

    kind "preorder": each key is the smallest current sub-root.
    kind "postorder": each key is either the unique sub-root above the
    touched maximum or the largest sub-root below it.
    """
    pi = check_permutation(pi)
    if kind == "preorder":
        if not is_preorder(pi):
            raise WrongClassError("permutation is not a preorder")
    elif kind == "postorder":
        if not is_postorder(pi):
            raise WrongClassError("permutation is not a postorder")
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if not pi:
        return True
    original = bst_of(pi)
    tree = original.copy()
    touched = [False] * tree.size
    state = MarkState(tree, touched, original)
    mt = 0
    for i, k in enumerate(pi):
        srs = [tree.key[h] for h in sub_roots(state)]
        if kind == "preorder":
            if k != min(srs):
                return False
        else:
            if i == 0:
                if k != srs[0]:  # convention: sole sub-root is the root
                    return False
            elif k > mt:
                above = [s for s in srs if s > mt]
                if above != [k]:
                    return False
            else:
                below = [s for s in srs if s < mt]
                if not below or k != max(below):
                    return False
        h = tree.search(k)
        touched[h] = True
        splay(tree, h)
        mt = max(mt, k)
    return True


def check_comb(tree: Tree, orientation: str) -> bool:
    """LEFT: no left child has a right child (left-toothed comb);
    RIGHT is the mirror condition."""
    if orientation not in ("left", "right"):
        raise ValueError(f"unknown orientation {orientation!r}")
    for h in range(tree.size):
        p = tree.parent[h]
        if p == NONE:
            continue
        if orientation == "left":
            if tree.left[p] == h and tree.right[h] != NONE:
                return False
        else:
            if tree.right[p] == h and tree.left[h] != NONE:
                return False
    return True


def check_k_avoiding_shape(pi: Sequence[int], k: int) -> bool:
    """For (k,...,2,1)-avoiding pi: every node of BST(pi) has left-depth
    at most k-2, and plain insertion always takes the smallest sub-root
    among those with its left-depth."""
    pi = check_permutation(pi)
    if decreasing_pattern_length(pi) > k - 1:
        raise WrongClassError(f"permutation does not avoid ({k},...,2,1)")
    if not pi:
        return True
    tree = bst_of(pi)
    # static left-depths (no splaying, so BST(prefix) is a subtree of BST(pi))
    ld = [0] * tree.size
    stack = [tree.root]
    while stack:
        v = stack.pop()
        if ld[v] > k - 2:
            return False
        if tree.left[v] != NONE:
            ld[tree.left[v]] = ld[v] + 1
            stack.append(tree.left[v])
        if tree.right[v] != NONE:
            ld[tree.right[v]] = ld[v]
            stack.append(tree.right[v])
    heaps: dict[int, list[int]] = {0: [tree.key[tree.root]]}
    for key in pi:
        h = tree.search(key)
        d = ld[h]
        heap = heaps.get(d)
        if not heap or heap[0] != key:
            return False
        heapq.heappop(heap)
        for c in (tree.left[h], tree.right[h]):
            if c != NONE:
                heapq.heappush(heaps.setdefault(ld[c], []), tree.key[c])
    return True


_CHECKS = ("auto", "none", "preorder", "postorder")


def _resolve_checks(pi: list[int], checks: str) -> str:
    if checks not in _CHECKS:
        raise ValueError(f"checks must be one of {_CHECKS}")
    if checks != "auto":
        return checks
    if is_preorder(pi):
        return "preorder"
    if is_postorder(pi):
        return "postorder"
    return "none"


def instrumented_run(
    pi: Sequence[int],
    engine: str = "auto",
    checks: str = "auto",
    paranoid: bool = False,
    collect_subroots: bool = False,
) -> RunLedger:
    """Insertion-splay pi starting from all-untouched BST(pi), recording
    actual cost, potential, amortized cost and rotations per step.

    checks selects the class invariants verified along the run ("auto"
    recognizes the class).  paranoid and collect_subroots force the
    reference engine, which also validates the tree and the untouched-
    subtree identity after every splay step.
    """
    pi = check_permutation(pi)
    mode = _resolve_checks(pi, checks)
    if engine == "auto":
        engine = (
            "reference"
            if (paranoid or collect_subroots or len(pi) < 256)
            else "fast"
        )
    if engine == "fast" and (paranoid or collect_subroots):
        raise ValueError("paranoid/collect_subroots require the reference engine")
    if engine == "fast":
        return _run_fast(pi, mode)
    if engine != "reference":
        raise ValueError(f"unknown engine {engine!r}")
    return _run_reference(pi, mode, paranoid, collect_subroots)


def _run_fast(pi: list[int], mode: str) -> RunLedger:
    arr = np.asarray(pi, dtype=np.int64)
    check_mode = {"none": 0, "preorder": 1, "postorder": 2}[mode]
    t, phi, rot, viol, _, _, _, _ = _kernels.instrumented_kernel(arr, check_mode)
    c = t + phi - np.concatenate((np.zeros(1, np.int64), phi[:-1]))
    return RunLedger(
        keys=arr,
        t=t,
        phi=phi,
        c=c,
        rotations=rot,
        invariants_ok=(viol == -1),
        violation_step=None if viol == -1 else int(viol),
    )


def _run_reference(
    pi: list[int], mode: str, paranoid: bool, collect_subroots: bool
) -> RunLedger:
    original = bst_of(pi)
    tree = original.copy()
    touched = [False] * tree.size
    state = MarkState(tree, touched, original)
    t: list[int] = []
    phi: list[int] = []
    c: list[int] = []
    rot: list[int] = []
    snapshots: list[list[int]] | None = [] if collect_subroots else None
    ok = True
    viol: int | None = None
    prev_phi = 0
    mt = 0
    rule_kind = mode if mode in ("preorder", "postorder") else None
    for i, k in enumerate(pi):
        if ok and rule_kind is not None:
            if not _rule_holds(state, k, rule_kind, i, mt):
                ok, viol = False, i
        h = tree.search(k)
        touched[h] = True
        if paranoid:
            d, _, _ = tree.depths(h)
            rotations = 0
            while tree.parent[h] != NONE:
                kind = splay_step(tree, h)
                rotations += 1 if kind.case is StepCase.ZIG else 2
                if not tree.validate().ok or not check_touched_connected(state):
                    ok, viol = False, i
                if not check_untouched_identity(state):
                    ok, viol = False, i
            cost = d + 1
        else:
            sc = splay(tree, h)
            cost, rotations = sc.cost, sc.rotations
        mt = max(mt, k)
        t.append(cost)
        rot.append(rotations)
        p = potential(state)
        phi.append(p)
        c.append(cost + p - prev_phi)
        prev_phi = p
        if snapshots is not None:
            snapshots.append([tree.key[s] for s in sub_roots(state)])
        if ok and mode == "preorder" and not check_preorder_invariant(state):
            ok, viol = False, i
        if ok and mode == "postorder" and not check_postorder_invariant(state):
            ok, viol = False, i
    return RunLedger(
        keys=list(pi),
        t=t,
        phi=phi,
        c=c,
        rotations=rot,
        invariants_ok=ok,
        violation_step=viol,
        subroot_snapshots=snapshots,
    )


def _rule_holds(state: MarkState, k: int, kind: str, i: int, mt: int) -> bool:
    tree = state.tree
    srs = [tree.key[h] for h in sub_roots(state)]
    if kind == "preorder":
        return bool(srs) and k == min(srs)
    if i == 0:
        return srs == [k]
    if k > mt:
        return [s for s in srs if s > mt] == [k]
    below = [s for s in srs if s < mt]
    return bool(below) and k == max(below)
