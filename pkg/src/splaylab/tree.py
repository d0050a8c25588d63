"""Arena-backed binary search tree primitives.

Nodes live in parallel arrays indexed by integer handles; ``NONE`` (-1)
marks a missing child.  All walks are iterative: spine-shaped trees of
depth n are routine inputs and must not hit the call stack.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import (
    DuplicateKeyError,
    InvalidHandleError,
    RotateAtRootError,
    SymmetricOrderError,
    TreeSyntaxError,
)

NONE = -1


@dataclass
class ValidationReport:
    ok: bool
    violation: str | None = None


class Tree:
    """Binary search tree over distinct integer keys."""

    __slots__ = ("key", "left", "right", "parent", "root")

    def __init__(self):
        self.key: list[int] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.parent: list[int] = []
        self.root: int = NONE

    @property
    def size(self) -> int:
        return len(self.key)

    def _check_handle(self, h: int) -> None:
        if not (0 <= h < len(self.key)):
            raise InvalidHandleError(f"handle {h} out of range")

    def _alloc(self, k: int, parent: int) -> int:
        h = len(self.key)
        self.key.append(k)
        self.left.append(NONE)
        self.right.append(NONE)
        self.parent.append(parent)
        return h

    def insert(self, k: int) -> int:
        """Leaf-insert key k; returns the handle of the new leaf."""
        if self.root == NONE:
            h = self._alloc(k, NONE)
            self.root = h
            return h
        v = self.root
        while True:
            kv = self.key[v]
            if k == kv:
                raise DuplicateKeyError(f"key {k} already present")
            if k < kv:
                if self.left[v] == NONE:
                    h = self._alloc(k, v)
                    self.left[v] = h
                    return h
                v = self.left[v]
            else:
                if self.right[v] == NONE:
                    h = self._alloc(k, v)
                    self.right[v] = h
                    return h
                v = self.right[v]

    def search(self, k: int) -> int:
        """Return the handle holding key k, or NONE."""
        v = self.root
        while v != NONE:
            kv = self.key[v]
            if k == kv:
                return v
            v = self.left[v] if k < kv else self.right[v]
        return NONE

    def rotate(self, x: int) -> None:
        """Rotate at x, moving it into its parent's place."""
        self._check_handle(x)
        y = self.parent[x]
        if y == NONE:
            raise RotateAtRootError("rotation at the root is undefined")
        g = self.parent[y]
        if self.left[y] == x:
            b = self.right[x]
            self.left[y] = b
            if b != NONE:
                self.parent[b] = y
            self.right[x] = y
        else:
            b = self.left[x]
            self.right[y] = b
            if b != NONE:
                self.parent[b] = y
            self.left[x] = y
        self.parent[y] = x
        self.parent[x] = g
        if g == NONE:
            self.root = x
        elif self.left[g] == y:
            self.left[g] = x
        else:
            self.right[g] = x

    def depths(self, x: int) -> tuple[int, int, int]:
        """Return (depth, left_depth, right_depth) of node x."""
        self._check_handle(x)
        d = ld = rd = 0
        v = x
        while True:
            p = self.parent[v]
            if p == NONE:
                break
            if self.left[p] == v:
                ld += 1
            else:
                rd += 1
            d += 1
            v = p
        return d, ld, rd

    def lca(self, a: int, b: int) -> int:
        """Lowest common ancestor of two live handles."""
        self._check_handle(a)
        self._check_handle(b)
        ka, kb = self.key[a], self.key[b]
        lo, hi = (ka, kb) if ka <= kb else (kb, ka)
        v = self.root
        while True:
            kv = self.key[v]
            if kv < lo:
                v = self.right[v]
            elif kv > hi:
                v = self.left[v]
            else:
                return v

    def validate(self) -> ValidationReport:
        """Check symmetric order, parent links, size and acyclicity."""
        n = len(self.key)
        if self.root == NONE:
            if n == 0:
                return ValidationReport(True)
            return ValidationReport(False, f"empty root but {n} allocated nodes")
        if not (0 <= self.root < n):
            return ValidationReport(False, f"root handle {self.root} out of range")
        if self.parent[self.root] != NONE:
            return ValidationReport(False, "root has a parent")
        seen = [False] * n
        count = 0
        stack = [(self.root, None, None)]
        while stack:
            v, lo, hi = stack.pop()
            if seen[v]:
                return ValidationReport(False, f"node {v} reachable twice (cycle)")
            seen[v] = True
            count += 1
            kv = self.key[v]
            if (lo is not None and kv <= lo) or (hi is not None and kv >= hi):
                return ValidationReport(
                    False, f"symmetric order violated at key {kv}"
                )
            for c, clo, chi in ((self.left[v], lo, kv), (self.right[v], kv, hi)):
                if c == NONE:
                    continue
                if not (0 <= c < n):
                    return ValidationReport(False, f"child handle {c} out of range")
                if self.parent[c] != v:
                    return ValidationReport(
                        False, f"stale parent link at node {c}"
                    )
                stack.append((c, clo, chi))
        if count != n:
            return ValidationReport(
                False, f"{count} reachable nodes but {n} allocated"
            )
        return ValidationReport(True)

    def copy(self) -> "Tree":
        t = Tree()
        t.key = list(self.key)
        t.left = list(self.left)
        t.right = list(self.right)
        t.parent = list(self.parent)
        t.root = self.root
        return t

    def same_shape(self, other: "Tree") -> bool:
        """Structural equality: same keys in the same shape (handles may differ)."""
        if self.size != other.size:
            return False
        if self.root == NONE:
            return other.root == NONE
        stack = [(self.root, other.root)]
        while stack:
            a, b = stack.pop()
            if (a == NONE) != (b == NONE):
                return False
            if a == NONE:
                continue
            if self.key[a] != other.key[b]:
                return False
            stack.append((self.left[a], other.left[b]))
            stack.append((self.right[a], other.right[b]))
        return True

    def __repr__(self):
        return f"Tree({format_tree(self)})"


_TOKEN = re.compile(r"\[|\]|∅|-?\d+|\S")


def format_tree(tree: Tree) -> str:
    """Render a tree in the bracket literal grammar."""
    if tree.root == NONE:
        return "∅"
    parts: list[str] = []
    stack: list[object] = [tree.root]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        l, r = tree.left[item], tree.right[item]
        parts.append(f"[{tree.key[item]}")
        if l == NONE and r == NONE:
            parts.append("]")
        elif r == NONE:
            parts.append(" ")
            stack += ["]", l]
        elif l == NONE:
            parts.append(" ∅ ")
            stack += ["]", r]
        else:
            parts.append(" ")
            stack += ["]", r, " ", l]
    return "".join(parts)


def parse_tree(text: str) -> Tree:
    """Parse the bracket literal grammar: ∅, [k], [k L], [k L R], [k ∅ R]."""
    tokens = _TOKEN.findall(text)
    tree = Tree()
    if tokens == ["∅"]:
        return tree
    # frame: [handle, children_seen]
    stack: list[list[int]] = []
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok == "[":
            i += 1
            if i >= n or not re.fullmatch(r"-?\d+", tokens[i]):
                raise TreeSyntaxError("expected key after '['")
            k = int(tokens[i])
            parent = NONE
            if stack:
                ph, seen = stack[-1]
                if seen >= 2:
                    raise TreeSyntaxError("node has more than two children")
                parent = ph
            elif tree.size > 0:
                raise TreeSyntaxError("trailing content after root node")
            h = tree._alloc(k, parent)
            if parent != NONE:
                if stack[-1][1] == 0:
                    tree.left[parent] = h
                else:
                    tree.right[parent] = h
                stack[-1][1] += 1
            else:
                tree.root = h
            stack.append([h, 0])
        elif tok == "∅":
            if not stack:
                raise TreeSyntaxError("'∅' outside a node")
            if stack[-1][1] >= 2:
                raise TreeSyntaxError("node has more than two children")
            stack[-1][1] += 1
        elif tok == "]":
            if not stack:
                raise TreeSyntaxError("unmatched ']'")
            stack.pop()
        else:
            raise TreeSyntaxError(f"unexpected token {tok!r}")
        i += 1
    if stack:
        raise TreeSyntaxError("unclosed '['")
    if tree.root == NONE:
        raise TreeSyntaxError("empty input")
    report = tree.validate()
    if not report.ok:
        raise SymmetricOrderError(report.violation)
    return tree
