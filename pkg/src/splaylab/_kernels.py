"""Flat-array splay engines for large runs.

Keys of a permutation of 1..n double as node handles; index 0 is the
null sentinel.  Everything here operates on int64 numpy arrays so the
hot loops can be jitted; if numba is missing the same code runs as
plain Python (slowly, but identically).  The readable object-based
implementations in tree.py/splay.py/instrument.py are the reference
these kernels are cross-checked against.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


from .tree import NONE, Tree


@njit(cache=True)
def _build_bst(pi):
    """Insertion tree of pi in O(n) via sorted-neighbor recovery."""
    n = pi.shape[0]
    left = np.zeros(n + 1, np.int64)
    right = np.zeros(n + 1, np.int64)
    parent = np.zeros(n + 1, np.int64)
    if n == 0:
        return left, right, parent, 0
    pos = np.zeros(n + 2, np.int64)
    for i in range(n):
        pos[pi[i]] = i
    prv = np.arange(-1, n + 1)
    nxt = np.arange(1, n + 3)
    for i in range(n - 1, 0, -1):
        k = pi[i]
        p = prv[k]
        s = nxt[k]
        if p >= 1 and (s > n or pos[p] > pos[s]):
            parent[k] = p
            right[p] = k
        else:
            parent[k] = s
            left[s] = k
        nxt[p] = s
        prv[s] = p
    return left, right, parent, pi[0]


@njit(cache=True)
def _subtree_counts(left, right, parent, root, n):
    u = np.ones(n + 1, np.int64)
    u[0] = 0
    if n == 0:
        return u
    order = np.empty(n, np.int64)
    stack = np.empty(n, np.int64)
    stack[0] = root
    top = 1
    idx = 0
    while top > 0:
        top -= 1
        v = stack[top]
        order[idx] = v
        idx += 1
        if left[v] != 0:
            stack[top] = left[v]
            top += 1
        if right[v] != 0:
            stack[top] = right[v]
            top += 1
    for j in range(n - 1, -1, -1):
        v = order[j]
        p = parent[v]
        if p != 0:
            u[p] += u[v]
    return u


@njit(cache=True)
def _rot(x, left, right, parent):
    y = parent[x]
    g = parent[y]
    if left[y] == x:
        b = right[x]
        left[y] = b
        if b != 0:
            parent[b] = y
        right[x] = y
    else:
        b = left[x]
        right[y] = b
        if b != 0:
            parent[b] = y
        left[x] = y
    parent[y] = x
    parent[x] = g
    if g != 0:
        if left[g] == y:
            left[g] = x
        else:
            right[g] = x


@njit(cache=True)
def _splay_plain(k, left, right, parent):
    r = 0
    while parent[k] != 0:
        p = parent[k]
        g = parent[p]
        if g == 0:
            _rot(k, left, right, parent)
            r += 1
        elif (left[p] == k) == (left[g] == p):
            _rot(p, left, right, parent)
            _rot(k, left, right, parent)
            r += 2
        else:
            _rot(k, left, right, parent)
            _rot(k, left, right, parent)
            r += 2
    return r


@njit(cache=True)
def _urot(x, left, right, parent, u, phi_half):
    """Rotation that maintains untouched-descendant counts and the
    potential; both x and its parent must be touched."""
    y = parent[x]
    if u[x] > 0:
        phi_half -= 1
    if u[y] > 0:
        phi_half -= 1
    ux = u[x]
    uy = u[y]
    g = parent[y]
    if left[y] == x:
        b = right[x]
        left[y] = b
        if b != 0:
            parent[b] = y
        right[x] = y
    else:
        b = left[x]
        right[y] = b
        if b != 0:
            parent[b] = y
        left[x] = y
    parent[y] = x
    parent[x] = g
    if g != 0:
        if left[g] == y:
            left[g] = x
        else:
            right[g] = x
    u[y] = uy - ux + u[b]
    u[x] = uy
    if u[x] > 0:
        phi_half += 1
    if u[y] > 0:
        phi_half += 1
    return phi_half


@njit(cache=True)
def _collect_subroots(
    root, left, right, touched, st_node, st_ld, st_rc, st_ok, st_ph,
    srk, srld, srrc, srok,
):
    """In-order walk of the touched region collecting sub-roots.

    Outputs, in increasing key order: sub-root key, its left-depth, its
    right-pointer count, and whether its access path is lefts-then-rights.
    """
    st_node[0] = root
    st_ld[0] = 0
    st_rc[0] = 0
    st_ok[0] = 1
    st_ph[0] = 0
    top = 1
    m = 0
    while top > 0:
        top -= 1
        v = st_node[top]
        ld = st_ld[top]
        rc = st_rc[top]
        okp = st_ok[top]
        if st_ph[top] == 0:
            st_ph[top] = 1
            top += 1
            c = left[v]
            if c != 0:
                cok = okp if rc == 0 else 0
                if touched[c]:
                    st_node[top] = c
                    st_ld[top] = ld + 1
                    st_rc[top] = rc
                    st_ok[top] = cok
                    st_ph[top] = 0
                    top += 1
                else:
                    srk[m] = c
                    srld[m] = ld + 1
                    srrc[m] = rc
                    srok[m] = cok
                    m += 1
        else:
            c = right[v]
            if c != 0:
                if touched[c]:
                    st_node[top] = c
                    st_ld[top] = ld
                    st_rc[top] = rc + 1
                    st_ok[top] = okp
                    st_ph[top] = 0
                    top += 1
                else:
                    srk[m] = c
                    srld[m] = ld
                    srrc[m] = rc + 1
                    srok[m] = okp
                    m += 1
    return m


@njit(cache=True)
def instrumented_kernel(pi, check_mode):
    """Insertion-splay pi (modeled as splaying inside BST(pi)) with exact
    potential accounting.

    check_mode: 0 none, 1 preorder invariants, 2 postorder invariants.
    Returns (t, phi, rot, viol, left, right, parent, root) where viol is
    the first step whose class invariant failed, or -1.
    """
    n = pi.shape[0]
    left, right, parent, root = _build_bst(pi)
    u = _subtree_counts(left, right, parent, root, n)
    touched = np.zeros(n + 1, np.uint8)
    t = np.empty(n, np.int64)
    phi = np.empty(n, np.int64)
    rot = np.empty(n, np.int64)
    st_node = np.empty(2 * n + 4, np.int64)
    st_ld = np.empty(2 * n + 4, np.int64)
    st_rc = np.empty(2 * n + 4, np.int64)
    st_ok = np.empty(2 * n + 4, np.int64)
    st_ph = np.empty(2 * n + 4, np.int64)
    srk = np.empty(n + 1, np.int64)
    srld = np.empty(n + 1, np.int64)
    srrc = np.empty(n + 1, np.int64)
    srok = np.empty(n + 1, np.int64)
    phi_half = 0
    viol = -1
    mt = 0  # max touched key
    for i in range(n):
        k = pi[i]
        v = root
        d = 0
        while v != k:
            u[v] -= 1
            if u[v] == 0 and touched[v]:
                phi_half -= 1
            if k < v:
                v = left[v]
            else:
                v = right[v]
            d += 1
        touched[k] = 1
        u[k] -= 1
        if u[k] > 0:
            phi_half += 1
        t[i] = d + 1
        r = 0
        while parent[k] != 0:
            p = parent[k]
            g = parent[p]
            if g == 0:
                phi_half = _urot(k, left, right, parent, u, phi_half)
                r += 1
            elif (left[p] == k) == (left[g] == p):
                phi_half = _urot(p, left, right, parent, u, phi_half)
                phi_half = _urot(k, left, right, parent, u, phi_half)
                r += 2
            else:
                phi_half = _urot(k, left, right, parent, u, phi_half)
                phi_half = _urot(k, left, right, parent, u, phi_half)
                r += 2
        root = k
        rot[i] = r
        phi[i] = 2 * phi_half
        if mt < k:
            mt = k
        if check_mode != 0 and viol == -1:
            m = _collect_subroots(
                root, left, right, touched,
                st_node, st_ld, st_rc, st_ok, st_ph,
                srk, srld, srrc, srok,
            )
            bad = False
            if check_mode == 1:
                for j in range(m):
                    if srld[j] > 1:
                        bad = True
                if i + 1 < n:
                    if m == 0 or pi[i + 1] != srk[0]:
                        bad = True
            elif check_mode == 2:
                for j in range(m):
                    if srok[j] == 0:
                        bad = True
                for j in range(1, m):
                    if srld[j] >= srld[j - 1]:
                        bad = True
                # at most one sub-root above the touched maximum
                if m >= 2 and srk[m - 1] > mt and srk[m - 2] > mt:
                    bad = True
                if i + 1 < n:
                    nk = pi[i + 1]
                    if nk > mt:
                        if m == 0 or srk[m - 1] != nk:
                            bad = True
                    else:
                        # largest sub-root below the touched maximum
                        cand = 0
                        for j in range(m - 1, -1, -1):
                            if srk[j] < mt:
                                cand = srk[j]
                                break
                        if cand != nk:
                            bad = True
            if bad:
                viol = i
    return t, phi, rot, viol, left, right, parent, root


@njit(cache=True)
def insertion_splay_kernel(pi):
    """True insert-then-splay run from an empty tree; returns per-op costs
    and the final tree arrays."""
    n = pi.shape[0]
    left = np.zeros(n + 1, np.int64)
    right = np.zeros(n + 1, np.int64)
    parent = np.zeros(n + 1, np.int64)
    t = np.empty(n, np.int64)
    root = 0
    for i in range(n):
        k = pi[i]
        if root == 0:
            root = k
            t[i] = 1
            continue
        v = root
        d = 0
        while True:
            d += 1
            if k < v:
                if left[v] == 0:
                    left[v] = k
                    parent[k] = v
                    break
                v = left[v]
            else:
                if right[v] == 0:
                    right[v] = k
                    parent[k] = v
                    break
                v = right[v]
        _splay_plain(k, left, right, parent)
        root = k
        t[i] = d + 1
    return t, left, right, parent, root


@njit(cache=True)
def splay_sequence_kernel(left, right, parent, root, xs):
    """Splay the keys of xs in order, mutating the tree arrays in place.

    Returns (t, root, missing) where missing is the index of the first
    absent key, or -1.
    """
    m = xs.shape[0]
    t = np.empty(m, np.int64)
    for i in range(m):
        k = xs[i]
        v = root
        d = 0
        while v != 0 and v != k:
            if k < v:
                v = left[v]
            else:
                v = right[v]
            d += 1
        if v == 0:
            return t, root, i
        _splay_plain(k, left, right, parent)
        root = k
        t[i] = d + 1
    return t, root, -1


@njit(cache=True)
def preorder_kernel(left, right, root, n):
    out = np.empty(n, np.int64)
    if n == 0:
        return out
    stack = np.empty(n, np.int64)
    stack[0] = root
    top = 1
    idx = 0
    while top > 0:
        top -= 1
        v = stack[top]
        out[idx] = v
        idx += 1
        if right[v] != 0:
            stack[top] = right[v]
            top += 1
        if left[v] != 0:
            stack[top] = left[v]
            top += 1
    return out


@njit(cache=True)
def postorder_kernel(left, right, root, n):
    out = np.empty(n, np.int64)
    if n == 0:
        return out
    stack = np.empty(n, np.int64)
    stack[0] = root
    top = 1
    idx = n - 1
    while top > 0:
        top -= 1
        v = stack[top]
        out[idx] = v
        idx -= 1
        if left[v] != 0:
            stack[top] = left[v]
            top += 1
        if right[v] != 0:
            stack[top] = right[v]
            top += 1
    return out


def tree_to_arrays(tree: Tree):
    """Convert an arena Tree whose keys are exactly 1..n to kernel arrays."""
    n = tree.size
    left = np.zeros(n + 1, np.int64)
    right = np.zeros(n + 1, np.int64)
    parent = np.zeros(n + 1, np.int64)
    if n == 0:
        return left, right, parent, 0
    if sorted(tree.key) != list(range(1, n + 1)):
        raise ValueError("kernel trees require keys 1..n")
    for h in range(n):
        k = tree.key[h]
        for src, dst in ((tree.left, left), (tree.right, right), (tree.parent, parent)):
            c = src[h]
            dst[k] = 0 if c == NONE else tree.key[c]
    return left, right, parent, tree.key[tree.root]


def arrays_to_tree(left, right, root) -> Tree:
    """Convert kernel arrays back into an arena Tree (handles by preorder)."""
    tree = Tree()
    n = len(left) - 1
    if root == 0:
        return tree
    stack = [(int(root), NONE, True)]
    while stack:
        k, ph, is_left = stack.pop()
        h = tree._alloc(k, ph)
        if ph == NONE:
            tree.root = h
        elif is_left:
            tree.left[ph] = h
        else:
            tree.right[ph] = h
        if right[k] != 0:
            stack.append((int(right[k]), h, False))
        if left[k] != 0:
            stack.append((int(left[k]), h, True))
    assert tree.size <= n
    return tree
