"""Experiment runner: sequence generators, instrumented runs, an invariant
fuzzer, and deterministic CSV output.

Per-trial seeds are always base seed + trial index, and every generated
sequence is validated by its class recognizer before the run starts.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from typing import Callable, Sequence, TextIO

import numpy as np

from . import _kernels
from .balance import (
    df_sum,
    gen_perfect_tree,
    gen_random_tree,
    random_permutation,
)
from .errors import BadConfigError, InvariantViolationError
from .instrument import (
    check_ancestor_precedence,
    check_comb,
    check_k_avoiding_shape,
    check_subroot_rule,
    instrumented_run,
)
from .patterns import (
    bst_of,
    decreasing_pattern_length,
    is_postorder,
    is_preorder,
    postorder,
    preorder,
)
from .splay import splay_sequence
from .tree import Tree

CSV_HEADER = (
    "kind,n,seed,trial,total_cost,cost_per_n,max_amortized,"
    "df_sum,invariants_ok,wall_time_ms"
)


class Kind(Enum):
    PREORDER_INSERT = "preorder"
    POSTORDER_INSERT = "postorder"
    BALANCED_TRAVERSAL = "balanced"
    SEQUENTIAL = "sequential"
    RANDOM_CONTROL = "random"
    INVARIANT_FUZZ = "fuzz"


class Start(Enum):
    SAME = "same"
    RANDOM = "random"
    PERFECT = "perfect"


_TRAVERSAL_KINDS = (Kind.BALANCED_TRAVERSAL,)


@dataclass
class ExperimentConfig:
    kind: Kind
    n: int
    seed: int = 0
    start: Start = Start.SAME
    alpha: object = None
    trials: int = 1
    paranoid: bool = False
    timing: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.kind, str):
            try:
                self.kind = Kind(self.kind)
            except ValueError:
                raise BadConfigError(f"unknown kind {self.kind!r}") from None
        if isinstance(self.start, str):
            try:
                self.start = Start(self.start)
            except ValueError:
                raise BadConfigError(f"unknown start {self.start!r}") from None
        if self.n < 1:
            raise BadConfigError("n must be >= 1")
        if self.trials < 1:
            raise BadConfigError("trials must be >= 1")
        if self.start is not Start.SAME and self.kind not in _TRAVERSAL_KINDS:
            raise BadConfigError(
                f"start={self.start.value} only applies to traversal kinds"
            )
        if self.kind is Kind.BALANCED_TRAVERSAL and (self.n + 1) & self.n != 0:
            raise BadConfigError("balanced traversal needs n = 2**k - 1")


@dataclass
class ResultRow:
    kind: str
    n: int
    seed: int
    trial: int
    total_cost: int
    max_amortized: int | None
    df: float | None
    invariants_ok: bool
    wall_time_ms: float | None = None

    @property
    def cost_per_n(self) -> float:
        return self.total_cost / self.n

    def to_csv(self) -> str:
        ma = "" if self.max_amortized is None else str(self.max_amortized)
        df = "" if self.df is None else f"{self.df:.6f}"
        wt = "" if self.wall_time_ms is None else f"{self.wall_time_ms:.6f}"
        ok = "true" if self.invariants_ok else "false"
        return (
            f"{self.kind},{self.n},{self.seed},{self.trial},"
            f"{self.total_cost},{self.cost_per_n:.6f},{ma},{df},{ok},{wt}"
        )


def write_csv(rows: Sequence[ResultRow], f: TextIO) -> None:
    f.write(CSV_HEADER + "\n")
    for row in rows:
        f.write(row.to_csv() + "\n")


def gen_sequence(kind, n: int, seed: int, k: int | None = None) -> list[int]:
    """Generate a request permutation of 1..n for the given kind.

    kind accepts Kind values or the strings "preorder", "postorder",
    "sequential", "random", and "k-increasing" (the last needs k: the
    output then has no strictly decreasing subsequence longer than k-1).
    """
    if n < 1:
        raise BadConfigError("n must be >= 1")
    name = kind.value if isinstance(kind, Kind) else str(kind)
    if name in ("preorder", "postorder"):
        if _kernels.HAVE_NUMBA and n >= 2048:
            return _gen_traversal_fast(name, n, seed)
        tree = gen_random_tree(n, seed)
        return preorder(tree) if name == "preorder" else postorder(tree)
    if name == "sequential":
        return list(range(1, n + 1))
    if name == "random":
        return random_permutation(n, seed)
    if name == "k-increasing":
        if k is None or k < 2:
            raise BadConfigError("k-increasing sequences need k >= 2")
        return gen_k_increasing(n, k, seed)
    raise BadConfigError(f"unknown sequence kind {name!r}")


def _gen_traversal_fast(name: str, n: int, seed: int) -> list[int]:
    """Array-route twin of the traversal generators; output is identical."""
    rng = np.random.default_rng(seed)
    arr = (rng.permutation(n) + 1).astype(np.int64)
    left, right, _, root = _kernels._build_bst(arr)
    kern = _kernels.preorder_kernel if name == "preorder" else _kernels.postorder_kernel
    return kern(left, right, root, n).tolist()


def gen_k_increasing(n: int, k: int, seed: int) -> list[int]:
    """Random merge of k-1 increasing runs: the result avoids (k,...,2,1)."""
    if k < 2:
        raise BadConfigError("k must be >= 2")
    rng = np.random.default_rng(seed)
    buckets: list[list[int]] = [[] for _ in range(k - 1)]
    for b, key in zip(rng.integers(0, k - 1, size=n), range(1, n + 1)):
        buckets[b].append(key)  # each bucket is increasing by construction
    out: list[int] = []
    live = [b for b in buckets if b]
    idx = [0] * len(live)
    while live:
        j = int(rng.integers(0, len(live)))
        out.append(live[j][idx[j]])
        idx[j] += 1
        if idx[j] == len(live[j]):
            live.pop(j)
            idx.pop(j)
    return out


def _splay_total(tree: Tree, xs: Sequence[int]) -> int:
    """Total splay cost of accessing xs in order, mutating nothing visible.

    Uses the flat-array engine when available; both engines implement the
    same bottom-up splay, so totals are identical.
    """
    if _kernels.HAVE_NUMBA and tree.size >= 256:
        left, right, parent, root = _kernels.tree_to_arrays(tree)
        arr = np.asarray(xs, dtype=np.int64)
        t, _, missing = _kernels.splay_sequence_kernel(left, right, parent, root, arr)
        if missing != -1:
            raise BadConfigError(f"key {xs[missing]} not in tree")
        return int(t.sum())
    return splay_sequence(tree.copy(), xs).total


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Run cfg.trials seeded trials and return one or two rows per trial.

    Insert kinds assert the amortized bound c_i <= 6 and the class
    invariants; SEQUENTIAL asserts total = 2n - 1; BALANCED_TRAVERSAL
    emits a row per traversal order with the dynamic-finger sum attached;
    RANDOM_CONTROL records cost with no assertion.
    """
    if cfg.kind is Kind.INVARIANT_FUZZ:
        raise BadConfigError("use fuzz_invariants for the fuzz kind")
    rows: list[ResultRow] = []
    for trial in range(cfg.trials):
        seed = cfg.seed + trial
        t0 = time.perf_counter()
        if cfg.kind in (Kind.PREORDER_INSERT, Kind.POSTORDER_INSERT):
            rows.append(_run_insert_trial(cfg, seed, trial))
        elif cfg.kind is Kind.BALANCED_TRAVERSAL:
            rows.extend(_run_traversal_trial(cfg, seed, trial))
        elif cfg.kind is Kind.SEQUENTIAL:
            pi = gen_sequence("sequential", cfg.n, seed)
            total = _splay_total(bst_of(pi), pi)
            if total != 2 * cfg.n - 1:
                raise InvariantViolationError(
                    f"sequential total {total} != {2 * cfg.n - 1} "
                    f"(kind=sequential, n={cfg.n}, seed={seed})"
                )
            rows.append(
                ResultRow("sequential", cfg.n, seed, trial, total, None, None, True)
            )
        else:  # RANDOM_CONTROL: informational, no assertion
            pi = gen_sequence("random", cfg.n, seed)
            total = _splay_total(bst_of(pi), pi)
            rows.append(
                ResultRow("random", cfg.n, seed, trial, total, None, None, True)
            )
        if cfg.timing:
            for row in rows:
                if row.trial == trial and row.wall_time_ms is None:
                    row.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return rows


def _run_insert_trial(cfg: ExperimentConfig, seed: int, trial: int) -> ResultRow:
    name = cfg.kind.value
    pi = gen_sequence(name, cfg.n, seed)
    recognizer = is_preorder if name == "preorder" else is_postorder
    if not recognizer(pi):
        raise BadConfigError(f"generated sequence fails the {name} recognizer")
    engine = "reference" if cfg.paranoid else "auto"
    ledger = instrumented_run(pi, engine=engine, checks=name, paranoid=cfg.paranoid)
    if not ledger.invariants_ok:
        raise InvariantViolationError(
            f"invariant violated (kind={name}, n={cfg.n}, seed={seed}, "
            f"step={ledger.violation_step})"
        )
    if ledger.max_amortized > 6:
        raise InvariantViolationError(
            f"amortized cost {ledger.max_amortized} > 6 "
            f"(kind={name}, n={cfg.n}, seed={seed})"
        )
    return ResultRow(
        name, cfg.n, seed, trial, ledger.total_cost, ledger.max_amortized, None, True
    )


def _run_traversal_trial(
    cfg: ExperimentConfig, seed: int, trial: int
) -> list[ResultRow]:
    source = gen_perfect_tree(cfg.n)
    rows = []
    for order_name, traverse in (("preorder", preorder), ("postorder", postorder)):
        if cfg.start is Start.RANDOM:
            start = gen_random_tree(cfg.n, seed)
        elif cfg.start is Start.PERFECT:
            start = gen_perfect_tree(cfg.n)
        else:
            start = source.copy()
        xs = traverse(source)
        total = _splay_total(start, xs)
        df = df_sum(source, xs).value
        rows.append(
            ResultRow(
                f"balanced_{order_name}", cfg.n, seed, trial, total, None, df, True
            )
        )
    return rows


@dataclass
class FuzzViolation:
    checker: str
    n: int
    pi: list[int]
    detail: str = ""


@dataclass
class FuzzReport:
    checked: dict[str, int] = field(default_factory=dict)
    violation_counts: dict[str, int] = field(default_factory=dict)
    violations: list[FuzzViolation] = field(default_factory=list)
    preorder_counts: dict[int, int] = field(default_factory=dict)
    postorder_counts: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violation_counts

    def record(self, checker: str, passed: bool, n: int, pi, detail: str = "") -> None:
        self.checked[checker] = self.checked.get(checker, 0) + 1
        if not passed:
            self.violation_counts[checker] = self.violation_counts.get(checker, 0) + 1
            if self.violation_counts[checker] <= 5:
                self.violations.append(FuzzViolation(checker, n, list(pi), detail))

    def summary(self) -> str:
        lines = []
        for name in sorted(self.checked):
            bad = self.violation_counts.get(name, 0)
            status = "ok" if bad == 0 else f"{bad} VIOLATIONS"
            lines.append(f"{name}: {self.checked[name]} checked, {status}")
        for v in self.violations:
            extra = f" ({v.detail})" if v.detail else ""
            lines.append(f"  counterexample {v.checker} n={v.n}: {v.pi}{extra}")
        return "\n".join(lines)


def _fuzz_one(pi: list[int], report: FuzzReport, ks=(3, 4, 5)) -> None:
    n = len(pi)
    report.record("ancestor_precedence", check_ancestor_precedence(pi), n, pi)
    if is_preorder(pi):
        ledger = instrumented_run(pi, checks="preorder")
        report.record(
            "preorder_invariants",
            ledger.invariants_ok,
            n,
            pi,
            f"step={ledger.violation_step}",
        )
        report.record(
            "preorder_amortized_le6", ledger.max_amortized <= 6, n, pi,
            f"max_c={ledger.max_amortized}",
        )
        report.record("preorder_rule", check_subroot_rule(pi, "preorder"), n, pi)
    if is_postorder(pi):
        ledger = instrumented_run(pi, checks="postorder")
        report.record(
            "postorder_invariants",
            ledger.invariants_ok,
            n,
            pi,
            f"step={ledger.violation_step}",
        )
        report.record(
            "postorder_amortized_le6", ledger.max_amortized <= 6, n, pi,
            f"max_c={ledger.max_amortized}",
        )
        report.record("postorder_rule", check_subroot_rule(pi, "postorder"), n, pi)
        report.record("postorder_comb", check_comb(bst_of(pi), "left"), n, pi)
    lds = decreasing_pattern_length(pi)
    for k in ks:
        if lds <= k - 1:
            report.record(
                f"k_avoiding_shape_k{k}", check_k_avoiding_shape(pi, k), n, pi
            )


def fuzz_invariants(
    cfg: ExperimentConfig,
    max_exhaustive: int = 8,
    on_progress: Callable[[str], None] | None = None,
) -> FuzzReport:
    """Exhaustive checks over all permutations of size <= max_exhaustive,
    then cfg.trials randomized trials at size cfg.n per class.

    Returns a report with per-checker counts and up to five counterexample
    permutations each; report.ok is False iff anything was violated.
    """
    if cfg.kind is not Kind.INVARIANT_FUZZ:
        raise BadConfigError("fuzz_invariants needs kind=fuzz")
    report = FuzzReport()
    for n in range(1, max_exhaustive + 1):
        pre = post = 0
        for p in permutations(range(1, n + 1)):
            pi = list(p)
            pre += is_preorder(pi)
            post += is_postorder(pi)
            _fuzz_one(pi, report)
        report.preorder_counts[n] = pre
        report.postorder_counts[n] = post
        if on_progress:
            on_progress(f"exhaustive n={n} done ({pre} preorders, {post} postorders)")
    for trial in range(cfg.trials):
        seed = cfg.seed + trial
        for name in ("preorder", "postorder"):
            pi = gen_sequence(name, cfg.n, seed)
            ledger = instrumented_run(pi, checks=name)
            report.record(
                f"random_{name}_invariants",
                ledger.invariants_ok,
                cfg.n,
                pi,
                f"seed={seed}, step={ledger.violation_step}",
            )
            report.record(
                f"random_{name}_amortized_le6",
                ledger.max_amortized <= 6,
                cfg.n,
                pi,
                f"seed={seed}, max_c={ledger.max_amortized}",
            )
        for k in (3, 4, 5):
            pi = gen_k_increasing(cfg.n, k, seed)
            report.record(
                f"random_k_avoiding_shape_k{k}",
                check_k_avoiding_shape(pi, k),
                cfg.n,
                pi,
                f"seed={seed}",
            )
        if on_progress and (trial + 1) % 200 == 0:
            on_progress(f"randomized trial {trial + 1}/{cfg.trials} done")
    return report
