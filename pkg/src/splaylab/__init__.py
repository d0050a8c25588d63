"""splaylab: instrumented splay trees for pattern-avoiding permutations."""

from .balance import (
    DfSum,
    df_sum,
    gen_perfect_tree,
    gen_random_tree,
    is_weight_balanced,
    random_permutation,
    rank,
)
from .errors import (
    BadConfigError,
    DuplicateKeyError,
    InvalidHandleError,
    InvariantViolationError,
    KeyNotFoundError,
    LengthMismatchError,
    NotAPermutationError,
    RotateAtRootError,
    SizeNotPerfectError,
    SplayLabError,
    SymmetricOrderError,
    TreeSyntaxError,
    WrongClassError,
)
from .instrument import (
    MarkState,
    RunLedger,
    check_ancestor_precedence,
    check_comb,
    check_k_avoiding_shape,
    check_postorder_invariant,
    check_preorder_invariant,
    check_subroot_rule,
    check_touched_connected,
    check_untouched_identity,
    instrumented_run,
    potential,
    sub_roots,
)
from .harness import (
    CSV_HEADER,
    ExperimentConfig,
    FuzzReport,
    Kind,
    ResultRow,
    Start,
    fuzz_invariants,
    gen_k_increasing,
    gen_sequence,
    run_experiment,
    write_csv,
)
from .patterns import (
    bst_of,
    contains_pattern,
    decreasing_pattern_length,
    is_postorder,
    is_preorder,
    mirror,
    order_isomorphic,
    postorder,
    preorder,
)
from .splay import (
    SequenceCost,
    SplayCost,
    StepCase,
    StepKind,
    classify_step,
    insertion_splay,
    insertion_splay_sequence,
    splay,
    splay_sequence,
    splay_step,
)
from .tree import NONE, Tree, format_tree, parse_tree

__version__ = "0.1.0"
