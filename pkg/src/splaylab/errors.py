"""Exception hierarchy for splaylab."""


class SplayLabError(Exception):
    """Base class for all splaylab errors."""


class DuplicateKeyError(SplayLabError):
    """Key is already present in the tree."""


class KeyNotFoundError(SplayLabError):
    """Requested key is absent from the tree."""


class RotateAtRootError(SplayLabError):
    """Rotation (or splay-step classification) attempted at the root."""


class InvalidHandleError(SplayLabError):
    """Handle does not resolve to a live node."""


class NotAPermutationError(SplayLabError):
    """Sequence is not a permutation of 1..n."""


class TreeSyntaxError(SplayLabError):
    """Malformed tree literal."""


class SymmetricOrderError(TreeSyntaxError):
    """Tree literal violates symmetric order."""


class LengthMismatchError(SplayLabError):
    """Sequences compared for order-isomorphism differ in length."""


class WrongClassError(SplayLabError):
    """Permutation does not belong to the class a checker requires."""


class SizeNotPerfectError(SplayLabError):
    """Node count is not 2**k - 1."""


class BadConfigError(SplayLabError):
    """Invalid experiment configuration."""


class InvariantViolationError(SplayLabError):
    """A structural invariant or cost bound failed during a run."""
