"""Exception types shared across the package.

Every error raised on bad input derives from DynkitError so callers can
catch one type at API boundaries. Errors carry enough context to be
re-raised as CLI diagnostics without string parsing.
"""


class DynkitError(Exception):
    """Base class for all package errors."""


class EmptyDiagram(DynkitError):
    """A diagram must have at least one vertex."""


class ParentMismatch(DynkitError):
    """Two subdiagram-like objects belong to different ambient diagrams."""


class NotASubdiagram(DynkitError):
    """Vertex set is not contained in the ambient diagram."""


class NotConnected(DynkitError):
    """Operation requires a connected vertex set."""


class NotProper(DynkitError):
    """Kernel of a quotient must be a proper subdiagram."""


class EmptyKernel(DynkitError):
    """Kernel of a quotient must be nonempty."""


class CollapsesToEmpty(DynkitError):
    """Collapse of a subdiagram contained in the kernel would be empty."""


class NotNested(DynkitError):
    """A family of subdiagrams violates the nested-set axioms."""


class TooLarge(DynkitError):
    """Enumeration refused: diagram exceeds the configured size bound."""


class ChainMismatch(DynkitError):
    """Composition of relative data requires matching inner/outer layers."""


class NotElementary(DynkitError):
    """Pair of maximal nested sets does not differ in exactly one element."""


class MissingPair(DynkitError):
    """An assignment has no value for a required elementary pair."""


class NoRelation(DynkitError):
    """Requested a braid relation for an infinite edge label."""


class NotGcm(DynkitError):
    """Matrix is not a generalized Cartan matrix."""


class NotSymmetrizable(DynkitError):
    """GCM admits no symmetrizer; carries an odd-product cycle certificate."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle


class NotFiniteType(DynkitError):
    """GCM is not of finite type where finite type is required."""


class NotAffine(DynkitError):
    """GCM is not irreducible affine where affine type is required."""


class NotDominant(DynkitError):
    """Highest weight must be a tuple of nonnegative integers."""


class NotSquare(DynkitError):
    """Operator does not act on a tensor square of equal factors."""


class NotExponentiable(DynkitError):
    """Series has a non-nilpotent constant term; exp would not terminate."""


class DepthInsufficient(DynkitError):
    """Truncation depth too small for the requested computation."""
