"""Exception types shared across the package."""


class NotPrimePower(ValueError):
    """Requested field order is not a prime power."""


class Unsupported(ValueError):
    """Requested field order is outside the supported range."""


class ZeroInverse(ZeroDivisionError):
    """Multiplicative inverse of the zero element."""


class DimensionMismatch(ValueError):
    """Vector or row length disagrees with the ambient dimension."""


class AmbientMismatch(ValueError):
    """Operands live in different ambient spaces or fields."""


class BadDimension(ValueError):
    """Subspace dimension out of range for the requested operation."""


class BadArgs(ValueError):
    """Arguments outside the domain of an arithmetic identity."""


class MixedAmbient(ValueError):
    """Family members disagree on field or ambient dimension."""


class MixedDimension(ValueError):
    """Family members do not all have the required dimension."""


class NotDistinct(ValueError):
    """Configuration predicate applied to non-distinct subspaces."""


class BadArity(ValueError):
    """Cluster predicate applied to fewer than two subspaces."""


class EmptyFamily(ValueError):
    """Operation needs at least one family member."""


class PivotNotMember(ValueError):
    """Claiming-map pivot is not a member of the family."""


class HypothesisViolated(ValueError):
    """Preconditions of a structural property check do not hold."""


class NotCoveringTripleFree(ValueError):
    """Layer bound check requires a covering-triple-free family."""


class BadLayer(ValueError):
    """Layer index outside 1..k/2."""


class UnmatchedUncoverable(RuntimeError):
    """A right-side vertex left unmatched has no neighbor to absorb it."""


class DuplicateSubspace(ValueError):
    """Family file lists the same subspace twice (after canonicalization)."""


class FamilyFileError(ValueError):
    """Family file is malformed."""
