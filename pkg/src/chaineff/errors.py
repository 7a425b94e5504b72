"""Exception types shared across the package."""


class ChainEffError(Exception):
    """Base class for all library errors."""


class InvalidInstance(ChainEffError):
    """A problem instance violates its preconditions."""


class InvalidPermutation(ChainEffError):
    """A sequence passed as a permutation is not a bijection on [n]."""


class InvalidOffset(ChainEffError):
    """A circulant offset is outside {0, ..., m-1}."""


class InvalidSize(ChainEffError):
    """A size parameter is out of the supported range."""


class InvalidDegree(ChainEffError):
    """A regularity degree is out of range."""


class MethodMismatch(ChainEffError):
    """A counting method does not apply to the given poset shape."""


class ResourceLimit(ChainEffError):
    """The computation would exceed the configured memory budget."""


class NoChains(ChainEffError):
    """The set system has no maximal chain, so no cover exists."""


class DimensionMismatch(ChainEffError):
    """Objects over different universes were combined."""


class UnsupportedSemiring(ChainEffError):
    """The algorithm needs an idempotent addition and the semiring lacks it."""


class InvalidSetSystem(ChainEffError):
    """The set system lacks structure required by the solver."""
