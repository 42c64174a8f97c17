"""Exception hierarchy shared by all entromono modules."""

from __future__ import annotations


class EntromonoError(Exception):
    """Base class for every error raised by this package."""


class AmbientMismatchError(EntromonoError, ValueError):
    """Objects living in different groups/spaces were combined."""


class NotASubgroupError(EntromonoError, ValueError):
    pass


class ResourceLimitError(EntromonoError, RuntimeError):
    """A configured size cap was exceeded; nothing is silently truncated."""


class NotInvariantError(EntromonoError, ValueError):
    """A subgroup is not mapped into itself by some generator."""

    def __init__(self, generator, element, image):
        self.generator = generator
        self.element = element
        self.image = image
        super().__init__(
            f"subgroup not invariant under generator {generator!r}: "
            f"{element!r} maps to {image!r}"
        )


class NotSurjectiveError(EntromonoError, ValueError):
    pass


class CoverError(EntromonoError, ValueError):
    """A family of sets fails to cover the requested set."""


class HorizonExhaustedError(EntromonoError, RuntimeError):
    """A stabilization procedure did not terminate within its horizon."""


class UnsupportedActionError(EntromonoError, NotImplementedError):
    pass


class NotInvertibleError(EntromonoError, ValueError):
    pass


class InvalidPetersElementError(EntromonoError, ValueError):
    pass


class ScenarioError(EntromonoError, ValueError):
    """Scenario file failed schema or semantic validation."""


class TilingFailure(EntromonoError, RuntimeError):
    """Greedy quasi-tiling left more than the allowed fraction uncovered."""

    def __init__(self, leftover_ratio, tiling=None):
        self.leftover_ratio = leftover_ratio
        self.tiling = tiling
        super().__init__(f"quasi-tiling failed: leftover ratio {float(leftover_ratio):.6g}")
