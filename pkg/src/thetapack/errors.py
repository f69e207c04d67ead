"""Exception types shared across the package."""


class GraphError(ValueError):
    """Structural misuse of a graph operation (caller bug, not data)."""


class CompatibilityError(GraphError):
    """Boundaried graphs with mismatched label sets."""

    def __init__(self, only_first, only_second):
        self.only_first = frozenset(only_first)
        self.only_second = frozenset(only_second)
        super().__init__(
            "incompatible label sets: only in first=%s, only in second=%s"
            % (sorted(self.only_first), sorted(self.only_second))
        )


class PreconditionError(GraphError):
    """A documented operation precondition does not hold."""


class OracleSizeError(GraphError):
    """Exhaustive oracle invoked above its configured instance cap."""


class ReductionFailed(RuntimeError):
    """No protrusion reduction applies (no equivalent pair / threshold issues)."""
