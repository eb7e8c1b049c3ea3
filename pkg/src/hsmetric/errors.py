"""Exception hierarchy for hsmetric."""


class HSMetricError(Exception):
    """Base class for every error raised by hsmetric."""


class MassMismatchError(HSMetricError, ValueError):
    """Total energies differ where equal mass is required."""


class NonIntegrableError(HSMetricError, ValueError):
    """The cumulative energy has divergent tail integrals (χ is not in L¹)."""

    def __init__(self, message: str, label: str | None = None):
        self.label = label
        if label:
            message = f"{label}: {message}"
        super().__init__(message)


class InfiniteBoundaryError(HSMetricError, ValueError):
    """Extension by continuity was requested on a side with an infinite limit."""


class NonMonotoneError(HSMetricError, ValueError):
    """A function that must be non-decreasing is not."""


class SingularStencilError(HSMetricError, ValueError):
    """A finite-difference stencil straddles a kink or an atom."""


class InvalidStateError(HSMetricError, ValueError):
    """An Eulerian or Lagrangian state breaks one of its invariants."""


class ScenarioError(HSMetricError, ValueError):
    """Unknown scenario, malformed scenario string or invalid parameters."""
