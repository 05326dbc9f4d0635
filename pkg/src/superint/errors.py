"""Exception hierarchy shared by every module."""


class SuperintError(Exception):
    """Base class for library errors."""


class DomainError(SuperintError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(SuperintError, ValueError):
    """Evaluation requested exactly at a pole."""


class SingularityError(SuperintError, ValueError):
    """Evaluation on a singular set (tangent pole, caustic, coordinate axis)."""


class UnsupportedError(SuperintError, NotImplementedError):
    """A valid request that this library deliberately does not handle."""


class ExclusionError(DomainError):
    """Quantum numbers excluded by a selection rule."""


class AccuracyWarning(UserWarning):
    """Extrapolated eigenvalues did not show the expected convergence trend."""
