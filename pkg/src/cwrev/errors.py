"""Exception hierarchy shared across the package."""


class CwrevError(Exception):
    """Base class for all package errors."""


class ValidationError(CwrevError):
    """A profile or body violates a defining constraint."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class InfeasibleBodyError(ValidationError):
    """Half-width below the critical half-width (the support function is not convex)."""


class ConvexityError(ValidationError):
    """Negative radius of curvature detected on the generating curve."""


class FlowExitsConvexityError(ConvexityError):
    """Inward normal flow pushed past the last convex time."""

    def __init__(self, message, max_tau):
        super().__init__(message)
        self.max_tau = max_tau


class InfeasibleMergeError(CwrevError):
    """No admissible discontinuity merge exists for the requested triple."""


class InfeasiblePerturbationError(CwrevError):
    """Shifting the middle piece would reorder or expel breakpoints."""


class InfeasibleConfigurationError(CwrevError):
    """No breakpoint configuration satisfies the closure constraint."""


class DomainError(CwrevError, ValueError):
    """Arguments fall outside the domain of an arccos/sqrt expression."""


class ConfigError(CwrevError):
    """Malformed or invalid body configuration."""

    def __init__(self, message, location=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
