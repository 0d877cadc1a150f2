"""Exception hierarchy shared by all modules."""


class Gl3KuzError(Exception):
    """Base class for every error raised by the package."""


class PreconditionError(Gl3KuzError, ValueError):
    """An operation was called outside its domain."""


class PoleProximity(PreconditionError):
    """A gamma argument lies within the pole tolerance of a non-positive integer."""

    def __init__(self, z, message=None):
        self.z = z
        super().__init__(message or f"argument {z!r} is within pole tolerance of a pole")


class ContourPinch(PreconditionError):
    """A pole sits on (or too close to) the integration contour."""


class ConstraintViolated(PreconditionError):
    """A linear parameter constraint required by an identity fails."""


class DegenerateSpectrum(PreconditionError):
    """Spectral coordinates coincide where distinct coordinates are required."""


class SingularMeasure(PreconditionError):
    """A trigonometric factor of a spectral measure vanishes or blows up."""


class SingularSpectrum(PreconditionError):
    """A kernel's trigonometric denominator is too close to zero."""


class SubspaceViolated(PreconditionError):
    """A kernel was evaluated off the subspace on which it is defined."""


class DivisibilityViolated(PreconditionError):
    """A modulus divisibility requirement fails."""


class UnsupportedWeylElement(PreconditionError):
    """The Weyl element has no associated object for this operation."""


class SeriesDiverged(PreconditionError):
    """A power series was requested beyond its configured radius."""


class TailTooLarge(Gl3KuzError):
    """Truncation of an infinite integral leaves a tail above tolerance."""

    def __init__(self, tail, value, tol):
        self.tail = tail
        self.value = value
        self.tol = tol
        super().__init__(f"tail estimate {tail:.3g} exceeds tolerance {tol:.3g} (|value| = {abs(value):.3g})")


class NonFinite(Gl3KuzError):
    """An integrand returned NaN or infinity."""


class BoundViolated(Gl3KuzError):
    """An exponential-sum bound audit found a counterexample."""

    def __init__(self, record):
        self.record = record
        super().__init__(f"bound violated: {record}")


class UsageError(Gl3KuzError):
    """Bad command-line usage."""
