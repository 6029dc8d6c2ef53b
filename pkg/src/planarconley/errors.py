"""Exception types shared across the package."""


class PlanarConleyError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PlanarConleyError):
    """Malformed expression source.

    Carries the byte offset of the first offending character.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownIdentifierError(ParseError):
    """Identifier outside the supported set {x, y, sin, cos, exp, sqrt, abs}."""


class NonFiniteError(PlanarConleyError):
    """An evaluation produced NaN or +/-inf (division by zero, sqrt of a
    negative, overflow, ...)."""


class NotDifferentiableError(PlanarConleyError):
    """Symbolic differentiation was requested for a tree containing a
    non-differentiable node (abs)."""


class UnknownSystemError(PlanarConleyError):
    """Requested builtin system name is not in the catalogue."""


class TangentialCrossingError(PlanarConleyError):
    """A section crossing failed the transversality check."""


class DegenerateEdgeError(PlanarConleyError):
    """An entire polygon edge is tangent to the flow (|v . n| below the
    sign threshold at every sample)."""


class PreconditionNotRepellerError(PlanarConleyError):
    """dual_attractor requires the repeller verdict as a precondition."""


class UnableToClassifyKStarError(PlanarConleyError):
    """The dual attractor could not be resolved into a limit cycle or an
    annulus bounded by two limit cycles."""
