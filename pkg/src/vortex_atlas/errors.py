"""Exception types shared across the package."""


class VortexAtlasError(Exception):
    """Base class for all package errors."""


class ShapeError(VortexAtlasError):
    """Series operands disagree in variable count or truncation order."""


class NumericError(VortexAtlasError):
    """An operation produced non-finite coefficients or values."""


class DivisionNearZero(VortexAtlasError):
    """Reciprocal of a series whose constant term is too close to zero."""


class InsufficientOrder(VortexAtlasError):
    """A jet of higher order than the stored series was requested."""


class FieldSyntaxError(VortexAtlasError):
    """Parse failure, with byte offset and the tokens that were expected."""

    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.expected = tuple(expected)


class EvalError(VortexAtlasError):
    """Expression evaluation failed (division by zero, bad exponent, ...)."""


class UnknownField(VortexAtlasError):
    """Catalog lookup for a name that does not exist."""


class NearSingularMatrix(VortexAtlasError):
    """A linear change of coordinates is not invertible enough to use."""


class SingularJacobian(VortexAtlasError):
    """Newton refinement hit a rank-deficient Jacobian; the point may be a
    degenerate zero and should be classified from its jet instead."""


class NoConvergence(VortexAtlasError):
    """Newton refinement did not reach the residual tolerance."""


class NotOnDislocation(VortexAtlasError):
    """The field does not vanish at the given point."""


class NotCritical(VortexAtlasError):
    """The phase gradient does not vanish at the given point."""


class OnDislocation(VortexAtlasError):
    """The point lies on the zero set, where the phase is undefined."""


class NotHelmholtzJet(VortexAtlasError):
    """Jet violates the linear relations satisfied by Helmholtz jets."""

    def __init__(self, relation, magnitude):
        super().__init__(
            f"relation {relation} violated with magnitude {magnitude:.3g}"
        )
        self.relation = relation
        self.magnitude = magnitude


class NotTimeDependent(VortexAtlasError):
    """A wave operation was applied to a static field."""


class DimMismatch(VortexAtlasError):
    """Fields of different spatial dimension were combined."""


class BadParameter(VortexAtlasError):
    """Parameter value outside its admissible range."""


class AllOrdersVanish(VortexAtlasError):
    """Contact-order scan exhausted the series order without a nonzero term."""
