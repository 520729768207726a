"""
Exception types raised by the beam library.

Every domain failure derives from BeamError so callers (and the CLI) can
separate computation errors from programming errors.
"""


class BeamError(ValueError):
    """Base class for domain errors."""


class InvalidParams(BeamError):
    """Physical parameters are not finite and positive."""


class NotWellPosed(BeamError):
    """det M~ vanishes (relative to ||M~||^4)."""


class NotInPibar(BeamError):
    """Matrix is not fixed by A -> R conj(A) R."""


class DegenerateLambda(BeamError):
    """chi is undefined at lambda = 0 and lambda = 1/k."""


class ZeroLambda(BeamError):
    """lambda = 0 is never an eigenvalue parameter."""


class SingularX(BeamError):
    """X_lambda(x) is singular, so lambda lies in Spec K_Q."""


class InSpecQ(BeamError):
    """lambda is at or too close to an eigenvalue of K_Q."""


class ZeroImage(BeamError):
    """G0hat r vanishes, no rank-one inverse image exists."""


class OutOfDomain(BeamError):
    """Evaluation point outside [-l, l]."""


class ConsistencyError(BeamError):
    """An internal identity failed beyond tolerance."""


class SchemaError(BeamError):
    """Malformed JSON input."""
