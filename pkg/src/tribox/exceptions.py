"""Exception hierarchy shared by every tribox module."""


class TriboxError(Exception):
    """Base class for all tribox errors."""


class InvalidBehavior(TriboxError, ValueError):
    """A probability table failed validation."""


class NegativeProbability(InvalidBehavior):
    pass


class NotNormalized(InvalidBehavior):
    pass


class SignalingDetected(InvalidBehavior):
    pass


class BadWeights(TriboxError, ValueError):
    pass


class UnknownVariant(TriboxError, ValueError):
    pass


class ConstructionFailure(TriboxError):
    pass


class LPNumericalFailure(TriboxError, ArithmeticError):
    """The simplex solver did not reach a trustworthy answer."""


class NotInR(TriboxError, ValueError):
    """Box is outside the Svetlichny-box polytope."""


class ResidualInvalid(TriboxError, ValueError):
    """The subtraction residual of a 3-decomposition is not a valid box."""


class InvalidState(TriboxError, ValueError):
    pass


class InvalidSettings(TriboxError, ValueError):
    pass


class BadParameters(TriboxError, ValueError):
    pass
