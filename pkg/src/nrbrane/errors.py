"""Exception hierarchy shared by every module of the package."""


class NRBraneError(Exception):
    """Base class for all library errors."""


class SearchBoundExceeded(NRBraneError):
    """A root, square root or point needs a field larger than the configured bound."""


class FieldMismatch(NRBraneError):
    pass


class ZeroPolynomial(NRBraneError):
    pass


class BothZero(NRBraneError):
    pass


class NotSquarefree(NRBraneError):
    pass


class EvenDegree(NRBraneError):
    pass


class GenusTooSmall(NRBraneError):
    pass


class GenusMismatch(NRBraneError):
    pass


class BadCharacteristic(NRBraneError):
    pass


class PointNotOnCurve(NRBraneError):
    pass


class ZeroFunction(NRBraneError):
    pass


class CurveMismatch(NRBraneError):
    pass


class RootsNotRational(NRBraneError):
    pass


class NotEffective(NRBraneError):
    pass


class ZeroSection(NRBraneError):
    pass


class NotNodalIntegral(NRBraneError):
    pass


class BadTrivializationPoint(NRBraneError):
    pass


class WrongDegree(NRBraneError):
    pass


class NotAVHSFixedPoint(NRBraneError):
    pass


class PreconditionViolated(NRBraneError):
    pass


class ZeroScalar(NRBraneError):
    pass


class InadmissibleDelta(NRBraneError):
    pass


class BudgetExhausted(NRBraneError):
    """Raised by searches that ran out of budget; carries the partial results."""

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)


class ConfigError(NRBraneError):
    pass
