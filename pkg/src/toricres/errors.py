"""Exception types shared across the package."""


class ToricError(ValueError):
    """Base class for invalid input or a violated hypothesis."""


class NotSmooth(ToricError):
    pass


class NotComplete(ToricError):
    pass


class TorsionPicard(ToricError):
    pass


class NotPrimitive(ToricError):
    pass


class EmptyLinearSystem(ToricError):
    pass


class NotNef(ToricError):
    pass


class HypothesisViolated(ToricError):
    """A twist ``a`` of the complex has ``d - a`` outside the nef cone."""

    def __init__(self, twist, message=None):
        self.twist = tuple(twist)
        super().__init__(message or f"d - a is not nef for twist a = {self.twist}")


class NotAFacet(ToricError):
    pass


class NotFineGraded(ToricError):
    pass


class MismatchWitness(AssertionError):
    """Raised when two complexes that should agree differ; carries the location."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class ProjectivityAssumed(UserWarning):
    """Completeness and smoothness are checked; projectivity is only assumed."""
