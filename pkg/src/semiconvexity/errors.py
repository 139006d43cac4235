"""Exception taxonomy shared across the package."""


class SemiconvexityError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SemiconvexityError):
    """An argument value is outside the mathematical domain of an operation."""


class PreconditionError(SemiconvexityError):
    """A documented operation precondition failed; carries a witness when one exists."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConstructionError(SemiconvexityError):
    """A constructed object (modulus, eta, witness) violates its hypotheses."""


class NumericError(SemiconvexityError):
    """A numerical procedure failed to converge or an internal self-check tripped."""


class SceneError(SemiconvexityError):
    """A scene file or other serialized input failed validation."""


class ExprError(SceneError):
    """Expression parse/evaluation failure; records the source position."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position
