"""Exception types shared across the toolkit."""


class LoewnerError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(LoewnerError):
    """Malformed input: bad parameters, bad schema, failed validation."""


class GeometryError(LoewnerError):
    """Geometrically invalid configuration for the requested operation."""


class SingularPointError(LoewnerError):
    """Evaluation requested on or too close to a slit."""


class AmbiguityError(LoewnerError):
    """Boundary preimage is a two-sided prime end and no side was given."""


class UnsupportedNormalizationError(LoewnerError):
    """Capacity requested from a stack whose frame maps are not translations."""


class StepSizeError(LoewnerError):
    """Time discretization too coarse for the requested operation."""


class SurgeryStepError(LoewnerError):
    """A reversal step failed. Carries the ledger accumulated so far."""

    def __init__(self, message, ledger=None):
        super().__init__(message)
        self.ledger = ledger
