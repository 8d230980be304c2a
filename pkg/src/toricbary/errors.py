"""Exception hierarchy; each class maps to one CLI exit code."""


class ToricError(Exception):
    exit_code = 4


class DocumentError(ToricError, ValueError):
    """Malformed polytope document."""

    exit_code = 2


class PolytopeError(ToricError, ValueError):
    """Input does not describe a valid Delzant polytope."""

    exit_code = 2


class PreconditionError(ToricError, ValueError):
    """A mathematical precondition of an operation does not hold."""

    exit_code = 3


class NotMonotoneError(PreconditionError):
    def __init__(self, msg: str = "polytope not monotone"):
        super().__init__(msg)


class SamplingError(PreconditionError):
    pass


class InvariantViolation(ToricError, RuntimeError):
    """An identity that must hold exactly failed; indicates a bug."""

    exit_code = 4
