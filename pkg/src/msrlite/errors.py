class CodeError(Exception):
    """Base class for everything this package raises on purpose."""


class ValidationError(CodeError):
    pass


class ZeroInverse(CodeError, ZeroDivisionError):
    pass


class DimensionMismatch(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class InvalidBlock(ValidationError):
    pass


class FormatError(ValidationError):
    """Bad magic, truncated payload or a size that doesn't match the code."""


class SingularMatrix(CodeError):
    pass


class InconsistentInput(CodeError):
    """Surviving blocks are not consistent with any codeword."""


class RetriesExhausted(CodeError):
    pass


class PlanMismatch(CodeError):
    pass


class ScenarioInfeasible(CodeError):
    pass


class NotMds(CodeError):
    """A parity-check matrix failed MDS verification."""
