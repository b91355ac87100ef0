"""Exception types shared across the toolkit."""


class FrobtwistError(Exception):
    """Base class for all toolkit errors."""


class NotPrime(FrobtwistError):
    pass


class SizeBound(FrobtwistError):
    pass


class ZeroPolynomial(FrobtwistError):
    pass


class PrecisionBound(FrobtwistError):
    pass


class DivisibilityViolation(FrobtwistError):
    pass


class EnumerationBound(FrobtwistError):
    pass


class Singular(FrobtwistError):
    pass


class ZeroScale(FrobtwistError):
    pass


class NotMinimal(FrobtwistError):
    pass


class NonOrdinaryCurve(FrobtwistError):
    pass


class MissingVerschiebungData(FrobtwistError):
    pass


class GuardViolation(FrobtwistError):
    pass


class IncompleteScan(FrobtwistError):
    pass


class BadDirection(FrobtwistError):
    pass


class BudgetExhausted(FrobtwistError):
    """Raised only when a partial result cannot be returned instead."""


class CurveFileError(FrobtwistError):
    """Base for input-file problems; carries a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CurveSyntaxError(CurveFileError):
    pass


class FieldMismatch(CurveFileError):
    pass


class DuplicateName(CurveFileError):
    pass
