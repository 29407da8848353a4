from typing import Any, Dict, Optional

from pydantic import BaseModel


class ErrorResponse(BaseModel):
    exit_code: int
    error_code: str
    message: str
    details: Optional[Dict[str, Any]] = None


class ThomForgeError(Exception):
    def __init__(
        self,
        exit_code: int,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict] = None
    ):
        super().__init__(message)
        self.exit_code = exit_code
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.details = details

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(
            exit_code=self.exit_code,
            error_code=self.error_code,
            message=self.message,
            details=self.details
        )


class ParseError(ThomForgeError):
    def __init__(self, message: str, details: Optional[Dict] = None):
        super().__init__(
            exit_code=2,
            message=message,
            error_code="PARSE_ERROR",
            details=details
        )


class PreconditionError(ThomForgeError):
    """A well-formed request whose mathematical preconditions do not hold."""

    def __init__(self, message: str, details: Optional[Dict] = None):
        super().__init__(exit_code=3, message=message, details=details)


class SignatureError(PreconditionError):
    pass


class KappaMismatchError(PreconditionError):
    pass


class CodimensionMismatchError(PreconditionError):
    pass


class TruncationError(PreconditionError):
    pass


class VarSpaceMismatchError(PreconditionError):
    pass


class InvalidMonomialError(PreconditionError):
    pass


class NotSupersymmetricError(PreconditionError):
    pass


class NoPositiveSolutionError(PreconditionError):
    pass


class AmbiguousSolutionError(PreconditionError):
    pass


class OddCrosscapCountError(PreconditionError):
    pass


class WrongKindError(PreconditionError):
    pass


class ResidueNotSFreeError(PreconditionError):
    pass


class MissingResidueError(PreconditionError):
    pass


class NonProperModelError(PreconditionError):
    pass


class DatabaseError(PreconditionError):
    pass


class UnknownKeyError(ThomForgeError):
    def __init__(self, message: str, details: Optional[Dict] = None):
        super().__init__(
            exit_code=4,
            message=message,
            error_code="UNKNOWN_KEY",
            details=details
        )


class SolveError(ThomForgeError):
    def __init__(self, message: str, details: Optional[Dict] = None):
        super().__init__(
            exit_code=5,
            message=message,
            error_code="SOLVE_ERROR",
            details=details
        )
