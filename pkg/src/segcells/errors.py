"""Exception hierarchy shared by all solvers.

Every error carries a short machine-readable ``code`` and the process exit
status the command-line front end uses for it.
"""


class SegCellsError(Exception):
    code = "E_GENERIC"
    exit_status = 1


class ParseError(SegCellsError):
    code = "E_PARSE"
    exit_status = 2

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class ParamsError(SegCellsError):
    code = "E_PARAMS"
    exit_status = 2


class DegenerateError(SegCellsError):
    code = "E_DEGENERATE"
    exit_status = 3


class OverlapError(DegenerateError):
    code = "E_OVERLAP"


class NotAWalkError(SegCellsError):
    code = "E_NOT_A_WALK"
    exit_status = 3


class PreconditionError(SegCellsError):
    code = "E_PRECONDITION"
    exit_status = 4


class BadPolygonError(PreconditionError):
    code = "E_BAD_POLYGON"


class TooLargeError(SegCellsError):
    code = "E_TOO_LARGE"
    exit_status = 5


class TooManyHolesError(TooLargeError):
    code = "E_TOO_MANY_HOLES"


class InternalConsistencyError(SegCellsError):
    code = "E_INTERNAL"
    exit_status = 6


class VerificationError(SegCellsError):
    code = "E_VERIFY"
    exit_status = 7


class SameCellError(SegCellsError):
    """Raised by the separation solver when a and b cannot be separated."""

    code = "E_SAME_CELL"
    exit_status = 8
