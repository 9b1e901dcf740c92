class SolitonError(Exception):
    """
    Base class for every error raised by the solitons app.
    """


# raised for input that fails a precondition (maps to exit code 2 in the CLI)
class ValidationFailure(SolitonError):
    pass


class GridError(ValidationFailure):
    pass


class GridMismatchError(ValidationFailure):
    pass


class GaugeNormError(ValidationFailure):
    pass


class ConstraintError(ValidationFailure):
    pass


class DegenerateInputError(ValidationFailure):
    pass


class SupportError(ValidationFailure):
    pass


class UnknownSuiteError(ValidationFailure):
    pass


class BracketError(ValidationFailure):
    pass


class DiscriminantError(SolitonError):
    pass


class NonPhysicalMaximizerError(SolitonError):
    """
    The maximizer exceeds alpha at the origin, so the transformed profile
    does not solve the steady Whitham equation.
    """


class TruncationError(SolitonError):
    """
    The converged profile has not decayed inside the computational domain.
    Carries the result so callers can warm-start on a larger grid.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
