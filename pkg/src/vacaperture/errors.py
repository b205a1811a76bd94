"""Exception hierarchy shared by every module in the package."""


class VacApertureError(Exception):
    """Base class for all package errors."""


class DomainError(VacApertureError, ValueError):
    """An argument lies outside the domain of a geometric or statistical relation."""


class InsufficientData(VacApertureError, ValueError):
    """Too few observations to compute the requested quantity."""


class InputShapeError(VacApertureError, ValueError):
    """Paired sequences differ in length."""


class InputError(VacApertureError, ValueError):
    """Malformed input file or configuration.

    Attributes:
        row: 1-based data row number (header excluded) the problem was found on,
            or None when the problem is not tied to a row.
    """

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class FitError(VacApertureError):
    """Base class for failures while fitting a psychometric curve."""


class NoTransition(FitError, ValueError):
    """Every trial shares the same outcome, so no threshold can be located."""


class MonotonicityError(FitError, ValueError):
    """Passability decreases with width; the increasing model does not apply."""


class FitQualityError(FitError):
    """The optimizer did not converge."""


class SolverError(VacApertureError, RuntimeError):
    """A numerical root finder could not bracket or converge."""
