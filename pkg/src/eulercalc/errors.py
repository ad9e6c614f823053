"""Exception types shared across the package."""


class EulerCalcError(ValueError):
    """A domain error: the inputs are well-formed but violate a precondition."""


class HypothesisError(EulerCalcError):
    """A theorem hypothesis does not hold for the given data."""


class LocalTrivialityError(EulerCalcError):
    """Raised when a bundle fails the chi-level local triviality precheck.

    The failing report is attached as ``report``.
    """

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class FormatError(Exception):
    """An input file could not be read or does not match its schema."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = str(path) if line is None else f"{path}:{line}"
            where += ": "
        super().__init__(where + message)
