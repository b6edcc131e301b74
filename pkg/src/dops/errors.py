"""Exception hierarchy shared by every module."""


class DopsError(Exception):
    """Base class for all library errors."""


class InvalidArgument(DopsError, ValueError):
    pass


class DuplicateHyperplane(InvalidArgument):
    pass


class UnsupportedCase(DopsError):
    """The inputs fall outside the hypotheses an operation is defined for."""


class UndefinedOnZero(DopsError, ValueError):
    pass


class NotIdealPreserving(DopsError):
    """An operator that was required to preserve an ideal does not."""


class NotRepresentable(DopsError):
    pass


class InternalInconsistency(DopsError, RuntimeError):
    """A check that can only fail because of a bug in this library failed."""


class TheoryViolation(InternalInconsistency):
    """A computation contradicted a proven structural result."""


class ParseError(DopsError):
    def __init__(self, message, line=1, column=1, token=None):
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        if token is not None:
            where += f" near {token!r}"
        super().__init__(f"{message} ({where})")
