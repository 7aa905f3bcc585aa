"""Exception hierarchy shared by the library and the CLI."""


class MteeError(Exception):
    """Base class for all errors raised by mtee-lab."""


class ParameterError(MteeError, ValueError):
    """An operation was called with arguments outside its documented range."""


class FieldConstructionError(ParameterError):
    """The polynomial given for GF(2^m) is not primitive."""


class UsageError(MteeError):
    """Command-line misuse (bad flags, unreadable config)."""
