"""Exception types shared across the package."""


class NbboxError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(NbboxError, ValueError):
    """A value violates a documented precondition (non-finite, empty, ...)."""


class InvalidRangeError(NbboxError, ValueError):
    """A random-draw range is empty or inverted."""


class ConfigError(NbboxError, ValueError):
    """A noise configuration is inconsistent or a config file is malformed."""


class ParseError(NbboxError, ValueError):
    """An annotation or detection file failed to parse.

    Carries enough context (source name, line number, reason) to locate the
    offending line; no record is ever silently dropped.
    """

    def __init__(self, source: str, line_no: int, reason: str):
        self.source = source
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{source}:{line_no}: {reason}")
