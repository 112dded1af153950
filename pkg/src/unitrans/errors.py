"""Exception hierarchy shared by every stage."""


class UnitransError(Exception):
    """Base class for all errors raised by this package."""


class UnknownLanguageError(UnitransError, KeyError):
    def __init__(self, code):
        super().__init__(code)
        self.code = code

    def __str__(self):
        return f"unknown language code: {self.code!r}"


class ManifestError(UnitransError, ValueError):
    """A manifest line could not be accepted.

    ``lineno`` is 1-based and is ``None`` for errors not tied to a line.
    """

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class RuleTableError(UnitransError, ValueError):
    pass


class UnsupportedScriptError(UnitransError, ValueError):
    pass


class RomanizationError(UnitransError, ValueError):
    """Raised in strict mode when a character has no rule."""


class VocabularyError(UnitransError, ValueError):
    pass


class EmissionFormatError(UnitransError, ValueError):
    pass


class PromptError(UnitransError, ValueError):
    pass


class EmptyReferenceError(UnitransError, ValueError):
    pass


class ConfigError(UnitransError, ValueError):
    pass


class TransportError(UnitransError):
    """A converter request failed in a way worth retrying."""
