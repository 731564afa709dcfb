"""Exception hierarchy."""


class KBiframeError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(KBiframeError, ValueError):
    pass


class MatrixTooLargeError(KBiframeError, ValueError):
    pass


class NotHermitianError(KBiframeError, ValueError):
    pass


class NotPSDError(KBiframeError, ValueError):
    pass


class NoConvergenceError(KBiframeError, ArithmeticError):
    pass


class BadParametersError(KBiframeError, ValueError):
    pass


class UnknownNameError(KBiframeError, KeyError):
    pass


class ParseError(KBiframeError, ValueError):
    """Malformed JSON input; the message carries line/column context."""


class SchemaError(KBiframeError, ValueError):
    """Well-formed JSON that does not match the expected schema.

    ``field`` names the offending member (dotted path).
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
