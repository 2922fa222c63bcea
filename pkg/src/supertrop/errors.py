"""Exception hierarchy.

Every error carries the name of the module that raised it so the CLI can
report ``<module>.<ErrorName>`` without a lookup table.
"""


class SupertropError(Exception):
    """Base class for all domain errors."""

    module = "core"

    @property
    def name(self) -> str:
        return type(self).__name__


class DivisionByZero(SupertropError, ZeroDivisionError):
    module = "core-semiring"


class ParseError(SupertropError, ValueError):
    module = "cli"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class RaggedRows(ParseError):
    pass


class DimensionMismatch(SupertropError, ValueError):
    module = "tropical-matrix"


class NotSquare(DimensionMismatch):
    pass


class SizeCapExceeded(SupertropError, ValueError):
    module = "tropical-matrix"


class SingularMatrix(SupertropError, ArithmeticError):
    module = "tropical-matrix"


class NotSingular(SupertropError, ArithmeticError):
    module = "linear-solver"


class ZeroDeterminant(SupertropError, ArithmeticError):
    module = "linear-solver"


class NonTangibleRHS(SupertropError, ValueError):
    module = "linear-solver"


class NonTangibleMatrix(SupertropError, ValueError):
    module = "spectral"


class NotQuasiTangible(SupertropError, ValueError):
    module = "spectral"


class AmbiguousJ(SupertropError, ArithmeticError):
    module = "spectral"


class MalformedExpression(SupertropError, ValueError):
    module = "identity-harness"


class GuardUnsatisfiable(SupertropError, RuntimeError):
    module = "identity-harness"
