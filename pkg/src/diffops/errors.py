"""Exception types shared across the library and the CLI.

Exit-code mapping used by the CLI: ParseError and ValidationError are
usage errors (exit 1); the remaining subclasses of MathError signal a
violated mathematical precondition (exit 2).
"""


class DiffopsError(Exception):
    """Base class for all library errors."""


class ParseError(DiffopsError):
    """Syntax or symbol error in an input expression, with position info."""

    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(DiffopsError):
    """Malformed input data (bad flags, bad file contents, bad bases)."""


class MathError(DiffopsError):
    """A mathematical precondition of an operation was violated."""


class IncompatibleContextError(MathError):
    """Operands live in different algebras (rank, field or mode differ)."""


class UnsupportedCharacteristicError(MathError):
    """Operation is only defined in characteristic 0 (or only in char p)."""


class UnsupportedModeError(MathError):
    """Operation is only defined in Heisenberg (or only in Weyl) mode."""


class ZeroOperatorError(MathError):
    """The zero operator was passed where a nonzero one is required."""
