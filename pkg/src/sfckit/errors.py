"""Exception taxonomy shared by all modules.

Exit-code mapping used by the CLI: InputError / SizeError / PreconditionError
signal a usage or input problem (exit 2); an infeasible verdict or a failed
verification is reported through return values, never exceptions (exit 1).
"""


class SfcError(Exception):
    """Base class for all library errors."""


class InputError(SfcError):
    """Malformed input: bad rationals, row sums, shapes, unknown names.

    Carries an optional 1-based line number when raised by a file parser.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeError(SfcError):
    """A brute-force guard was exceeded (the operation states its bound)."""


class PreconditionError(SfcError):
    """An operation was invoked on an instance outside its stated domain."""
