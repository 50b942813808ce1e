"""Exception hierarchy shared by every module of the toolkit.

Library functions raise these and never exit; ``cli.main`` maps each branch
to its exit code.
"""


class LVMError(Exception):
    """Root of all errors raised by the toolkit."""

    exit_code = 1


class SchemaError(LVMError, ValueError):
    """Input that does not parse or does not match the expected shape."""

    exit_code = 2


class PreconditionError(LVMError, ValueError):
    """A documented precondition of an operation does not hold."""

    exit_code = 3


class InvariantError(LVMError, RuntimeError):
    """An internal invariant was violated; this is a bug, not bad input."""

    exit_code = 4
