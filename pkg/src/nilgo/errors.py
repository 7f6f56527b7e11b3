"""Exception types shared across the package."""


class NilgoError(Exception):
    """Base class for all package errors."""


class InputError(NilgoError, ValueError):
    """Malformed or out-of-contract input (exit code 64 at the CLI)."""


class InterpolationError(NilgoError, ValueError):
    """Underdetermined or inconsistent polynomial interpolation system."""


class NotTwoStepError(NilgoError, ValueError):
    """Operation requires a two-step nilpotent algebra."""


class PreconditionError(NilgoError, ValueError):
    """A documented operation precondition was violated."""
