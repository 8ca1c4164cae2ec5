"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An input violates an operation's stated precondition."""


class InadmissibleError(PreconditionError):
    """A tuple of linear forms covers every residue class modulo some prime."""


class ResourceGuardError(RuntimeError):
    """A requested computation exceeds a configured size ceiling."""
