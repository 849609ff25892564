"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input value violates a documented invariant."""


class SizeCapError(ValueError):
    """A computation would exceed a configured size cap."""


class SupportError(ValueError):
    """An algebra element touches a site outside the allowed window."""


class LocalityError(ValueError):
    """An observable acts on the other party's sites."""
