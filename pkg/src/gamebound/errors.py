"""Exception types. Input problems are ValueErrors so the CLI can map them to exit code 2."""


class InputError(ValueError):
    """Malformed or inconsistent input (shapes, invariants, file contents)."""


class CapExceededError(InputError):
    """A configured dimension or budget cap would be exceeded."""
