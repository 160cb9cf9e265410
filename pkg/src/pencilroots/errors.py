"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed user input: non-finite entries, shape mismatch, bad index lists."""


class ContractViolation(RuntimeError):
    """An internal structural assumption failed (e.g. a stair block lost rank)."""
