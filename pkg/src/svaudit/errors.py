"""Exception types shared by all svaudit modules."""


class SvauditError(Exception):
    """Base class for all domain errors raised by this package."""


class InputError(SvauditError):
    """Malformed or out-of-contract input: bad dimensions, ranges, formats,
    or violated structural invariants (e.g. a constant classifier)."""


class CapacityError(SvauditError):
    """Requested computation exceeds a configured enumeration/coalition cap."""


class NoSolutionError(SvauditError):
    """A bounded search exhausted its budget without finding a solution."""
