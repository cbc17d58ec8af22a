"""Exception hierarchy shared by every module."""


class FixlatError(Exception):
    """Base class for all errors raised by fixlat."""


class UnknownElement(FixlatError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CycleDetected(FixlatError, ValueError):
    """The given relation violates antisymmetry."""


class NotReflexive(FixlatError, ValueError):
    pass


class NotTransitive(FixlatError, ValueError):
    pass


class SizeCap(FixlatError, ValueError):
    """A poset or generated instance exceeds the configured element cap."""


class MissingG(FixlatError, ValueError):
    """The theorem needs an auxiliary map ``g`` and the instance has none."""


class UnsupportedCarrier(FixlatError, ValueError):
    """A derived map cannot be built because a required join does not exist."""


class UnknownHypothesis(FixlatError, ValueError):
    pass


class AscentViolation(FixlatError, RuntimeError):
    """An iteration over an implicit lattice stopped ascending."""


class BudgetExhausted(FixlatError, RuntimeError):
    pass


class MalformedProgram(FixlatError, ValueError):
    pass


class SchemaError(FixlatError, ValueError):
    """An input document does not match its file format.

    ``path`` locates the offending node, e.g. ``$.function.bot``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
