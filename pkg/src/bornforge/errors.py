"""Exception hierarchy shared by every bornforge module."""


class BornforgeError(Exception):
    """Base class for all bornforge errors."""


class ObjectMismatch(BornforgeError, ValueError):
    """Two morphisms or objects do not line up where they must."""


class DimensionMismatch(ObjectMismatch):
    """Sequential composition of morphisms whose wires disagree."""


class NotPSD(BornforgeError, ValueError):
    """A matrix that must be positive semidefinite has a negative eigenvalue."""


class NotOrthonormal(BornforgeError, ValueError):
    pass


class NotContraction(BornforgeError, ValueError):
    pass


class NotMember(BornforgeError, ValueError):
    """A morphism fails the physical state/effect/process predicate of a theory."""


class NotSimplified(BornforgeError, ValueError):
    pass


class BadParams(BornforgeError, ValueError):
    pass


class SamplerUnavailable(BornforgeError):
    pass


class NoDiscard(BornforgeError):
    pass


class UnsupportedTheory(BornforgeError):
    """No canonical form is registered for this probability rule."""


class OutOfRange(BornforgeError, ValueError):
    pass


class WeightedSetTooLarge(BornforgeError, ValueError):
    pass


class UndetectedMutant(BornforgeError, AssertionError):
    """A planted-fault theory slipped through the verification suite."""


class ParseError(BornforgeError, ValueError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ShapeError(ParseError):
    pass


class UnknownObject(ParseError):
    pass
