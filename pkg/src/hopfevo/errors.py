"""Exception hierarchy shared by all hopfevo modules."""


class HopfEvoError(Exception):
    """Base class for library errors."""


class ParamMismatch(HopfEvoError):
    """Two first-order quantities carry different deformation parameters."""


class DimensionMismatch(HopfEvoError):
    pass


class NotHermitian(HopfEvoError):
    pass


class UnknownSymbol(HopfEvoError):
    pass


class NonPrimitiveExponential(HopfEvoError):
    """An exponential atom was built on a generator whose coproduct is not primitive."""


class UnsupportedDimension(HopfEvoError):
    pass


class InconsistentInput(HopfEvoError):
    pass


class EmptyGrid(HopfEvoError):
    pass


class InvalidState(HopfEvoError):
    pass


class StepTooLarge(HopfEvoError):
    pass


class NotOrthogonal(HopfEvoError):
    pass


class ModelFileError(HopfEvoError):
    """A custom model file could not be parsed or violates the schema."""
