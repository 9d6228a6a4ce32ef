"""Exception types shared across the package."""


class FermiconError(Exception):
    """Base class for every error raised by fermicon."""


class ShapeError(FermiconError):
    """Invalid (d, n) system shape, or an operation applied at the wrong shape."""


class ModeError(FermiconError):
    """Repeated, unknown, or out-of-range mode index."""


class NormError(FermiconError):
    """State or tensor norm outside tolerance."""


class AntisymmetryError(FermiconError):
    """Tensor is not antisymmetric within tolerance."""


class UnitarityError(FermiconError):
    """Matrix is not unitary within tolerance."""


class RangeError(FermiconError):
    """Subsystem size or other integer argument outside its valid range."""


class DegenerateShapeError(FermiconError):
    """Shape admits only a single Slater ray; the normalization diverges."""


class BoundViolation(FermiconError):
    """A purity fell outside its proven bounds; indicates an implementation bug."""


class ShapeMismatch(FermiconError):
    """Two objects that must share a shape do not."""


class EmptyBlockError(FermiconError):
    """A slot block that must be nonempty is empty."""


class DegenerateDirection(FermiconError):
    """Could not build a direction orthogonal to the base state."""


class StateFileError(FermiconError):
    """Malformed or invalid state file."""
