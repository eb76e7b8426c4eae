"""Exception hierarchy."""


class ConeHullError(Exception):
    """Base class for all errors raised by the package."""


class DimensionMismatch(ConeHullError, ValueError):
    pass


class DegenerateInput(ConeHullError, ValueError):
    """Input points are not in general position."""


class NonSimplicial(ConeHullError, ValueError):
    pass


class OriginOutside(ConeHullError, ValueError):
    """The operation needs the origin in the interior of the hull."""


class DegenerateAffineHull(ConeHullError, ValueError):
    pass


class PoleAtEquator(ConeHullError, ValueError):
    """Gnomonic projection of a point with vanishing first coordinate."""


class InvalidRadii(ConeHullError, ValueError):
    pass


class InvalidParams(ConeHullError, ValueError):
    pass


class NonPositiveArgument(InvalidParams):
    pass


class InvalidK(InvalidParams):
    pass


class InfiniteMoment(ConeHullError, ArithmeticError):
    pass


class IllConditioned(ConeHullError, ArithmeticError):
    pass


class WeightOverflow(ConeHullError, ArithmeticError):
    pass


class TruncationFailure(ConeHullError, RuntimeError):
    """The certified truncation loop did not terminate."""


class ConfigError(ConeHullError, ValueError):
    pass


class SchemaError(ConeHullError, ValueError):
    """A serialized document has the wrong schema or version."""
