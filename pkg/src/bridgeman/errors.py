"""Exception hierarchy shared by all modules."""


class BridgemanError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BridgemanError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceError(BridgemanError, ArithmeticError):
    """A series or iteration failed to converge within its budget."""


class DegenerateConfigurationError(BridgemanError, ValueError):
    """Ideal points that must be distinct coincide."""


class OrderingError(BridgemanError, ValueError):
    """Ideal points are not in the required circular order."""


class CrossingError(BridgemanError, ValueError):
    """Two geodesics that must be disjoint intersect."""


class ParabolicError(BridgemanError, ValueError):
    """Two geodesics share an ideal endpoint, so their distance is zero."""


class NonHyperbolicError(BridgemanError, ValueError):
    """A Moebius map has |trace| <= 2."""


class ToleranceError(BridgemanError, ArithmeticError):
    """A quadrature did not reach the requested tolerance."""


class ParameterError(BridgemanError, ValueError):
    """A sampling or enumeration parameter is out of range."""


class ConstructionError(BridgemanError, ArithmeticError):
    """Building a Fuchsian group from boundary data failed."""
