"""Exception hierarchy shared by all maxface modules."""


class MaxfaceError(Exception):
    """Base class for every error raised by this package."""


class ExprSyntaxError(MaxfaceError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    pass


class NonIntegerExponent(ExprSyntaxError):
    pass


class EvaluationError(MaxfaceError):
    """Division by (near-)zero or a sqrt argument on the branch cut."""


class PoleError(MaxfaceError):
    """A jet quotient whose divisor vanishes to higher order than the dividend."""


class OrderOverflow(MaxfaceError):
    pass


class QuadratureError(MaxfaceError):
    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class DataError(MaxfaceError):
    """Björling data that cannot be used for the requested operation."""


class DegenerateGaussMap(MaxfaceError):
    pass


class ApproximationError(MaxfaceError):
    pass
