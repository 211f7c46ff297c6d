"""Exception hierarchy shared by all solvers."""


class PricingError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstance(PricingError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class IllDefined(PricingError):
    """A centrality (I - M)^{-1} v is not well defined or not nonnegative."""


class SingularSystem(PricingError):
    pass


class NoConvergence(PricingError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TooLarge(PricingError):
    pass


class Inconsistent(PricingError):
    """An oracle found zero or several answers where exactly one must exist."""


class NotPositiveDefinite(PricingError):
    pass
