"""Exception types shared across the package."""


class ZalcmanError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(ZalcmanError, ValueError):
    pass


class DomainError(ZalcmanError, ValueError):
    """A point outside the open unit disk was supplied."""


class Unsupported(ZalcmanError, NotImplementedError):
    """The requested class/branch combination has no defined answer."""


class InsufficientTruncation(ZalcmanError, ValueError):
    pass


class HypothesisViolated(ZalcmanError, ValueError):
    """Input breaks a standing assumption (e.g. |a_{2n-1}| <= 2n-1)."""


class ExcludedPair(ZalcmanError, ZeroDivisionError):
    def __init__(self, m: int, n: int):
        super().__init__(f"denominator lambda*m*n - m - n + 1 vanishes at (m, n) = ({m}, {n})")
        self.m = m
        self.n = n
