"""Exception hierarchy shared by every module of the package."""


class FidelityError(Exception):
    """Base class for all errors raised by ``opfidelity``."""


class NumericsError(FidelityError):
    pass


class NoConvergence(NumericsError):
    pass


class NotHermitian(FidelityError, ValueError):
    pass


class NotPSD(FidelityError, ValueError):
    pass


class BadTrace(FidelityError, ValueError):
    pass


class NotNormalized(FidelityError, ValueError):
    pass


class DimensionMismatch(FidelityError, ValueError):
    pass


class EnvTooSmall(FidelityError, ValueError):
    pass


class BadRank(FidelityError, ValueError):
    pass


class BadDistribution(FidelityError, ValueError):
    pass


class NotTracePreserving(FidelityError, ValueError):
    pass


class TooManyKraus(FidelityError, ValueError):
    pass


class CompletionFailure(NumericsError):
    pass


class GramMismatch(FidelityError, ValueError):
    """The two pairs of vectors have different inner products."""

    def __init__(self, gram_a, gram_b, tol):
        self.gram_a = complex(gram_a)
        self.gram_b = complex(gram_b)
        super().__init__(
            f"<a1|a2> = {self.gram_a:.6g} differs from <b1|b2> = {self.gram_b:.6g} "
            f"by more than {tol:.3g}"
        )


class ParseError(FidelityError, ValueError):
    pass


class ValidationError(FidelityError, ValueError):
    """Wraps a validation failure raised while loading a file."""

    def __init__(self, cause: Exception, path=None):
        self.cause = cause
        where = f"{path}: " if path is not None else ""
        super().__init__(f"{where}{type(cause).__name__}: {cause}")
