"""Exception hierarchy shared by all qdynmaps modules."""


class QDynMapsError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(QDynMapsError, ValueError):
    pass


class SingularMatrix(QDynMapsError, ArithmeticError):
    pass


class SingularIntermediateMap(SingularMatrix):
    """A(t1, 0) is not invertible, so A(t2, t1) is undefined."""


class NotHermitian(QDynMapsError, ValueError):
    pass


class NoConvergence(QDynMapsError, RuntimeError):
    pass


class NonLinearAction(QDynMapsError, ValueError):
    pass


class NotCP(QDynMapsError, ValueError):
    """The Choi matrix has a negative eigenvalue; no Kraus form exists."""


class DomainError(QDynMapsError, ValueError):
    pass


class DimensionGuard(QDynMapsError, ValueError):
    pass


class InconsistentFlags(QDynMapsError, ValueError):
    pass


class InvalidState(QDynMapsError, ValueError):
    pass


class EmptyGrid(QDynMapsError, ValueError):
    pass


class InvalidConfig(QDynMapsError, ValueError):
    pass


class ParseError(QDynMapsError, ValueError):
    pass
