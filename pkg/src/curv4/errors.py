"""Exception types raised by curv4."""


class CurvatureError(ValueError):
    """Base class for invalid input to a curv4 routine."""


class NotSymmetric(CurvatureError):
    pass


class BianchiViolation(CurvatureError):
    def __init__(self, residual):
        self.residual = float(residual)
        super().__init__(f"first Bianchi identity violated, residual {self.residual:.3e}")


class NotUnit(CurvatureError):
    pass


class NotOrthonormal(CurvatureError):
    pass


class NotDecomposable(CurvatureError):
    def __init__(self, residual):
        self.residual = float(residual)
        super().__init__(f"2-form is not decomposable, Pluecker residual {self.residual:.3e}")


class NotTraceless(CurvatureError):
    pass


class NonPositiveInput(CurvatureError):
    pass


class NonPositiveScalar(CurvatureError):
    pass


class MissingK(CurvatureError):
    pass


class InconsistentContext(CurvatureError):
    pass


class HypothesisNotMet(CurvatureError):
    pass


class MismatchedInput(CurvatureError):
    pass


class OutOfRange(CurvatureError):
    pass


class OrderViolation(CurvatureError):
    pass


class NotEinstein(CurvatureError):
    pass


class BadParams(CurvatureError):
    pass


class NonConvergenceWarning(RuntimeWarning):
    """The optimizer hit its iteration cap; the best value found is still returned."""


class ParseError(CurvatureError):
    """Malformed tensor document."""
