"""Exception hierarchy shared by every layer of the package."""


class SklyError(Exception):
    """Base class for all errors raised by skly."""


class PoleEvaluation(SklyError, ValueError):
    """A meromorphic function was evaluated at (or too close to) one of its poles."""


class NonconvergentSeries(SklyError, ArithmeticError):
    """A series or iteration did not converge inside its term budget."""


class NonconstantDifference(SklyError, ArithmeticError):
    """Sampled values of w_a^2 - w_b^2 were not constant."""


class QuadratureDivergence(SklyError, ArithmeticError):
    """Two quadrature resolutions disagree beyond tolerance."""


class CurveMismatch(SklyError, ValueError):
    """Objects living on different curves were combined."""


class VariableMismatch(SklyError, ValueError):
    """Polynomials over different variable sets were combined."""


class SingularMatch(SklyError, ArithmeticError):
    """The principal-part matching system is ill-conditioned."""


class FitResidualExceeded(SklyError, ArithmeticError):
    """A least-squares basis expansion left a residual above tolerance."""


class InvalidLengthSequence(SklyError, ValueError):
    pass


class UnrealizablePair(SklyError, ValueError):
    pass


class NoSolution(SklyError, ValueError):
    pass


class InvalidFraction(SklyError, ValueError):
    pass


class InvalidInput(SklyError, ValueError):
    pass


class BudgetExceeded(SklyError, RuntimeError):
    """An enumeration produced more items than the caller allowed."""


class ParseError(SklyError, ValueError):
    """Malformed text input; carries the offending token and its position."""

    def __init__(self, message: str, text: str = "", position: int = 0, token: str = ""):
        self.text = text
        self.position = position
        self.token = token
        detail = message
        if text:
            detail = f"{message} at position {position} (token {token!r})\n  {text}\n  {' ' * position}^"
        super().__init__(detail)
