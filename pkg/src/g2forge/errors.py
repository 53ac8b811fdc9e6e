"""Exception types shared across the package."""


class G2ForgeError(Exception):
    """Base class for all g2forge errors."""


class DegreeError(G2ForgeError):
    """A form operation was applied at an illegal degree."""


class ExactnessLost(G2ForgeError):
    """The exact backend would need an irrational number to continue."""


class NotPositive(G2ForgeError):
    """The 3-form does not induce a positive-definite metric."""


class NotClosed(G2ForgeError):
    """An operation that requires a closed 3-form received a non-closed one."""


class NotALieAlgebra(G2ForgeError):
    """Structure constants violate the Jacobi identity.

    Attributes:
        failures: list of basis triples (i, j, k) where the cyclic sum is nonzero.
    """

    def __init__(self, failures):
        self.failures = list(failures)
        triples = ", ".join(str(t) for t in self.failures[:5])
        more = "" if len(self.failures) <= 5 else f" (+{len(self.failures) - 5} more)"
        super().__init__(f"Jacobi identity fails on triples {triples}{more}")


class ParseError(G2ForgeError):
    """Syntax error in a textual form or structure-equation string."""

    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class SingularMatrix(G2ForgeError):
    """Matrix inversion or solving hit a singular system."""


class ToleranceExceeded(G2ForgeError):
    """A numerical verification exceeded its tolerance.

    Attributes:
        worst: description of the worst offending sample.
        value: the offending residual.
    """

    def __init__(self, message, worst=None, value=None):
        self.worst = worst
        self.value = value
        super().__init__(message)


class PositivityLoss(G2ForgeError):
    """The flow left the cone of positive 3-forms."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"positivity lost at t={t}")


class NumericalBlowup(G2ForgeError):
    """A flow coefficient exceeded the configured blowup bound."""

    def __init__(self, t):
        self.t = t
        super().__init__(f"coefficient blowup at t={t}")
