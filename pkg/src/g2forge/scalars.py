"""Scalar backends: exact rationals or IEEE doubles, selected once per session.

Every coefficient in the package flows through one of the two backends below.
The exact backend keeps all arithmetic in ``fractions.Fraction`` so equality is
decidable and the construction's integers (2, -4, -8, -32, ...) are reproduced
bit for bit.  The float backend trades that for speed and uses an absolute
tolerance for every comparison.
"""

from fractions import Fraction

from .errors import ExactnessLost


def integer_nth_root(n, k):
    """Floor k-th root of a nonnegative integer, plus an exactness flag."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, True
    # Newton iteration from an upper bound (2^ceil(bits/k) >= n^(1/k)), so the
    # sequence decreases monotonically onto the floor root.
    r = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r, r ** k == n


class ExactBackend:
    """Arithmetic over Q via fractions.Fraction."""

    name = "exact"
    exact = True

    def of(self, value):
        if isinstance(value, float):
            raise TypeError(
                "refusing to coerce a float into the exact backend; "
                "pass an int, a Fraction or a string like '3/2'"
            )
        return Fraction(value)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def nth_root(self, a, k):
        """Exact k-th root of a rational, or ExactnessLost."""
        a = Fraction(a)
        if a < 0:
            raise ValueError("negative radicand")
        pn, exact_n = integer_nth_root(a.numerator, k)
        pd, exact_d = integer_nth_root(a.denominator, k)
        if not (exact_n and exact_d):
            raise ExactnessLost(f"{a} has no rational {k}-th root")
        return Fraction(pn, pd)

    def sqrt(self, a):
        return self.nth_root(a, 2)

    def to_float(self, a):
        return float(a)

    def fmt(self, a):
        return str(a)


class FloatBackend:
    """IEEE double arithmetic with an absolute comparison tolerance."""

    name = "float"
    exact = False

    def __init__(self, tol=1e-9):
        self.tol = tol

    def of(self, value):
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)

    def zero(self):
        return 0.0

    def one(self):
        return 1.0

    def is_zero(self, a):
        return abs(a) <= self.tol

    def eq(self, a, b):
        return abs(a - b) <= self.tol

    def nth_root(self, a, k):
        if a < 0:
            raise ValueError("negative radicand")
        return float(a) ** (1.0 / k)

    def sqrt(self, a):
        return float(a) ** 0.5

    def to_float(self, a):
        return float(a)

    def fmt(self, a):
        return repr(float(a))


EXACT = ExactBackend()
FLOAT = FloatBackend()


def get_backend(name):
    """Look up a backend by CLI name ('exact' or 'float')."""
    if name == "exact":
        return EXACT
    if name == "float":
        return FLOAT
    raise ValueError(f"unknown backend {name!r}")
