"""Laplacian-soliton residuals, the (lambda, X) least-squares solve, gradient test.

The soliton equation for a closed structure is

    laplacian(phi) = lambda phi + L_X phi

with L_X phi = d(i_X phi) + i_X(d phi).  Over left-invariant X this is an
8-parameter affine family, so certifying a soliton is a small least-squares
problem in the metric inner product on 3-forms.  Minimizers can form an
affine set (L_X phi may vanish for nonzero X); the tie-break is minimal
|lambda| first, then minimal |X|_g, and the kernel is reported rather than
hidden.
"""

import enum

from . import linalg
from .errors import NotClosed
from .exterior import DIM, KForm, MONOMIALS, Vector, interior
from .g2core import hodge_laplacian
from .liealg import ce_differential


def lie_derivative_phi(algebra, x, phi):
    """Cartan formula L_X phi = d(i_X phi) + i_X(d phi)."""
    total = KForm.zero(phi.degree, phi.field)
    if phi.degree >= 1:
        total = total + ce_differential(algebra, interior(x, phi))
    if phi.degree <= DIM - 1:
        total = total + interior(x, ce_differential(algebra, phi))
    return total


def soliton_residual(algebra, structure, lam, x):
    """laplacian(phi) - lambda phi - L_X phi."""
    phi = structure.phi
    lap = hodge_laplacian(algebra, structure.metric, phi)
    return lap - phi.scale(lam) - lie_derivative_phi(algebra, x, phi)


class SolitonType(enum.Enum):
    EXPANDING = "Expanding"
    STEADY = "Steady"
    SHRINKING = "Shrinking"
    NONE = "None"


class GradientKind(enum.Enum):
    GRADIENT = "Gradient"
    NOT_GRADIENT = "NotGradient"
    UNKNOWN = "Unknown"


class GradientReport:
    """Closedness verdict for X-flat, with the chart slope when derivable."""

    __slots__ = ("kind", "xflat", "slope")

    def __init__(self, kind, xflat, slope=None):
        self.kind = kind
        self.xflat = xflat
        self.slope = slope  # (coordinate index, slope) or None


def gradient_check(algebra, metric, x, chart_primitives=None):
    """Gradient iff d(X-flat) = 0 (simply connected group: closed => exact).

    When X-flat is supported on a single closed generator e^k that a chart
    supplies as a global coordinate differential (e^k = a dx_m), the report
    carries the primitive's slope: f = (c a) x_m + const.
    """
    xflat = metric.flat(x)
    if not ce_differential(algebra, xflat).is_zero():
        return GradientReport(GradientKind.NOT_GRADIENT, xflat)
    slope = None
    if chart_primitives:
        support = [idx for (idx,) in xflat.terms]
        if len(support) == 1 and support[0] in chart_primitives:
            coord, coeff = chart_primitives[support[0]]
            slope = (coord, xflat.terms[(support[0],)] * metric.field.of(coeff))
    return GradientReport(GradientKind.GRADIENT, xflat, slope)


class SolitonCertificate:
    """Outcome of the least-squares solve for (lambda, X)."""

    __slots__ = (
        "lam",
        "x",
        "residual_norm_sq",
        "soliton_type",
        "gradient",
        "kernel",
        "field",
    )

    def __init__(self, lam, x, residual_norm_sq, soliton_type, gradient, kernel, field):
        self.lam = lam
        self.x = x
        self.residual_norm_sq = residual_norm_sq
        self.soliton_type = soliton_type
        self.gradient = gradient
        self.kernel = kernel  # list of (lambda-component, Vector) spanning ker(v -> lambda phi + L_X phi)
        self.field = field

    @property
    def kernel_dim(self):
        return len(self.kernel)

    @property
    def residual_norm(self):
        return self.field.to_float(self.residual_norm_sq) ** 0.5

    def is_soliton(self):
        return self.field.is_zero(self.residual_norm_sq)


def soliton_solve(algebra, structure, chart_primitives=None):
    """Least-squares fit of laplacian(phi) = lambda phi + L_X phi over (lambda, X).

    Normal equations in the metric inner product on 3-forms; among exact
    minimizers, returns minimal |lambda| then minimal |X|_g and reports the
    kernel so `X modulo kernel` statements are checkable.
    """
    phi = structure.phi
    metric = structure.metric
    field = phi.field
    if not ce_differential(algebra, phi).is_zero():
        raise NotClosed("soliton solve expects a closed structure")

    columns = [phi.to_vector()]
    for i in range(1, DIM + 1):
        columns.append(lie_derivative_phi(algebra, Vector.basis(i, field), phi).to_vector())
    rows = len(MONOMIALS[3])
    a = [[columns[c][r] for c in range(8)] for r in range(rows)]
    b = hodge_laplacian(algebra, metric, phi).to_vector()
    w = metric.gram_on(3)

    wa = linalg.mat_mul(w, a)
    at = linalg.transpose(a)
    normal = linalg.mat_mul(at, wa)
    rhs = linalg.mat_vec(at, linalg.mat_vec(w, b))
    particular, kernel = linalg.solve_affine(normal, rhs, field)

    # tie-break stage 1: minimal |lambda| (0 whenever the kernel allows it)
    pivot = None
    for vec in kernel:
        if not field.is_zero(vec[0]):
            if pivot is None or abs(field.to_float(vec[0])) > abs(field.to_float(pivot[0])):
                pivot = vec
    reduced_kernel = []
    if pivot is not None:
        f = particular[0] / pivot[0]
        particular = [p - f * q for p, q in zip(particular, pivot)]
        for vec in kernel:
            if vec is pivot:
                continue
            f = vec[0] / pivot[0]
            reduced_kernel.append([p - f * q for p, q in zip(vec, pivot)])
    else:
        reduced_kernel = kernel

    # tie-break stage 2: minimal |X|_g within the remaining affine freedom
    if reduced_kernel:
        g = metric.gram
        m = [[vec[1 + r] for vec in reduced_kernel] for r in range(DIM)]
        gm = linalg.mat_mul(g, m)
        mt = linalg.transpose(m)
        nn = linalg.mat_mul(mt, gm)
        x0 = particular[1:]
        nr = [-v for v in linalg.mat_vec(mt, linalg.mat_vec(g, x0))]
        d, _ = linalg.solve_affine(nn, nr, field)
        for coef, vec in zip(d, reduced_kernel):
            particular = [p + coef * q for p, q in zip(particular, vec)]

    lam = particular[0]
    x = Vector(particular[1:], field)
    fitted = linalg.mat_vec(a, particular)
    res = [bb - ff for bb, ff in zip(b, fitted)]
    residual_norm_sq = sum(
        (ri * sum(w[i][j] * res[j] for j in range(rows)) for i, ri in enumerate(res)),
        field.zero(),
    )

    if field.is_zero(residual_norm_sq):
        if field.is_zero(lam):
            stype = SolitonType.STEADY
        elif field.to_float(lam) > 0:
            stype = SolitonType.EXPANDING
        else:
            stype = SolitonType.SHRINKING
        gradient = gradient_check(algebra, metric, x, chart_primitives)
    else:
        stype = SolitonType.NONE
        gradient = GradientReport(GradientKind.UNKNOWN, metric.flat(x))

    kernel_pairs = [(vec[0], Vector(vec[1:], field)) for vec in kernel]
    return SolitonCertificate(
        lam, x, residual_norm_sq, stype, gradient, kernel_pairs, field
    )
