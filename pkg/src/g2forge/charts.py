"""Concrete verification on the 7x7 matrix group behind the built-in fixture.

The group is the subgroup of GL(7,R) parametrized by (x1..x7) below; its
left-invariant coframe has the closed form implemented in `coframe`, with
structure equations matching the Salamon string in SALAMON.  Everything here
is numeric: coefficient functions involve exp(x7) products, so derivatives
are taken by central finite differences at seeded random sample points and
checked against the algebraic expressions, which keeps every claim
falsifiable (see the deliberately-wrong-sign sentinel in the tests).
"""

import math

import numpy as np

from .errors import ToleranceExceeded
from .scalars import FLOAT

#: structure equations of the coframe, in the notation liealg.parse_salamon reads
SALAMON = "(0,0,-37,47,2*14+57,-2*24+67,0)"

#: coframe generators that are globally a constant multiple of a coordinate
#: differential: index -> (coordinate, factor); here e^7 = -dx7, so a closed
#: 1-form c*e^7 has primitive f = -c*x7 + const.
LINEAR_COFRAME_PRIMITIVES = {7: (7, -1)}


def group_element(x):
    """The group element with parameters x = (x1..x7), as a 7x7 array."""
    x1, x2, x3, x4, x5, x6, x7 = (float(v) for v in x)
    ep, em = math.exp(x7), math.exp(-x7)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, ep, 0.0, 0.0, 0.0, x2],
            [0.0, 0.0, 0.0, em, 0.0, 0.0, -x1],
            [2.0 * x1, 0.0, 0.0, x6, em, 0.0, x4],
            [0.0, -2.0 * x1, 0.0, x5, 0.0, em, x3],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ]
    )


def group_params(m, tol=1e-9):
    """Parameters of a matrix in the group's pattern; None if it does not fit."""
    m = np.asarray(m, dtype=float)
    if m.shape != (7, 7) or m[2, 2] <= 0:
        return None
    x7 = math.log(m[2, 2])
    x = (
        -m[3, 6],
        m[2, 6],
        m[5, 6],
        m[4, 6],
        m[5, 3],
        m[4, 3],
        x7,
    )
    if np.max(np.abs(group_element(x) - m)) > tol:
        return None
    return x


def coframe(x):
    """Rows = left-invariant coframe e^1..e^7 in the coordinate basis dx1..dx7."""
    x1, x2, x3, x4, x5, x6, x7 = (float(v) for v in x)
    ep = math.exp(x7)
    em = math.exp(-x7)
    e2p = math.exp(2.0 * x7)
    out = np.zeros((7, 7))
    out[0, 5] = ep
    out[0, 6] = x6 * ep
    out[1, 4] = -ep
    out[1, 6] = -x5 * ep
    out[2, 1] = em
    out[3, 0] = ep
    out[4, 0] = 2.0 * x6 * e2p
    out[4, 3] = 2.0 * ep
    out[5, 0] = 2.0 * x5 * e2p
    out[5, 2] = 2.0 * ep
    out[6, 6] = -1.0
    return out


def sample_points(samples, seed):
    """Coordinates drawn uniformly from [-2, 2]^7, reproducibly."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-2.0, 2.0, size=(samples, 7))


class ChartCheck:
    """Outcome of one numeric verification."""

    __slots__ = ("name", "max_residual", "worst", "passed", "tol", "extra")

    def __init__(self, name, max_residual, worst, tol, extra=None):
        self.name = name
        self.max_residual = float(max_residual)
        self.worst = worst
        self.tol = float(tol)
        self.passed = self.max_residual <= self.tol
        self.extra = extra or {}

    def require(self):
        if not self.passed:
            raise ToleranceExceeded(
                f"{self.name}: residual {self.max_residual:.3e} > {self.tol:.3e} at {self.worst}",
                worst=self.worst,
                value=self.max_residual,
            )
        return self


def _central_diff(f, x, m, step):
    xp = np.array(x, dtype=float)
    xm = np.array(x, dtype=float)
    xp[m] += step
    xm[m] -= step
    return (f(xp) - f(xm)) / (2.0 * step)


def default_structure_equations():
    """de^i term lists {(a, b): coeff} from SALAMON, as plain floats."""
    from .liealg import parse_salamon

    algebra = parse_salamon(SALAMON, FLOAT)
    return [dict(algebra.de(k).terms) for k in range(1, 8)]


def fd_structure_check(samples=100, step=1e-6, tol=1e-5, seed=7, eqs=None):
    """Finite-difference check of de^i against the wedge expressions.

    For each sample x and each pair m < l, compares the antisymmetrized
    derivative of the coframe coefficients with sum_{(a,b)} c (e^a ^ e^b)
    evaluated from the sampled coframe.  Raises ToleranceExceeded with the
    worst point on failure (so the wrong-sign sentinel test can assert it).
    """
    if eqs is None:
        eqs = default_structure_equations()
    worst = None
    worst_val = -1.0
    for x in sample_points(samples, seed):
        e = coframe(x)
        # partials[m][i, l] = d/dx_m of E[i, l]
        partials = [_central_diff(coframe, x, m, step) for m in range(7)]
        for i in range(7):
            for m in range(7):
                for l in range(m + 1, 7):
                    lhs = partials[m][i, l] - partials[l][i, m]
                    rhs = 0.0
                    for (a, b), c in eqs[i].items():
                        rhs += c * (e[a - 1, m] * e[b - 1, l] - e[a - 1, l] * e[b - 1, m])
                    r = abs(lhs - rhs)
                    if r > worst_val:
                        worst_val = r
                        worst = {"point": [round(v, 6) for v in x], "component": (i + 1, m + 1, l + 1)}
    return ChartCheck("structure_equations", worst_val, worst, tol).require()


def maurer_cartan_check(samples=100, step=1e-6, tol=1e-6, seed=7):
    """Cross-validates the coframe against h^{-1} dh.

    Writes the canonical 1-form as sum_i B_i(x) e^i; left-invariance forces
    the matrices B_i to be constant, so they are compared at random points
    against their values at the identity.  The B_i(0) (the identification of
    coframe labels with matrix-entry 1-forms) are reported in `extra`.
    """
    def basis_matrices(x):
        h = group_element(x)
        hinv = np.linalg.inv(h)
        theta = [hinv @ _central_diff(group_element, x, m, step) for m in range(7)]
        einv = np.linalg.inv(coframe(x))
        return [sum(theta[m] * einv[m, i] for m in range(7)) for i in range(7)]

    reference = basis_matrices(np.zeros(7))
    worst = None
    worst_val = -1.0
    for x in sample_points(samples, seed):
        bs = basis_matrices(x)
        for i in range(7):
            r = float(np.max(np.abs(bs[i] - reference[i])))
            if r > worst_val:
                worst_val = r
                worst = {"point": [round(v, 6) for v in x], "generator": i + 1}
    matching = {f"e{i + 1}": reference[i].round(12).tolist() for i in range(7)}
    return ChartCheck(
        "maurer_cartan", worst_val, worst, tol, extra={"identification": matching}
    ).require()


def gradient_function_check(samples=100, tol=1e-9, seed=7, slope=4.0, shift=0.0, step=1e-6):
    """Verifies df = 4 dx7 = -4 e^7 and (df)# = -4 e_7 at random points.

    The function is f(x) = slope*x7 + shift; the check is shift-independent
    (constants vanish under d) and exact up to round-off since e^7 = -dx7
    globally.
    """
    def f(x):
        return slope * x[6] + shift

    worst = None
    worst_val = -1.0
    expected = np.zeros(7)
    expected[6] = -slope  # df = slope*dx7 = -slope*e^7
    for x in sample_points(samples, seed):
        df_dx = np.array([_central_diff(f, x, m, step) for m in range(7)])
        comps = df_dx @ np.linalg.inv(coframe(x))
        # the frame is g-orthonormal, so sharp keeps the same components
        r = float(np.max(np.abs(comps - expected)))
        if r > worst_val:
            worst_val = r
            worst = {"point": [round(v, 6) for v in x]}
    return ChartCheck(
        "gradient_function",
        worst_val,
        worst,
        tol,
        extra={"frame_components": expected.tolist(), "coordinate_slope": slope},
    ).require()


def closure_check(samples=50, tol=1e-9, seed=7):
    """Products h(x) h(y) stay inside the matrix pattern (group closure)."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.5, 1.5, size=(samples, 2, 7))
    worst = None
    worst_val = -1.0
    for x, y in pts:
        prod = group_element(x) @ group_element(y)
        params = group_params(prod, tol=1e-6)
        if params is None:
            raise ToleranceExceeded(
                "closure: product fell outside the matrix pattern",
                worst={"x": x.tolist(), "y": y.tolist()},
            )
        r = float(np.max(np.abs(group_element(params) - prod)))
        if r > worst_val:
            worst_val = r
            worst = {"x": [round(v, 6) for v in x], "y": [round(v, 6) for v in y]}
    return ChartCheck("group_closure", worst_val, worst, tol).require()


def determinant_check(samples=100, tol=1e-12, seed=7):
    """det h(x) = exp(-2 x7), relatively."""
    worst = None
    worst_val = -1.0
    for x in sample_points(samples, seed):
        d = float(np.linalg.det(group_element(x)))
        expected = math.exp(-2.0 * x[6])
        r = abs(d - expected) / expected
        if r > worst_val:
            worst_val = r
            worst = {"point": [round(v, 6) for v in x]}
    return ChartCheck("determinant", worst_val, worst, tol).require()


def verify_all(samples=100, seed=7, step=1e-6, tol=1e-5):
    """The full chart verification battery, as a list of ChartChecks."""
    return [
        determinant_check(samples=samples, seed=seed),
        closure_check(samples=max(10, samples // 2), seed=seed),
        maurer_cartan_check(samples=samples, step=step, tol=1e-6, seed=seed),
        fd_structure_check(samples=samples, step=step, tol=tol, seed=seed),
        gradient_function_check(samples=samples, seed=seed),
    ]
