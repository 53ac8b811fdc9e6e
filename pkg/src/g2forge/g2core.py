"""Metric, Hodge star and torsion analytics for G2-structures.

The metric induced by a positive 3-form phi is computed through the bilinear
form b_ij e^{1..7} = (e_i . phi) ^ (e_j . phi) ^ phi and the normalization
g_ij = 6^(-2/9) (det b)^(-1/9) b_ij.  The model form

    e127 + e347 + e567 + e135 - e146 - e236 - e245

maps to the identity matrix under this normalization, which pins the
convention; conformal scaling phi -> s^3 phi then gives g -> s^2 g.

In the exact backend the ninth root is taken only when det b = 6^7 * s^9 for
a rational s (then g = b / (6 s) is rational and vol = s e^{1234567});
anything else raises ExactnessLost so the caller can rerun in float.
"""

import enum

from . import linalg
from .errors import DegreeError, ExactnessLost, G2ForgeError, NotClosed, NotPositive
from .exterior import (
    COMPLEMENT,
    DIM,
    MONO_POS,
    MONOMIALS,
    KForm,
    Vector,
    interior,
    wedge,
    wedge_top_coeff,
)
from .liealg import ce_differential

SIX_TO_SEVEN = 6 ** DIM


class Metric:
    """Symmetric positive-definite bilinear form on the frame, with caches.

    Lazily caches the inverse, determinant, volume form and the Gram matrices
    <e^I, e^J> on each degree (the Hodge star is a signed permutation of a
    Gram matrix-vector product, so flows reuse these heavily).
    """

    __slots__ = ("gram", "field", "_inverse", "_det", "_vol_coeff", "_gram_on")

    def __init__(self, gram, field, check=True):
        gram = [[field.of(x) for x in row] for row in gram]
        if check:
            if len(gram) != DIM or any(len(row) != DIM for row in gram):
                raise ValueError("metric must be 7x7")
            for i in range(DIM):
                for j in range(i + 1, DIM):
                    if not field.eq(gram[i][j], gram[j][i]):
                        raise ValueError(f"metric not symmetric at ({i + 1},{j + 1})")
            if not linalg.is_positive_definite(gram, field):
                raise NotPositive("metric is not positive-definite")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_inverse", None)
        object.__setattr__(self, "_det", None)
        object.__setattr__(self, "_vol_coeff", None)
        object.__setattr__(self, "_gram_on", {})

    def __setattr__(self, name, value):
        raise AttributeError("Metric is immutable")

    @classmethod
    def identity(cls, field):
        return cls(linalg.identity(DIM, field), field, check=False)

    @property
    def inverse(self):
        if self._inverse is None:
            object.__setattr__(self, "_inverse", linalg.invert(self.gram, self.field))
        return self._inverse

    @property
    def det(self):
        if self._det is None:
            object.__setattr__(self, "_det", linalg.det(self.gram, self.field))
        return self._det

    @property
    def vol_coeff(self):
        """sqrt(det g); ExactnessLost in the exact backend when irrational."""
        if self._vol_coeff is None:
            object.__setattr__(self, "_vol_coeff", self.field.sqrt(self.det))
        return self._vol_coeff

    @property
    def vol(self):
        return KForm(DIM, {tuple(range(1, DIM + 1)): self.vol_coeff}, self.field)

    def is_orthonormal_frame(self):
        field = self.field
        return all(
            field.eq(self.gram[i][j], field.one() if i == j else field.zero())
            for i in range(DIM)
            for j in range(DIM)
        )

    def gram_on(self, k):
        """Gram matrix <e^I, e^J> over MONOMIALS[k].

        Degrees 0..3 come from minors of the inverse metric; degrees 4..7
        reuse the complementary-minor identity
        det(g^{-1}[I,J]) = eps_I eps_J det(g[Ic,Jc]) / det(g), avoiding
        determinants larger than 3x3.
        """
        cached = self._gram_on.get(k)
        if cached is not None:
            return cached
        field = self.field
        monos = MONOMIALS[k]
        n = len(monos)
        m = [[None] * n for _ in range(n)]
        if k <= 3:
            ginv = self.inverse
            for a in range(n):
                rows = [i - 1 for i in monos[a]]
                for b in range(a, n):
                    cols = [j - 1 for j in monos[b]]
                    v = linalg.minor_det(ginv, rows, cols, field)
                    m[a][b] = v
                    m[b][a] = v
        else:
            g = self.gram
            detg = self.det
            for a in range(n):
                ca, ea = COMPLEMENT[monos[a]]
                rows = [i - 1 for i in ca]
                for b in range(a, n):
                    cb, eb = COMPLEMENT[monos[b]]
                    cols = [j - 1 for j in cb]
                    v = linalg.minor_det(g, rows, cols, field) / detg
                    if ea * eb < 0:
                        v = -v
                    m[a][b] = v
                    m[b][a] = v
        self._gram_on[k] = m
        return m

    def inner(self, a, b):
        """<a, b> for same-degree forms (Gram identity on monomials)."""
        if a.degree != b.degree:
            raise DegreeError(f"degree mismatch: {a.degree} vs {b.degree}")
        table = self.gram_on(a.degree)
        pos = MONO_POS[a.degree]
        total = self.field.zero()
        for ia, ca in a.terms.items():
            row = table[pos[ia]]
            for ib, cb in b.terms.items():
                total = total + ca * cb * row[pos[ib]]
        return total

    def norm_sq(self, a):
        return self.inner(a, a)

    def flat(self, v):
        """Musical flat: v -> g(v, .) as a 1-form."""
        comps = linalg.mat_vec(self.gram, list(v.components))
        return KForm(1, {(i,): c for i, c in enumerate(comps, start=1) if c != 0}, self.field)

    def sharp(self, a):
        """Musical sharp: 1-form -> vector."""
        if a.degree != 1:
            raise DegreeError("sharp needs a 1-form")
        return Vector(linalg.mat_vec(self.inverse, a.to_vector()), self.field)

    def __eq__(self, other):
        if not isinstance(other, Metric):
            return NotImplemented
        return linalg.mat_eq(self.gram, other.gram, self.field)

    def __repr__(self):
        diag = ", ".join(self.field.fmt(self.gram[i][i]) for i in range(DIM))
        return f"Metric(diag=[{diag}], ...)"


def hodge_star(a, metric):
    """Hodge star: the (7-k)-form with star(a) ^ b = <a, b> vol for all k-forms b."""
    k = a.degree
    table = metric.gram_on(k)
    pos = MONO_POS[k]
    vol_c = metric.vol_coeff
    field = a.field
    terms = {}
    for idx, mono in enumerate(MONOMIALS[k]):
        pairing = field.zero()
        for ia, ca in a.terms.items():
            pairing = pairing + ca * table[pos[ia]][idx]
        if pairing == 0:
            continue
        comp, eps = COMPLEMENT[mono]
        v = pairing * vol_c
        terms[comp] = v if eps > 0 else -v
    return KForm(DIM - k, terms, field, _canonical=True)


def b_matrix(phi):
    """The bilinear form b_ij e^{1..7} = (e_i . phi) ^ (e_j . phi) ^ phi."""
    field = phi.field
    contractions = [interior(Vector.basis(i, field), phi) for i in range(1, DIM + 1)]
    b = linalg.zeros(DIM, DIM, field)
    for i in range(DIM):
        for j in range(i, DIM):
            v = wedge_top_coeff(wedge(contractions[i], contractions[j]), phi)
            b[i][j] = v
            b[j][i] = v
    return b


def metric_from_phi(phi):
    """Metric induced by a positive 3-form; NotPositive otherwise.

    Exact backend: needs det b = 6^7 s^9 with s rational (all the built-in
    fixtures satisfy this), else ExactnessLost.
    """
    if phi.degree != 3:
        raise DegreeError("the metric construction needs a 3-form")
    field = phi.field
    b = b_matrix(phi)
    detb = linalg.det(b, field)
    if field.exact:
        if detb <= 0:
            raise NotPositive("det b <= 0: form is not positive in this orientation")
        try:
            s = field.nth_root(detb / SIX_TO_SEVEN, 9)
        except ExactnessLost:
            raise ExactnessLost(
                "metric normalization needs the 9th root of "
                f"{detb}/6^7, which is irrational; rerun with the float backend"
            ) from None
    else:
        if detb <= field.tol:
            raise NotPositive("det b <= 0: form is not positive in this orientation")
        s = (detb / SIX_TO_SEVEN) ** (1.0 / 9.0)
    scale = field.one() / (6 * s)
    gram = linalg.mat_scale(b, scale)
    if not linalg.is_positive_definite(gram, field):
        raise NotPositive("normalized bilinear form is not positive-definite")
    return Metric(gram, field, check=False)


class TorsionData:
    """Torsion 2-form tau, its endomorphism T, and t = g(T^2 ., .)."""

    __slots__ = ("tau", "T", "t")

    def __init__(self, tau, T, t):
        self.tau = tau
        self.T = T
        self.t = t


class G2Structure:
    """A positive 3-form with its induced metric and cached star(phi)."""

    __slots__ = ("phi", "metric", "star_phi", "torsion_data")

    def __init__(self, phi, metric, star_phi, torsion_data=None):
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "metric", metric)
        object.__setattr__(self, "star_phi", star_phi)
        object.__setattr__(self, "torsion_data", torsion_data)

    def __setattr__(self, name, value):
        raise AttributeError("G2Structure is immutable; use with_torsion")

    @classmethod
    def from_phi(cls, phi):
        metric = metric_from_phi(phi)
        return cls(phi, metric, hodge_star(phi, metric))

    def with_torsion(self, algebra):
        """New structure carrying the torsion data (self is left untouched)."""
        return G2Structure(self.phi, self.metric, self.star_phi, torsion(algebra, self))


def coderivative(algebra, metric, a):
    """Codifferential d* = (-1)^k star d star on k-forms (dimension 7)."""
    k = a.degree
    if k == 0:
        raise DegreeError("coderivative needs degree >= 1")
    out = hodge_star(ce_differential(algebra, hodge_star(a, metric)), metric)
    return out if k % 2 == 0 else -out


def hodge_laplacian(algebra, metric, a):
    """Hodge Laplacian d d* + d* d (degree-boundary terms dropped)."""
    k = a.degree
    total = KForm.zero(k, a.field)
    if k >= 1:
        total = total + ce_differential(algebra, coderivative(algebra, metric, a))
    if k <= DIM - 1:
        total = total + coderivative(algebra, metric, ce_differential(algebra, a))
    return total


def tau_matrix(tau, field):
    """Antisymmetric component matrix A[i][j] = tau(e_i, e_j)."""
    a = linalg.zeros(DIM, DIM, field)
    for (i, j), c in tau.terms.items():
        a[i - 1][j - 1] = c
        a[j - 1][i - 1] = -c
    return a


def torsion(algebra, structure):
    """Torsion data of a closed structure: tau = d* phi, T from raising an index.

    Verifies the closed-structure identities d(star phi) = tau ^ phi =
    -star(tau) before returning; NotClosed if d(phi) != 0.
    """
    phi, metric = structure.phi, structure.metric
    field = phi.field
    if not ce_differential(algebra, phi).is_zero():
        raise NotClosed("torsion 2-form characterization needs d(phi) = 0")
    tau = coderivative(algebra, metric, phi)
    d_star_phi = ce_differential(algebra, structure.star_phi)
    if d_star_phi != wedge(tau, phi) or d_star_phi != -hodge_star(tau, metric):
        raise G2ForgeError("internal: d(star phi) = tau ^ phi = -star tau failed")
    a = tau_matrix(tau, field)
    # tau(x, y) = g(Tx, y)  =>  T = -g^{-1} A  (columns are images of e_j)
    t_endo = linalg.mat_scale(linalg.mat_mul(metric.inverse, a), -field.one())
    t_sym = linalg.mat_mul(metric.gram, linalg.mat_mul(t_endo, t_endo))
    gt = linalg.mat_mul(metric.gram, t_endo)
    for i in range(DIM):
        for j in range(DIM):
            if not field.eq(gt[i][j], -gt[j][i]):
                raise G2ForgeError("internal: g T is not antisymmetric")
            if not field.eq(t_sym[i][j], t_sym[j][i]):
                raise G2ForgeError("internal: g T^2 is not symmetric")
    return TorsionData(tau, t_endo, t_sym)


def erp_residual(algebra, structure):
    """d tau - (1/6)|tau|^2 phi - (1/6) star(tau ^ tau); zero iff extremally Ricci pinched."""
    field = structure.phi.field
    data = structure.torsion_data or torsion(algebra, structure)
    tau = data.tau
    dtau = ce_differential(algebra, tau)
    norm_sq = structure.metric.inner(tau, tau)
    sixth = field.one() / field.of(6)
    return (
        dtau
        - structure.phi.scale(norm_sq * sixth)
        - hodge_star(wedge(tau, tau), structure.metric).scale(sixth)
    )


class StructureClass(enum.Enum):
    NOT_POSITIVE = "NotPositive"
    NOT_CLOSED = "NotClosed"
    CLOSED_WITH_TORSION = "ClosedWithTorsion"
    TORSION_FREE = "TorsionFree"


def classify_structure(algebra, phi):
    """Positivity, then d phi = 0, then d star phi = 0, in that order."""
    try:
        metric = metric_from_phi(phi)
    except NotPositive:
        return StructureClass.NOT_POSITIVE
    if not ce_differential(algebra, phi).is_zero():
        return StructureClass.NOT_CLOSED
    if not ce_differential(algebra, hodge_star(phi, metric)).is_zero():
        return StructureClass.CLOSED_WITH_TORSION
    return StructureClass.TORSION_FREE
