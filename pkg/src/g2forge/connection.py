"""Left-invariant Levi-Civita connection and the divergence test for t = g(T^2 ., .).

For left-invariant frames the Koszul formula collapses to

    g(nabla_{e_i} e_j, e_k) = -1/2 ( g(e_i,[e_j,e_k]) + g(e_j,[e_i,e_k]) + g(e_k,[e_j,e_i]) )

The divergence formula for a symmetric 2-tensor,

    div(t)(.) = sum_i g( nabla_{e_i}(S e_i) - S(nabla_{e_i} e_i), . ),  t = g(S ., .),

presumes an orthonormal frame; for a general frame we contract with g^{ij}
instead (the orthonormal case is recovered and tested against the formula
above).
"""

import enum

from . import linalg
from .errors import G2ForgeError
from .exterior import DIM
from .g2core import torsion


class Connection:
    """Christoffel data Gamma[i][j][k]: nabla_{e_i} e_j = sum_k Gamma[i][j][k] e_k (0-based)."""

    __slots__ = ("gamma", "field")

    def __init__(self, gamma, field):
        self.gamma = tuple(tuple(tuple(col) for col in row) for row in gamma)
        self.field = field

    def nabla(self, i, j):
        """Components of nabla_{e_i} e_j, 1-based frame labels."""
        return list(self.gamma[i - 1][j - 1])


class Sym2Tensor:
    """Symmetric 2-tensor in frame components."""

    __slots__ = ("matrix", "field")

    def __init__(self, matrix, field, check=True):
        matrix = [[field.of(x) for x in row] for row in matrix]
        if check:
            for i in range(DIM):
                for j in range(i + 1, DIM):
                    if not field.eq(matrix[i][j], matrix[j][i]):
                        raise ValueError(f"tensor not symmetric at ({i + 1},{j + 1})")
        self.matrix = matrix
        self.field = field


def koszul(algebra, metric):
    """Levi-Civita connection of a left-invariant metric via the Koszul formula."""
    field = metric.field
    g = metric.gram
    half = field.one() / field.of(2)

    def pair_with_bracket(a, b, c):
        # g(e_a, [e_b, e_c]), 1-based labels
        total = field.zero()
        for m, v in algebra.bracket_basis(b, c).items():
            total = total + g[a - 1][m - 1] * v
        return total

    ginv = metric.inverse
    gamma = [[None] * DIM for _ in range(DIM)]
    for i in range(1, DIM + 1):
        for j in range(1, DIM + 1):
            rhs = [
                -half
                * (
                    pair_with_bracket(i, j, k)
                    + pair_with_bracket(j, i, k)
                    + pair_with_bracket(k, j, i)
                )
                for k in range(1, DIM + 1)
            ]
            # solve sum_l Gamma^l g_{lk} = rhs_k
            gamma[i - 1][j - 1] = linalg.mat_vec(ginv, rhs)
    return Connection(gamma, field)


def divergence_sym2(algebra, metric, conn, tensor):
    """div(t) as 7 covector components div(t)(e_k).

    Uses the orthonormal-frame formula verbatim when the frame is orthonormal,
    otherwise the g^{ij}-contracted generalization.
    """
    field = metric.field
    g = metric.gram
    # endomorphism S with t = g(S., .):  S = g^{-1} t  (t symmetric)
    s = linalg.mat_mul(metric.inverse, tensor.matrix)
    gamma = conn.gamma

    def s_apply(vec):
        return linalg.mat_vec(s, vec)

    if metric.is_orthonormal_frame():
        out = [field.zero()] * DIM
        for i in range(DIM):
            # nabla_{e_i}(S e_i): S e_i is constant, so expand over nabla_{e_i} e_j
            first = [field.zero()] * DIM
            for j in range(DIM):
                sji = s[j][i]
                if sji == 0:
                    continue
                for l in range(DIM):
                    first[l] = first[l] + sji * gamma[i][j][l]
            second = s_apply(gamma[i][i])
            diff = [a - b for a, b in zip(first, second)]
            for k in range(DIM):
                for l in range(DIM):
                    out[k] = out[k] + diff[l] * g[l][k]
        return tuple(out)

    # general frame: div(t)(e_k) = g^{ij} ( -t(nabla_i e_j, e_k) - t(e_j, nabla_i e_k) )
    ginv = metric.inverse
    t = tensor.matrix
    out = [field.zero()] * DIM
    for k in range(DIM):
        acc = field.zero()
        for i in range(DIM):
            for j in range(DIM):
                w = ginv[i][j]
                if w == 0:
                    continue
                term = field.zero()
                for l in range(DIM):
                    term = term + gamma[i][j][l] * t[l][k] + gamma[i][k][l] * t[j][l]
                acc = acc - w * term
        out[k] = acc
    return tuple(out)


class Trichotomy(enum.Enum):
    DIVERGENCE_FREE = "DivergenceFree"
    NOT_DIVERGENCE_FREE = "NotDivergenceFree"


class TrichotomyReport:
    """Divergence verdict for t = g(T^2 ., .), with the computed covector."""

    __slots__ = ("verdict", "divergence", "annotation", "orthonormal_frame")

    def __init__(self, verdict, divergence, annotation, orthonormal_frame):
        self.verdict = verdict
        self.divergence = divergence
        self.annotation = annotation
        self.orthonormal_frame = orthonormal_frame


def trichotomy_test(algebra, metric, structure):
    """Divergence test on t = g(T^2 ., .) for a closed structure with torsion."""
    data = structure.torsion_data or torsion(algebra, structure)
    conn = koszul(algebra, metric)
    tensor = Sym2Tensor(data.t, metric.field, check=False)
    div = divergence_sym2(algebra, metric, conn, tensor)
    field = metric.field
    if all(field.is_zero(x) for x in div):
        return TrichotomyReport(
            Trichotomy.DIVERGENCE_FREE, div, "product branch (f constant on the fiber)",
            metric.is_orthonormal_frame(),
        )
    return TrichotomyReport(
        Trichotomy.NOT_DIVERGENCE_FREE, div, "one-dimensional extension branch",
        metric.is_orthonormal_frame(),
    )


def verify_connection(algebra, metric, conn):
    """Metric compatibility and torsion-freeness, entrywise; raises on failure."""
    field = metric.field
    g = metric.gram
    gamma = conn.gamma
    for i in range(DIM):
        for j in range(DIM):
            for k in range(DIM):
                # compatibility: <nabla_i e_j, e_k> + <e_j, nabla_i e_k> = 0
                lhs = field.zero()
                for l in range(DIM):
                    lhs = lhs + gamma[i][j][l] * g[l][k] + gamma[i][k][l] * g[j][l]
                if not field.is_zero(lhs):
                    raise G2ForgeError(f"metric compatibility fails at ({i},{j},{k})")
            # torsion-freeness: nabla_i e_j - nabla_j e_i = [e_i, e_j]
            br = algebra.bracket_basis(i + 1, j + 1)
            for l in range(DIM):
                lhs = gamma[i][j][l] - gamma[j][i][l]
                rhs = br.get(l + 1, field.zero())
                if not field.eq(lhs, rhs):
                    raise G2ForgeError(f"torsion-freeness fails at ({i},{j})")
