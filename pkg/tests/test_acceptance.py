"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here, none deferred.
"""

import contextlib
import math
import random
import time
from fractions import Fraction

from g2forge import (
    EXACT,
    FLOAT,
    G2Structure,
    LieAlgebra,
    Vector,
    ce_differential,
    classify,
    hodge_laplacian,
    hodge_star,
    inner_product,
    interior,
    metric_from_phi,
    parse_form,
    parse_salamon,
    torsion,
    wedge,
)
from g2forge import linalg
from g2forge.charts import default_structure_equations, fd_structure_check
from g2forge.connection import Sym2Tensor, Trichotomy, divergence_sym2, koszul, trichotomy_test
from g2forge.errors import ToleranceExceeded
from g2forge.flow import FlowConfig, integrate
from g2forge.g2core import erp_residual
from g2forge.soliton import GradientKind, SolitonType, soliton_solve

from conftest import (
    MODEL_PHI,
    SALAMON_ABELIAN,
    SALAMON_H,
    SALAMON_N52,
    random_exact_pd_metric,
    random_float_pd_metric,
    random_form,
    random_vector,
)

CHART_PRIMITIVES = {7: (7, -1)}


@contextlib.contextmanager
def criterion(num, name):
    start = time.monotonic()
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE {num} ({name}): FAIL")
        raise
    print(f"ACCEPTANCE {num} ({name}): PASS  [{time.monotonic() - start:.2f}s]")


def exact_fixture():
    algebra = parse_salamon(SALAMON_H, EXACT)
    phi = parse_form(MODEL_PHI, EXACT)
    return algebra, G2Structure.from_phi(phi)


def test_criterion_1_golden_reproduction():
    with criterion(1, "golden reproduction, exact backend"):
        start = time.monotonic()
        algebra, structure = exact_fixture()
        metric = structure.metric

        assert ce_differential(algebra, structure.phi).is_zero()

        data = torsion(algebra, structure)
        assert data.tau == parse_form("2*e12 + 2*e34 - 4*e56", EXACT)

        lap = hodge_laplacian(algebra, metric, structure.phi)
        assert lap == parse_form("-8*e146 - 8*e245 + 8*e567", EXACT)

        expected_t = {1: (2, 2), 2: (-2, 1), 3: (2, 4), 4: (-2, 3), 5: (-4, 6), 6: (4, 5)}
        for j in range(1, 8):
            col = [data.T[r][j - 1] for r in range(7)]
            want = [Fraction(0)] * 7
            if j in expected_t:
                coeff, target = expected_t[j]
                want[target - 1] = Fraction(coeff)
            assert col == want

        conn = koszul(algebra, metric)
        e7 = [Fraction(0)] * 6 + [Fraction(1)]
        assert conn.nabla(3, 3) == [-v for v in e7]
        for k in (4, 5, 6):
            assert conn.nabla(k, k) == e7
        for k in (1, 2, 7):
            assert conn.nabla(k, k) == [Fraction(0)] * 7

        div = divergence_sym2(algebra, metric, conn, Sym2Tensor(data.t, EXACT, check=False))
        assert div == (0, 0, 0, 0, 0, 0, -32)

        assert time.monotonic() - start < 1.0


def test_criterion_2_soliton_certificate():
    with criterion(2, "soliton certificate"):
        algebra, structure = exact_fixture()
        cert = soliton_solve(algebra, structure, chart_primitives=CHART_PRIMITIVES)
        assert cert.lam == 0
        assert cert.residual_norm_sq == 0
        # X = -4 e7 modulo the reported kernel (which is trivial here)
        x_expect = Vector([0, 0, 0, 0, 0, 0, -4], EXACT)
        diff = [a - b for a, b in zip(cert.x.components, x_expect.components)]
        if any(d != 0 for d in diff):
            cols = [[vec.components[r] for _, vec in cert.kernel] for r in range(7)]
            linalg.solve_affine(cols, diff, EXACT)  # raises if inconsistent
        assert cert.soliton_type is SolitonType.STEADY
        assert cert.gradient.kind is GradientKind.GRADIENT
        assert cert.gradient.slope == (7, 4)


def test_criterion_3_trichotomy():
    with criterion(3, "divergence trichotomy"):
        algebra, structure = exact_fixture()
        verdict = trichotomy_test(algebra, structure.metric, structure)
        assert verdict.verdict is Trichotomy.NOT_DIVERGENCE_FREE

        abelian = parse_salamon(SALAMON_ABELIAN, EXACT)
        verdict = trichotomy_test(abelian, structure.metric, structure)
        assert verdict.verdict is Trichotomy.DIVERGENCE_FREE


def test_criterion_4_not_extremally_ricci_pinched():
    with criterion(4, "ERP residual"):
        algebra, structure = exact_fixture()
        residual = erp_residual(algebra, structure)
        norm_sq = structure.metric.inner(residual, residual)
        assert norm_sq > 0  # strictly positive exact rational

        abelian = parse_salamon(SALAMON_ABELIAN, EXACT)
        assert erp_residual(abelian, structure).is_zero()


def test_criterion_5_flow_self_similarity():
    with criterion(5, "flow self-similarity, RK4 dt=1e-3 on [0, 0.5]"):
        start = time.monotonic()
        algebra = parse_salamon(SALAMON_H, FLOAT)
        phi = parse_form(MODEL_PHI, FLOAT)
        cfg = FlowConfig(t_end=0.5, dt=1e-3, method="rk4", det_g=False)
        trace = integrate(algebra, phi, cfg)
        assert trace.status == "completed"
        assert len(trace.samples) == 501
        for sample in trace.samples:
            assert abs(sample.monitors["tau_norm_sq"] - 24.0) < 1e-6
            assert sample.monitors["dphi_norm"] < 1e-9
        assert time.monotonic() - start < 30.0


def test_criterion_6_integrator_order():
    with criterion(6, "integrator order via step halving"):
        algebra = parse_salamon(SALAMON_H, FLOAT)
        phi = parse_form(MODEL_PHI, FLOAT)

        def final(dt, method):
            cfg = FlowConfig(
                t_end=0.1, dt=dt, method=method,
                tau_norm_sq=False, det_g=False, dphi_norm=False,
            )
            trace = integrate(algebra, phi, cfg)
            assert trace.status == "completed"
            return trace.final().coeffs

        def dist(a, b):
            return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))

        f1, f2, f4 = (final(0.01 / d, "rk4") for d in (1, 2, 4))
        ratio = dist(f1, f2) / dist(f2, f4)
        assert 12.0 <= ratio <= 20.0

        f1, f2, f4 = (final(0.002 / d, "euler") for d in (1, 2, 4))
        ratio = dist(f1, f2) / dist(f2, f4)
        assert 1.8 <= ratio <= 2.2


def test_criterion_7_chart_verification():
    with criterion(7, "chart verification"):
        assert fd_structure_check(samples=100, step=1e-6, tol=1e-5, seed=7).passed

        # residuals shrink ~quadratically when the step shrinks 10x
        coarse = fd_structure_check(samples=30, step=1e-3, tol=1e30, seed=7).max_residual
        fine = fd_structure_check(samples=30, step=1e-4, tol=1e30, seed=7).max_residual
        assert 25.0 <= coarse / fine <= 400.0

        # the deliberately wrong sign must be caught
        eqs = default_structure_equations()
        eqs[2] = {(3, 7): 1.0}
        try:
            fd_structure_check(samples=20, eqs=eqs)
        except ToleranceExceeded:
            pass
        else:
            raise AssertionError("sign sentinel was not caught")


def _random_constants(rng, density):
    brackets = {}
    for i in range(1, 8):
        for j in range(i + 1, 8):
            if rng.random() > density:
                continue
            comps = {}
            for k in range(1, 8):
                v = rng.randint(-2, 2)
                if v and rng.random() < 0.4:
                    comps[k] = v
            if comps:
                brackets[(i, j)] = comps
    return brackets


def test_criterion_8_algebra_properties():
    with criterion(8, "d^2 = 0 iff Jacobi, plus classifications"):
        rng = random.Random(2024)
        valid_strings = [SALAMON_H, SALAMON_ABELIAN, SALAMON_N52, "(0,0,0,0,0,0,12)"]
        seen_valid = 0
        seen_invalid = 0
        for trial in range(1000):
            if trial % 97 == 0:
                algebra = parse_salamon(valid_strings[trial % len(valid_strings)], EXACT)
            else:
                algebra = LieAlgebra(
                    7, _random_constants(rng, density=rng.choice((0.15, 0.5))), EXACT, check=False
                )
            jacobi_ok = not algebra.jacobi_failures()
            d_squared_zero = all(
                ce_differential(algebra, algebra.de(k)).is_zero() for k in range(1, 8)
            )
            assert jacobi_ok == d_squared_zero
            if jacobi_ok:
                seen_valid += 1
            else:
                seen_invalid += 1
        assert seen_valid >= 10 and seen_invalid >= 700

        report = classify(parse_salamon(SALAMON_H, EXACT))
        assert report.solvable and not report.nilpotent and not report.unimodular
        assert report.trace_vector[6] == 2

        report = classify(parse_salamon(SALAMON_N52, EXACT))
        assert report.nilpotent and report.nilpotency_step == 2


def _gram_permutation_oracle(a, b, metric):
    from itertools import permutations

    field = a.field
    ginv = metric.inverse
    total = field.zero()
    k = a.degree
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            s = field.zero()
            for perm in permutations(range(k)):
                inversions = sum(
                    1 for p in range(k) for q in range(p + 1, k) if perm[p] > perm[q]
                )
                prod = field.one()
                for p in range(k):
                    prod = prod * ginv[ia[p] - 1][ib[perm[p]] - 1]
                s = s + (prod if inversions % 2 == 0 else -prod)
            total = total + ca * cb * s
    return total


def test_criterion_9_exterior_calculus_properties():
    with criterion(9, "exterior calculus property battery"):
        rng = random.Random(4096)

        # wedge anticommutativity and the interior antiderivation law,
        # 1000 random sparse forms per degree, exact backend
        for degree in range(8):
            for _ in range(1000):
                other = rng.randint(0, 7 - degree)
                a = random_form(rng, degree, EXACT)
                b = random_form(rng, other, EXACT)
                sign = -1 if (degree * other) % 2 else 1
                assert wedge(a, b) == wedge(b, a).scale(sign)
            if 1 <= degree <= 6:
                for _ in range(100):
                    other = rng.randint(1, 7 - degree)
                    a = random_form(rng, degree, EXACT)
                    b = random_form(rng, other, EXACT)
                    x = random_vector(rng, EXACT)
                    sign = -1 if degree % 2 else 1
                    assert interior(x, wedge(a, b)) == wedge(interior(x, a), b) + wedge(
                        a, interior(x, b)
                    ).scale(sign)

        # star is an involution: 1000 forms per degree over shared float
        # metrics, plus exact spot checks on perfect-square-determinant metrics
        float_metrics = [random_float_pd_metric(rng) for _ in range(10)]
        for degree in range(8):
            for i in range(1000):
                g = float_metrics[i % len(float_metrics)]
                a = random_form(rng, degree, FLOAT)
                assert hodge_star(hodge_star(a, g), g) == a
        exact_metrics = [random_exact_pd_metric(rng) for _ in range(3)]
        for degree in range(8):
            for i in range(12):
                g = exact_metrics[i % len(exact_metrics)]
                a = random_form(rng, degree, EXACT)
                assert hodge_star(hodge_star(a, g), g) == a

        # Gram-matrix oracle agreement on degrees 2 and 3
        for degree in (2, 3):
            for i in range(1000):
                g = exact_metrics[i % len(exact_metrics)]
                a = random_form(rng, degree, EXACT, max_terms=3)
                b = random_form(rng, degree, EXACT, max_terms=3)
                assert inner_product(a, b, g) == _gram_permutation_oracle(a, b, g)

        # conformal scaling of the induced metric, 20 random rational factors
        phi = parse_form(MODEL_PHI, EXACT)
        base = metric_from_phi(phi)
        for _ in range(20):
            lam = Fraction(rng.randint(1, 12), rng.randint(1, 12))
            scaled = metric_from_phi(phi.scale(lam**3))
            expected = linalg.mat_scale(base.gram, lam**2)
            assert linalg.mat_eq(scaled.gram, expected, EXACT)
