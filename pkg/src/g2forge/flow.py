"""Fixed-step integration of the Laplacian flow d(phi)/dt = laplacian(phi).

The state is the full 35-vector of degree-3 coefficients in lexicographic
monomial order; closedness is monitored, never enforced, so its preservation
is a genuine property of the integrator.  Fixed-step RK4 (default) or Euler,
no adaptivity: traces must be bit-reproducible for golden tests.

Requires the float backend: the metric normalization takes ninth roots along
the flow, which leave the rationals immediately.
"""

import csv
import math

from .errors import NotPositive
from .exterior import KForm, MONOMIALS
from .g2core import coderivative, hodge_laplacian, metric_from_phi
from .liealg import ce_differential

COEFF_ORDER = MONOMIALS[3]
COEFF_NAMES = tuple("e" + "".join(str(i) for i in mono) for mono in COEFF_ORDER)
MONITOR_NAMES = ("tau_norm_sq", "det_g", "dphi_norm", "lambda_residual")


class FlowConfig:
    """Integration parameters and monitor switches."""

    def __init__(
        self,
        t_end,
        dt,
        method="rk4",
        tau_norm_sq=True,
        det_g=True,
        dphi_norm=True,
        lambda_residual=False,
        blowup_bound=1e12,
    ):
        if dt <= 0 or t_end <= 0:
            raise ValueError("dt and t_end must be positive")
        if method not in ("rk4", "euler"):
            raise ValueError(f"unknown method {method!r}")
        self.t_end = float(t_end)
        self.dt = float(dt)
        self.method = method
        self.tau_norm_sq = tau_norm_sq
        self.det_g = det_g
        self.dphi_norm = dphi_norm
        self.lambda_residual = lambda_residual
        self.blowup_bound = float(blowup_bound)

    def monitor_names(self):
        return tuple(name for name in MONITOR_NAMES if getattr(self, name))


class FlowSample:
    __slots__ = ("t", "coeffs", "monitors")

    def __init__(self, t, coeffs, monitors):
        self.t = t
        self.coeffs = coeffs
        self.monitors = monitors


class FlowTrace:
    """Time-ordered samples plus the reason the integration stopped.

    status is 'completed', 'positivity_loss' or 'blowup'; status_time is the
    time of the offending step for the latter two.
    """

    def __init__(self, samples, status, status_time, monitor_names):
        self.samples = samples
        self.status = status
        self.status_time = status_time
        self.monitor_names = monitor_names

    def final(self):
        return self.samples[-1]

    def monitor_series(self, name):
        return [s.monitors[name] for s in self.samples]

    def times(self):
        return [s.t for s in self.samples]


def flow_rhs(algebra, phi):
    """laplacian(phi) with the metric recomputed from the current phi."""
    metric = metric_from_phi(phi)
    return hodge_laplacian(algebra, metric, phi)


def _rhs_vec(algebra, field, coeffs):
    phi = KForm.from_vector(3, coeffs, field)
    return flow_rhs(algebra, phi).to_vector()


def _monitors(algebra, field, coeffs, cfg):
    phi = KForm.from_vector(3, coeffs, field)
    metric = metric_from_phi(phi)
    out = {}
    if cfg.tau_norm_sq:
        tau = coderivative(algebra, metric, phi)
        out["tau_norm_sq"] = metric.inner(tau, tau)
    if cfg.det_g:
        out["det_g"] = metric.det
    if cfg.dphi_norm:
        dphi = ce_differential(algebra, phi)
        out["dphi_norm"] = math.sqrt(max(metric.inner(dphi, dphi), 0.0))
    if cfg.lambda_residual:
        from .g2core import G2Structure, hodge_star
        from .soliton import soliton_solve

        structure = G2Structure(phi, metric, hodge_star(phi, metric))
        out["lambda_residual"] = soliton_solve(algebra, structure).residual_norm
    return out


def integrate(algebra, phi0, cfg):
    """Fixed-step integration from a positive 3-form; never raises on loss events.

    Samples (including t = 0) are recorded every step until t_end, a
    positivity loss or a coefficient blowup, whichever comes first.
    """
    field = phi0.field
    if field.exact:
        raise ValueError("integration needs the float backend (metric roots are irrational)")
    y = [float(c) for c in phi0.to_vector()]
    t = 0.0
    samples = []
    status = "completed"
    status_time = None

    def bad(coeffs):
        return any(not math.isfinite(c) for c in coeffs) or max(
            abs(c) for c in coeffs
        ) > cfg.blowup_bound

    try:
        samples.append(FlowSample(t, tuple(y), _monitors(algebra, field, y, cfg)))
    except NotPositive:
        return FlowTrace(samples, "positivity_loss", t, cfg.monitor_names())

    while t < cfg.t_end - 1e-15:
        h = min(cfg.dt, cfg.t_end - t)
        try:
            if cfg.method == "rk4":
                k1 = _rhs_vec(algebra, field, y)
                k2 = _rhs_vec(algebra, field, [a + 0.5 * h * b for a, b in zip(y, k1)])
                k3 = _rhs_vec(algebra, field, [a + 0.5 * h * b for a, b in zip(y, k2)])
                k4 = _rhs_vec(algebra, field, [a + h * b for a, b in zip(y, k3)])
                y = [
                    a + h * (b1 + 2.0 * b2 + 2.0 * b3 + b4) / 6.0
                    for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4)
                ]
            else:
                k1 = _rhs_vec(algebra, field, y)
                y = [a + h * b for a, b in zip(y, k1)]
        except NotPositive:
            status, status_time = "positivity_loss", t
            break
        t += h
        if bad(y):
            status, status_time = "blowup", t
            break
        try:
            samples.append(FlowSample(t, tuple(y), _monitors(algebra, field, y, cfg)))
        except NotPositive:
            status, status_time = "positivity_loss", t
            break
    return FlowTrace(samples, status, status_time, cfg.monitor_names())


def write_csv(trace, path):
    """One row per sample: t, the 35 coefficients, then the enabled monitors."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("t",) + COEFF_NAMES + tuple(trace.monitor_names))
        for s in trace.samples:
            writer.writerow(
                [repr(s.t)]
                + [repr(c) for c in s.coeffs]
                + [repr(s.monitors[name]) for name in trace.monitor_names]
            )


def read_csv(path):
    """Inverse of write_csv; returns (times, coeff rows, monitor dict rows)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        monitor_names = tuple(header[1 + len(COEFF_NAMES) :])
        times, rows, monitors = [], [], []
        for row in reader:
            times.append(float(row[0]))
            rows.append(tuple(float(v) for v in row[1 : 1 + len(COEFF_NAMES)]))
            monitors.append(
                {n: float(v) for n, v in zip(monitor_names, row[1 + len(COEFF_NAMES) :])}
            )
    return times, rows, monitors
