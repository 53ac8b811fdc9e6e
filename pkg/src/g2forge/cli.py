"""Command-line front door: g2forge <group> <command> [options].

Subcommands:
    alg check <algebra>                      validate and classify a Lie algebra
    g2 analyze <algebra> --phi <form>        torsion analytics of a structure
    soliton solve <algebra> --phi <form>     least-squares soliton certificate
    soliton classify <algebra> --phi <form>  divergence trichotomy verdict
    flow run <algebra> --phi <form> ...      integrate the Laplacian flow
    charts verify                            numeric matrix-group verification
    paper reproduce                          rerun the reference construction
                                             end to end and check every
                                             golden value

Exit codes: 0 success, 1 a check or computation failed, 2 usage/parse error.
Every command accepts --json for a machine-readable report.
"""

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone

from . import charts as charts_mod
from .connection import Sym2Tensor, Trichotomy, divergence_sym2, koszul, trichotomy_test
from .errors import (
    ExactnessLost,
    G2ForgeError,
    NotALieAlgebra,
    NotClosed,
    NotPositive,
    ParseError,
    ToleranceExceeded,
)
from .exterior import Vector, format_form, parse_form
from .fixtures import MODEL_PHI_TEXT, load_fixture, resolve_algebra
from .flow import FlowConfig, integrate, write_csv
from .g2core import (
    G2Structure,
    StructureClass,
    classify_structure,
    erp_residual,
    hodge_laplacian,
    torsion,
)
from .liealg import classify, format_salamon
from .scalars import FLOAT, get_backend
from .soliton import GradientKind, SolitonType, soliton_solve

PROG = "g2forge"


def _common_options(parser, default_backend):
    parser.add_argument("--json", action="store_true", help="emit the full JSON report")
    parser.add_argument(
        "--backend",
        choices=("exact", "float"),
        default=default_backend,
        help=f"scalar backend (default: {default_backend})",
    )
    parser.add_argument("--seed", type=int, default=7, help="seed for randomized checks")


def _phi_options(parser):
    parser.add_argument("--phi", help="inline 3-form, e.g. \"e127 + e347 + ...\"")
    parser.add_argument("--phi-file", help="file containing the 3-form text")


def build_parser():
    p = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s 0.1.0")
    groups = p.add_subparsers(dest="group", required=True)

    alg = groups.add_parser("alg", help="Lie algebra commands").add_subparsers(
        dest="command", required=True
    )
    check = alg.add_parser("check", help="validate a .lie file and classify the algebra")
    check.add_argument("algebra", help=".lie file path or fixture name")
    _common_options(check, "exact")

    g2 = groups.add_parser("g2", help="G2-structure commands").add_subparsers(
        dest="command", required=True
    )
    analyze = g2.add_parser("analyze", help="torsion, Laplacian and ERP analytics")
    analyze.add_argument("algebra")
    _phi_options(analyze)
    _common_options(analyze, "exact")

    sol = groups.add_parser("soliton", help="Laplacian soliton commands").add_subparsers(
        dest="command", required=True
    )
    solve = sol.add_parser("solve", help="least-squares solve for (lambda, X)")
    solve.add_argument("algebra")
    _phi_options(solve)
    _common_options(solve, "exact")
    cls = sol.add_parser("classify", help="divergence trichotomy for t = g(T^2 ., .)")
    cls.add_argument("algebra")
    _phi_options(cls)
    _common_options(cls, "exact")

    flow = groups.add_parser("flow", help="Laplacian flow commands").add_subparsers(
        dest="command", required=True
    )
    run = flow.add_parser("run", help="fixed-step flow integration to CSV")
    run.add_argument("algebra")
    _phi_options(run)
    run.add_argument("--t-end", type=float, default=0.5)
    run.add_argument("--dt", type=float, default=1e-3)
    run.add_argument("--method", choices=("rk4", "euler"), default="rk4")
    run.add_argument("--out", required=True, help="CSV output path")
    run.add_argument("--plot", help="also render a PNG/PDF figure of the trace")
    run.add_argument("--blowup-bound", type=float, default=1e12)
    run.add_argument(
        "--monitor-lambda-residual",
        action="store_true",
        help="also track the soliton residual (slower)",
    )
    _common_options(run, "float")

    charts = groups.add_parser("charts", help="matrix-group chart commands").add_subparsers(
        dest="command", required=True
    )
    verify = charts.add_parser("verify", help="finite-difference coframe verification")
    verify.add_argument("--samples", type=int, default=100)
    verify.add_argument("--step", type=float, default=1e-6)
    verify.add_argument("--tol", type=float, default=1e-5)
    _common_options(verify, "float")

    paper = groups.add_parser("paper", help="reference-construction commands").add_subparsers(
        dest="command", required=True
    )
    reproduce = paper.add_parser(
        "reproduce",
        help="run the whole construction on the built-in fixture and assert all golden values",
    )
    _common_options(reproduce, "exact")

    return p


# -- report plumbing -----------------------------------------------------------


def _fmt(field, value):
    """Scalar to JSON: exact values as strings, floats as numbers."""
    return field.fmt(value) if field.exact else field.to_float(value)


def _fmt_matrix(field, m):
    return [[_fmt(field, v) for v in row] for row in m]


def _fmt_vector(field, v):
    return [_fmt(field, c) for c in v.components]


def build_report(argv, backend, seed, inputs, results, checks):
    digest = hashlib.sha256(
        json.dumps(inputs, sort_keys=True, default=str).encode()
    ).hexdigest()
    passed = all(c["pass"] for c in checks) if checks else True
    return {
        "command": " ".join([PROG] + list(argv)),
        "inputs_hash": digest,
        "backend": backend,
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "results": results,
        "summary": {"pass": passed, "checks": checks},
    }


def emit(report, as_json, stream=None):
    stream = stream or sys.stdout
    if as_json:
        json.dump(report, stream, indent=2, sort_keys=True)
        stream.write("\n")
        return
    checks = report["summary"]["checks"]
    width = max((len(c["name"]) for c in checks), default=0)
    for i, c in enumerate(checks, start=1):
        mark = "PASS" if c["pass"] else "FAIL"
        detail = c.get("detail", "")
        stream.write(f"[{i}/{len(checks)}] {c['name']:<{width}}  {mark}  {detail}\n")
    if not checks:
        json.dump(report["results"], stream, indent=2, sort_keys=True)
        stream.write("\n")
    status = "PASS" if report["summary"]["pass"] else "FAIL"
    stream.write(f"summary: {status}\n")


def _resolve_phi(args, field):
    """Inline --phi wins over --phi-file, with a warning on conflict."""
    text = None
    if getattr(args, "phi_file", None):
        with open(args.phi_file, encoding="utf-8") as fh:
            text = fh.read().strip()
    if getattr(args, "phi", None):
        if text is not None:
            print(
                "warning: both --phi and --phi-file given; the inline form wins",
                file=sys.stderr,
            )
        text = args.phi
    if text is None:
        raise ParseError("a 3-form is required (--phi or --phi-file)", "", 0)
    return parse_form(text, field, degree=3), text


# -- command handlers -----------------------------------------------------------


def cmd_alg_check(args, argv):
    field = get_backend(args.backend)
    algebra, source = resolve_algebra(args.algebra, field)
    report = classify(algebra)
    results = {
        "source": source,
        "salamon": format_salamon(algebra),
        **report.as_dict(field),
    }
    return 0, build_report(argv, args.backend, args.seed, {"algebra": results["salamon"]}, results, [])


def cmd_g2_analyze(args, argv):
    field = get_backend(args.backend)
    algebra, source = resolve_algebra(args.algebra, field)
    phi, phi_text = _resolve_phi(args, field)
    inputs = {"algebra": format_salamon(algebra), "phi": phi_text}
    klass = classify_structure(algebra, phi)
    results = {"source": source, "class": klass.value}
    if klass in (StructureClass.CLOSED_WITH_TORSION, StructureClass.TORSION_FREE):
        structure = G2Structure.from_phi(phi)
        data = torsion(algebra, structure)
        lap = hodge_laplacian(algebra, structure.metric, phi)
        tau_norm_sq = structure.metric.inner(data.tau, data.tau)
        residual = erp_residual(algebra, structure)
        erp_norm_sq = structure.metric.inner(residual, residual)
        results.update(
            {
                "tau": format_form(data.tau),
                "laplacian_phi": format_form(lap),
                "T_matrix": _fmt_matrix(field, data.T),
                "tau_norm_sq": _fmt(field, tau_norm_sq),
                "erp_residual_norm": field.to_float(erp_norm_sq) ** 0.5,
                "erp_residual_norm_sq": _fmt(field, erp_norm_sq),
            }
        )
    return 0, build_report(argv, args.backend, args.seed, inputs, results, [])


def _certificate_payload(field, cert):
    payload = {
        "lambda": _fmt(field, cert.lam),
        "X": _fmt_vector(field, cert.x),
        "X_form": repr(cert.x),
        "residual_norm_sq": _fmt(field, cert.residual_norm_sq),
        "residual_norm": cert.residual_norm,
        "soliton_type": cert.soliton_type.value,
        "kernel_dim": cert.kernel_dim,
        "kernel": [
            {"lambda": _fmt(field, lam), "X": _fmt_vector(field, vec)}
            for lam, vec in cert.kernel
        ],
        "gradient": {"kind": cert.gradient.kind.value},
    }
    if cert.gradient.slope is not None:
        coord, slope = cert.gradient.slope
        payload["gradient"]["coordinate"] = coord
        payload["gradient"]["slope"] = _fmt(field, slope)
    return payload


def cmd_soliton_solve(args, argv):
    field = get_backend(args.backend)
    algebra, source = resolve_algebra(args.algebra, field)
    phi, phi_text = _resolve_phi(args, field)
    structure = G2Structure.from_phi(phi)
    primitives = charts_mod.LINEAR_COFRAME_PRIMITIVES if _is_builtin_h(algebra) else None
    cert = soliton_solve(algebra, structure, chart_primitives=primitives)
    results = {"source": source, **_certificate_payload(field, cert)}
    inputs = {"algebra": format_salamon(algebra), "phi": phi_text}
    return 0, build_report(argv, args.backend, args.seed, inputs, results, [])


def _is_builtin_h(algebra):
    return format_salamon(algebra) == charts_mod.SALAMON


def cmd_soliton_classify(args, argv):
    field = get_backend(args.backend)
    algebra, source = resolve_algebra(args.algebra, field)
    phi, phi_text = _resolve_phi(args, field)
    structure = G2Structure.from_phi(phi)
    verdict = trichotomy_test(algebra, structure.metric, structure)
    results = {
        "source": source,
        "class": classify_structure(algebra, phi).value,
        "trichotomy": verdict.verdict.value,
        "divergence": [_fmt(field, x) for x in verdict.divergence],
        "annotation": verdict.annotation,
        "orthonormal_frame": verdict.orthonormal_frame,
    }
    inputs = {"algebra": format_salamon(algebra), "phi": phi_text}
    return 0, build_report(argv, args.backend, args.seed, inputs, results, [])


def cmd_flow_run(args, argv):
    if args.backend == "exact":
        raise ParseError("flow integration requires --backend float", "--backend exact", 0)
    field = FLOAT
    algebra, source = resolve_algebra(args.algebra, field)
    phi, phi_text = _resolve_phi(args, field)
    cfg = FlowConfig(
        t_end=args.t_end,
        dt=args.dt,
        method=args.method,
        lambda_residual=args.monitor_lambda_residual,
        blowup_bound=args.blowup_bound,
    )
    trace = integrate(algebra, phi, cfg)
    write_csv(trace, args.out)
    plot_path = None
    if args.plot:
        from .plotting import render_trace

        plot_path = str(render_trace(trace, args.plot))
    final = trace.final()
    results = {
        "source": source,
        "method": args.method,
        "dt": args.dt,
        "t_end": args.t_end,
        "status": trace.status,
        "status_time": trace.status_time,
        "samples": len(trace.samples),
        "final_t": final.t,
        "final_monitors": dict(final.monitors),
        "csv": args.out,
        "plot": plot_path,
    }
    inputs = {
        "algebra": format_salamon(algebra),
        "phi": phi_text,
        "t_end": args.t_end,
        "dt": args.dt,
        "method": args.method,
    }
    code = 0 if trace.status == "completed" else 1
    return code, build_report(argv, args.backend, args.seed, inputs, results, [])


def cmd_charts_verify(args, argv):
    checks = []
    results = {}
    for fn in (
        lambda: charts_mod.determinant_check(samples=args.samples, seed=args.seed),
        lambda: charts_mod.closure_check(samples=max(10, args.samples // 2), seed=args.seed),
        lambda: charts_mod.maurer_cartan_check(
            samples=args.samples, step=args.step, seed=args.seed
        ),
        lambda: charts_mod.fd_structure_check(
            samples=args.samples, step=args.step, tol=args.tol, seed=args.seed
        ),
        lambda: charts_mod.gradient_function_check(samples=args.samples, seed=args.seed),
    ):
        try:
            chk = fn()
            checks.append(
                {
                    "name": chk.name,
                    "pass": True,
                    "detail": f"max residual {chk.max_residual:.3e} <= {chk.tol:.1e}",
                }
            )
            results[chk.name] = {"max_residual": chk.max_residual, "tol": chk.tol, **chk.extra}
        except ToleranceExceeded as exc:
            checks.append({"name": "charts", "pass": False, "detail": str(exc)})
    report = build_report(
        argv,
        args.backend,
        args.seed,
        {"samples": args.samples, "step": args.step, "tol": args.tol},
        results,
        checks,
    )
    return (0 if report["summary"]["pass"] else 1), report


def cmd_paper_reproduce(args, argv):
    field = get_backend(args.backend)
    if not field.exact:
        raise ParseError("the reproduction runs in the exact backend", "--backend float", 0)
    fixture = load_fixture("h", field)
    algebra, phi = fixture.algebra, fixture.phi
    structure = G2Structure.from_phi(phi)
    metric = structure.metric
    checks = []
    results = {}

    def check(name, passed, detail):
        checks.append({"name": name, "pass": bool(passed), "detail": detail})

    data = torsion(algebra, structure)  # also asserts d(phi) = 0 and the tau identities
    tau_expect = parse_form("2*e12 + 2*e34 - 4*e56", field)
    check("tau", data.tau == tau_expect, format_form(data.tau))
    results["tau"] = format_form(data.tau)

    lap = hodge_laplacian(algebra, metric, phi)
    lap_expect = parse_form("-8*e146 - 8*e245 + 8*e567", field)
    check("laplacian_phi", lap == lap_expect, format_form(lap))
    results["laplacian_phi"] = format_form(lap)

    t_expect = {1: (2, 2), 2: (-2, 1), 3: (2, 4), 4: (-2, 3), 5: (-4, 6), 6: (4, 5)}
    ok = True
    for j in range(1, 8):
        col = [data.T[r][j - 1] for r in range(7)]
        want = [field.zero()] * 7
        if j in t_expect:
            coeff, target = t_expect[j]
            want[target - 1] = field.of(coeff)
        ok = ok and col == want
    check("torsion_endomorphism", ok, "T: e1->2e2, e2->-2e1, e3->2e4, e4->-2e3, e5->-4e6, e6->4e5, e7->0")
    results["T_matrix"] = _fmt_matrix(field, data.T)

    conn = koszul(algebra, metric)
    nabla_expect = {3: -1, 4: 1, 5: 1, 6: 1}
    ok = True
    for k in range(1, 8):
        col = conn.nabla(k, k)
        want = [field.zero()] * 7
        if k in nabla_expect:
            want[6] = field.of(nabla_expect[k])
        ok = ok and col == want
    check(
        "covariant_derivative_table",
        ok,
        "nabla_e3 e3 = -e7; nabla_ek ek = e7 (k=4,5,6); zero for k=1,2,7",
    )
    results["nabla_diag"] = {f"e{k}": _fmt_vector(field, Vector(conn.nabla(k, k), field)) for k in range(1, 8)}

    div = divergence_sym2(algebra, metric, conn, Sym2Tensor(data.t, field, check=False))
    div_expect = tuple([field.zero()] * 6 + [field.of(-32)])
    check("divergence", div == div_expect, f"div(t) = (0,0,0,0,0,0,{field.fmt(div[6])})")
    results["divergence"] = [_fmt(field, x) for x in div]

    cert = soliton_solve(algebra, structure, chart_primitives=fixture.chart_primitives)
    check(
        "lambda",
        field.is_zero(cert.lam) and field.is_zero(cert.residual_norm_sq),
        f"lambda = {field.fmt(cert.lam)}, residual = {field.fmt(cert.residual_norm_sq)} (steady)",
    )
    x_expect = Vector([0, 0, 0, 0, 0, 0, -4], field)
    x_ok = _equal_mod_kernel(cert, x_expect, field)
    grad_ok = (
        cert.gradient.kind is GradientKind.GRADIENT
        and cert.gradient.slope is not None
        and cert.gradient.slope[0] == 7
        and field.eq(cert.gradient.slope[1], field.of(4))
    )
    check(
        "X",
        x_ok and grad_ok and cert.soliton_type is SolitonType.STEADY,
        f"X = {cert.x!r} (kernel dim {cert.kernel_dim}); gradient, f = 4*x7 + const",
    )
    results["certificate"] = _certificate_payload(field, cert)

    verdict = trichotomy_test(algebra, metric, structure)
    check(
        "trichotomy",
        verdict.verdict is Trichotomy.NOT_DIVERGENCE_FREE,
        f"{verdict.verdict.value}: {verdict.annotation}",
    )
    results["trichotomy"] = verdict.verdict.value

    residual = erp_residual(algebra, structure)
    erp_norm_sq = metric.inner(residual, residual)
    positive = (not field.is_zero(erp_norm_sq)) and field.to_float(erp_norm_sq) > 0
    check(
        "erp_residual_nonzero",
        positive,
        f"|erp residual|^2 = {field.fmt(erp_norm_sq)} > 0: not extremally Ricci pinched",
    )
    results["erp_residual_norm_sq"] = _fmt(field, erp_norm_sq)

    report = build_report(
        argv,
        args.backend,
        args.seed,
        {"algebra": format_salamon(algebra), "phi": MODEL_PHI_TEXT},
        results,
        checks,
    )
    return (0 if report["summary"]["pass"] else 1), report


def _equal_mod_kernel(cert, x_expect, field):
    """X == x_expect modulo the reported kernel's X-components."""
    from . import linalg

    diff = [a - b for a, b in zip(cert.x.components, x_expect.components)]
    if all(field.is_zero(d) for d in diff):
        return True
    if not cert.kernel:
        return False
    cols = [[vec.components[r] for _, vec in cert.kernel] for r in range(7)]
    try:
        linalg.solve_affine(cols, diff, field)
        return True
    except Exception:
        return False


HANDLERS = {
    ("alg", "check"): cmd_alg_check,
    ("g2", "analyze"): cmd_g2_analyze,
    ("soliton", "solve"): cmd_soliton_solve,
    ("soliton", "classify"): cmd_soliton_classify,
    ("flow", "run"): cmd_flow_run,
    ("charts", "verify"): cmd_charts_verify,
    ("paper", "reproduce"): cmd_paper_reproduce,
}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    handler = HANDLERS[(args.group, args.command)]
    try:
        code, report = handler(args, argv)
    except (ParseError, NotALieAlgebra, FileNotFoundError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (NotPositive, NotClosed, ExactnessLost, G2ForgeError) as exc:
        print(f"{PROG}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    emit(report, args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
