"""Figure rendering for flow traces (headless matplotlib, written next to the CSV)."""


def render_trace(trace, path, title="Laplacian flow trace"):
    """Two panels: coefficient trajectories and monitor drift on a log scale."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .flow import COEFF_NAMES

    times = trace.times()
    fig, (ax_coeff, ax_mon) = plt.subplots(2, 1, figsize=(8.0, 8.0), sharex=True)

    coeffs = list(zip(*(s.coeffs for s in trace.samples)))
    order = sorted(range(len(coeffs)), key=lambda i: -max(abs(v) for v in coeffs[i]))
    for rank, i in enumerate(order):
        series = coeffs[i]
        if max(abs(v) for v in series) == 0.0:
            continue
        label = COEFF_NAMES[i] if rank < 8 else None
        ax_coeff.plot(times, series, lw=1.0, label=label)
    ax_coeff.set_ylabel("coefficient")
    ax_coeff.legend(loc="upper left", fontsize=8, ncol=4)
    ax_coeff.set_title(title)

    floor = 1e-17
    for name in trace.monitor_names:
        series = trace.monitor_series(name)
        drift = [max(abs(v - series[0]), floor) for v in series]
        ax_mon.semilogy(times, drift, lw=1.2, label=f"|{name} - initial|")
    ax_mon.set_xlabel("t")
    ax_mon.set_ylabel("monitor drift")
    ax_mon.legend(loc="lower right", fontsize=8)
    if trace.status != "completed":
        ax_mon.axvline(trace.status_time, color="red", ls="--", lw=1.0)
        ax_mon.text(
            trace.status_time, floor * 10, trace.status, color="red", fontsize=8, rotation=90
        )

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
