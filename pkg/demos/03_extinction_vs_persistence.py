"""Ensembles on both sides of the stochastic threshold psi.

The jump-corrected reproduction number psi = psi0 - phi/(eta+gamma)
separates two long-run regimes: for psi < 1 the infected compartment's
growth rate is bounded by the negative number (eta+gamma)*(psi-1), for
psi > 1 its time average approaches i_star = (eta+gamma)*(psi-1).

The definitional correction phi = sum rate*(ln(1+a*theta/eta) - a*theta/eta)
is always <= 0, so a psi *below* psi0 encodes the magnitude convention for
phi; the toolkit reproduces those regimes through an explicit phi_override
(see the README's sign-convention note).  This script runs the two pinned
reference scenarios at a reduced path count and compares the ensembles
against the analytic predictions.

Run:  python3 demos/03_extinction_vs_persistence.py
"""

from pathlib import Path

import numpy as np

from sirjump import classify, run_ensemble, thresholds
from sirjump.presets import PRESETS

OUT = Path(__file__).parent / "output"
N_PATHS = 200  # reduced from the presets' 1000 to keep the demo brisk


def run(name: str) -> tuple:
    scenario = PRESETS[name].scenario
    stats = run_ensemble(scenario.initial, scenario.params, scenario.measure,
                         scenario.integrator, N_PATHS, scenario.master_seed)
    t = thresholds(scenario.params, scenario.measure,
                   phi_override=scenario.phi_override)
    finite = stats.lyapunov_estimates[np.isfinite(stats.lyapunov_estimates)]
    print(f"--- {name}: psi = {t.psi:.4f} "
          f"({'<' if t.psi < 1 else '>'} 1), {N_PATHS} paths, "
          f"t_end = {scenario.integrator.t_end:g}")
    print(f"    growth-rate bound (eta+gamma)*(psi-1) = "
          f"{t.extinction_rate_bound:+.3e}")
    print(f"    median Lyapunov estimate              = "
          f"{float(np.median(finite)):+.3e}")
    if t.persistence_limits is not None:
        lim = t.persistence_limits
        print(f"    predicted time-average limit i_star   = {lim.i_star:.5f}")
        print(f"    ensemble mean time-average of I       = "
              f"{float(stats.i_time_averages.mean()):.5f}")
    print(f"    terminal extinct fraction = {stats.extinct_fraction[-1]:.3f}")
    print(f"    classification            = {classify(stats, t)}")
    return stats, t


def main() -> None:
    print("extinction vs persistence ensembles\n")
    extinction, _ = run("fig2")
    print()
    persistence, _ = run("fig3")
    print(
        "\nnote: at psi = 0.9994 the predicted decay of ln I over the "
        "horizon (~0.008)\nis tiny compared with its stochastic spread "
        "(~1.0), so paths hover around the\ndrift instead of hitting the "
        "1e-6 extinction floor -- the negative median\nLyapunov estimate, "
        "not the floor count, is the meaningful extinction signal\nat this "
        "time scale."
    )

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the plot")
        return

    OUT.mkdir(exist_ok=True)
    fig, axes = plt.subplots(1, 2, figsize=(11, 4))
    for ax, stats, title in (
        (axes[0], extinction, "psi = 0.9994 (sub-threshold)"),
        (axes[1], persistence, "psi = 1.1043 (super-threshold)"),
    ):
        ax.fill_between(stats.times, stats.q05[:, 1], stats.q95[:, 1],
                        alpha=0.3, label="5-95% band")
        ax.plot(stats.times, stats.q50[:, 1], label="median")
        ax.plot(stats.times, stats.mean[:, 1], "--", label="mean")
        ax.set_xlabel("t")
        ax.set_ylabel("I(t)")
        ax.set_title(title)
        ax.legend()
    fig.tight_layout()
    target = OUT / "03_extinction_vs_persistence.png"
    fig.savefig(target, dpi=120)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
