"""Parameter sweeps: how the extinction/persistence split moves.

A sweep runs one ensemble per grid value of a chosen parameter and tabulates
psi0, psi (with the definitional correction), the terminal extinct fraction
and the classification.  Swept handles: 'theta' and 'xi' (rate constants),
'epsilon' (every jump amplitude) and 'psi0-proxy' (retunes xi so psi0 lands
exactly on the grid value).

Run:  python3 demos/04_threshold_sweeps.py
"""

from pathlib import Path

from sirjump import IntegratorConfig, sweep
from sirjump.presets import PRESETS

OUT = Path(__file__).parent / "output"
N_PATHS = 50  # reduced from the presets' 200 to keep the demo brisk


def show(table, heading: str) -> None:
    print(f"--- sweep over {table.parameter} ({heading})")
    print(f"    {'value':>10} {'psi0':>8} {'psi':>8} {'extinct':>8}  class")
    for row in table.rows:
        print(f"    {row.param_value:>10.5g} {row.psi0:>8.4f} {row.psi:>8.4f} "
              f"{row.extinct_fraction:>8.3f}  {row.classification}")


def run_preset(name: str):
    scenario = PRESETS[name].scenario
    config = IntegratorConfig(dt=0.1, t_end=2000.0, record_every=20)
    return sweep(scenario.initial, scenario.params, scenario.measure, config,
                 scenario.sweep.parameter, scenario.sweep.grid,
                 N_PATHS, scenario.master_seed)


def main() -> None:
    print("threshold sweeps\n")
    xi_table = run_preset("fig1c")
    show(xi_table, "contact rate; extinction fades as xi grows")
    print()
    proxy_table = run_preset("fig1d")
    show(proxy_table, "psi0 dialled directly through xi")
    print(
        "\nnote: the psi column uses the definitional correction phi <= 0, "
        "so psi sits\nslightly above psi0.  This demo shortens the horizon "
        "to t_end = 2000 for speed,\nwhich leaves points just under the "
        "threshold still mid-transient; the pinned\npresets behind "
        "'sirjump reproduce fig1c' run to t_end = 4000, where every\n"
        "sub-threshold point classifies extinct."
    )

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the plot")
        return

    OUT.mkdir(exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([row.param_value for row in xi_table.rows],
            [row.extinct_fraction for row in xi_table.rows], "o-")
    ax.axvline(0.0033 / 1.0435, ls="--", c="gray", lw=0.8)
    ax.set_xlabel("xi")
    ax.set_ylabel("terminal extinct fraction")
    ax.set_title(f"extinction across the xi grid ({N_PATHS} paths per point)")
    fig.tight_layout()
    target = OUT / "04_threshold_sweeps.png"
    fig.savefig(target, dpi=120)
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
