"""Deterministic landscape: equilibria, stability, and two contrasting runs.

The model

    dS/dt = theta - xi*S*I - eta*S + rho*R
    dI/dt = xi*S*I - (eta + gamma)*I
    dR/dt = gamma*I - (eta + rho)*R

switches behaviour at psi0 = xi*theta/(eta*(gamma+eta)) = 1: below it the
disease-free point (theta/eta, 0, 0) attracts everything, above it an
endemic point appears and the disease-free point loses stability.  This
script reports both regimes and integrates a trajectory in each.

Run:  python3 demos/01_deterministic_landscape.py
"""

from pathlib import Path

from sirjump import (
    EpidemicParams,
    IntegratorConfig,
    JumpMeasure,
    SirState,
    classify_dfe_stability,
    equilibria,
    simulate,
    total_population_closed_form,
)

OUT = Path(__file__).parent / "output"

SUPERCRITICAL = EpidemicParams(theta=0.0073, xi=0.003, eta=0.001, rho=0.01, gamma=0.02)
SUBCRITICAL = EpidemicParams(theta=0.0073, xi=0.001, eta=0.001, rho=0.01, gamma=0.02)


def describe(tag: str, params: EpidemicParams) -> None:
    report = equilibria(params)
    stability = classify_dfe_stability(params)
    print(f"--- {tag} (xi = {params.xi})")
    print(f"    psi0 = {report.psi0:.4f}")
    print(f"    disease-free point: S = {report.dfe.s:g}, I = 0, R = 0 "
          f"[{stability.classification}]")
    print("    eigenvalues:", ", ".join(f"{v:+.4g}" for v in stability.eigenvalues))
    if report.endemic is not None:
        e = report.endemic
        print(f"    endemic point: S = {e.s:.4f}, I = {e.i:.4f}, R = {e.r:.4f}")
    else:
        print("    endemic point: none (psi0 <= 1)")


def run(tag: str, params: EpidemicParams) -> object:
    config = IntegratorConfig(dt=0.1, t_end=3000.0, record_every=20,
                              scheme="deterministic_rk4")
    path = simulate(SirState(7.1, 0.2, 0.0), params, JumpMeasure.empty(),
                    config, seed=0)
    final = path.final_state
    print(f"    after t = {config.t_end:g}: S = {final.s:.4f}, "
          f"I = {final.i:.6f}, R = {final.r:.4f}")
    drift_total = abs(path.states.sum(axis=1)[-1]
                      - total_population_closed_form(7.3, params, config.t_end))
    print(f"    |S+I+R - N(t)| at t_end: {drift_total:.2e} "
          "(total population follows the closed form)")
    return path


def main() -> None:
    print("deterministic SIR-with-relapse landscape\n")
    describe("supercritical", SUPERCRITICAL)
    path_super = run("supercritical", SUPERCRITICAL)
    print()
    describe("subcritical", SUBCRITICAL)
    path_sub = run("subcritical", SUBCRITICAL)

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("\nmatplotlib not installed; skipping the plot")
        return

    OUT.mkdir(exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(path_super.times, path_super.i, label="xi = 0.003 (psi0 > 1)")
    ax.plot(path_sub.times, path_sub.i, label="xi = 0.001 (psi0 < 1)")
    ax.set_xlabel("t")
    ax.set_ylabel("I(t)")
    ax.set_title("infected compartment, deterministic dynamics")
    ax.legend()
    fig.tight_layout()
    target = OUT / "01_deterministic_landscape.png"
    fig.savefig(target, dpi=120)
    print(f"\nwrote {target}")


if __name__ == "__main__":
    main()
