"""Command-line front end.

Subcommands: analyze, simulate, ensemble, sweep, reproduce.  Exit codes:
0 success, 1 configuration/validation error, 2 runtime error, 3 I/O error.
CSV column layouts are part of the interface and stay fixed; floats are
written with full round-trip precision.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import analysis, montecarlo
from .config import ConfigError, ScenarioConfig, parse_config, serialize_config
from .model import SirState
from .montecarlo import EnsembleStats, SweepTable, classify, run_ensemble, sweep
from .presets import PRESETS
from .sde import Trajectory, simulate

SIMULATE_HEADER = "t,S,I,R,jumps_cum"
ENSEMBLE_HEADER = (
    "t,S_mean,S_q05,S_q50,S_q95,I_mean,I_q05,I_q50,I_q95,"
    "R_mean,R_q05,R_q50,R_q95,extinct_fraction"
)
SWEEP_HEADER = "param_value,psi0,psi,extinct_fraction,mean_terminal_I"


def _f(value: float) -> str:
    return repr(float(value))


def write_simulate_csv(path: Path, trajectory: Trajectory) -> None:
    lines = [SIMULATE_HEADER]
    for k in range(len(trajectory.times)):
        lines.append(
            f"{_f(trajectory.times[k])},{_f(trajectory.s[k])},{_f(trajectory.i[k])},"
            f"{_f(trajectory.r[k])},{int(trajectory.jumps_cum[k])}"
        )
    path.write_text("\n".join(lines) + "\n")


def write_ensemble_csv(path: Path, stats: EnsembleStats) -> None:
    lines = [ENSEMBLE_HEADER]
    for k in range(len(stats.times)):
        cells = [_f(stats.times[k])]
        for comp in range(3):
            cells.append(_f(stats.mean[k, comp]))
            cells.append(_f(stats.q05[k, comp]))
            cells.append(_f(stats.q50[k, comp]))
            cells.append(_f(stats.q95[k, comp]))
        cells.append(_f(stats.extinct_fraction[k]))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def write_sweep_csv(path: Path, table: SweepTable) -> None:
    lines = [SWEEP_HEADER]
    for row in table.rows:
        lines.append(
            f"{_f(row.param_value)},{_f(row.psi0)},{_f(row.psi)},"
            f"{_f(row.extinct_fraction)},{_f(row.mean_terminal_i)}"
        )
    path.write_text("\n".join(lines) + "\n")


def format_analysis(scenario: ScenarioConfig) -> str:
    """Text report: equilibria, DFE spectrum, thresholds, convention notes."""
    eq = analysis.equilibria(scenario.params)
    stability = analysis.classify_dfe_stability(scenario.params)
    phi_def = analysis.phi(scenario.measure, scenario.params)
    t_def = analysis.thresholds(scenario.params, scenario.measure)

    out = []
    out.append("deterministic analysis")
    out.append(f"  psi0                {eq.psi0:.6f}")
    out.append(f"  dfe                 S={_f(eq.dfe.s)} I={_f(eq.dfe.i)} R={_f(eq.dfe.r)}")
    if eq.endemic is not None:
        out.append(
            f"  endemic             S={eq.endemic.s:.6f} I={eq.endemic.i:.6f} "
            f"R={eq.endemic.r:.6f}"
        )
    else:
        out.append("  endemic             none (psi0 <= 1)")
    eigs = ", ".join(f"{v:+.6g}" for v in stability.eigenvalues)
    out.append(f"  dfe eigenvalues     {eigs}")
    out.append(f"  dfe classification  {stability.classification}")
    out.append("jump-corrected thresholds (definitional phi)")
    out.append(f"  phi                 {phi_def:.6e}")
    out.append(f"  psi                 {t_def.psi:.6f}")
    out.append(f"  extinction bound    {t_def.extinction_rate_bound:.6e}")
    out.append(_format_limits(t_def))
    if scenario.phi_override is not None:
        t_ov = analysis.thresholds(scenario.params, scenario.measure,
                                   phi_override=scenario.phi_override)
        out.append(f"with phi override {scenario.phi_override:.6e}")
        out.append(f"  psi                 {t_ov.psi:.6f}")
        out.append(f"  extinction bound    {t_ov.extinction_rate_bound:.6e}")
        out.append(_format_limits(t_ov))
    out.append("notes")
    out.append(
        "  the definitional phi is always <= 0 (ln(1+x) <= x), so the computed"
    )
    out.append(
        "  psi never falls below psi0; a psi quoted below psi0 follows the"
    )
    out.append(
        "  magnitude convention and is reproduced via a positive phi override."
    )
    out.append(
        "  persistence limits derive from i_star = (eta+gamma)*(psi-1) with"
    )
    out.append(
        "  r_star = gamma/(eta+rho)*i_star and s_star = theta/eta -"
    )
    out.append(
        "  (eta+gamma+rho)/(eta+rho)*i_star; quoted values that do not satisfy"
    )
    out.append(
        "  these identities are flagged in the figure manifests."
    )
    return "\n".join(out) + "\n"


def _format_limits(t: analysis.StochasticThresholds) -> str:
    if t.persistence_limits is None:
        return "  persistence limits  none (psi <= 1)"
    lim = t.persistence_limits
    return (
        f"  persistence limits  S*={lim.s_star:.6f} I*={lim.i_star:.6f} "
        f"R*={lim.r_star:.6f}"
    )


def _analysis_csv_rows(scenario: ScenarioConfig) -> list[tuple[str, float]]:
    eq = analysis.equilibria(scenario.params)
    stability = analysis.classify_dfe_stability(scenario.params)
    t_def = analysis.thresholds(scenario.params, scenario.measure)
    rows = [
        ("psi0", eq.psi0),
        ("dfe_s", eq.dfe.s),
        ("eigenvalue_1", stability.eigenvalues[0]),
        ("eigenvalue_2", stability.eigenvalues[1]),
        ("eigenvalue_3", stability.eigenvalues[2]),
        ("phi_definitional", t_def.phi),
        ("psi_definitional", t_def.psi),
        ("extinction_bound_definitional", t_def.extinction_rate_bound),
    ]
    if eq.endemic is not None:
        rows += [("endemic_s", eq.endemic.s), ("endemic_i", eq.endemic.i),
                 ("endemic_r", eq.endemic.r)]
    if scenario.phi_override is not None:
        t_ov = analysis.thresholds(scenario.params, scenario.measure,
                                   phi_override=scenario.phi_override)
        rows += [("phi_override", t_ov.phi), ("psi_override", t_ov.psi),
                 ("extinction_bound_override", t_ov.extinction_rate_bound)]
        if t_ov.persistence_limits is not None:
            lim = t_ov.persistence_limits
            rows += [("s_star", lim.s_star), ("i_star", lim.i_star),
                     ("r_star", lim.r_star)]
    elif t_def.persistence_limits is not None:
        lim = t_def.persistence_limits
        rows += [("s_star", lim.s_star), ("i_star", lim.i_star),
                 ("r_star", lim.r_star)]
    return rows


def _load_scenario(args: argparse.Namespace) -> ScenarioConfig:
    text = Path(args.config).read_text()
    scenario = parse_config(text)
    if getattr(args, "seed", None) is not None:
        scenario = dataclasses.replace(scenario, master_seed=args.seed)
    if getattr(args, "paths", None) is not None:
        if args.paths < 1:
            raise ConfigError("--paths must be at least 1")
        scenario = dataclasses.replace(scenario, n_paths=args.paths)
    if getattr(args, "phi_override", None) is not None:
        scenario = dataclasses.replace(scenario, phi_override=args.phi_override)
    return scenario


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _say(args: argparse.Namespace, message: str) -> None:
    if not args.quiet:
        print(message)


def cmd_analyze(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    report = format_analysis(scenario)
    sys.stdout.write(report)
    if args.out is not None:
        out = _out_dir(args)
        rows = _analysis_csv_rows(scenario)
        csv = "name,value\n" + "\n".join(f"{name},{_f(value)}" for name, value in rows)
        (out / "analyze.csv").write_text(csv + "\n")
        _say(args, f"wrote {out / 'analyze.csv'}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    trajectory = simulate(
        scenario.initial, scenario.params, scenario.measure,
        scenario.integrator, scenario.master_seed,
    )
    out = _out_dir(args)
    write_simulate_csv(out / "simulate.csv", trajectory)
    _say(args, f"wrote {out / 'simulate.csv'}")
    final = trajectory.final_state
    _say(
        args,
        f"t_end={trajectory.times[-1]:g} S={final.s:.6g} I={final.i:.6g} "
        f"R={final.r:.6g} jumps={trajectory.jump_count} clamps={trajectory.clamp_count}",
    )
    return 0


def cmd_ensemble(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    stats = run_ensemble(
        scenario.initial, scenario.params, scenario.measure,
        scenario.integrator, scenario.n_paths, scenario.master_seed,
    )
    out = _out_dir(args)
    write_ensemble_csv(out / "ensemble.csv", stats)
    _say(args, f"wrote {out / 'ensemble.csv'}")
    thresholds = analysis.thresholds(scenario.params, scenario.measure,
                                     phi_override=scenario.phi_override)
    _say(
        args,
        f"paths={stats.n_paths} extinct_fraction={stats.extinct_fraction[-1]:.4f} "
        f"classification={classify(stats, thresholds)}",
    )
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args)
    if scenario.sweep is None:
        raise ConfigError("sweep command needs a [sweep] section in the config")
    table = sweep(
        scenario.initial, scenario.params, scenario.measure, scenario.integrator,
        scenario.sweep.parameter, scenario.sweep.grid,
        scenario.n_paths, scenario.master_seed,
    )
    out = _out_dir(args)
    write_sweep_csv(out / "sweep.csv", table)
    _say(args, f"wrote {out / 'sweep.csv'}")
    return 0


def cmd_reproduce(args: argparse.Namespace) -> int:
    preset = PRESETS[args.figure]
    scenario = preset.scenario
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, master_seed=args.seed)
    if args.paths is not None:
        if args.paths < 1:
            raise ConfigError("--paths must be at least 1")
        scenario = dataclasses.replace(scenario, n_paths=args.paths)
    out = _out_dir(args)
    name = preset.name

    manifest = {
        "preset": name,
        "kind": preset.kind,
        "reference": preset.reference,
        "notes": list(preset.notes),
        "defaults_chosen_here": {
            "scheme": scenario.integrator.scheme,
            "dt": scenario.integrator.dt,
            "t_end": scenario.integrator.t_end,
            "record_every": scenario.integrator.record_every,
            "initial": [scenario.initial.s, scenario.initial.i, scenario.initial.r],
            "measure_atoms": [list(atom) for atom in scenario.measure.atoms],
            "n_paths": scenario.n_paths,
            "master_seed": scenario.master_seed,
            "phi_override": scenario.phi_override,
            "extinction_floor": montecarlo.EXTINCTION_FLOOR,
        },
        "analysis": {name: value for name, value in _analysis_csv_rows(scenario)},
    }

    (out / f"{name}_config.toml").write_text(serialize_config(scenario))
    if preset.kind == "sweep":
        table = sweep(
            scenario.initial, scenario.params, scenario.measure, scenario.integrator,
            scenario.sweep.parameter, scenario.sweep.grid,
            scenario.n_paths, scenario.master_seed,
        )
        write_sweep_csv(out / f"{name}_sweep.csv", table)
        manifest["results"] = {
            "extinct_fraction": [row.extinct_fraction for row in table.rows],
            "classification": [row.classification for row in table.rows],
        }
        _say(args, f"wrote {out / (name + '_sweep.csv')}")
    else:
        stats = run_ensemble(
            scenario.initial, scenario.params, scenario.measure,
            scenario.integrator, scenario.n_paths, scenario.master_seed,
        )
        write_ensemble_csv(out / f"{name}_ensemble.csv", stats)
        thresholds = analysis.thresholds(scenario.params, scenario.measure,
                                         phi_override=scenario.phi_override)
        manifest["results"] = {
            "extinct_fraction": float(stats.extinct_fraction[-1]),
            "classification": classify(stats, thresholds),
            "median_lyapunov": float(np.nanmedian(stats.lyapunov_estimates)),
            "mean_i_time_average": float(stats.i_time_averages.mean()),
        }
        (out / f"{name}_analysis.txt").write_text(_preset_analysis_text(preset, scenario))
        _say(args, f"wrote {out / (name + '_ensemble.csv')}")

    (out / f"{name}_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    _say(args, f"wrote {out / (name + '_manifest.json')}")
    return 0


def _preset_analysis_text(preset, scenario: ScenarioConfig) -> str:
    text = format_analysis(scenario)
    extra = []
    reference = preset.reference
    if "s_star" in reference:
        t_ov = analysis.thresholds(scenario.params, scenario.measure,
                                   phi_override=scenario.phi_override)
        lim = t_ov.persistence_limits
        extra.append("reference comparison")
        extra.append(
            f"  quoted S*={reference['s_star']} I*={reference['i_star']} "
            f"R*={reference['r_star']}"
        )
        if lim is not None:
            extra.append(
                f"  formula S*={lim.s_star:.6f} I*={lim.i_star:.6f} "
                f"R*={lim.r_star:.6f}"
            )
            if abs(lim.s_star - reference["s_star"]) > 5e-4 or (
                abs(lim.r_star - reference["r_star"]) > 1e-4
            ):
                extra.append(
                    "  discrepancy: the quoted S* and R* do not satisfy the "
                    "limit formulas for these rates; the formula values are "
                    "reported as authoritative."
                )
    for note in preset.notes:
        extra.append(f"note: {note}")
    return text + ("\n".join(extra) + "\n" if extra else "")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sirjump",
        description="SIR dynamics with jump noise: analysis, simulation, ensembles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override master seed")
    common.add_argument("--paths", type=int, default=None, help="override path count")
    common.add_argument("--phi-override", dest="phi_override", type=float, default=None,
                        help="override the jump correction phi in reports")
    common.add_argument("--quiet", action="store_true", help="suppress status output")

    p = sub.add_parser("analyze", parents=[common],
                       help="equilibria, stability and thresholds of a scenario")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="also write analyze.csv here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", parents=[common], help="one sample path to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ensemble", parents=[common], help="Monte Carlo ensemble to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("sweep", parents=[common], help="parameter sweep to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", parents=[common],
                       help="run a pinned figure preset and write its manifest")
    p.add_argument("figure", choices=sorted(PRESETS))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
