"""Scenario configuration: a flat TOML document with dotted sections.

Example::

    params.theta = 0.0073
    params.xi = 0.003
    params.eta = 0.001
    params.rho = 0.01
    params.gamma = 0.02
    initial.s = 7.1
    initial.i = 0.2
    initial.r = 0.0
    measure.amplitudes = [0.001]
    measure.rates = [1.0]
    integrator.dt = 0.1
    integrator.t_end = 600.0
    integrator.record_every = 10
    integrator.scheme = "jump_euler"
    ensemble.n_paths = 1000
    ensemble.master_seed = 42
    ensemble.phi_override = 9.126e-4

Unknown keys are rejected.  params.* and initial.* are required; the
measure defaults to empty, the integrator fields to IntegratorConfig's
defaults, n_paths to 1000, master_seed to 0 and phi_override to unset.
An optional [sweep] section (sweep.parameter, sweep.grid) drives the
sweep command.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .model import EpidemicParams, JumpMeasure, SirState
from .sde import SCHEMES, IntegratorConfig


class ConfigError(ValueError):
    """Malformed or invalid scenario configuration."""


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    grid: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to run one scenario end to end."""

    params: EpidemicParams
    initial: SirState
    measure: JumpMeasure = JumpMeasure.empty()
    integrator: IntegratorConfig = IntegratorConfig()
    n_paths: int = 1000
    master_seed: int = 0
    phi_override: Optional[float] = None
    sweep: Optional[SweepSpec] = None


_KNOWN_KEYS = {
    "params": {"theta", "xi", "eta", "rho", "gamma"},
    "initial": {"s", "i", "r"},
    "measure": {"amplitudes", "rates"},
    "integrator": {"dt", "t_end", "record_every", "scheme"},
    "ensemble": {"n_paths", "master_seed", "phi_override"},
    "sweep": {"parameter", "grid"},
}


def _check_unknown(doc: dict) -> None:
    for section, content in doc.items():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown config section '{section}'")
        if not isinstance(content, dict):
            raise ConfigError(f"'{section}' must be a dotted section, not a bare key")
        for key in content:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"unknown config key '{section}.{key}'")


def _require(doc: dict, section: str, key: str) -> object:
    try:
        return doc[section][key]
    except KeyError:
        raise ConfigError(f"missing required config key '{section}.{key}'") from None


def _as_float(value: object, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{where}' must be a number")
    return float(value)


def _as_int(value: object, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{where}' must be an integer")
    return value


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario document.

    Raises ConfigError with the offending key (or the parser's line
    context) on any problem.
    """
    try:
        doc = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    _check_unknown(doc)

    try:
        params = EpidemicParams(
            theta=_as_float(_require(doc, "params", "theta"), "params.theta"),
            xi=_as_float(_require(doc, "params", "xi"), "params.xi"),
            eta=_as_float(_require(doc, "params", "eta"), "params.eta"),
            rho=_as_float(_require(doc, "params", "rho"), "params.rho"),
            gamma=_as_float(_require(doc, "params", "gamma"), "params.gamma"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"params: {exc}") from None
    try:
        initial = SirState(
            s=_as_float(_require(doc, "initial", "s"), "initial.s"),
            i=_as_float(_require(doc, "initial", "i"), "initial.i"),
            r=_as_float(_require(doc, "initial", "r"), "initial.r"),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"initial: {exc}") from None

    measure_doc = doc.get("measure", {})
    amplitudes = measure_doc.get("amplitudes", [])
    rates = measure_doc.get("rates", [])
    if not isinstance(amplitudes, list) or not isinstance(rates, list):
        raise ConfigError("'measure.amplitudes' and 'measure.rates' must be arrays")
    if len(amplitudes) != len(rates):
        raise ConfigError("'measure.amplitudes' and 'measure.rates' must have equal length")
    try:
        measure = JumpMeasure(
            tuple(
                (_as_float(a, "measure.amplitudes"), _as_float(r, "measure.rates"))
                for a, r in zip(amplitudes, rates)
            )
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"measure: {exc}") from None

    integ_doc = doc.get("integrator", {})
    defaults = IntegratorConfig()
    scheme = integ_doc.get("scheme", defaults.scheme)
    if scheme not in SCHEMES:
        raise ConfigError(f"'integrator.scheme' must be one of {SCHEMES}")
    try:
        integrator = IntegratorConfig(
            dt=_as_float(integ_doc.get("dt", defaults.dt), "integrator.dt"),
            t_end=_as_float(integ_doc.get("t_end", defaults.t_end), "integrator.t_end"),
            record_every=_as_int(
                integ_doc.get("record_every", defaults.record_every),
                "integrator.record_every",
            ),
            scheme=scheme,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"integrator: {exc}") from None

    ens_doc = doc.get("ensemble", {})
    n_paths = _as_int(ens_doc.get("n_paths", 1000), "ensemble.n_paths")
    if n_paths < 1:
        raise ConfigError("'ensemble.n_paths' must be at least 1")
    master_seed = _as_int(ens_doc.get("master_seed", 0), "ensemble.master_seed")
    if master_seed < 0:
        raise ConfigError("'ensemble.master_seed' must be non-negative")
    phi_override = ens_doc.get("phi_override")
    if phi_override is not None:
        phi_override = _as_float(phi_override, "ensemble.phi_override")
        if not math.isfinite(phi_override):
            raise ConfigError("'ensemble.phi_override' must be finite")

    sweep_spec = None
    if "sweep" in doc:
        parameter = _require(doc, "sweep", "parameter")
        if parameter not in ("epsilon", "theta", "xi", "psi0-proxy", "psi0"):
            raise ConfigError(
                "'sweep.parameter' must be one of 'epsilon', 'theta', 'xi', "
                "'psi0-proxy'"
            )
        grid = _require(doc, "sweep", "grid")
        if not isinstance(grid, list) or not grid:
            raise ConfigError("'sweep.grid' must be a non-empty array")
        values = tuple(_as_float(v, "sweep.grid") for v in grid)
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError("'sweep.grid' must be strictly increasing")
        sweep_spec = SweepSpec(parameter=parameter, grid=values)

    return ScenarioConfig(
        params=params,
        initial=initial,
        measure=measure,
        integrator=integrator,
        n_paths=n_paths,
        master_seed=master_seed,
        phi_override=phi_override,
        sweep=sweep_spec,
    )


def _fmt(value: float) -> str:
    # repr round-trips float64 exactly; TOML floats need a decimal point or exponent
    text = repr(float(value))
    if "." not in text and "e" not in text and "inf" not in text and "nan" not in text:
        text += ".0"
    return text


def serialize_config(config: ScenarioConfig) -> str:
    """Render a ScenarioConfig back to text; parse_config inverts it exactly."""
    p, s0 = config.params, config.initial
    lines = [
        f"params.theta = {_fmt(p.theta)}",
        f"params.xi = {_fmt(p.xi)}",
        f"params.eta = {_fmt(p.eta)}",
        f"params.rho = {_fmt(p.rho)}",
        f"params.gamma = {_fmt(p.gamma)}",
        f"initial.s = {_fmt(s0.s)}",
        f"initial.i = {_fmt(s0.i)}",
        f"initial.r = {_fmt(s0.r)}",
        "measure.amplitudes = [%s]" % ", ".join(_fmt(a) for a, _ in config.measure.atoms),
        "measure.rates = [%s]" % ", ".join(_fmt(r) for _, r in config.measure.atoms),
        f"integrator.dt = {_fmt(config.integrator.dt)}",
        f"integrator.t_end = {_fmt(config.integrator.t_end)}",
        f"integrator.record_every = {config.integrator.record_every}",
        f'integrator.scheme = "{config.integrator.scheme}"',
        f"ensemble.n_paths = {config.n_paths}",
        f"ensemble.master_seed = {config.master_seed}",
    ]
    if config.phi_override is not None:
        lines.append(f"ensemble.phi_override = {_fmt(config.phi_override)}")
    if config.sweep is not None:
        lines.append(f'sweep.parameter = "{config.sweep.parameter}"')
        lines.append(
            "sweep.grid = [%s]" % ", ".join(_fmt(v) for v in config.sweep.grid)
        )
    return "\n".join(lines) + "\n"
