"""Closed-form analysis: equilibria, local stability, and jump-corrected thresholds.

The deterministic reproduction number is

    psi0 = xi*theta / (eta*(gamma + eta))

and the jump correction

    phi = sum_i rate_i * (ln(1 + a_i*theta/eta) - a_i*theta/eta)

enters the stochastic threshold as psi = psi0 - phi/(eta + gamma).

Note on signs: ln(1+x) <= x, so the computed phi is always <= 0 and the
computed psi can only sit at or above psi0.  Regimes in which jump noise is
meant to *suppress* growth (psi < psi0) correspond to the magnitude
convention phi = |integral|; they are reproduced here through an explicit
``phi_override`` argument rather than a silent sign change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import EpidemicParams, JumpMeasure, SirState, drift

# |Re(lambda)| below this counts as marginal rather than stable/unstable.
MARGINAL_TOL = 1e-9

# Drift at a reported equilibrium must vanish to this max-norm.
EQUILIBRIUM_RESIDUAL_TOL = 1e-12

# Numeric eigenvalues must agree with the analytic DFE spectrum this tightly.
_EIG_CROSS_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class EquilibriumReport:
    """Disease-free and (when psi0 > 1) endemic equilibria."""

    psi0: float
    dfe: SirState
    endemic: Optional[SirState]

    @property
    def endemic_exists(self) -> bool:
        return self.endemic is not None


@dataclass(frozen=True)
class StabilityReport:
    """DFE spectrum and its classification.

    eigenvalues are sorted by real part, ascending.  classification is one
    of "stable" (all real parts < -MARGINAL_TOL), "unstable" (some real
    part > MARGINAL_TOL) or "marginal".
    """

    eigenvalues: tuple[float, float, float]
    classification: str


@dataclass(frozen=True)
class PersistenceLimits:
    """Long-run mean levels (S*, I*, R*) predicted for psi > 1."""

    s_star: float
    i_star: float
    r_star: float


@dataclass(frozen=True)
class StochasticThresholds:
    """Jump-corrected threshold quantities.

    phi is the correction actually used (definitional or an override);
    psi = psi0 - phi/(eta+gamma) always holds within this record.
    extinction_rate_bound = (eta+gamma)*(psi-1) bounds the asymptotic
    growth rate of ln I; persistence_limits is present only when psi > 1.
    """

    phi: float
    psi: float
    extinction_rate_bound: float
    persistence_limits: Optional[PersistenceLimits]


def psi0(params: EpidemicParams) -> float:
    """Deterministic reproduction number xi*theta/(eta*(gamma+eta))."""
    return params.xi * params.theta / (params.eta * (params.gamma + params.eta))


def equilibria(params: EpidemicParams) -> EquilibriumReport:
    """Disease-free equilibrium, plus the endemic point when psi0 > 1."""
    value = psi0(params)
    dfe = SirState(params.population_limit, 0.0, 0.0)
    endemic = None
    if value > 1.0:
        p = params
        scale = (p.eta + p.gamma) / (p.xi * (p.eta + p.rho + p.gamma)) * (value - 1.0)
        endemic = SirState(
            (p.eta + p.gamma) / p.xi,
            (p.eta + p.rho) * scale,
            p.gamma * scale,
        )
    return EquilibriumReport(psi0=value, dfe=dfe, endemic=endemic)


def jacobian(state: SirState, params: EpidemicParams) -> np.ndarray:
    """Jacobian of the drift at ``state`` (3x3 array, row order S, I, R)."""
    s, i = state.s, state.i
    p = params
    return np.array(
        [
            [-p.eta - p.xi * i, -p.xi * s, p.rho],
            [p.xi * i, p.xi * s - (p.eta + p.gamma), 0.0],
            [0.0, p.gamma, -p.rho - p.eta],
        ]
    )


def classify_dfe_stability(params: EpidemicParams) -> StabilityReport:
    """Spectrum of the Jacobian at the DFE and its sign classification.

    The DFE spectrum is known in closed form: {-eta, -rho-eta,
    (eta+gamma)*(psi0-1)}.  A general eigenvalue solve of the Jacobian is
    used as a cross-check; the analytic values are the ones reported.
    """
    p = params
    analytic = sorted((-p.eta, -p.rho - p.eta, (p.eta + p.gamma) * (psi0(params) - 1.0)))
    numeric = np.sort(np.linalg.eigvals(jacobian(SirState(p.population_limit, 0.0, 0.0), params)).real)
    scale = max(1.0, max(abs(v) for v in analytic))
    if np.max(np.abs(numeric - np.array(analytic))) > _EIG_CROSS_CHECK_TOL * scale:
        raise ArithmeticError("numeric DFE spectrum disagrees with the closed form")
    if all(v < -MARGINAL_TOL for v in analytic):
        classification = "stable"
    elif any(v > MARGINAL_TOL for v in analytic):
        classification = "unstable"
    else:
        classification = "marginal"
    return StabilityReport(eigenvalues=tuple(analytic), classification=classification)


def lyapunov_derivative(state: SirState, params: EpidemicParams) -> float:
    """Orbital derivative dL/dt of L = (S - b - b*ln(S/b)) + (I - 1 - ln I).

    b = (eta+gamma)/xi is the endemic susceptible level.  Requires S > 0,
    I > 0 and xi > 0 (the function is undefined otherwise).
    """
    if params.xi <= 0:
        raise ValueError("xi must be positive for the Lyapunov function")
    if state.s <= 0 or state.i <= 0:
        raise ValueError("Lyapunov derivative requires S > 0 and I > 0")
    b = (params.eta + params.gamma) / params.xi
    d = drift(state, params)
    return (1.0 - b / state.s) * d.ds + (1.0 - 1.0 / state.i) * d.di


def phi(measure: JumpMeasure, params: EpidemicParams) -> float:
    """Jump correction sum(rate * (ln(1 + a*theta/eta) - a*theta/eta)).

    Always <= 0 since ln(1+x) <= x.  Raises if any amplitude makes the
    logarithm argument non-positive at the population limit theta/eta.
    """
    limit = params.population_limit
    total = 0.0
    for amplitude, rate in measure.atoms:
        x = amplitude * limit
        if x <= -1.0:
            raise ValueError(
                "amplitude * theta/eta must exceed -1 for the jump correction"
            )
        total += rate * (math.log1p(x) - x)
    return total


def psi(params: EpidemicParams, phi_value: float) -> float:
    """Jump-corrected reproduction number psi0 - phi/(eta+gamma)."""
    return psi0(params) - phi_value / (params.eta + params.gamma)


def thresholds(
    params: EpidemicParams,
    measure: JumpMeasure,
    phi_override: Optional[float] = None,
) -> StochasticThresholds:
    """Threshold report for the given measure.

    With ``phi_override`` set, that value replaces the definitional phi in
    every derived quantity (see the module note on sign conventions).
    """
    phi_used = phi(measure, params) if phi_override is None else phi_override
    psi_value = psi(params, phi_used)
    bound = (params.eta + params.gamma) * (psi_value - 1.0)
    limits = None
    if psi_value > 1.0:
        p = params
        i_star = bound
        limits = PersistenceLimits(
            s_star=p.population_limit - (p.eta + p.gamma + p.rho) / (p.eta + p.rho) * i_star,
            i_star=i_star,
            r_star=p.gamma / (p.eta + p.rho) * i_star,
        )
    return StochasticThresholds(
        phi=phi_used,
        psi=psi_value,
        extinction_rate_bound=bound,
        persistence_limits=limits,
    )
