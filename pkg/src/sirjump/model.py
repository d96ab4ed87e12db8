"""Core SIR model with relapse and multiplicative jump noise on transmission.

The deterministic dynamics are

    dS/dt = theta - xi*S*I - eta*S + rho*R
    dI/dt = xi*S*I - (eta + gamma)*I
    dR/dt = gamma*I - (eta + rho)*R

where theta is recruitment into the susceptible class, xi the contact
(transmission) rate, eta a per-capita outflow common to all classes, rho
the relapse rate back to susceptible, and gamma the recovery rate.

The stochastic variant perturbs only the transmission exchange: a jump of
amplitude a moves a*S*I from S to I, driven by a compensated Poisson
random measure.  The measure is represented here as a finite list of
(amplitude, rate) atoms.  R carries no stochastic term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class EpidemicParams:
    """Rate constants of the model.

    theta, eta, rho and gamma must be strictly positive.  xi may be zero
    (the no-contact limit, useful in analysis sweeps) but not negative.
    """

    theta: float
    xi: float
    eta: float
    rho: float
    gamma: float

    def __post_init__(self) -> None:
        for name in ("theta", "eta", "rho", "gamma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive")
        if not (math.isfinite(self.xi) and self.xi >= 0):
            raise ValueError("xi must be non-negative")

    @property
    def population_limit(self) -> float:
        """Long-run total population theta/eta (also the DFE susceptible level)."""
        return self.theta / self.eta

    @property
    def removal_rate(self) -> float:
        """Total per-capita removal rate eta + gamma of the infected class."""
        return self.eta + self.gamma


@dataclass(frozen=True)
class SirState:
    """A point (S, I, R) in the non-negative octant."""

    s: float
    i: float
    r: float

    def __post_init__(self) -> None:
        for name in ("s", "i", "r"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> float:
        return self.s + self.i + self.r


@dataclass(frozen=True)
class Derivative:
    """Drift vector (dS/dt, dI/dt, dR/dt)."""

    ds: float
    di: float
    dr: float


@dataclass(frozen=True)
class JumpMeasure:
    """Finite atomic jump measure: a tuple of (amplitude, rate) atoms.

    Each amplitude must exceed -1 and each rate must be non-negative.
    An empty tuple is the trivial (no-noise) measure.
    """

    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        for amplitude, rate in self.atoms:
            if not (math.isfinite(amplitude) and amplitude > -1.0):
                raise ValueError("jump amplitude must be > -1")
            if not (math.isfinite(rate) and rate >= 0):
                raise ValueError("jump rate must be non-negative")

    @classmethod
    def single(cls, amplitude: float, rate: float) -> "JumpMeasure":
        return cls(((amplitude, rate),))

    @classmethod
    def empty(cls) -> "JumpMeasure":
        return cls(())

    @property
    def total_rate(self) -> float:
        return sum(rate for _, rate in self.atoms)

    def log_moment(self) -> float:
        """Second log-moment sum(rate * ln(1+amplitude)^2), always finite here."""
        return sum(rate * math.log1p(amplitude) ** 2 for amplitude, rate in self.atoms)


def drift(state: SirState, params: EpidemicParams) -> Derivative:
    """Deterministic vector field at ``state``."""
    s, i, r = state.s, state.i, state.r
    p = params
    ds = p.theta - p.xi * s * i - p.eta * s + p.rho * r
    di = p.xi * s * i - (p.eta + p.gamma) * i
    dr = p.gamma * i - (p.eta + p.rho) * r
    return Derivative(ds, di, dr)


def jump_delta(state: SirState, amplitude: float) -> tuple[float, float]:
    """State change (dS, dI) of one jump of the given amplitude.

    A jump moves amplitude*S*I from S to I; the two components are exact
    negatives of each other by construction.
    """
    if not (math.isfinite(amplitude) and amplitude > -1.0):
        raise ValueError("jump amplitude must be > -1")
    transfer = amplitude * state.s * state.i
    return (-transfer, transfer)


def total_population_closed_form(n0: float, params: EpidemicParams, t: float) -> float:
    """Total population N(t) = theta/eta + (n0 - theta/eta) * exp(-eta*t).

    The drift sums to theta - eta*N, so N follows this linear relaxation
    regardless of how the population splits across compartments.
    """
    if not (math.isfinite(n0) and n0 >= 0):
        raise ValueError("n0 must be non-negative")
    if not (math.isfinite(t) and t >= 0):
        raise ValueError("t must be non-negative")
    limit = params.population_limit
    return limit + (n0 - limit) * math.exp(-params.eta * t)
