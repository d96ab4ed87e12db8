"""Fixed-step integrators: RK4 for the drift, Euler with Poisson thinning
for the jump SDE.

The jump scheme advances one step as: full Euler drift update first, then
for each atom a Poisson(rate*dt) count k of jump firings, each applying
jump_delta at the post-drift state, minus the compensator rate*dt*a*S*I at
the same state.  The stochastic increment of I is therefore
(k - rate*dt) * a * S * I, an exact martingale increment per step, and S
receives the opposite of it, so S+I+R follows the plain Euler population
recursion regardless of the jumps.

Randomness contract: a path's draws are fully determined by (master seed,
path index).  Atom a of path p draws its per-step Poisson counts from
numpy's SeedSequence(seed, spawn_key=(p, a)) stream, in step order.  Bulk
draws and per-step draws of the same stream coincide, so the single-step
and whole-trajectory entry points see identical randomness.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import EpidemicParams, JumpMeasure, SirState

logger = logging.getLogger(__name__)

SCHEMES = ("deterministic_rk4", "jump_euler")


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size, horizon, recording stride and scheme selection.

    record_every=k keeps every k-th step (step 0 and the final step are
    always kept).  The number of steps is round(t_end/dt).
    """

    dt: float = 0.1
    t_end: float = 600.0
    record_every: int = 1
    scheme: str = "jump_euler"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError("dt must be positive")
        if not (math.isfinite(self.t_end) and self.t_end >= self.dt):
            raise ValueError("t_end must be at least dt")
        if not (isinstance(self.record_every, int) and self.record_every >= 1):
            raise ValueError("record_every must be a positive integer")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


class RandomStream:
    """Deterministic per-path randomness derived from (master seed, path index).

    Two streams built from the same pair produce identical draws; distinct
    indices give independent streams.  Per-atom substreams keep the draw
    order independent of how many steps are drawn at a time.
    """

    def __init__(self, seed: int, index: int = 0):
        if not (isinstance(seed, int) and seed >= 0):
            raise ValueError("seed must be a non-negative integer")
        if not (isinstance(index, int) and index >= 0):
            raise ValueError("index must be a non-negative integer")
        self.seed = seed
        self.index = index
        self._generators: dict[int, np.random.Generator] = {}

    def atom_generator(self, atom: int) -> np.random.Generator:
        if atom not in self._generators:
            seq = np.random.SeedSequence(self.seed, spawn_key=(self.index, atom))
            self._generators[atom] = np.random.default_rng(seq)
        return self._generators[atom]

    def poisson_step(self, measure: JumpMeasure, dt: float) -> list[int]:
        """One Poisson(rate*dt) count per atom, advancing the substreams."""
        return [
            int(self.atom_generator(a).poisson(rate * dt))
            for a, (_, rate) in enumerate(measure.atoms)
        ]

    def poisson_block(self, measure: JumpMeasure, dt: float, n_steps: int) -> list[np.ndarray]:
        """Per-atom arrays of n_steps Poisson(rate*dt) counts."""
        return [
            self.atom_generator(a).poisson(rate * dt, n_steps)
            for a, (_, rate) in enumerate(measure.atoms)
        ]


@dataclass(frozen=True)
class Trajectory:
    """A recorded sample path.

    states has one row (S, I, R) per recorded time; jumps_cum counts the
    jumps fired up to and including each recorded time.  clamp_count is the
    number of compartment values clamped up to zero across the whole run.
    """

    times: np.ndarray
    states: np.ndarray
    jumps_cum: np.ndarray
    clamp_count: int
    seed: int

    @property
    def s(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def i(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def r(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def jump_count(self) -> int:
        return int(self.jumps_cum[-1])

    @property
    def final_state(self) -> SirState:
        s, i, r = self.states[-1]
        return SirState(float(s), float(i), float(r))


def _rk4_step(s, i, r, params: EpidemicParams, dt: float):
    """One classical RK4 step of the drift; works for scalars and arrays."""
    p = params

    def f(s, i, r):
        si = s * i
        ds = p.theta - p.xi * si - p.eta * s + p.rho * r
        di = p.xi * si - (p.eta + p.gamma) * i
        dr = p.gamma * i - (p.eta + p.rho) * r
        return ds, di, dr

    half = 0.5 * dt
    k1 = f(s, i, r)
    k2 = f(s + half * k1[0], i + half * k1[1], r + half * k1[2])
    k3 = f(s + half * k2[0], i + half * k2[1], r + half * k2[2])
    k4 = f(s + dt * k3[0], i + dt * k3[1], r + dt * k3[2])
    sixth = dt / 6.0
    s = s + sixth * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    i = i + sixth * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    r = r + sixth * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    return s, i, r


def step_deterministic(state: SirState, params: EpidemicParams, dt: float) -> SirState:
    """One RK4 step, clamped to the non-negative octant."""
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError("dt must be positive")
    s, i, r = _rk4_step(state.s, state.i, state.r, params, dt)
    return SirState(max(s, 0.0), max(i, 0.0), max(r, 0.0))


def step_jump(
    state: SirState,
    params: EpidemicParams,
    measure: JumpMeasure,
    dt: float,
    rng: RandomStream,
) -> tuple[SirState, int]:
    """One Euler/thinning step; returns the new state and jumps fired.

    Warns when dt * total rate >= 1: several firings then routinely share
    one step and the O(dt) weak error degrades.
    """
    if not (math.isfinite(dt) and dt > 0):
        raise ValueError("dt must be positive")
    if dt * measure.total_rate >= 1.0:
        warnings.warn("dt * total jump rate >= 1; thinning is too coarse", stacklevel=2)
    counts = rng.poisson_step(measure, dt)
    p = params
    s, i, r = state.s, state.i, state.r
    si = s * i
    ds = p.theta - p.xi * si - p.eta * s + p.rho * r
    di = p.xi * si - (p.eta + p.gamma) * i
    dr = p.gamma * i - (p.eta + p.rho) * r
    s = s + dt * ds
    i = i + dt * di
    r = r + dt * dr
    fired = 0
    for (amplitude, rate), k in zip(measure.atoms, counts):
        j = (k - rate * dt) * (amplitude * s * i)
        s = s - j
        i = i + j
        fired += k
    return SirState(max(s, 0.0), max(i, 0.0), max(r, 0.0)), fired


def _record_indices(n_steps: int, record_every: int) -> list[int]:
    idx = list(range(0, n_steps + 1, record_every))
    if idx[-1] != n_steps:
        idx.append(n_steps)
    return idx


def simulate(
    initial: SirState,
    params: EpidemicParams,
    measure: JumpMeasure,
    config: IntegratorConfig,
    seed: int,
) -> Trajectory:
    """Integrate one path over [0, t_end] and record it.

    Parameters
    ----------
    initial : SirState
        State at t = 0.
    params : EpidemicParams
        Model rates.
    measure : JumpMeasure
        Jump atoms; ignored by the deterministic scheme.
    config : IntegratorConfig
        Step size, horizon, recording stride and scheme.
    seed : int
        Master seed; the path uses stream index 0 of it.

    Raises
    ------
    ValueError
        If the jump scheme is asked to run with dt * total rate >= 1.
    """
    return _simulate_stream(initial, params, measure, config, RandomStream(seed, 0))


def _simulate_stream(
    initial: SirState,
    params: EpidemicParams,
    measure: JumpMeasure,
    config: IntegratorConfig,
    stream: RandomStream,
) -> Trajectory:
    n_steps = config.n_steps
    dt = config.dt
    rec = _record_indices(n_steps, config.record_every)
    times = np.array([k * dt for k in rec])
    states = np.empty((len(rec), 3))
    jumps_cum = np.zeros(len(rec), dtype=np.int64)
    states[0] = (initial.s, initial.i, initial.r)

    if config.scheme == "deterministic_rk4":
        if measure.atoms:
            logger.debug("deterministic scheme ignores the jump measure")
        s, i, r = initial.s, initial.i, initial.r
        clamps = 0
        out = 1
        for step in range(1, n_steps + 1):
            s, i, r = _rk4_step(s, i, r, params, dt)
            if s < 0.0:
                s = 0.0
                clamps += 1
            if i < 0.0:
                i = 0.0
                clamps += 1
            if r < 0.0:
                r = 0.0
                clamps += 1
            if step == rec[out]:
                states[out] = (s, i, r)
                out += 1
        return Trajectory(times, states, jumps_cum, clamps, stream.seed)

    # jump_euler
    if dt * measure.total_rate >= 1.0:
        raise ValueError(
            "dt * total jump rate must be < 1 for the thinning scheme "
            f"(got {dt * measure.total_rate:g}); reduce dt or the rates"
        )
    if not measure.atoms:
        warnings.warn("jump scheme with an empty measure degenerates to Euler drift",
                      stacklevel=2)
    # Python-int count lists keep the inner loop in plain float arithmetic;
    # int64 - float64 and int - float are the same IEEE operation.
    counts = [block.tolist() for block in stream.poisson_block(measure, dt, n_steps)]
    atoms = measure.atoms
    n_atoms = len(atoms)
    p = params
    theta, xi, eta, rho, gamma = p.theta, p.xi, p.eta, p.rho, p.gamma
    b = eta + gamma
    c = eta + rho
    comp = [rate * dt for _, rate in atoms]
    amps = [amplitude for amplitude, _ in atoms]

    s, i, r = initial.s, initial.i, initial.r
    clamps = 0
    fired = 0
    out = 1
    for step in range(n_steps):
        si = s * i
        ds = theta - xi * si - eta * s + rho * r
        di = xi * si - b * i
        dr = gamma * i - c * r
        s = s + dt * ds
        i = i + dt * di
        r = r + dt * dr
        for a in range(n_atoms):
            k = counts[a][step]
            j = (k - comp[a]) * (amps[a] * s * i)
            s = s - j
            i = i + j
            fired += k
        if s < 0.0:
            s = 0.0
            clamps += 1
        if i < 0.0:
            i = 0.0
            clamps += 1
        if r < 0.0:
            r = 0.0
            clamps += 1
        if step + 1 == rec[out]:
            states[out] = (s, i, r)
            jumps_cum[out] = fired
            out += 1
    return Trajectory(times, states, jumps_cum, clamps, stream.seed)


def _simulate_ensemble_vectorized(
    initial: SirState,
    params: EpidemicParams,
    measure: JumpMeasure,
    config: IntegratorConfig,
    n_paths: int,
    master_seed: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """All paths at once; arithmetic mirrors _simulate_stream line by line.

    Elementwise IEEE operations match the scalar loop exactly, and each
    column of the per-atom count matrices is the same stream a standalone
    path would draw, so every path is bit-identical to its
    _simulate_stream(..., RandomStream(master_seed, p)) counterpart.

    Returns (times, states[path, time, comp], jumps_cum[path, time],
    clamp_count).
    """
    n_steps = config.n_steps
    dt = config.dt
    rec = _record_indices(n_steps, config.record_every)
    times = np.array([k * dt for k in rec])
    states = np.empty((n_paths, len(rec), 3))
    jumps_cum = np.zeros((n_paths, len(rec)), dtype=np.int64)

    if config.scheme == "deterministic_rk4":
        s = np.full(n_paths, initial.s)
        i = np.full(n_paths, initial.i)
        r = np.full(n_paths, initial.r)
        clamps = 0
        states[:, 0, 0] = s
        states[:, 0, 1] = i
        states[:, 0, 2] = r
        out = 1
        for step in range(1, n_steps + 1):
            s, i, r = _rk4_step(s, i, r, params, dt)
            for arr in (s, i, r):
                neg = arr < 0.0
                if neg.any():
                    clamps += int(neg.sum())
                    np.copyto(arr, 0.0, where=neg)
            if step == rec[out]:
                states[:, out, 0] = s
                states[:, out, 1] = i
                states[:, out, 2] = r
                out += 1
        return times, states, jumps_cum, clamps

    if dt * measure.total_rate >= 1.0:
        raise ValueError(
            "dt * total jump rate must be < 1 for the thinning scheme "
            f"(got {dt * measure.total_rate:g}); reduce dt or the rates"
        )
    if not measure.atoms:
        warnings.warn("jump scheme with an empty measure degenerates to Euler drift",
                      stacklevel=2)
    atoms = measure.atoms
    n_atoms = len(atoms)
    counts = []
    for a in range(n_atoms):
        block = np.empty((n_steps, n_paths), dtype=np.int64)
        for path in range(n_paths):
            stream = RandomStream(master_seed, path)
            block[:, path] = stream.atom_generator(a).poisson(atoms[a][1] * dt, n_steps)
        counts.append(block)
    p = params
    theta, xi, eta, rho, gamma = p.theta, p.xi, p.eta, p.rho, p.gamma
    b = eta + gamma
    c = eta + rho
    comp = [rate * dt for _, rate in atoms]
    amps = [amplitude for amplitude, _ in atoms]

    s = np.full(n_paths, initial.s)
    i = np.full(n_paths, initial.i)
    r = np.full(n_paths, initial.r)
    clamps = 0
    fired = np.zeros(n_paths, dtype=np.int64)
    states[:, 0, 0] = s
    states[:, 0, 1] = i
    states[:, 0, 2] = r
    out = 1
    for step in range(n_steps):
        si = s * i
        ds = theta - xi * si - eta * s + rho * r
        di = xi * si - b * i
        dr = gamma * i - c * r
        s = s + dt * ds
        i = i + dt * di
        r = r + dt * dr
        for a in range(n_atoms):
            k = counts[a][step]
            j = (k - comp[a]) * (amps[a] * s * i)
            s = s - j
            i = i + j
            fired += k
        for arr in (s, i, r):
            neg = arr < 0.0
            if neg.any():
                clamps += int(neg.sum())
                np.copyto(arr, 0.0, where=neg)
        if step + 1 == rec[out]:
            states[:, out, 0] = s
            states[:, out, 1] = i
            states[:, out, 2] = r
            jumps_cum[:, out] = fired
            out += 1
    return times, states, jumps_cum, clamps
