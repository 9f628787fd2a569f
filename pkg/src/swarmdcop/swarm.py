"""Guaranteed-convergence particle-swarm arithmetic.

Each agent holds one component of every particle. The swarm of K particles
moves under two velocity rules: the current global-best particle explores a
radius rho around the best known point; every other particle follows the
usual inertia + personal-best + global-best pull. rho doubles after a run of
consecutive successes and halves after a run of consecutive failures.

All update functions accept scalars or equal-length numpy arrays and keep a
fixed expression shape, so vectorized and scalar evaluation round identically
per element. The distributed runtime and the centralized reference both call
these functions (and `advance`) on the same keyed random draws, which makes
their particle trajectories bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ContinuousDomain
from .rng import AgentStreams


@dataclass(frozen=True)
class SwarmParams:
    """Solver parameters. Defaults follow the benchmark configuration."""

    K: int = 2000
    w: float = 0.9
    c1: float = 0.9
    c2: float = 0.1
    max_sc: int = 15
    max_fc: int = 5
    clamp_velocity: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if min(self.w, self.c1, self.c2) < 0:
            raise ValueError("w, c1, c2 must be >= 0")
        if self.max_sc < 1 or self.max_fc < 1:
            raise ValueError("max_sc and max_fc must be >= 1")
        if not (0 <= self.seed <= (1 << 64) - 1):
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class BestInfo:
    """Per-iteration verdict computed at the root and broadcast down."""

    iteration: int
    improved: np.ndarray       # bool, K: particle k improved its personal best
    pbest_fitness: np.ndarray  # float, K: updated personal-best fitness
    gbest_index: int
    gbest_fitness: float
    gbest_changed: bool


@dataclass
class AgentSwarmState:
    """One agent's components of the K particles plus its verdict-tracking state.

    `position` and `evaluated_position` coincide between updates; the refresh
    path reads only `evaluated_position` (the values whose verdict is pending).
    """

    position: np.ndarray
    velocity: np.ndarray
    evaluated_position: np.ndarray
    pbest_component: np.ndarray
    gbest_component: float
    gbest_index: int = 0
    rho: float = 1.0
    s_c: int = 0
    f_c: int = 0
    prev_gbest_index: int = 0
    prev_gbest_fitness: float = math.inf


def init_components(K: int, domain: ContinuousDomain, streams: AgentStreams):
    """Zero velocities; positions uniform on the domain from the agent's stream."""
    velocities = np.zeros(K)
    positions = domain.lower + streams.initial_uniforms(K) * (domain.upper - domain.lower)
    return positions, velocities


def fresh_state(K: int, domain: ContinuousDomain, streams: AgentStreams,
                forced: np.ndarray | None = None) -> AgentSwarmState:
    positions, velocities = init_components(K, domain, streams)
    if forced is not None:
        positions = np.asarray(forced, dtype=np.float64).copy()
        if positions.shape != (K,):
            raise ValueError(f"forced initial positions must have shape ({K},)")
        if not np.isfinite(positions).all():
            raise ValueError("forced initial positions must be finite")
        if positions.min() < domain.lower or positions.max() > domain.upper:
            raise ValueError("forced initial positions fall outside the domain")
    return AgentSwarmState(
        position=positions,
        velocity=velocities,
        evaluated_position=positions,
        pbest_component=positions.copy(),
        gbest_component=float(positions[0]),
    )


def velocity_standard(v, x, pbest_c, gbest_c, w, c1, c2, r1, r2):
    """Inertia plus personal-best and global-best pulls."""
    return w * v + r1 * c1 * (pbest_c - x) + r2 * c2 * (gbest_c - x)


def velocity_gbest(v, x, gbest_c, w, rho, r2):
    """Global-best particle: land on gbest, keep inertia, perturb within rho."""
    return -x + gbest_c + w * v + rho * (1.0 - 2.0 * r2)


def position_update(x, v_new, domain: ContinuousDomain):
    """x + v, clamped into the box domain."""
    return np.minimum(np.maximum(x + v_new, domain.lower), domain.upper)


def rho_update(rho: float, s_c: int, f_c: int, max_sc: int, max_fc: int, t: int) -> float:
    """Search-radius controller: double on a success run, halve on a failure run."""
    if t == 0:
        return 1.0
    if s_c > max_sc:
        return 2.0 * rho
    if f_c > max_fc:
        return 0.5 * rho
    return rho


def counters_update(s_c: int, f_c: int, best: BestInfo,
                    prev_gbest_index: int, prev_gbest_fitness: float) -> tuple[int, int]:
    """Consecutive success/failure counts from the new verdict.

    Success: the previous global-best particle improved its own personal best.
    Failure: the global-best fitness did not change.
    """
    success = best.pbest_fitness[prev_gbest_index] < prev_gbest_fitness
    s_c = s_c + 1 if success else 0
    f_c = f_c + 1 if not best.gbest_changed else 0
    return s_c, f_c


def root_update(fitness: np.ndarray, pbest_fitness: np.ndarray,
                gbest_fitness: float, gbest_index: int, t: int) -> BestInfo:
    """Judge one iteration's fitness vector against the running bests.

    Strict '<' everywhere; ties keep incumbents. Among simultaneous improvers
    of the global best, the lowest particle index wins.
    """
    improved = fitness < pbest_fitness
    new_pbest = np.where(improved, fitness, pbest_fitness)
    low = fitness.min()
    if low < gbest_fitness:
        gbest_index = int(np.argmin(fitness))
        gbest_fitness = float(low)
        changed = True
    else:
        changed = False
    return BestInfo(
        iteration=t,
        improved=improved,
        pbest_fitness=new_pbest,
        gbest_index=gbest_index,
        gbest_fitness=gbest_fitness,
        gbest_changed=changed,
    )


def apply_best(state: AgentSwarmState, best: BestInfo, params: SwarmParams,
               domain: ContinuousDomain, r1: np.ndarray, r2: np.ndarray):
    """Apply one verdict to an agent's state: refresh bests, counters, rho,
    then advance every particle component. Mutates `state` in place."""
    state.pbest_component = np.where(best.improved, state.evaluated_position,
                                     state.pbest_component)
    state.gbest_component = float(state.pbest_component[best.gbest_index])
    state.gbest_index = best.gbest_index
    state.s_c, state.f_c = counters_update(
        state.s_c, state.f_c, best, state.prev_gbest_index, state.prev_gbest_fitness
    )
    state.rho = rho_update(state.rho, state.s_c, state.f_c,
                           params.max_sc, params.max_fc, best.iteration)
    state.prev_gbest_index = best.gbest_index
    state.prev_gbest_fitness = best.gbest_fitness

    v_new = velocity_standard(state.velocity, state.position, state.pbest_component,
                              state.gbest_component, params.w, params.c1, params.c2, r1, r2)
    g = best.gbest_index
    v_new[g] = velocity_gbest(state.velocity[g], state.position[g],
                              state.gbest_component, params.w, state.rho, r2[g])
    if params.clamp_velocity:
        v_new = np.minimum(np.maximum(v_new, -domain.width), domain.width)
    state.velocity = v_new
    state.position = position_update(state.position, v_new, domain)
    state.evaluated_position = state.position
