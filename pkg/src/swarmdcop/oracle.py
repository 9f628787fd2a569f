"""Independent references for the distributed solver.

`centralized_gcpso` runs the identical swarm arithmetic on full assignments
with no message passing; for any (problem, params) its per-iteration
global-best trace must match the distributed run within 1e-9 relative (the
two sides sum edge costs in different association orders, everything else is
bit-identical). `grid_search` exhaustively enumerates a rectangular grid and
is the ground-truth oracle for tiny instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Problem, evaluate_edge
from .rng import AgentStreams
from .runtime import AnytimeTrace, TraceRow
from .swarm import SwarmParams, apply_best, fresh_state, root_update


def centralized_gcpso(problem: Problem, params: SwarmParams, iterations: int,
                      force_init: dict[str, list[float]] | None = None) -> AnytimeTrace:
    """Reference swarm over complete assignments; per-iteration gbest trace.

    Fitness per particle accumulates in constraint-list order, bit-identical
    to `global_cost` on that particle's assignment.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if force_init is not None:
        missing = [a for a in problem.ids if a not in force_init]
        if missing:
            raise ValueError(f"force_init is missing agents: {missing}")
    streams = {a: AgentStreams(params.seed, problem.ordinals[a]) for a in problem.ids}
    states = {
        a: fresh_state(
            params.K, problem.domains[a], streams[a],
            np.asarray(force_init[a], dtype=np.float64) if force_init else None,
        )
        for a in problem.ids
    }
    pbest_fitness = np.full(params.K, math.inf)
    gbest_fitness = math.inf
    gbest_index = 0

    trace = AnytimeTrace()
    for t in range(iterations):
        fitness = np.zeros(params.K)
        for con in problem.constraints:
            fitness = fitness + evaluate_edge(con.cost, states[con.i].position,
                                              states[con.j].position)
        best = root_update(fitness, pbest_fitness, gbest_fitness, gbest_index, t)
        pbest_fitness = best.pbest_fitness
        gbest_fitness = best.gbest_fitness
        gbest_index = best.gbest_index
        for a in problem.ids:
            r1, r2 = streams[a].update_uniforms(t, params.K)
            apply_best(states[a], best, params, problem.domains[a], r1, r2)
        trace.rows.append(TraceRow(t + 1, 0, float(gbest_fitness), 0, 0))
    return trace


@dataclass(frozen=True)
class GridSpec:
    points_per_dim: int
    cap: int = 10**7  # refuse grids larger than this many points

    def __post_init__(self):
        if self.points_per_dim < 2:
            raise ValueError("points_per_dim must be >= 2")
        if self.cap < 1:
            raise ValueError("cap must be >= 1")


def grid_search(problem: Problem, grid: GridSpec) -> tuple[dict[str, float], float]:
    """Exhaustive minimum over the evenly spaced grid (endpoints included).

    Ties go to the first grid point in lexicographic order over agents in
    ordinal order, each axis ascending.
    """
    n = problem.n_agents
    total = grid.points_per_dim**n
    if total > grid.cap:
        raise ValueError(f"grid of {total} points exceeds cap {grid.cap}")
    axes = [
        np.linspace(problem.domains[a].lower, problem.domains[a].upper, grid.points_per_dim)
        for a in problem.ids
    ]
    shape = (grid.points_per_dim,) * n

    def along(ordinal: int) -> np.ndarray:
        view = [1] * n
        view[ordinal] = -1
        return axes[ordinal].reshape(view)

    cost = np.zeros(shape)
    for con in problem.constraints:
        cost = cost + evaluate_edge(
            con.cost, along(problem.ordinals[con.i]), along(problem.ordinals[con.j])
        )
    flat_idx = int(np.argmin(cost))  # first minimum in C order == lexicographic
    indices = np.unravel_index(flat_idx, shape)
    assignment = {a: float(axes[k][indices[k]]) for k, a in enumerate(problem.ids)}
    return assignment, float(cost.flat[flat_idx])
