"""Agent state machines on a deterministic round-based message simulator.

One machine per agent. Each iteration runs two phases over the pseudo-tree:

* Evaluation: an agent holding this iteration's positions from all its
  higher-priority neighbors computes the shared edge costs and sends each one
  to its higher endpoint; agents with lower-priority neighbors sum everything
  they receive (edge costs from L members, aggregates from children) and
  forward the sum to their parent, so each edge is counted exactly once and
  the totals telescope to the root.
* Update: the root judges the aggregated fitness vector, then the verdict
  travels back down. Every agent applies the same verdict with the same rule
  and draws its velocity randomness from keyed streams, so replicated
  counters stay consistent without extra coordination.

Delivery is synchronous: an envelope sent in round r arrives in round r+1,
and agents fire in ordinal order within a round. Runs are bit-reproducible
from (problem, params).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import Problem, evaluate_edge
from .pseudotree import PseudoTree, build_bfs_pseudotree
from .rng import AgentStreams
from .swarm import AgentSwarmState, BestInfo, SwarmParams, apply_best, fresh_state, root_update


class Kind(Enum):
    VALUE = "VALUE"
    EDGE_FITNESS = "EDGE_FITNESS"
    AGG_FITNESS = "AGG_FITNESS"
    UPDATE = "UPDATE"


@dataclass(slots=True)
class Envelope:
    """One message. `iteration` tags the positions (VALUE/UPDATE) or the
    fitness vector (EDGE_FITNESS/AGG_FITNESS) it carries; an UPDATE for
    iteration t+1 piggybacks the verdict of iteration t in `best`."""

    kind: Kind
    iteration: int
    sender: str
    recipient: str
    values: np.ndarray | None = None
    fitness: np.ndarray | None = None
    best: BestInfo | None = None


def envelope_scalars(env: Envelope, K: int) -> int:
    """Payload size in scalars: K per vector; UPDATE = positions + verdict."""
    if env.kind is Kind.UPDATE:
        return 3 * K + 3  # K positions, K pbest fitness, K improved flags, 3 scalars
    return K


@dataclass(slots=True)
class TraceRow:
    iteration: int        # 1-based count of completed Evaluation+Update cycles
    round: int            # simulator round in which the root judged it
    gbest_fitness: float
    envelopes: int        # cumulative envelopes sent, all agents
    scalars: int          # cumulative payload scalars sent, all agents


TRACE_HEADER = "iteration,round,gbest_fitness,envelopes,scalars"


@dataclass
class AnytimeTrace:
    rows: list[TraceRow] = field(default_factory=list)

    @property
    def final_gbest(self) -> float:
        return self.rows[-1].gbest_fitness

    def gbest_series(self) -> list[float]:
        return [r.gbest_fitness for r in self.rows]

    def to_csv(self) -> str:
        lines = [TRACE_HEADER]
        for r in self.rows:
            lines.append(f"{r.iteration},{r.round},{r.gbest_fitness!r},{r.envelopes},{r.scalars}")
        return "\n".join(lines) + "\n"

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())


def parse_trace_csv(text: str) -> AnytimeTrace:
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != TRACE_HEADER:
        raise ValueError(f"bad trace header: {lines[:1]}")
    rows = []
    for ln in lines[1:]:
        it, rnd, gbest, env, sc = ln.split(",")
        rows.append(TraceRow(int(it), int(rnd), float(gbest), int(env), int(sc)))
    return AnytimeTrace(rows)


class AgentMachine:
    """One agent: owns its swarm components, acts only on received envelopes."""

    def __init__(self, agent_id: str, problem: Problem, tree: PseudoTree,
                 params: SwarmParams, max_iterations: int,
                 forced: np.ndarray | None, keep_position_history: bool):
        self.id = agent_id
        self.ordinal = problem.ordinals[agent_id]
        self.domain = problem.domains[agent_id]
        self.params = params
        self.max_iterations = max_iterations
        self.is_root = agent_id == tree.root
        self.H = tree.H[agent_id]
        self.L = tree.L[agent_id]
        self.parent = tree.parent.get(agent_id)
        self.expected = tree.expected_fitness_msgs[agent_id]
        self.constraint_with = {
            nbr: problem.constraint_between(agent_id, nbr) for nbr in self.H + self.L
        }
        self.streams = AgentStreams(params.seed, self.ordinal)
        self.forced = forced
        self.keep_position_history = keep_position_history

        self.state: AgentSwarmState | None = None
        self.initialized = False
        self.own_iter = 0               # iteration of the current positions
        self.edge_done_iter = -1
        self.fitness_next = 0           # next iteration to aggregate / judge
        self.values_buf: dict[tuple[int, str], np.ndarray] = {}
        self.best_buf: dict[int, BestInfo] = {}
        self.acc: dict[int, np.ndarray] = {}
        self.acc_count: dict[int, int] = {}
        self.sent_counts: dict[tuple[int, Kind], int] = {}
        self.applied_best_round: dict[int, int] = {}
        self.position_history: dict[int, np.ndarray] = {}
        # root-only running bests and completed verdicts
        self.pbest_fitness = np.full(params.K, math.inf)
        self.gbest_fitness = math.inf
        self.gbest_index = 0
        self.completed: list[tuple[int, BestInfo, np.ndarray]] = []

    @property
    def done(self) -> bool:
        return self.own_iter >= self.max_iterations

    def _absorb(self, env: Envelope):
        if env.kind in (Kind.VALUE, Kind.UPDATE):
            self.values_buf[(env.iteration, env.sender)] = env.values
            if env.best is not None and env.best.iteration >= self.own_iter:
                self.best_buf[env.best.iteration] = env.best
        elif env.kind in (Kind.EDGE_FITNESS, Kind.AGG_FITNESS):
            t = env.iteration
            if t in self.acc:
                self.acc[t] += env.fitness
                self.acc_count[t] += 1
            else:
                self.acc[t] = env.fitness.copy()  # envelopes stay immutable records
                self.acc_count[t] = 1
        else:
            raise AssertionError(f"unexpected envelope kind {env.kind}")

    def fire(self, round_no: int, inbox: list[Envelope]) -> list[Envelope]:
        out: list[Envelope] = []
        if not self.initialized:
            self.initialized = True
            self.state = fresh_state(self.params.K, self.domain, self.streams, self.forced)
            if self.keep_position_history:
                self.position_history[0] = self.state.position
            for j in self.L:
                out.append(Envelope(Kind.VALUE, 0, self.id, j, values=self.state.position))
        for env in inbox:
            self._absorb(env)

        progress = True
        while progress:
            progress = False
            best = self.best_buf.pop(self.own_iter, None)
            if best is not None:
                self._apply_update(best, round_no, out)
                progress = True
                continue
            if (self.H and not self.done and self.edge_done_iter < self.own_iter
                    and all((self.own_iter, h) in self.values_buf for h in self.H)):
                self._send_edge_costs(out)
                progress = True
            if self.is_root:
                t = self.fitness_next
                if (t == self.own_iter and not self.done
                        and self.acc_count.get(t, 0) == self.expected):
                    self._judge(t)
                    progress = True
            elif self.L:
                t = self.fitness_next
                if self.acc_count.get(t, 0) == self.expected:
                    fit = self.acc.pop(t)
                    self.acc_count.pop(t)
                    out.append(Envelope(Kind.AGG_FITNESS, t, self.id, self.parent, fitness=fit))
                    self.fitness_next = t + 1
                    progress = True
        return out

    def _apply_update(self, best: BestInfo, round_no: int, out: list[Envelope]):
        r1, r2 = self.streams.update_uniforms(best.iteration, self.params.K)
        apply_best(self.state, best, self.params, self.domain, r1, r2)
        self.applied_best_round[best.iteration] = round_no
        self.own_iter = best.iteration + 1
        if self.keep_position_history:
            self.position_history[self.own_iter] = self.state.position
        # the final verdict still floods down so every agent consumes it; the
        # `done` guard on the evaluation phase stops the cascade afterwards
        for j in self.L:
            out.append(Envelope(Kind.UPDATE, self.own_iter, self.id, j,
                                values=self.state.position, best=best))

    def _send_edge_costs(self, out: list[Envelope]):
        t = self.own_iter
        own = self.state.position
        for h in self.H:
            h_values = self.values_buf.pop((t, h))
            con = self.constraint_with[h]
            if con.i == h:
                fit = evaluate_edge(con.cost, h_values, own)
            else:
                fit = evaluate_edge(con.cost, own, h_values)
            out.append(Envelope(Kind.EDGE_FITNESS, t, self.id, h, fitness=fit))
        self.edge_done_iter = t

    def _judge(self, t: int):
        if self.expected:
            fit = self.acc.pop(t)
            self.acc_count.pop(t)
        else:
            fit = np.zeros(self.params.K)  # isolated root: empty objective
        best = root_update(fit, self.pbest_fitness, self.gbest_fitness, self.gbest_index, t)
        self.pbest_fitness = best.pbest_fitness
        self.gbest_fitness = best.gbest_fitness
        self.gbest_index = best.gbest_index
        self.completed.append((t, best, fit))
        self.best_buf[t] = best  # picked up by the local update phase
        self.fitness_next = t + 1

    def describe_block(self) -> str:
        waits = []
        if self.H and self.edge_done_iter < self.own_iter:
            missing = [h for h in self.H if (self.own_iter, h) not in self.values_buf]
            waits.append(f"values({self.own_iter}) from {missing}")
        if self.is_root or self.L:
            t = self.fitness_next
            waits.append(f"fitness({t}): {self.acc_count.get(t, 0)}/{self.expected}")
        if not waits:
            waits.append(f"verdict({self.own_iter})")
        return f"{self.id}@iter {self.own_iter} awaiting " + "; ".join(waits)


@dataclass(slots=True)
class RoundReport:
    round: int
    delivered: int
    fired: int
    sent: int


class Simulator:
    """Round executor: deliver last round's envelopes, fire recipients in
    ordinal order, queue their sends for the next round."""

    def __init__(self, problem: Problem, params: SwarmParams, iterations: int,
                 force_init: dict[str, list[float]] | None = None,
                 keep_position_history: bool = False,
                 keep_fitness_history: bool = False,
                 record_envelopes: bool = False,
                 log=None):
        if iterations < 1:
            raise ValueError("iterations must be >= 1")
        self.log = log  # callable(str) for the per-round event log, or None
        self.problem = problem
        self.params = params
        self.iterations = iterations
        self.tree = build_bfs_pseudotree(problem)
        self.keep_fitness_history = keep_fitness_history
        self.record_envelopes = record_envelopes
        self.fitness_history: dict[int, np.ndarray] = {}
        self.delivered_log: list[tuple[int, Envelope]] = []

        if force_init is not None:
            missing = [a for a in problem.ids if a not in force_init]
            if missing:
                raise ValueError(f"force_init is missing agents: {missing}")
        self.machines = [
            AgentMachine(
                agent_id, problem, self.tree, params, iterations,
                np.asarray(force_init[agent_id], dtype=np.float64) if force_init else None,
                keep_position_history,
            )
            for agent_id in problem.ids
        ]
        self._by_id = {m.id: m for m in self.machines}
        self.root = self._by_id[self.tree.root]
        self.round = 0
        self.queue: list[Envelope] = []
        self.cum_envelopes = 0
        self.cum_scalars = 0
        self.trace = AnytimeTrace()

        for machine in self.machines:
            self._register_sends(machine, machine.fire(0, []))
        self._drain_root(0)

    def _register_sends(self, machine: AgentMachine, envs: list[Envelope]):
        for env in envs:
            self.cum_envelopes += 1
            self.cum_scalars += envelope_scalars(env, self.params.K)
            key = (env.iteration, env.kind)
            machine.sent_counts[key] = machine.sent_counts.get(key, 0) + 1
        self.queue.extend(envs)

    def _drain_root(self, round_no: int):
        for t, best, fit in self.root.completed:
            self.trace.rows.append(TraceRow(
                iteration=t + 1,
                round=round_no,
                gbest_fitness=float(best.gbest_fitness),
                envelopes=self.cum_envelopes,
                scalars=self.cum_scalars,
            ))
            if self.keep_fitness_history:
                self.fitness_history[t] = fit
            if self.log is not None:
                self.log(f"round {round_no}: iteration {t + 1} judged, "
                         f"gbest={best.gbest_fitness!r} changed={best.gbest_changed}")
        self.root.completed.clear()

    @property
    def quiescent(self) -> bool:
        return not self.queue and all(m.done for m in self.machines)

    def step(self) -> RoundReport:
        """Deliver everything queued last round, then fire the recipients."""
        self.round += 1
        deliveries, self.queue = self.queue, []
        inboxes: dict[str, list[Envelope]] = {}
        for env in deliveries:
            inboxes.setdefault(env.recipient, []).append(env)
            if self.record_envelopes:
                self.delivered_log.append((self.round, env))
        fired = 0
        sent_before = self.cum_envelopes
        for machine in self.machines:
            inbox = inboxes.get(machine.id)
            if inbox is not None:
                fired += 1
                self._register_sends(machine, machine.fire(self.round, inbox))
                self._drain_root(self.round)
        report = RoundReport(self.round, len(deliveries), fired, self.cum_envelopes - sent_before)
        if self.log is not None:
            self.log(f"round {report.round}: delivered {report.delivered}, "
                     f"fired {report.fired}, sent {report.sent}")
        return report

    def run_to_quiescence(self) -> AnytimeTrace:
        while not self.quiescent:
            if not self.queue:
                blocked = [m.describe_block() for m in self.machines if not m.done]
                raise RuntimeError(
                    "deadlock: no envelopes in flight but agents are blocked:\n  "
                    + "\n  ".join(blocked)
                )
            self.step()
        assert len(self.trace.rows) == self.iterations
        return self.trace


def run(problem: Problem, params: SwarmParams, iterations: int,
        force_init: dict[str, list[float]] | None = None) -> AnytimeTrace:
    """Run the full distributed solve and return the root-observed trace."""
    sim = Simulator(problem, params, iterations, force_init=force_init)
    return sim.run_to_quiescence()
