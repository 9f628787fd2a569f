"""BFS pseudo-tree over the constraint graph.

The root is the alphabetically smallest agent id. Priority: smaller depth
wins, ties broken alphabetically. Each agent's neighbors split into H (higher
priority) and L (lower priority); constraint edges between same-depth agents
are cross edges that carry values and edge costs but never aggregates, which
route along tree parents only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .model import Problem


@dataclass
class PseudoTree:
    root: str
    depth: dict[str, int]
    parent: dict[str, str]          # absent for root
    children: dict[str, list[str]]  # BFS discovery (alphabetical) order
    H: dict[str, list[str]]         # higher-priority neighbors, highest first
    L: dict[str, list[str]]         # lower-priority neighbors, highest first
    d: int                          # maximum depth
    expected_fitness_msgs: dict[str, int]

    def priority_key(self, agent: str) -> tuple[int, str]:
        return (self.depth[agent], agent)


def build_bfs_pseudotree(problem: Problem) -> PseudoTree:
    """BFS from the alphabetically smallest id, neighbors visited alphabetically."""
    adjacency = problem.neighbors()
    root = problem.ids[0]
    depth = {root: 0}
    parent: dict[str, str] = {}
    children: dict[str, list[str]] = {a: [] for a in problem.ids}
    queue = deque([root])
    while queue:
        current = queue.popleft()
        for nbr in adjacency[current]:
            if nbr not in depth:
                depth[nbr] = depth[current] + 1
                parent[nbr] = current
                children[current].append(nbr)
                queue.append(nbr)
    if len(depth) != problem.n_agents:
        missing = sorted(set(problem.ids) - set(depth))
        raise ValueError(f"constraint graph is disconnected; unreachable: {missing}")

    def key(agent: str) -> tuple[int, str]:
        return (depth[agent], agent)

    higher: dict[str, list[str]] = {}
    lower: dict[str, list[str]] = {}
    for agent in problem.ids:
        higher[agent] = sorted((n for n in adjacency[agent] if key(n) < key(agent)), key=key)
        lower[agent] = sorted((n for n in adjacency[agent] if key(n) > key(agent)), key=key)

    expected = {
        agent: len(lower[agent]) + sum(1 for child in children[agent] if lower[child])
        for agent in problem.ids
    }
    return PseudoTree(
        root=root,
        depth=depth,
        parent=parent,
        children=children,
        H=higher,
        L=lower,
        d=max(depth.values()),
        expected_fitness_msgs=expected,
    )


def priority_less(tree: PseudoTree, i: str, j: str) -> bool:
    """True iff agent i has strictly lower priority than agent j."""
    for agent in (i, j):
        if agent not in tree.depth:
            raise KeyError(f"unknown agent {agent!r}")
    return tree.priority_key(i) > tree.priority_key(j)


def render(tree: PseudoTree) -> str:
    """Text dump of depths, parents and H/L sets, for docs and diagnostics."""
    lines = [f"root: {tree.root}   max depth: {tree.d}"]
    for agent in sorted(tree.depth, key=tree.priority_key):
        lines.append(
            "  {a}: depth={d} parent={p} H={{{h}}} L={{{l}}} expects={e}".format(
                a=agent,
                d=tree.depth[agent],
                p=tree.parent.get(agent, "-"),
                h=",".join(tree.H[agent]),
                l=",".join(tree.L[agent]),
                e=tree.expected_fitness_msgs[agent],
            )
        )
    return "\n".join(lines)
