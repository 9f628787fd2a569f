import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmdcop import (
    Constraint,
    ContinuousDomain,
    GenSpec,
    Problem,
    QuadraticCost,
    build_bfs_pseudotree,
    generate,
    priority_less,
)
from swarmdcop.pseudotree import render


def test_worked_example_tree(fig1):
    tree = build_bfs_pseudotree(fig1)
    assert tree.root == "x1"
    assert tree.depth == {"x1": 0, "x2": 1, "x3": 1, "x4": 1}
    assert tree.d == 1
    assert tree.H["x3"] == ["x1"]
    assert tree.L["x3"] == ["x4"]
    assert tree.parent == {"x2": "x1", "x3": "x1", "x4": "x1"}
    assert tree.children["x1"] == ["x2", "x3", "x4"]
    # x1 expects 3 edge costs from L plus one aggregate from x3 (the only
    # child with a nonempty L); x3 expects just x4's edge cost
    assert tree.expected_fitness_msgs == {"x1": 4, "x2": 0, "x3": 1, "x4": 0}


def test_single_agent_tree():
    problem = Problem(domains={"x1": ContinuousDomain(-1, 1)}, constraints=[])
    tree = build_bfs_pseudotree(problem)
    assert tree.root == "x1"
    assert tree.d == 0
    assert tree.H["x1"] == [] and tree.L["x1"] == []
    assert tree.expected_fitness_msgs["x1"] == 0


def test_path_graph_tree():
    problem = Problem(
        domains={a: ContinuousDomain(-1, 1) for a in ("x1", "x2", "x3")},
        constraints=[
            Constraint("x1", "x2", QuadraticCost(1, 0, 0)),
            Constraint("x2", "x3", QuadraticCost(1, 0, 0)),
        ],
    )
    tree = build_bfs_pseudotree(problem)
    assert tree.parent["x2"] == "x1"
    assert tree.parent["x3"] == "x2"
    assert tree.d == 2


def test_priority_less(fig1):
    tree = build_bfs_pseudotree(fig1)
    assert priority_less(tree, "x4", "x1")          # x1 outranks everything
    assert not priority_less(tree, "x1", "x4")
    assert priority_less(tree, "x3", "x2")          # same depth: alphabetical
    assert not priority_less(tree, "x2", "x3")
    assert not priority_less(tree, "x1", "x1")      # strict order
    with pytest.raises(KeyError):
        priority_less(tree, "x1", "x99")


def test_render_is_textual(fig1):
    text = render(build_bfs_pseudotree(fig1))
    assert "root: x1" in text
    assert "x3" in text and "H={x1}" in text


@settings(max_examples=40)
@given(
    seed=st.integers(0, 2**64 - 1),
    n=st.integers(2, 14),
    topology=st.sampled_from(["erdos_renyi", "scale_free", "random_tree"]),
)
def test_tree_structure_invariants(seed, n, topology):
    problem = generate(GenSpec(topology=topology, n=n, seed=seed, m=min(2, n - 1)))
    tree = build_bfs_pseudotree(problem)

    # exactly one endpoint of every constraint holds the other in its L set
    for con in problem.constraints:
        i_holds = con.j in tree.L[con.i]
        j_holds = con.i in tree.L[con.j]
        assert i_holds != j_holds

    assert sum(len(tree.L[a]) for a in problem.ids) == len(problem.constraints)

    for agent in problem.ids:
        # H/L partition the neighbor set
        nbrs = set(problem.neighbors()[agent])
        assert set(tree.H[agent]) | set(tree.L[agent]) == nbrs
        assert set(tree.H[agent]) & set(tree.L[agent]) == set()
        if agent != tree.root:
            assert tree.H[agent], f"non-root {agent} must have higher neighbors"
            # parent chain reaches the root in depth(agent) steps
            hops, node = 0, agent
            while node != tree.root:
                assert tree.depth[tree.parent[node]] == tree.depth[node] - 1
                node = tree.parent[node]
                hops += 1
            assert hops == tree.depth[agent]
        # recount the expected fitness messages from first principles
        expected = len(tree.L[agent]) + sum(
            1 for child in tree.children[agent] if tree.L[child]
        )
        assert tree.expected_fitness_msgs[agent] == expected
