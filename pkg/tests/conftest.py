import pytest

from swarmdcop import Constraint, ContinuousDomain, Problem, QuadraticCost


def make_fig1() -> Problem:
    """4-agent worked example: x1-x2, x1-x3, x1-x4 plus cross edge x3-x4."""
    return Problem(
        domains={a: ContinuousDomain(-10.0, 10.0) for a in ("x1", "x2", "x3", "x4")},
        constraints=[
            Constraint("x1", "x2", QuadraticCost(1.0, 0.0, -1.0)),   # x1^2 - x2^2
            Constraint("x1", "x3", QuadraticCost(1.0, 2.0, 0.0)),    # x1^2 + 2*x1*x3
            Constraint("x1", "x4", QuadraticCost(2.0, 0.0, -2.0)),   # 2*x1^2 - 2*x4^2
            Constraint("x3", "x4", QuadraticCost(1.0, 0.0, 3.0)),    # x3^2 + 3*x4^2
        ],
    )


# the two hand-pinned particles: P1 = (-1, 0, 2, 9.5), P2 = (3.5, 4.9, 1, 0)
FIG1_FORCE = {
    "x1": [-1.0, 3.5],
    "x2": [0.0, 4.9],
    "x3": [2.0, 1.0],
    "x4": [9.5, 0.0],
}

FIG1_FITNESS_P1 = 94.25
FIG1_FITNESS_P2 = 32.99


@pytest.fixture
def fig1() -> Problem:
    return make_fig1()


@pytest.fixture
def fig1_force() -> dict[str, list[float]]:
    return {a: list(v) for a, v in FIG1_FORCE.items()}
