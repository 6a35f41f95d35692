"""Shared fixtures: the six canonical networks and random-instance helpers."""

import random
from fractions import Fraction

import pytest

from flowgame.network import FlowNetwork


def n1():
    """Single chain: one path, capacity 2."""
    return FlowNetwork(
        ["s", "a", "t"], [("sa", "s", "a", 2), ("at", "a", "t", 3)], "s", "t"
    )


def n2():
    """Shared first arc feeding two parallel arcs; convex."""
    return FlowNetwork(
        ["s", "a", "t"],
        [("sa", "s", "a", 5), ("e1", "a", "t", 2), ("e2", "a", "t", 3)],
        "s",
        "t",
    )


def n3():
    """As n2 but the shared arc is one unit short; capacity deficit."""
    return FlowNetwork(
        ["s", "a", "t"],
        [("sa", "s", "a", 4), ("e1", "a", "t", 2), ("e2", "a", "t", 3)],
        "s",
        "t",
    )


def n4():
    """Two-in two-out crossing at one vertex; shared bottlenecks."""
    return FlowNetwork(
        ["s", "w", "t"],
        [("f1", "s", "w", 1), ("f2", "s", "w", 1), ("g1", "w", "t", 1), ("g2", "w", "t", 1)],
        "s",
        "t",
    )


def n5():
    """Genuine two-arc cycle between vertices that both reach the sink."""
    return FlowNetwork(
        ["s", "a", "b", "t"],
        [
            ("sa", "s", "a", 1),
            ("sb", "s", "b", 1),
            ("ab", "a", "b", 1),
            ("ba", "b", "a", 1),
            ("at", "a", "t", 1),
            ("bt", "b", "t", 1),
        ],
        "s",
        "t",
    )


def n6():
    """Two paths sharing their first arc; one path has two bottleneck arcs."""
    return FlowNetwork(
        ["s", "a", "b", "t"],
        [("sa", "s", "a", 5), ("ab", "a", "b", 2), ("bt", "b", "t", 2), ("at", "a", "t", 3)],
        "s",
        "t",
    )


def pendant_cycle():
    """Chain plus a side cycle whose arcs lie on no simple path."""
    return FlowNetwork(
        ["s", "a", "b", "t"],
        [("sa", "s", "a", 1), ("at", "a", "t", 1), ("ab", "a", "b", 1), ("ba", "b", "a", 1)],
        "s",
        "t",
    )


FIXTURES = {"n1": n1, "n2": n2, "n3": n3, "n4": n4, "n5": n5, "n6": n6}
CONVEX_FIXTURES = ("n1", "n2", "n6")


@pytest.fixture(params=sorted(FIXTURES))
def fixture_network(request):
    return FIXTURES[request.param]()


def random_network(
    rng: random.Random,
    max_inner: int = 4,
    max_arcs: int = 10,
    zero_rate: float = 0.05,
    denominator_limit: int = 4,
    numerator_limit: int = 12,
) -> FlowNetwork:
    """Seeded random multigraph; cyclic and degenerate shapes welcome."""
    inner = [f"v{i}" for i in range(rng.randint(0, max_inner))]
    vertices = ["s"] + inner + ["t"]
    arcs = []
    for i in range(rng.randint(1, max_arcs)):
        tail, head = rng.sample(vertices, 2)
        if rng.random() < zero_rate:
            cap = Fraction(0)
        else:
            cap = Fraction(
                rng.randint(1, numerator_limit), rng.randint(1, denominator_limit)
            )
        arcs.append((f"e{i}", tail, head, cap))
    return FlowNetwork(vertices, arcs, "s", "t")


def random_dag(
    rng: random.Random,
    max_inner: int = 3,
    max_arcs: int = 8,
    capacity_pool=(1, 2, 3, 4, 5),
) -> FlowNetwork:
    """Seeded random acyclic multigraph: arcs only go forward in a fixed order."""
    inner = [f"v{i}" for i in range(rng.randint(0, max_inner))]
    ordered = ["s"] + inner + ["t"]
    arcs = []
    for i in range(rng.randint(1, max_arcs)):
        ti = rng.randint(0, len(ordered) - 2)
        hi = rng.randint(ti + 1, len(ordered) - 1)
        arcs.append((f"e{i}", ordered[ti], ordered[hi], rng.choice(capacity_pool)))
    return FlowNetwork(ordered, arcs, "s", "t")
