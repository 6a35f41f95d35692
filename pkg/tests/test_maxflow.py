import random
from fractions import Fraction

import pytest

from flowgame.errors import UnknownArcId
from flowgame.maxflow import max_flow, min_cut
from flowgame.network import FlowNetwork, is_acyclic

from conftest import n1, n2, n6, random_network


class TestMaxFlowValues:
    def test_chain(self):
        assert max_flow(n1(), {"sa", "at"}).value == 2

    def test_parallel_sum(self):
        assert max_flow(n2()).value == 5

    def test_no_path_is_zero(self):
        assert max_flow(n2(), {"e1", "e2"}).value == 0

    def test_single_path_of_two(self):
        assert max_flow(n6(), {"sa", "at"}).value == 3

    def test_unknown_arc(self):
        with pytest.raises(UnknownArcId):
            max_flow(n1(), {"nope"})

    def test_deterministic(self):
        a = max_flow(n6())
        b = max_flow(n6())
        assert a == b


class TestMinCut:
    def test_chain_cut(self):
        cut = min_cut(n1())
        assert cut.arcs == frozenset({"sa"}) and cut.capacity == 2

    def test_source_side_rule(self):
        # both {sa} and {e1,e2} have capacity 5; the residual source side wins
        cut = min_cut(n2())
        assert cut.arcs == frozenset({"sa"}) and cut.capacity == 5

    def test_empty_coalition(self):
        cut = min_cut(n2(), set())
        assert cut.arcs == frozenset() and cut.capacity == 0


def _check_feasible(net, coalition, assignment):
    members = set(coalition)
    inflow = {v: Fraction(0) for v in net.vertices}
    outflow = {v: Fraction(0) for v in net.vertices}
    for label, f in assignment.flow.items():
        assert label in members
        arc = net.arc(label)
        assert 0 <= f <= arc.capacity
        outflow[arc.tail] += f
        inflow[arc.head] += f
    for v in net.vertices:
        if v not in (net.source, net.sink):
            assert inflow[v] == outflow[v], f"conservation fails at {v}"
    assert assignment.value == outflow[net.source] - inflow[net.source]


def _decompose_into_paths(net, assignment):
    """Greedy path stripping; only valid on acyclic networks."""
    residual = {lbl: f for lbl, f in assignment.flow.items() if f > 0}
    total = Fraction(0)
    while True:
        # walk greedily from the source along positive-flow arcs
        path = []
        v = net.source
        while v != net.sink:
            step = None
            for i in net.out_arcs[v]:
                a = net.arcs[i]
                if residual.get(a.label, 0) > 0:
                    step = a
                    break
            if step is None:
                break
            path.append(step)
            v = step.head
        if v != net.sink or not path:
            break
        push = min(residual[a.label] for a in path)
        for a in path:
            residual[a.label] -= push
        total += push
    assert all(f == 0 for f in residual.values()), "leftover flow after stripping"
    return total


class TestFlowProperties:
    def test_duality_on_fixtures(self, fixture_network):
        assert max_flow(fixture_network).value == min_cut(fixture_network).capacity

    def test_duality_and_feasibility_random(self):
        rng = random.Random(101)
        for _ in range(200):
            net = random_network(rng)
            labels = list(net.arc_labels)
            coalition = set(rng.sample(labels, rng.randint(0, len(labels))))
            assignment = max_flow(net, coalition)
            _check_feasible(net, coalition, assignment)
            assert assignment.value == min_cut(net, coalition).capacity

    def test_monotone_in_coalition(self):
        rng = random.Random(202)
        for _ in range(200):
            net = random_network(rng)
            labels = list(net.arc_labels)
            small = set(rng.sample(labels, rng.randint(0, len(labels))))
            extra = set(rng.sample(labels, rng.randint(0, len(labels))))
            large = small | extra
            assert max_flow(net, small).value <= max_flow(net, large).value

    def test_path_decomposition_recovers_value(self):
        rng = random.Random(303)
        checked = 0
        for _ in range(300):
            net = random_network(rng)
            if not is_acyclic(net).acyclic:
                continue
            assignment = max_flow(net)
            assert _decompose_into_paths(net, assignment) == assignment.value
            checked += 1
        assert checked > 50

    def test_scaling_equivariance(self):
        rng = random.Random(404)
        for _ in range(50):
            net = random_network(rng, max_arcs=8)
            k = Fraction(rng.randint(1, 9), rng.randint(1, 5))
            scaled = FlowNetwork(
                net.vertices,
                [(a.label, a.tail, a.head, a.capacity * k) for a in net.arcs],
                net.source,
                net.sink,
            )
            assert max_flow(scaled).value == k * max_flow(net).value

    def test_exact_rational_value(self):
        net = FlowNetwork(
            ["s", "a", "t"],
            [("sa", "s", "a", Fraction(1, 3)), ("at", "a", "t", Fraction(2, 5))],
            "s",
            "t",
        )
        assert max_flow(net).value == Fraction(1, 3)
