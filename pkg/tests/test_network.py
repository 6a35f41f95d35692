import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowgame.errors import (
    DuplicateArcLabel,
    NotAcyclic,
    NotUnique,
    PathLimitExceeded,
    SelfLoop,
    SourceEqualsSink,
    UnknownVertex,
)
from flowgame.network import (
    FlowNetwork,
    as_capacity,
    coreaches_sink,
    count_paths_through,
    enumerate_simple_paths,
    is_acyclic,
    lies_on_simple_path,
    reachable_from_source,
    reduce_network,
    trace_unique_path,
)

from conftest import n1, n2, n4, n5, n6, pendant_cycle, random_dag


class TestCapacity:
    def test_exact_fraction_kept(self):
        assert as_capacity("1/3") == Fraction(1, 3)
        assert as_capacity("0.25") == Fraction(1, 4)
        assert as_capacity(7) == Fraction(7)

    def test_canonical_lowest_terms(self):
        cap = as_capacity("4/6")
        assert (cap.numerator, cap.denominator) == (2, 3)

    def test_arithmetic_is_exact(self):
        third = as_capacity("1/3")
        assert third + third + third == 1
        assert min(third, as_capacity("2/5")) == third

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            as_capacity(0.5)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            as_capacity("-1")


class TestValidation:
    def test_wellformed_fixture(self):
        net = n1()
        assert net.arc_labels == ("sa", "at")

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoop):
            FlowNetwork(["s", "t"], [("x", "s", "s", 1)], "s", "t")

    def test_duplicate_arc_label(self):
        with pytest.raises(DuplicateArcLabel):
            FlowNetwork(
                ["s", "a", "t"], [("e1", "s", "a", 1), ("e1", "a", "t", 1)], "s", "t"
            )

    def test_unknown_vertex(self):
        with pytest.raises(UnknownVertex):
            FlowNetwork(["s", "t"], [("e", "s", "x", 1)], "s", "t")

    def test_source_equals_sink(self):
        with pytest.raises(SourceEqualsSink):
            FlowNetwork(["s", "t"], [], "s", "s")

    def test_parallel_arcs_are_distinct_players(self):
        net = FlowNetwork(
            ["s", "t"], [("p", "s", "t", 1), ("q", "s", "t", 2)], "s", "t"
        )
        assert net.arc("p") != net.arc("q")


class TestReachability:
    def test_chain(self):
        assert reachable_from_source(n1()) == {"s", "a", "t"}

    def test_cycle_fixture_reaches_everything(self):
        net = n5()
        assert reachable_from_source(net) == set(net.vertices)
        assert coreaches_sink(net) == set(net.vertices)

    def test_empty_arc_set(self):
        net = FlowNetwork(["s", "t"], [], "s", "t")
        assert reachable_from_source(net) == {"s"}
        assert coreaches_sink(net) == {"t"}


class TestReduce:
    def test_wellformed_unchanged(self):
        net = n1()
        result = reduce_network(net)
        assert result.removed == ()
        assert result.network is net

    def test_dangling_head_removed(self):
        net = FlowNetwork(
            ["s", "a", "x", "t"],
            [("sa", "s", "a", 2), ("at", "a", "t", 3), ("ax", "a", "x", 1)],
            "s",
            "t",
        )
        result = reduce_network(net)
        assert result.removed == ("ax",)
        assert result.network.arc_labels == ("sa", "at")

    def test_zero_capacity_removed(self):
        net = FlowNetwork(
            ["s", "a", "t"],
            [("sa", "s", "a", 2), ("at", "a", "t", 3), ("z", "s", "a", 0)],
            "s",
            "t",
        )
        assert reduce_network(net).removed == ("z",)

    def test_cascading_removal(self):
        # removing the dead-end chain's first arc orphans the second
        net = FlowNetwork(
            ["s", "a", "x", "y", "t"],
            [("sa", "s", "a", 1), ("at", "a", "t", 1), ("ax", "a", "x", 0), ("xy", "x", "y", 1)],
            "s",
            "t",
        )
        assert set(reduce_network(net).removed) == {"ax", "xy"}

    def test_criterion_keeps_cycle_only_arcs(self):
        # reachability alone cannot see that these lie on no simple path
        result = reduce_network(pendant_cycle())
        assert result.removed == ()

    def test_idempotent(self, fixture_network):
        once = reduce_network(fixture_network)
        twice = reduce_network(once.network)
        assert twice.removed == ()
        assert twice.network == once.network

    def test_idempotent_random(self):
        from conftest import random_network

        rng = random.Random(5)
        for _ in range(100):
            net = random_network(rng)
            once = reduce_network(net)
            assert reduce_network(once.network).removed == ()


class TestAcyclicity:
    def test_chain_order(self):
        result = is_acyclic(n1())
        assert result.acyclic and result.order == ("s", "a", "t")

    def test_cycle_evidence(self):
        result = is_acyclic(n5())
        assert not result.acyclic
        assert result.cycle == ("ab", "ba")

    def test_single_arc(self):
        net = FlowNetwork(["s", "t"], [("e", "s", "t", 1)], "s", "t")
        assert is_acyclic(net).acyclic

    def test_cycle_is_closed_and_simple(self):
        from conftest import random_network

        rng = random.Random(11)
        for _ in range(200):
            net = random_network(rng)
            result = is_acyclic(net)
            if result.acyclic:
                order = {v: i for i, v in enumerate(result.order)}
                for a in net.arcs:
                    assert order[a.tail] < order[a.head]
            else:
                arcs = [net.arc(lbl) for lbl in result.cycle]
                for prev, nxt in zip(arcs, arcs[1:]):
                    assert prev.head == nxt.tail
                assert arcs[-1].head == arcs[0].tail
                tails = [a.tail for a in arcs]
                assert len(set(tails)) == len(tails)


class TestPathCounting:
    def test_chain_counts(self):
        assert count_paths_through(n1()) == {"sa": 1, "at": 1}

    def test_crossing_saturates(self):
        assert count_paths_through(n4())["f1"] == 2

    def test_parallel_unique(self):
        assert count_paths_through(n2())["e1"] == 1

    def test_requires_acyclic(self):
        with pytest.raises(NotAcyclic):
            count_paths_through(n5())

    def test_matches_enumeration(self, fixture_network):
        result = is_acyclic(fixture_network)
        if not result.acyclic:
            return
        paths = enumerate_simple_paths(fixture_network)
        counts = count_paths_through(fixture_network)
        for label in fixture_network.arc_labels:
            true_count = sum(1 for p in paths if label in p.arcs)
            assert counts[label] == min(2, true_count)

    def test_matches_enumeration_random_dags(self):
        rng = random.Random(17)
        for _ in range(150):
            net = random_dag(rng)
            paths = enumerate_simple_paths(net)
            counts = count_paths_through(net)
            for label in net.arc_labels:
                true_count = sum(1 for p in paths if label in p.arcs)
                assert counts[label] == min(2, true_count)


class TestTraceUniquePath:
    def test_chain(self):
        assert trace_unique_path(n1(), "sa").arcs == ("sa", "at")

    def test_parallel(self):
        assert trace_unique_path(n2(), "e2").arcs == ("sa", "e2")

    def test_two_hop(self):
        assert trace_unique_path(n6(), "ab").arcs == ("sa", "ab", "bt")

    def test_not_unique(self):
        with pytest.raises(NotUnique):
            trace_unique_path(n4(), "f1")

    def test_not_acyclic(self):
        with pytest.raises(NotAcyclic):
            trace_unique_path(n5(), "sa")

    def test_traced_path_appears_in_enumeration(self):
        rng = random.Random(23)
        for _ in range(100):
            net = random_dag(rng)
            paths = {p.arcs for p in enumerate_simple_paths(net)}
            counts = count_paths_through(net)
            for label, count in counts.items():
                if count == 1:
                    traced = trace_unique_path(net, label)
                    assert label in traced.arcs
                    assert traced.arcs in paths


class TestEnumerateSimplePaths:
    def test_chain(self):
        assert [p.arcs for p in enumerate_simple_paths(n1())] == [("sa", "at")]

    def test_parallel_lexicographic(self):
        assert [p.arcs for p in enumerate_simple_paths(n2())] == [
            ("sa", "e1"),
            ("sa", "e2"),
        ]

    def test_crossing_has_four(self):
        paths = enumerate_simple_paths(n4())
        assert [p.arcs for p in paths] == [
            ("f1", "g1"),
            ("f1", "g2"),
            ("f2", "g1"),
            ("f2", "g2"),
        ]

    def test_limit(self):
        with pytest.raises(PathLimitExceeded):
            enumerate_simple_paths(n4(), limit=3)

    def test_capacity_is_min(self):
        for p in enumerate_simple_paths(n6()):
            net = n6()
            assert p.capacity == min(net.arc(lbl).capacity for lbl in p.arcs)

    def test_paths_are_simple_even_with_cycles(self):
        for p in enumerate_simple_paths(n5()):
            assert len(set(p.vertices)) == len(p.vertices)
            assert p.vertices[0] == "s" and p.vertices[-1] == "t"


class TestLiesOnSimplePath:
    def test_cycle_arc_with_real_path(self):
        assert lies_on_simple_path(n5(), "ab")

    def test_pendant_cycle_arc_is_dummy(self):
        assert not lies_on_simple_path(pendant_cycle(), "ab")

    def test_chain_arc(self):
        assert lies_on_simple_path(n1(), "at")

    def test_agrees_with_enumeration(self):
        from conftest import random_network

        rng = random.Random(31)
        for _ in range(150):
            net = random_network(rng, max_arcs=7)
            on_some_path = set()
            for p in enumerate_simple_paths(net):
                on_some_path.update(p.arcs)
            for label in net.arc_labels:
                assert lies_on_simple_path(net, label) == (label in on_some_path)


@st.composite
def dag_networks(draw):
    inner = draw(st.integers(min_value=0, max_value=3))
    ordered = ["s"] + [f"v{i}" for i in range(inner)] + ["t"]
    n_arcs = draw(st.integers(min_value=1, max_value=8))
    arcs = []
    for i in range(n_arcs):
        ti = draw(st.integers(min_value=0, max_value=len(ordered) - 2))
        hi = draw(st.integers(min_value=ti + 1, max_value=len(ordered) - 1))
        cap = draw(st.integers(min_value=0, max_value=5))
        arcs.append((f"e{i}", ordered[ti], ordered[hi], cap))
    return FlowNetwork(ordered, arcs, "s", "t")


@given(dag_networks())
@settings(max_examples=60, deadline=None)
def test_reduced_acyclic_networks_have_no_dummies(net):
    reduced = reduce_network(net).network
    assert is_acyclic(reduced).acyclic
    counts = count_paths_through(reduced)
    for label in reduced.arc_labels:
        assert counts[label] >= 1
        assert lies_on_simple_path(reduced, label)
