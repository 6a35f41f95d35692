"""Seeded instance generators for testing and benchmarking.

``gen_convex`` builds networks that are convex by construction: paths
hang off a shared trunk like branches off a spine, each path owns a
private bottleneck, and every shared arc is given at least the summed
capacity of the paths through it.  ``gen_broken`` applies one targeted
perturbation to such a network so that exactly one of the recognition
conditions fails.

All randomness flows through ``random.Random(seed)``; identical seeds
give byte-identical networks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .network import Arc, FlowNetwork

BROKEN_KINDS = ("cycle", "shared_bottleneck", "capacity_deficit")


@dataclass(frozen=True)
class ConvexGenParams:
    path_count: int = 4
    max_prefix_depth: int = 2
    capacity_low: int = 1
    capacity_high: int = 9
    max_tail_length: int = 3

    def validate(self) -> None:
        if self.path_count < 1:
            raise ValueError("path_count must be positive")
        if self.max_prefix_depth < 0:
            raise ValueError("max_prefix_depth must be non-negative")
        if not 1 <= self.capacity_low <= self.capacity_high:
            raise ValueError("need 1 <= capacity_low <= capacity_high")
        if self.max_tail_length < 1:
            raise ValueError("max_tail_length must be positive")


@dataclass
class _PathPlan:
    depth: int  # trunk arcs shared before branching
    tail: int  # private arcs from the branch vertex to the sink
    bottleneck_at: int  # position of the capacity-defining private arc
    bottleneck_cap: int


def _draw_plans(rng: random.Random, params: ConvexGenParams) -> list[_PathPlan]:
    plans = []
    for _ in range(params.path_count):
        tail = rng.randint(1, params.max_tail_length)
        plans.append(
            _PathPlan(
                depth=rng.randint(0, params.max_prefix_depth),
                tail=tail,
                bottleneck_at=rng.randint(0, tail - 1),
                bottleneck_cap=rng.randint(params.capacity_low, params.capacity_high),
            )
        )
    return plans


def _materialize(rng: random.Random, plans: list[_PathPlan]) -> FlowNetwork:
    trunk_len = max((p.depth for p in plans), default=0)
    vertices = ["s"] + [f"u{j}" for j in range(1, trunk_len + 1)]
    arcs: list[Arc] = []

    def trunk_vertex(j: int) -> str:
        return "s" if j == 0 else f"u{j}"

    for j in range(trunk_len):
        through = [p.bottleneck_cap for p in plans if p.depth > j]
        cap = sum(through) + rng.randint(0, max(p.bottleneck_cap for p in plans))
        arcs.append(Arc(f"c{j}", trunk_vertex(j), trunk_vertex(j + 1), Fraction(cap)))

    for i, plan in enumerate(plans):
        prev = trunk_vertex(plan.depth)
        for k in range(plan.tail):
            if k == plan.tail - 1:
                nxt = "t"
            else:
                nxt = f"p{i}x{k}"
                vertices.append(nxt)
            if k == plan.bottleneck_at:
                cap = plan.bottleneck_cap
            else:
                cap = plan.bottleneck_cap + rng.randint(0, plan.bottleneck_cap)
            arcs.append(Arc(f"p{i}a{k}", prev, nxt, Fraction(cap)))
            prev = nxt
    vertices.append("t")

    return FlowNetwork(vertices, arcs, "s", "t")


def gen_convex(seed: int, params: ConvexGenParams = ConvexGenParams()) -> FlowNetwork:
    """Generate a network whose game is convex by construction.

    Every path's capacity is pinned by its private bottleneck arc, and
    shared trunk arcs receive at least the sum of the capacities of the
    paths crossing them, so no capacity competition can arise.
    """
    params.validate()
    rng = random.Random(seed)
    plans = _draw_plans(rng, params)
    return _materialize(rng, plans)


def gen_broken(seed: int, which: str) -> FlowNetwork:
    """Generate a network failing exactly one recognition condition.

    ``which`` selects the defect: ``cycle`` adds a two-arc cycle between
    two private branches (both of its arcs sit on real source-sink
    paths, so they are not dummies); ``shared_bottleneck`` adds a source
    shortcut onto a bottleneck arc's tail, putting that bottleneck on a
    second path; ``capacity_deficit`` lowers the first trunk arc strictly
    between the largest single demand and the total demand across it.
    """
    if which not in BROKEN_KINDS:
        raise ValueError(f"which must be one of {BROKEN_KINDS}, got {which!r}")
    rng = random.Random(seed)
    params = ConvexGenParams(
        path_count=rng.randint(2, 3),
        max_prefix_depth=rng.randint(1, 2),
        capacity_low=2,
        capacity_high=9,
    )
    plans = _draw_plans(rng, params)
    if which == "cycle":
        # both perturbed branches need an interior private vertex
        for plan in plans[:2]:
            plan.tail = max(plan.tail, 2)
            plan.bottleneck_at = min(plan.bottleneck_at, plan.tail - 1)
    elif which == "shared_bottleneck":
        plans[0].tail = max(plans[0].tail, 2)
        plans[0].bottleneck_at = max(1, min(plans[0].bottleneck_at, plans[0].tail - 1))
    else:
        plans[0].depth = max(plans[0].depth, 1)
        plans[1].depth = max(plans[1].depth, 1)
    net = _materialize(rng, plans)

    if which == "cycle":
        x0, x1 = "p0x0", "p1x0"
        extra = [
            Arc("w01", x0, x1, Fraction(1)),
            Arc("w10", x1, x0, Fraction(1)),
        ]
        return FlowNetwork(net.vertices, list(net.arcs) + extra, "s", "t")

    if which == "shared_bottleneck":
        plan = plans[0]
        bottleneck = net.arc(f"p0a{plan.bottleneck_at}")
        extra = Arc("w0", "s", bottleneck.tail, Fraction(plan.bottleneck_cap))
        return FlowNetwork(net.vertices, list(net.arcs) + [extra], "s", "t")

    # capacity deficit on the first trunk arc
    through = [p.bottleneck_cap for p in plans if p.depth > 0]
    new_cap = Fraction(max(through) + sum(through), 2)
    patched = [
        Arc(a.label, a.tail, a.head, new_cap) if a.label == "c0" else a
        for a in net.arcs
    ]
    return FlowNetwork(net.vertices, patched, "s", "t")
