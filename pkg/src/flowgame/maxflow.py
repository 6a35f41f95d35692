"""Exact maximum flow and minimum cut on coalition sub-networks.

Shortest-augmenting-path search (breadth-first).  The iteration bound
depends only on the number of vertices and arcs, never on capacity
magnitudes, so the algorithm terminates for arbitrary rational
capacities; all arithmetic is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import UnknownArcId
from .network import FlowNetwork

ZERO = Fraction(0)


@dataclass(frozen=True)
class FlowAssignment:
    """A feasible flow: per-arc amounts plus the total source-sink value."""

    flow: dict
    value: Fraction


@dataclass(frozen=True)
class Cut:
    """Arc set whose removal disconnects source from sink in the sub-network."""

    arcs: frozenset
    capacity: Fraction


def _coalition_indices(network: FlowNetwork, coalition: Optional[Iterable[str]]) -> list[int]:
    if coalition is None:
        return list(range(len(network.arcs)))
    members = set()
    pos = network.arc_position
    for label in coalition:
        try:
            members.add(pos[label])
        except KeyError:
            raise UnknownArcId(label) from None
    return sorted(members)  # insertion order of the network


def _solve(network: FlowNetwork, coalition: Optional[Iterable[str]]):
    """Run augmentation to optimality.

    Returns (value, flows-by-label, residual-reachable vertex set).  Arcs
    are scanned in network insertion order throughout, so results are
    deterministic.
    """
    idxs = _coalition_indices(network, coalition)
    source, sink = network.source, network.sink

    # residual edge 2k is arc idxs[k] forward, 2k+1 its reverse
    to: list[str] = []
    residual: list[Fraction] = []
    adj: dict = {}
    for k, ai in enumerate(idxs):
        a = network.arcs[ai]
        to.append(a.head)
        residual.append(a.capacity)
        to.append(a.tail)
        residual.append(ZERO)
        adj.setdefault(a.tail, []).append(2 * k)
        adj.setdefault(a.head, []).append(2 * k + 1)

    value = ZERO
    reachable = {source}
    while True:
        parent_edge = {source: -1}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            if v == sink:
                break
            for e in adj.get(v, ()):
                w = to[e]
                if w not in parent_edge and residual[e] > 0:
                    parent_edge[w] = e
                    queue.append(w)
        if sink not in parent_edge:
            reachable = set(parent_edge)
            break
        # bottleneck along the breadth-first path
        push = None
        v = sink
        while v != source:
            e = parent_edge[v]
            push = residual[e] if push is None or residual[e] < push else push
            v = to[e ^ 1]
        v = sink
        while v != source:
            e = parent_edge[v]
            residual[e] -= push
            residual[e ^ 1] += push
            v = to[e ^ 1]
        value += push

    flows = {}
    for k, ai in enumerate(idxs):
        a = network.arcs[ai]
        flows[a.label] = residual[2 * k + 1]  # reverse residual equals pushed flow
    return value, flows, reachable


def max_flow(network: FlowNetwork, coalition: Optional[Iterable[str]] = None) -> FlowAssignment:
    """Maximum source-sink flow using only the coalition's arcs.

    ``coalition=None`` means the grand coalition.  The defining quantity
    of the induced cooperative game: the returned ``value`` is the worth
    of the coalition.
    """
    value, flows, _ = _solve(network, coalition)
    return FlowAssignment(flows, value)


def min_cut(network: FlowNetwork, coalition: Optional[Iterable[str]] = None) -> Cut:
    """A minimum cut of the coalition sub-network.

    Exact duality with :func:`max_flow` holds by construction: the cut is
    read off the source side of the final residual graph, so its capacity
    equals the maximum flow value.
    """
    idxs = _coalition_indices(network, coalition)
    _, _, reachable = _solve(network, coalition)
    cut_arcs = []
    capacity = ZERO
    for ai in idxs:
        a = network.arcs[ai]
        if a.tail in reachable and a.head not in reachable:
            cut_arcs.append(a.label)
            capacity += a.capacity
    return Cut(frozenset(cut_arcs), capacity)
