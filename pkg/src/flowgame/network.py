"""Capacitated directed multigraphs with exact rational capacities.

The data model underneath everything else: immutable networks whose arcs
are the players of the induced cooperative game.  All capacity arithmetic
is exact (``fractions.Fraction``); nothing in this package ever rounds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import (
    DuplicateArcLabel,
    NotAcyclic,
    NotUnique,
    PathLimitExceeded,
    NegativeCapacity,
    SelfLoop,
    SourceEqualsSink,
    UnknownArcId,
    UnknownVertex,
)

CapacityLike = Union[int, str, Fraction]

#: A coalition is just a set of arc labels.
Coalition = frozenset


def as_capacity(value: CapacityLike) -> Fraction:
    """Convert ``value`` to an exact non-negative rational.

    Accepts ints, Fractions and strings ("7", "2/3", "0.25"); floats are
    rejected outright because binary rounding would poison every equality
    comparison downstream.
    """
    if isinstance(value, float):
        raise TypeError(
            f"capacity {value!r} is a float; pass an int, Fraction or string "
            "so the value stays exact"
        )
    cap = value if isinstance(value, Fraction) else Fraction(value)
    if cap < 0:
        raise ValueError(f"capacity must be non-negative, got {cap}")
    return cap


@dataclass(frozen=True)
class Arc:
    """One capacitated arc; its label is the player's identity."""

    label: str
    tail: str
    head: str
    capacity: Fraction


@dataclass(frozen=True)
class StPath:
    """A simple source-to-sink path, identified by its ordered arc labels."""

    arcs: tuple[str, ...]
    vertices: tuple[str, ...]
    capacity: Fraction

    def __contains__(self, label: str) -> bool:
        return label in self.arcs

    def __len__(self) -> int:
        return len(self.arcs)


class FlowNetwork:
    """Immutable directed multigraph with a distinguished source and sink.

    Invariants are enforced at construction, so every live instance is
    valid: unique arc labels, declared endpoints, no self-loops, and
    source distinct from sink.  Parallel arcs are allowed and are distinct
    players.  Instances are safe to share between threads.
    """

    def __init__(
        self,
        vertices: Iterable[str],
        arcs: Iterable[Union[Arc, tuple]],
        source: str,
        sink: str,
    ):
        ordered = []
        seen = set()
        for v in vertices:
            if v not in seen:
                seen.add(v)
                ordered.append(v)
        self.vertices: tuple[str, ...] = tuple(ordered)
        self._vertex_set = frozenset(self.vertices)
        normalized = []
        for a in arcs:
            if not isinstance(a, Arc):
                label, tail, head, cap = a
                a = Arc(str(label), str(tail), str(head), as_capacity(cap))
            elif not isinstance(a.capacity, Fraction):
                a = Arc(a.label, a.tail, a.head, as_capacity(a.capacity))
            normalized.append(a)
        self.arcs: tuple[Arc, ...] = tuple(normalized)
        self.source = source
        self.sink = sink
        index = {}
        for a in self.arcs:
            if a.label in index:
                raise DuplicateArcLabel(a.label)
            index[a.label] = a
        self._arc_index = index
        validate(self)

    # -- basic queries -------------------------------------------------

    def arc(self, label: str) -> Arc:
        try:
            return self._arc_index[label]
        except KeyError:
            raise UnknownArcId(label) from None

    def has_arc(self, label: str) -> bool:
        return label in self._arc_index

    @property
    def arc_labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.arcs)

    @cached_property
    def arc_position(self) -> dict:
        """label -> index into ``arcs`` (insertion order)."""
        return {a.label: i for i, a in enumerate(self.arcs)}

    def players(self) -> frozenset:
        return frozenset(self._arc_index)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FlowNetwork):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.arcs == other.arcs
            and self.source == other.source
            and self.sink == other.sink
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.arcs, self.source, self.sink))

    def __repr__(self) -> str:
        return (
            f"FlowNetwork({len(self.vertices)} vertices, {len(self.arcs)} arcs, "
            f"{self.source!r}->{self.sink!r})"
        )

    # -- cached adjacency ----------------------------------------------

    @cached_property
    def out_arcs(self) -> dict:
        """vertex -> list of arc indices leaving it, in insertion order."""
        adj = {v: [] for v in self.vertices}
        for i, a in enumerate(self.arcs):
            adj[a.tail].append(i)
        return adj

    @cached_property
    def in_arcs(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for i, a in enumerate(self.arcs):
            adj[a.head].append(i)
        return adj

    @cached_property
    def _sorted_out_arcs(self) -> dict:
        """Adjacency with arcs ordered by label; drives lexicographic path search."""
        return {
            v: sorted(idxs, key=lambda i: self.arcs[i].label)
            for v, idxs in self.out_arcs.items()
        }

    def replace_arcs(self, arcs: Sequence[Arc]) -> "FlowNetwork":
        return FlowNetwork(self.vertices, arcs, self.source, self.sink)


def validate(network: FlowNetwork) -> None:
    """Check every structural invariant; raise a specific error otherwise.

    Called automatically at construction, so it only ever fails for
    hand-rolled inputs.
    """
    if network.source == network.sink:
        raise SourceEqualsSink(network.source)
    declared = network._vertex_set
    if network.source not in declared:
        raise UnknownVertex(network.source, "source")
    if network.sink not in declared:
        raise UnknownVertex(network.sink, "sink")
    for a in network.arcs:
        if a.tail not in declared:
            raise UnknownVertex(a.tail, f"tail of arc {a.label!r}")
        if a.head not in declared:
            raise UnknownVertex(a.head, f"head of arc {a.label!r}")
        if a.tail == a.head:
            raise SelfLoop(a.label, a.tail)
        if a.capacity < 0:
            raise NegativeCapacity(a.label, a.capacity)


# -- reachability and reduction ---------------------------------------


def _reach(network: FlowNetwork, start: str, adjacency: dict, endpoint) -> set:
    seen = {start}
    queue = deque([start])
    arcs = network.arcs
    while queue:
        v = queue.popleft()
        for i in adjacency[v]:
            w = endpoint(arcs[i])
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def reachable_from_source(network: FlowNetwork) -> set:
    """Vertices reachable from the source along arc directions (one traversal)."""
    return _reach(network, network.source, network.out_arcs, lambda a: a.head)


def coreaches_sink(network: FlowNetwork) -> set:
    """Vertices from which the sink is reachable (one traversal of the reverse graph)."""
    return _reach(network, network.sink, network.in_arcs, lambda a: a.tail)


@dataclass(frozen=True)
class ReductionResult:
    network: FlowNetwork
    removed: tuple[str, ...]


def reduce_network(network: FlowNetwork) -> ReductionResult:
    """Strip arcs that cannot carry source-sink flow.

    Deletes every arc whose tail is unreachable from the source or whose
    head cannot reach the sink, plus every zero-capacity arc (any path
    through one has capacity zero), and repeats until stable.  The
    removed arcs are dummy players: they never change a coalition's
    value.  On acyclic results, every surviving arc lies on at least one
    simple source-sink path; on cyclic results the criterion can retain
    arcs that sit only on cycles (the recognizer deals with those).
    """
    current = network
    removed: list[str] = []
    while True:
        v_s = reachable_from_source(current)
        v_t = coreaches_sink(current)
        keep, drop = [], []
        for a in current.arcs:
            if a.capacity == 0 or a.tail not in v_s or a.head not in v_t:
                drop.append(a.label)
            else:
                keep.append(a)
        if not drop:
            return ReductionResult(current, tuple(removed))
        removed.extend(drop)
        current = current.replace_arcs(keep)


# -- acyclicity --------------------------------------------------------


@dataclass(frozen=True)
class AcyclicityResult:
    acyclic: bool
    #: topological vertex order when acyclic, else None
    order: Optional[tuple[str, ...]]
    #: arc labels of one directed cycle when cyclic, else None
    cycle: Optional[tuple[str, ...]]


def is_acyclic(network: FlowNetwork) -> AcyclicityResult:
    """Kahn's algorithm; returns a topological order or one concrete cycle."""
    indeg = {v: 0 for v in network.vertices}
    for a in network.arcs:
        indeg[a.head] += 1
    queue = deque(v for v in network.vertices if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for i in network.out_arcs[v]:
            w = network.arcs[i].head
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) == len(network.vertices):
        return AcyclicityResult(True, tuple(order), None)
    remaining = {v for v in network.vertices if indeg[v] > 0}
    return AcyclicityResult(False, None, _find_cycle(network, remaining))


def _find_cycle(network: FlowNetwork, remaining: set) -> tuple[str, ...]:
    # Iterative DFS inside the cyclic remainder; every vertex here has an
    # incoming arc from the remainder, and following remainder arcs must
    # eventually revisit the stack.
    arcs = network.arcs
    start = next(v for v in network.vertices if v in remaining)
    on_stack = {start: None}  # vertex -> arc index that led to it
    stack = [(start, iter(network.out_arcs[start]))]
    visited = {start}
    while stack:
        v, it = stack[-1]
        for i in it:
            w = arcs[i].head
            if w not in remaining:
                continue
            if w in on_stack:
                # unwind the stack from w to v, then close with arc i
                cycle = []
                collecting = False
                for sv, _ in stack:
                    if sv == w:
                        collecting = True
                        continue
                    if collecting:
                        cycle.append(on_stack[sv])
                cycle.append(i)
                return tuple(arcs[j].label for j in cycle)
            if w not in visited:
                visited.add(w)
                on_stack[w] = i
                stack.append((w, iter(network.out_arcs[w])))
                break
        else:
            stack.pop()
            on_stack.pop(v, None)
            if not stack and remaining - visited:
                start = next(u for u in network.vertices if u in remaining - visited)
                visited.add(start)
                on_stack = {start: None}
                stack = [(start, iter(network.out_arcs[start]))]
    raise AssertionError("cyclic remainder without a findable cycle")


# -- path counting -----------------------------------------------------

MANY = 2  # saturation point: 0, 1, or "two or more"


def _require_topological_order(network: FlowNetwork) -> tuple[str, ...]:
    result = is_acyclic(network)
    if not result.acyclic:
        raise NotAcyclic(result.cycle)
    return result.order


def _path_count_tables(network: FlowNetwork, order: tuple[str, ...]):
    """Per-vertex counts of source->v and v->sink paths, saturated at 2."""
    arcs = network.arcs
    n_s = {v: 0 for v in network.vertices}
    n_s[network.source] = 1
    for v in order:
        c = n_s[v]
        if c:
            for i in network.out_arcs[v]:
                w = arcs[i].head
                n_s[w] = min(MANY, n_s[w] + c)
    n_t = {v: 0 for v in network.vertices}
    n_t[network.sink] = 1
    for v in reversed(order):
        c = n_t[v]
        if c:
            for i in network.in_arcs[v]:
                w = arcs[i].tail
                n_t[w] = min(MANY, n_t[w] + c)
    return n_s, n_t


def count_paths_through(network: FlowNetwork) -> dict:
    """Saturating count of simple source-sink paths through each arc.

    Returns ``{label: 0 | 1 | 2}`` where 2 means "two or more".  Two
    dynamic-programming passes in topological order; counts saturate so
    the result is overflow-proof even when the true counts are
    astronomical.
    """
    order = _require_topological_order(network)
    n_s, n_t = _path_count_tables(network, order)
    return {
        a.label: min(MANY, n_s[a.tail] * n_t[a.head])
        for a in network.arcs
    }


def trace_unique_path(network: FlowNetwork, label: str) -> StPath:
    """Reconstruct the single source-sink path through ``label``.

    Walks backward from the arc's tail (exactly one incoming arc carries a
    nonzero source-side count) and forward from its head symmetrically.
    Requires that the arc lie on exactly one path.
    """
    arc = network.arc(label)
    order = _require_topological_order(network)
    n_s, n_t = _path_count_tables(network, order)
    count = min(MANY, n_s[arc.tail] * n_t[arc.head])
    if count != 1:
        raise NotUnique(label, count)
    return _trace_with_tables(network, network.arc_position[label], n_s, n_t)


def _trace_with_tables(network: FlowNetwork, arc_idx: int, n_s, n_t) -> StPath:
    # Valid only when the arc's path count is exactly 1: then every vertex
    # on the walk has a single positive-count neighbour on each side.
    arcs = network.arcs
    arc = arcs[arc_idx]
    back: list[int] = []
    v = arc.tail
    while v != network.source:
        (i,) = [i for i in network.in_arcs[v] if n_s[arcs[i].tail] > 0]
        back.append(i)
        v = arcs[i].tail
    forward: list[int] = []
    v = arc.head
    while v != network.sink:
        (i,) = [i for i in network.out_arcs[v] if n_t[arcs[i].head] > 0]
        forward.append(i)
        v = arcs[i].head
    idxs = list(reversed(back)) + [arc_idx] + forward
    return _path_from_indices(network, idxs)


def _path_from_indices(network: FlowNetwork, idxs: Sequence[int]) -> StPath:
    arcs = [network.arcs[i] for i in idxs]
    vertices = [arcs[0].tail] + [a.head for a in arcs]
    cap = min(a.capacity for a in arcs)
    return StPath(tuple(a.label for a in arcs), tuple(vertices), cap)


# -- simple path enumeration ------------------------------------------


def _iter_simple_paths(
    network: FlowNetwork,
    start: str,
    goal: str,
    blocked: frozenset = frozenset(),
    allowed_arcs: Optional[set] = None,
) -> Iterator[tuple[int, ...]]:
    """Backtracking enumeration of simple paths, lexicographic by arc label.

    Yields tuples of arc indices.  ``blocked`` vertices are never entered;
    ``allowed_arcs`` (indices) restricts the usable arc set.  Iterative, so
    deep networks cannot hit the recursion limit.
    """
    if start == goal:
        yield ()
        return
    if start in blocked or goal in blocked:
        return
    arcs = network.arcs
    adj = network._sorted_out_arcs
    visited = {start}
    chosen: list[int] = []
    frames = [(start, iter(adj[start]))]
    while frames:
        v, it = frames[-1]
        advanced = False
        for i in it:
            if allowed_arcs is not None and i not in allowed_arcs:
                continue
            w = arcs[i].head
            if w in visited or w in blocked:
                continue
            if w == goal:
                yield tuple(chosen) + (i,)
                continue
            visited.add(w)
            chosen.append(i)
            frames.append((w, iter(adj[w])))
            advanced = True
            break
        if not advanced:
            frames.pop()
            if chosen:
                chosen.pop()
            visited.discard(v)


def iter_paths_through_arc(
    network: FlowNetwork, label: str, allowed_arcs: Optional[set] = None
) -> Iterator[StPath]:
    """All simple source-sink paths containing the given arc, lazily.

    Combines every simple source->tail prefix with every vertex-disjoint
    head->sink suffix.  Worst-case exponential; callers bound consumption.
    """
    arc = network.arc(label)
    arc_idx = network.arc_position[label]
    if allowed_arcs is not None and arc_idx not in allowed_arcs:
        return
    s, t = network.source, network.sink
    if arc.head == s or arc.tail == t:
        return
    prefix_blocked = frozenset({arc.head, t})
    for prefix in _iter_simple_paths(network, s, arc.tail, prefix_blocked, allowed_arcs):
        used = {s}
        used.update(network.arcs[i].head for i in prefix)
        for suffix in _iter_simple_paths(
            network, arc.head, t, frozenset(used), allowed_arcs
        ):
            yield _path_from_indices(network, list(prefix) + [arc_idx] + list(suffix))


def enumerate_simple_paths(network: FlowNetwork, limit: int = 10_000) -> list[StPath]:
    """All simple source-sink paths, in lexicographic arc-label order.

    Intended for small instances; raises ``PathLimitExceeded`` as soon as
    more than ``limit`` paths exist.
    """
    out = []
    for idxs in _iter_simple_paths(network, network.source, network.sink):
        if len(out) >= limit:
            raise PathLimitExceeded(limit)
        out.append(_path_from_indices(network, idxs))
    return out


def lies_on_simple_path(network: FlowNetwork, label: str) -> bool:
    """Exact test: does some simple source-sink path use this arc?

    On acyclic networks this reduces to the linear-time reachability
    criterion (source reaches the tail, the head reaches the sink), which
    is exact there.  On cyclic networks it falls back to backtracking
    search, exponential in the worst case.
    """
    arc = network.arc(label)
    if is_acyclic(network).acyclic:
        return (
            arc.tail in reachable_from_source(network)
            and arc.head in coreaches_sink(network)
        )
    return next(iter_paths_through_arc(network, label), None) is not None
