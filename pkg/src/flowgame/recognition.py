"""Polynomial-time convexity recognition with certificates and witnesses.

A flow game is convex exactly when the (reduced) network is acyclic,
every bottleneck arc lies on a single source-sink path, and every shared
non-bottleneck arc can carry the combined capacity of all paths through
it.  When those conditions hold the game decomposes into one unanimity
game per path, worth that path's capacity — the certificate records the
decomposition and makes every solution concept cheap.  When they fail,
a concrete, independently checkable witness is produced.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Iterable, Optional, Union

from .errors import FlowGameError, NotAcyclic, TooManyPlayers, UnknownArcId
from .maxflow import max_flow
from .network import (
    Arc,
    FlowNetwork,
    StPath,
    _path_count_tables,
    _trace_with_tables,
    enumerate_simple_paths,
    is_acyclic,
    iter_paths_through_arc,
    lies_on_simple_path,
    reduce_network,
)

MANY = 2


class InvalidCertificate(FlowGameError):
    pass


class InvalidWitness(FlowGameError):
    pass


# -- bottleneck extraction ----------------------------------------------


@dataclass(frozen=True)
class BottleneckSet:
    """Arcs that realize the minimum capacity of some source-sink path."""

    members: frozenset
    #: for recognized-convex networks, the unique path anchored at each member
    anchored: dict = field(default_factory=dict, compare=False)


class _IncrementalReach:
    """Reachable set under arc insertions only.

    Each arc is touched O(1) amortized: once at insertion and once when
    its tail first becomes reachable.
    """

    __slots__ = ("reached", "adj")

    def __init__(self, start):
        self.reached = {start}
        self.adj = {}

    def insert(self, tail, head):
        self.adj.setdefault(tail, []).append(head)
        if tail in self.reached and head not in self.reached:
            self._grow(head)

    def _grow(self, v):
        reached = self.reached
        adj = self.adj
        stack = [v]
        reached.add(v)
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w not in reached:
                    reached.add(w)
                    stack.append(w)


def bottleneck_set(network: FlowNetwork) -> BottleneckSet:
    """Identify every bottleneck arc of an acyclic network.

    An arc (u, v) qualifies exactly when, among arcs of capacity at least
    its own, the source reaches u and v reaches the sink.  Arcs are
    processed in descending capacity order against two incrementally
    grown reachability structures, so the whole set costs
    O((|V| + |E|) log |E|) instead of one traversal pair per arc.
    """
    result = is_acyclic(network)
    if not result.acyclic:
        raise NotAcyclic(result.cycle)
    forward = _IncrementalReach(network.source)
    backward = _IncrementalReach(network.sink)
    by_cap = sorted(
        range(len(network.arcs)),
        key=lambda i: (-network.arcs[i].capacity, i),
    )
    members = []
    arcs = network.arcs
    i = 0
    while i < len(by_cap):
        j = i
        cap = arcs[by_cap[i]].capacity
        while j < len(by_cap) and arcs[by_cap[j]].capacity == cap:
            a = arcs[by_cap[j]]
            forward.insert(a.tail, a.head)
            backward.insert(a.head, a.tail)
            j += 1
        for k in range(i, j):
            a = arcs[by_cap[k]]
            if a.tail in forward.reached and a.head in backward.reached:
                members.append(a.label)
        i = j
    return BottleneckSet(frozenset(members))


# -- witnesses -----------------------------------------------------------


@dataclass(frozen=True)
class CycleWitness:
    arcs: tuple[str, ...]
    kind = "cycle"


@dataclass(frozen=True)
class SharedBottleneckWitness:
    arc: str
    paths: tuple[StPath, StPath]
    kind = "shared_bottleneck"


@dataclass(frozen=True)
class CapacityDeficitWitness:
    arc: str
    paths: tuple[StPath, ...]
    capacity: Fraction
    required: Fraction
    kind = "capacity_deficit"


@dataclass(frozen=True)
class DummyArcRetainedWitness:
    """An arc kept by reduction that lies on no simple source-sink path.

    Never produced by :func:`recognize` (such arcs are stripped and the
    pipeline restarts); part of the witness vocabulary so external
    documents mentioning one can still be validated.
    """

    arc: str
    kind = "dummy_arc_retained"


Witness = Union[
    CycleWitness, SharedBottleneckWitness, CapacityDeficitWitness, DummyArcRetainedWitness
]


# -- certificate ----------------------------------------------------------


@dataclass
class Certificate:
    """Unanimity decomposition of a recognized-convex game.

    ``paths`` is the deduplicated set of all source-sink paths of the
    reduced network (lexicographic by arc labels); the game's worth on a
    coalition is the summed capacity of the paths it fully contains.
    ``ignored`` lists removed dummy arcs, which contribute nothing and
    are accepted silently in coalition queries.
    """

    paths: tuple[StPath, ...]
    bottlenecks: frozenset
    #: bottleneck label -> index into ``paths`` of its unique path
    anchor_index: dict
    members: tuple[str, ...]
    ignored: frozenset

    def __post_init__(self):
        self._bit = {lbl: i for i, lbl in enumerate(self.members)}
        self._path_masks = tuple(
            self._mask_unchecked(p.arcs) for p in self.paths
        )

    def _mask_unchecked(self, labels) -> int:
        mask = 0
        for lbl in labels:
            mask |= 1 << self._bit[lbl]
        return mask

    def coalition_mask(self, coalition: Iterable[str]) -> int:
        mask = 0
        for lbl in coalition:
            bit = self._bit.get(lbl)
            if bit is None:
                if lbl in self.ignored:
                    continue
                raise UnknownArcId(lbl)
            mask |= 1 << bit
        return mask

    @property
    def players(self) -> tuple[str, ...]:
        return self.members + tuple(sorted(self.ignored))


def gamma_fast(certificate: Certificate, coalition: Iterable[str]) -> Fraction:
    """Coalition worth straight from the decomposition.

    Sums the capacities of certificate paths fully inside the coalition;
    one constant-time bitmask test per path.
    """
    mask = certificate.coalition_mask(coalition)
    total = Fraction(0)
    for pmask, path in zip(certificate._path_masks, certificate.paths):
        if pmask & mask == pmask:
            total += path.capacity
    return total


def shapley_fast(certificate: Certificate) -> dict:
    """Closed-form Shapley payoffs for a recognized-convex game.

    Each path is a unanimity game splitting its capacity evenly among its
    arcs, so an arc earns the sum of ``capacity / length`` over the paths
    through it; removed dummies earn zero.
    """
    payoffs = {lbl: Fraction(0) for lbl in certificate.players}
    for path in certificate.paths:
        share = Fraction(path.capacity, len(path.arcs))
        for lbl in path.arcs:
            payoffs[lbl] += share
    return payoffs


def pmas_construct(certificate: Certificate, max_players: int = 12) -> dict:
    """Materialize a population monotonic allocation scheme.

    For every coalition, each member collects ``capacity / length`` from
    the contained paths through it.  Per-coalition totals equal the
    coalition's worth, and payoffs only grow as coalitions grow because
    the contained-path set grows.
    """
    players = certificate.players
    n = len(players)
    if n > max_players:
        raise TooManyPlayers(n, max_players)
    path_data = [
        (certificate._path_masks[i], p.arcs, Fraction(p.capacity, len(p.arcs)))
        for i, p in enumerate(certificate.paths)
    ]
    bit = {lbl: i for i, lbl in enumerate(players)}
    member_bits = {lbl: certificate._bit[lbl] for lbl in certificate.members}
    scheme = {}
    for mask in range(1, 1 << n):
        coalition = frozenset(lbl for lbl in players if mask >> bit[lbl] & 1)
        inner_mask = 0
        for lbl in coalition:
            b = member_bits.get(lbl)
            if b is not None:
                inner_mask |= 1 << b
        alloc = {lbl: Fraction(0) for lbl in coalition}
        for pmask, arcs, share in path_data:
            if pmask & inner_mask == pmask:
                for lbl in arcs:
                    alloc[lbl] += share
        scheme[coalition] = alloc
    return scheme


# -- the verdict ----------------------------------------------------------


@dataclass
class Verdict:
    convex: bool
    certificate: Optional[Certificate]
    witness: Optional[Witness]
    removed_dummies: tuple[str, ...]


def _strongly_connected(network: FlowNetwork) -> dict:
    """Kosaraju; vertex -> component id, iteratively (deep graphs welcome)."""
    arcs = network.arcs
    visited = set()
    order = []
    for root in network.vertices:
        if root in visited:
            continue
        visited.add(root)
        stack = [(root, iter(network.out_arcs[root]))]
        while stack:
            v, it = stack[-1]
            advanced = False
            for i in it:
                w = arcs[i].head
                if w not in visited:
                    visited.add(w)
                    stack.append((w, iter(network.out_arcs[w])))
                    advanced = True
                    break
            if not advanced:
                order.append(v)
                stack.pop()
    comp = {}
    cid = 0
    for v in reversed(order):
        if v in comp:
            continue
        comp[v] = cid
        stack = [v]
        while stack:
            u = stack.pop()
            for i in network.in_arcs[u]:
                w = arcs[i].tail
                if w not in comp:
                    comp[w] = cid
                    stack.append(w)
        cid += 1
    return comp


def _cycle_through(network: FlowNetwork, offender: Arc, comp: dict) -> tuple[str, ...]:
    """Close a directed cycle around an arc whose endpoints share a component."""
    target = offender.tail
    cid = comp[target]
    parent = {offender.head: None}
    queue = deque([offender.head])
    arcs = network.arcs
    while queue:
        v = queue.popleft()
        if v == target:
            break
        for i in network.out_arcs[v]:
            w = arcs[i].head
            if comp.get(w) == cid and w not in parent:
                parent[w] = i
                queue.append(w)
    back = []
    v = target
    while parent[v] is not None:
        i = parent[v]
        back.append(arcs[i].label)
        v = arcs[i].tail
    return (offender.label,) + tuple(reversed(back))


def _two_paths_through(network: FlowNetwork, arc: Arc) -> tuple[StPath, StPath]:
    """Two distinct source-sink paths through a bottleneck arc.

    The first is taken inside the capacity-restricted subgraph, so it
    certifiably realizes the arc's capacity as its minimum; the second is
    any other path through the arc in the full network.
    """
    allowed = {
        i for i, a in enumerate(network.arcs) if a.capacity >= arc.capacity
    }
    restricted = list(islice(iter_paths_through_arc(network, arc.label, allowed), 2))
    if len(restricted) == 2:
        return restricted[0], restricted[1]
    first = restricted[0]
    for path in iter_paths_through_arc(network, arc.label):
        if path.arcs != first.arcs:
            return first, path
    raise AssertionError("second path promised by the count was not found")


def recognize(network: FlowNetwork) -> Verdict:
    """Decide convexity of the induced game, with proof either way.

    Pipeline: strip dummy arcs; while the remainder is cyclic, classify
    every cycle-participating arc with the exact simple-path test and
    strip the dummies among them (an arc only kept alive by cycles
    changes nothing), repeating the reduction.  If a cyclic remainder has
    no dummy cycle arcs, every one of its cycles consists of arcs that
    carry real paths, and cancelling flow around such a cycle breaks the
    positive-flow requirement — a Cycle witness.  On the acyclic
    remainder, extract the bottleneck set, demand a unique path through
    every bottleneck (else SharedBottleneck), collect and deduplicate
    those paths, and demand every non-bottleneck arc cover the summed
    capacity of its paths (else CapacityDeficit).  Surviving all three
    yields the unanimity decomposition as a certificate.

    Dummy removal never changes any marginal contribution, so the verdict
    for the input network equals the verdict for the reduced one; removed
    arcs are reported in the verdict.
    """
    removed_all: list[str] = []
    current = network
    while True:
        red = reduce_network(current)
        removed_all.extend(red.removed)
        current = red.network
        result = is_acyclic(current)
        if result.acyclic:
            break
        comp = _strongly_connected(current)
        cycle_arcs = [a for a in current.arcs if comp[a.tail] == comp[a.head]]
        dropped = {
            a.label for a in cycle_arcs if not lies_on_simple_path(current, a.label)
        }
        if not dropped:
            # every cycle arc carries a real path; any one cycle disproves
            # convexity, so report the one through the first such arc
            witness = CycleWitness(_cycle_through(current, cycle_arcs[0], comp))
            return Verdict(False, None, witness, tuple(removed_all))
        removed_all.extend(a.label for a in current.arcs if a.label in dropped)
        current = current.replace_arcs(
            [a for a in current.arcs if a.label not in dropped]
        )

    order = result.order
    n_s, n_t = _path_count_tables(current, order)
    members = bottleneck_set(current).members
    ignored = frozenset(removed_all)

    for a in current.arcs:
        if a.label not in members:
            continue
        if min(MANY, n_s[a.tail] * n_t[a.head]) != 1:
            witness = SharedBottleneckWitness(a.label, _two_paths_through(current, a))
            return Verdict(False, None, witness, tuple(removed_all))

    anchor_path: dict = {}
    for idx, a in enumerate(current.arcs):
        if a.label not in members or a.label in anchor_path:
            continue
        path = _trace_with_tables(current, idx, n_s, n_t)
        for lbl in path.arcs:
            if lbl in members:
                anchor_path[lbl] = path

    unique = {}
    for path in anchor_path.values():
        unique[path.arcs] = path
    paths = tuple(unique[key] for key in sorted(unique))

    load: dict = {}
    for path in paths:
        for lbl in path.arcs:
            load[lbl] = load.get(lbl, Fraction(0)) + path.capacity
    for a in current.arcs:
        if a.label in members:
            continue
        need = load.get(a.label, Fraction(0))
        if a.capacity < need:
            through = tuple(p for p in paths if a.label in p.arcs)
            witness = CapacityDeficitWitness(a.label, through, a.capacity, need)
            return Verdict(False, None, witness, tuple(removed_all))

    path_index = {p.arcs: i for i, p in enumerate(paths)}
    anchors = {lbl: path_index[p.arcs] for lbl, p in anchor_path.items()}
    certificate = Certificate(
        paths=paths,
        bottlenecks=members,
        anchor_index=anchors,
        members=current.arc_labels,
        ignored=ignored,
    )
    return Verdict(True, certificate, None, tuple(removed_all))


# -- independent re-validation -------------------------------------------


def _check_simple_path(network: FlowNetwork, path: StPath) -> None:
    if not path.arcs:
        raise InvalidWitness("empty path")
    arcs = [network.arc(lbl) for lbl in path.arcs]
    if arcs[0].tail != network.source or arcs[-1].head != network.sink:
        raise InvalidWitness("path endpoints are not source and sink")
    for prev, nxt in zip(arcs, arcs[1:]):
        if prev.head != nxt.tail:
            raise InvalidWitness("path arcs are not consecutive")
    vertices = [arcs[0].tail] + [a.head for a in arcs]
    if len(set(vertices)) != len(vertices):
        raise InvalidWitness("path revisits a vertex")
    if tuple(vertices) != path.vertices:
        raise InvalidWitness("stored vertex sequence is wrong")
    if min(a.capacity for a in arcs) != path.capacity:
        raise InvalidWitness("stored path capacity is wrong")


def verify_witness(network: FlowNetwork, witness: Witness) -> None:
    """Re-check a witness from scratch; raises ``InvalidWitness`` if bogus."""
    if isinstance(witness, CycleWitness):
        if len(witness.arcs) < 2:
            raise InvalidWitness("cycle needs at least two arcs")
        arcs = [network.arc(lbl) for lbl in witness.arcs]
        for prev, nxt in zip(arcs, arcs[1:]):
            if prev.head != nxt.tail:
                raise InvalidWitness("cycle arcs are not consecutive")
        if arcs[-1].head != arcs[0].tail:
            raise InvalidWitness("cycle does not close")
        tails = [a.tail for a in arcs]
        if len(set(tails)) != len(tails):
            raise InvalidWitness("cycle revisits a vertex")
    elif isinstance(witness, SharedBottleneckWitness):
        p, q = witness.paths
        if p.arcs == q.arcs:
            raise InvalidWitness("the two paths are identical")
        for path in (p, q):
            _check_simple_path(network, path)
            if witness.arc not in path.arcs:
                raise InvalidWitness("path misses the shared arc")
        cap = network.arc(witness.arc).capacity
        if cap != p.capacity and cap != q.capacity:
            raise InvalidWitness("arc is not a bottleneck of either path")
    elif isinstance(witness, CapacityDeficitWitness):
        seen = set()
        total = Fraction(0)
        for path in witness.paths:
            _check_simple_path(network, path)
            if witness.arc not in path.arcs:
                raise InvalidWitness("path misses the overloaded arc")
            if path.arcs in seen:
                raise InvalidWitness("duplicate path in deficit list")
            seen.add(path.arcs)
            total += path.capacity
        cap = network.arc(witness.arc).capacity
        if witness.capacity != cap:
            raise InvalidWitness("stored arc capacity is wrong")
        if witness.required != total:
            raise InvalidWitness("stored load does not match the listed paths")
        if not cap < total:
            raise InvalidWitness("no strict deficit at the arc")
    elif isinstance(witness, DummyArcRetainedWitness):
        network.arc(witness.arc)
        if lies_on_simple_path(network, witness.arc):
            raise InvalidWitness("arc does lie on a source-sink path")
    else:
        raise InvalidWitness(f"unknown witness type {type(witness).__name__}")


def verify_certificate(network: FlowNetwork, certificate: Certificate) -> None:
    """Re-check certificate invariants; raises ``InvalidCertificate``.

    Bottlenecks are recomputed from the member sub-network with the
    traversal-based extractor, independent of how the certificate's
    paths were discovered.
    """
    labels = set(network.arc_labels)
    members = set(certificate.members)
    if members | set(certificate.ignored) != labels or (
        members & set(certificate.ignored)
    ):
        raise InvalidCertificate("members and ignored do not partition the arcs")
    sub = network.replace_arcs([a for a in network.arcs if a.label in members])
    if not is_acyclic(sub).acyclic:
        raise InvalidCertificate("member sub-network is cyclic")
    seen = set()
    covered = set()
    for path in certificate.paths:
        try:
            _check_simple_path(sub, path)
        except InvalidWitness as exc:
            raise InvalidCertificate(str(exc)) from None
        if path.capacity <= 0:
            raise InvalidCertificate("path with non-positive capacity")
        if path.arcs in seen:
            raise InvalidCertificate("duplicate path")
        seen.add(path.arcs)
        covered.update(path.arcs)
    if covered != members:
        raise InvalidCertificate("paths do not cover the member arcs")
    fresh = bottleneck_set(sub).members
    if fresh != certificate.bottlenecks:
        raise InvalidCertificate("stored bottleneck set is wrong")
    for b in fresh:
        hits = [p for p in certificate.paths if b in p.arcs]
        if len(hits) != 1:
            raise InvalidCertificate(f"bottleneck {b!r} lies on {len(hits)} paths")
        anchored = certificate.paths[certificate.anchor_index[b]]
        if anchored.arcs != hits[0].arcs:
            raise InvalidCertificate(f"anchor of {b!r} is not its path")
        if sub.arc(b).capacity != hits[0].capacity:
            raise InvalidCertificate(f"{b!r} does not realize its path capacity")
    for a in sub.arcs:
        if a.label in fresh:
            continue
        need = sum(
            (p.capacity for p in certificate.paths if a.label in p.arcs),
            Fraction(0),
        )
        if a.capacity < need:
            raise InvalidCertificate(f"arc {a.label!r} is overloaded")


# -- structural diagnostics ------------------------------------------------


@dataclass(frozen=True)
class DiagnosticCheck:
    name: str
    passed: Optional[bool]  # None: not evaluated (budget or precondition)
    detail: str


@dataclass(frozen=True)
class DiagnosticsReport:
    checks: tuple[DiagnosticCheck, ...]
    removed_dummies: tuple[str, ...]

    def check(self, name: str) -> DiagnosticCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def structural_diagnostics(network: FlowNetwork, path_limit: int = 10_000) -> DiagnosticsReport:
    """Evaluate the necessary structural conditions one by one.

    Purely informative (``recognize`` is the decision authority) and
    meant for desk-scale instances: it enumerates all simple paths and
    runs one max-flow per arc.
    """
    red = reduce_network(network)
    net = red.network
    checks = []

    acy = is_acyclic(net)
    checks.append(
        DiagnosticCheck(
            "acyclic",
            acy.acyclic,
            "no directed cycle" if acy.acyclic else f"cycle {list(acy.cycle)}",
        )
    )

    bad_vertex = None
    for v in net.vertices:
        if v in (net.source, net.sink):
            continue
        din, dout = len(net.in_arcs[v]), len(net.out_arcs[v])
        if din and dout and min(din, dout) > 1:
            bad_vertex = (v, din, dout)
            break
    checks.append(
        DiagnosticCheck(
            "internal_degree",
            bad_vertex is None,
            "every internal vertex has in- or out-degree 1"
            if bad_vertex is None
            else "vertex {} has in-degree {} and out-degree {}".format(*bad_vertex),
        )
    )

    if net.arcs:
        assignment = max_flow(net)
        idle = [lbl for lbl, f in assignment.flow.items() if f == 0]
        checks.append(
            DiagnosticCheck(
                "positive_flow",
                not idle,
                "every arc carries flow in the computed maximum flow"
                if not idle
                else f"arcs {idle} idle in the computed maximum flow",
            )
        )
        grand = assignment.value
        inessential = []
        for a in net.arcs:
            rest = [x.label for x in net.arcs if x.label != a.label]
            if max_flow(net, rest).value == grand:
                inessential.append(a.label)
        checks.append(
            DiagnosticCheck(
                "arc_essentiality",
                not inessential,
                "removing any single arc lowers the maximum flow"
                if not inessential
                else f"arcs {inessential} can be removed without loss",
            )
        )
    else:
        checks.append(DiagnosticCheck("positive_flow", True, "no arcs"))
        checks.append(DiagnosticCheck("arc_essentiality", True, "no arcs"))

    try:
        paths = enumerate_simple_paths(net, path_limit)
    except FlowGameError:
        paths = None
    if paths is None:
        for name in ("bottleneck_exclusivity", "non_bottleneck_sufficiency", "path_cover"):
            checks.append(
                DiagnosticCheck(name, None, f"more than {path_limit} paths; not evaluated")
            )
    else:
        bottlenecks = set()
        for p in paths:
            for lbl in p.arcs:
                if net.arc(lbl).capacity == p.capacity:
                    bottlenecks.add(lbl)
        shared = None
        for lbl in sorted(bottlenecks):
            hits = sum(1 for p in paths if lbl in p.arcs)
            if hits != 1:
                shared = (lbl, hits)
                break
        checks.append(
            DiagnosticCheck(
                "bottleneck_exclusivity",
                shared is None,
                "every bottleneck arc lies on exactly one path"
                if shared is None
                else "bottleneck {} lies on {} paths".format(*shared),
            )
        )
        overloaded = None
        for a in net.arcs:
            if a.label in bottlenecks:
                continue
            needed = sum((p.capacity for p in paths if a.label in p.arcs), Fraction(0))
            if a.capacity < needed:
                overloaded = (a.label, a.capacity, needed)
                break
        checks.append(
            DiagnosticCheck(
                "non_bottleneck_sufficiency",
                overloaded is None,
                "every shared arc can carry its paths' combined capacity"
                if overloaded is None
                else "arc {} has capacity {} but needs {}".format(*overloaded),
            )
        )
        covered = set()
        for p in paths:
            covered.update(p.arcs)
        uncovered = sorted(set(net.arc_labels) - covered)
        disjoint = True
        detail = "paths cover all arcs and share no bottleneck"
        for i in range(len(paths)):
            bi = bottlenecks & set(paths[i].arcs)
            for j in range(i + 1, len(paths)):
                if bi & set(paths[j].arcs):
                    disjoint = False
                    detail = "paths {} and {} share a bottleneck".format(
                        list(paths[i].arcs), list(paths[j].arcs)
                    )
                    break
            if not disjoint:
                break
        if uncovered:
            detail = f"arcs {uncovered} lie on no path"
        checks.append(
            DiagnosticCheck("path_cover", not uncovered and disjoint, detail)
        )

    return DiagnosticsReport(tuple(checks), red.removed)
