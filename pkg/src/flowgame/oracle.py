"""Exhaustive reference layer for the cooperative game on a network.

Everything here is exponential in the number of arcs and exact to the
last rational.  These routines are the ground truth that the fast
recognizer is validated against, so they deliberately share none of its
structural reasoning: coalition values come from minimum cuts / maximum
flows, convexity from checking the supermodularity inequality on every
coalition pair, and so on.

Coalitions are bitmasks over the network's arc insertion order
internally; the public surface speaks sets of arc labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .errors import (
    IncompleteScheme,
    NotAPermutation,
    NotEfficient,
    TooManyPlayers,
    UnknownArcId,
)
from .maxflow import max_flow
from .network import FlowNetwork, enumerate_simple_paths

RationalLike = Union[int, str, Fraction]

# numpy engines bail out to exact big-int code above these limits
_INT64_SAFE = 1 << 61
_CUT_ENUM_LIMIT = 26  # bipartitions * coalitions <= 2**26 elements


def as_rational(value: RationalLike) -> Fraction:
    """Exact conversion for payoffs; floats are refused (they round)."""
    if isinstance(value, float):
        raise TypeError(f"{value!r} is a float; pass int, Fraction or string")
    return value if isinstance(value, Fraction) else Fraction(value)


def gamma(network: FlowNetwork, coalition: Optional[Iterable[str]] = None) -> Fraction:
    """Worth of a coalition: the max-flow value of its sub-network."""
    return max_flow(network, coalition).value


# -- the memoized coalition-value table --------------------------------


@dataclass(frozen=True)
class GameTable:
    """Values of all ``2**n`` coalitions, scaled to a common denominator.

    ``scaled[mask] / denominator`` is the exact worth of the coalition
    whose members are the set bits of ``mask`` under ``labels`` order.
    """

    labels: tuple[str, ...]
    scaled: tuple
    denominator: int

    @property
    def n(self) -> int:
        return len(self.labels)

    def mask_of(self, coalition: Iterable[str]) -> int:
        positions = {lbl: i for i, lbl in enumerate(self.labels)}
        mask = 0
        for label in coalition:
            try:
                mask |= 1 << positions[label]
            except KeyError:
                raise UnknownArcId(label) from None
        return mask

    def coalition_of(self, mask: int) -> frozenset:
        return frozenset(lbl for i, lbl in enumerate(self.labels) if mask >> i & 1)

    def value(self, coalition_or_mask) -> Fraction:
        mask = (
            coalition_or_mask
            if isinstance(coalition_or_mask, int)
            else self.mask_of(coalition_or_mask)
        )
        return Fraction(int(self.scaled[mask]), self.denominator)


def _scaled_capacities(network: FlowNetwork):
    denom = 1
    for a in network.arcs:
        denom = denom * a.capacity.denominator // math.gcd(denom, a.capacity.denominator)
    caps = [int(a.capacity * denom) for a in network.arcs]
    return caps, denom


def game_table(network: FlowNetwork, max_players: int = 16) -> GameTable:
    """Memoize the worth of every coalition.

    Uses brute-force minimum-cut enumeration (the worth equals the
    smallest crossing capacity over all source-side vertex sets) when the
    vertex count permits, vectorized over all coalitions at once;
    otherwise runs one max-flow per coalition.  Both engines are exact
    and agree by flow/cut duality.
    """
    labels = network.arc_labels
    n = len(labels)
    if n > max_players:
        raise TooManyPlayers(n, max_players)
    caps, denom = _scaled_capacities(network)
    inner = [v for v in network.vertices if v not in (network.source, network.sink)]
    m = len(inner)
    total = sum(caps)

    if m <= 16 and m + n <= _CUT_ENUM_LIMIT:
        cross_masks = _crossing_masks(network, inner, m)
        if 2 * total < _INT64_SAFE:
            scaled = _cut_table_numpy(caps, n, cross_masks)
        else:
            scaled = _cut_table_python(caps, n, cross_masks)
    else:
        scaled = [
            int(max_flow(network, _mask_coalition(labels, mask)).value * denom)
            for mask in range(1 << n)
        ]
    return GameTable(labels, tuple(int(v) for v in scaled), denom)


def _mask_coalition(labels, mask):
    return [lbl for i, lbl in enumerate(labels) if mask >> i & 1]


def _crossing_masks(network: FlowNetwork, inner, m):
    """Arc bitmask crossing each source-side bipartition."""
    source = network.source
    masks = []
    for r in range(1 << m):
        side = {source}
        side.update(inner[i] for i in range(m) if r >> i & 1)
        mask = 0
        for j, a in enumerate(network.arcs):
            if a.tail in side and a.head not in side:
                mask |= 1 << j
        masks.append(mask)
    return masks


def _subset_sums_numpy(caps, n):
    w = np.zeros(1, dtype=np.int64)
    for c in caps:
        w = np.concatenate([w, w + c])
    return w


def _cut_table_numpy(caps, n, cross_masks):
    w = _subset_sums_numpy(caps, n)
    masks = np.arange(1 << n, dtype=np.int64)
    g = None
    for cm in cross_masks:
        cand = w[masks & cm]
        g = cand if g is None else np.minimum(g, cand)
    return g


def _cut_table_python(caps, n, cross_masks):
    w = [0]
    for c in caps:
        w += [x + c for x in w]
    g = [min(w[s & cm] for cm in cross_masks) for s in range(1 << n)]
    return g


# -- convexity by exhaustion -------------------------------------------


@dataclass(frozen=True)
class ConvexityViolation:
    """A witnessed failure of non-decreasing marginal contributions.

    ``player`` gains strictly less when joining ``larger`` than when
    joining ``smaller`` even though ``smaller`` is contained in
    ``larger``; the four coalition values are recorded exactly.
    """

    player: str
    smaller: frozenset
    larger: frozenset
    value_smaller: Fraction
    value_smaller_with: Fraction
    value_larger: Fraction
    value_larger_with: Fraction

    def holds(self) -> bool:
        """Re-check the inequality from the recorded values."""
        return (
            self.smaller <= self.larger
            and self.player not in self.larger
            and (self.value_larger_with - self.value_larger)
            < (self.value_smaller_with - self.value_smaller)
        )


@lru_cache(maxsize=8)
def _pair_indices(n: int):
    size = 1 << n
    masks = np.arange(size, dtype=np.int32)
    return np.bitwise_or.outer(masks, masks), np.bitwise_and.outer(masks, masks)


def is_convex_bruteforce(
    network: FlowNetwork, max_players: int = 16
) -> Optional[ConvexityViolation]:
    """Decide supermodularity by checking every pair of coalitions.

    Memoizes all coalition values first, then tests
    ``v(S) + v(T) <= v(S | T) + v(S & T)`` over all ordered mask pairs in
    ascending numeric order; the first violating pair is converted to the
    single-player marginal-contribution form.  Returns None when the game
    is convex.
    """
    table = game_table(network, max_players)
    n = table.n
    if n <= 1:
        return None
    g = np.asarray(table.scaled)
    size = 1 << n
    pair = None
    if int(g.max(initial=0)) * 2 < _INT64_SAFE and n <= 10:
        g64 = g.astype(np.int64)
        ors, ands = _pair_indices(n)
        bad = (g64[:, None] + g64[None, :]) > (g64[ors] + g64[ands])
        if bad.any():
            flat = int(np.argmax(bad))
            pair = divmod(flat, size)
    else:
        scaled = table.scaled
        for a in range(size):
            ga = scaled[a]
            for b in range(size):
                if ga + scaled[b] > scaled[a | b] + scaled[a & b]:
                    pair = (a, b)
                    break
            if pair:
                break
    if pair is None:
        return None
    return _violation_from_pair(table, *pair)


def _violation_from_pair(table: GameTable, a: int, b: int) -> ConvexityViolation:
    # Telescope the set inequality into a one-player marginal violation:
    # walking the elements of a \ b up both chains, some step must shrink.
    scaled = table.scaled
    low, high = a & b, b
    for i in range(table.n):
        bit = 1 << i
        if not (a & bit) or (b & bit):
            continue
        if scaled[high | bit] - scaled[high] < scaled[low | bit] - scaled[low]:
            d = table.denominator
            return ConvexityViolation(
                player=table.labels[i],
                smaller=table.coalition_of(low),
                larger=table.coalition_of(high),
                value_smaller=Fraction(scaled[low], d),
                value_smaller_with=Fraction(scaled[low | bit], d),
                value_larger=Fraction(scaled[high], d),
                value_larger_with=Fraction(scaled[high | bit], d),
            )
        low |= bit
        high |= bit
    raise AssertionError("violating pair did not telescope")


# -- unanimity coordinates ----------------------------------------------


def _moebius_scaled(table: GameTable):
    n = table.n
    bound = (1 << n) * max(abs(int(v)) for v in table.scaled) if table.scaled else 0
    if bound < _INT64_SAFE:
        f = np.array(table.scaled, dtype=np.int64)
        for i in range(n):
            view = f.reshape(-1, 2, 1 << i)
            view[:, 1, :] -= view[:, 0, :]
        return [int(v) for v in f]
    f = list(table.scaled)
    for i in range(n):
        bit = 1 << i
        for m in range(1 << n):
            if m & bit:
                f[m] -= f[m ^ bit]
    return f


def dividends(network: FlowNetwork, max_players: int = 16) -> dict:
    """Unanimity coordinates of the game, one per non-empty coalition.

    Computed by exact subset inversion of the coalition-value table; the
    coordinates reconstruct every coalition's worth as the sum over its
    subsets.
    """
    table = game_table(network, max_players)
    f = _moebius_scaled(table)
    d = table.denominator
    return {
        table.coalition_of(mask): Fraction(f[mask], d)
        for mask in range(1, 1 << table.n)
    }


# -- standard solution concepts -----------------------------------------


def shapley_bruteforce(network: FlowNetwork, max_players: int = 10) -> dict:
    """Shapley payoff of every arc: average marginal contribution over
    all player orders.

    Evaluated through the exact order-counting identity (each coalition S
    not containing i is preceded by i in ``|S|! (n-1-|S|)!`` of the
    ``n!`` orders), which is the same average without materializing the
    factorial enumeration.  The result is cross-checked internally
    against the unanimity-coordinate form ``sum_{T : i in T} d(T)/|T|``.
    """
    table = game_table(network, max_players)
    n = table.n
    scaled = table.scaled
    if n == 0:
        return {}
    fact = [math.factorial(k) for k in range(n + 1)]
    weight = [Fraction(fact[k] * fact[n - 1 - k], fact[n]) for k in range(n)]
    acc = [Fraction(0)] * n
    for s in range(1 << n):
        k = s.bit_count()
        base = scaled[s]
        for i in range(n):
            bit = 1 << i
            if not s & bit:
                marg = scaled[s | bit] - base
                if marg:
                    acc[i] += weight[k] * marg
    payoffs = {table.labels[i]: acc[i] / table.denominator for i in range(n)}

    mob = _moebius_scaled(table)
    check = {lbl: Fraction(0) for lbl in table.labels}
    for mask in range(1, 1 << n):
        share = Fraction(mob[mask], mask.bit_count() * table.denominator)
        if share:
            for i in range(n):
                if mask >> i & 1:
                    check[table.labels[i]] += share
    if check != payoffs:  # pragma: no cover - internal consistency
        raise AssertionError("order-average and dividend-form Shapley disagree")
    return payoffs


def marginal_vector(network: FlowNetwork, order: Iterable[str]) -> dict:
    """Payoffs when players join one by one in ``order``.

    Each player receives the increase in worth its arrival causes; worth
    is evaluated by max-flow on every prefix.
    """
    seq = tuple(order)
    if sorted(seq) != sorted(network.arc_labels):
        raise NotAPermutation(seq)
    payoffs = {}
    prefix: list[str] = []
    before = Fraction(0)
    for label in seq:
        prefix.append(label)
        after = gamma(network, prefix)
        payoffs[label] = after - before
        before = after
    return payoffs


def core_membership(
    network: FlowNetwork,
    allocation: Mapping[str, RationalLike],
    max_players: int = 16,
) -> Optional[frozenset]:
    """Exhaustive core test for an allocation.

    Requires exact efficiency (raising ``NotEfficient`` otherwise), then
    scans all coalitions in ascending bitmask order and returns the first
    one whose members are paid less than they could earn alone, or None
    if the allocation is in the core.
    """
    table = game_table(network, max_players)
    n = table.n
    pays = [as_rational(allocation.get(lbl, 0)) for lbl in table.labels]
    extra = set(allocation) - set(table.labels)
    if extra:
        raise UnknownArcId(sorted(extra)[0])
    total = sum(pays, Fraction(0))
    grand = table.value((1 << n) - 1)
    if total != grand:
        raise NotEfficient(total, grand)
    # exact integer comparison on a common scale
    denom = table.denominator
    for p in pays:
        denom = denom * p.denominator // math.gcd(denom, p.denominator)
    pay_scaled = [int(p * denom) for p in pays]
    factor = denom // table.denominator
    xsum = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        xsum[mask] = xsum[mask ^ low] + pay_scaled[low.bit_length() - 1]
    for mask in range(1, 1 << n):
        if xsum[mask] < table.scaled[mask] * factor:
            return table.coalition_of(mask)
    return None


@dataclass(frozen=True)
class PmasFailure:
    """Why a candidate allocation scheme is not population monotonic."""

    kind: str  # "efficiency" or "monotonicity"
    coalition: frozenset
    larger: Optional[frozenset] = None
    player: Optional[str] = None


def verify_pmas(
    network: FlowNetwork,
    scheme: Mapping,
    max_players: int = 16,
) -> Optional[PmasFailure]:
    """Check a per-coalition allocation scheme exhaustively.

    The scheme must allocate exactly each coalition's worth among its own
    members, and no member's payoff may shrink when the coalition grows.
    Coalitions are scanned in ascending bitmask order (pairs by smaller
    mask, then larger); the first failure is reported, None when the
    scheme is a PMAS.
    """
    table = game_table(network, max_players)
    n = table.n
    normalized = {frozenset(k): v for k, v in scheme.items()}
    size = 1 << n
    payoffs: list = [None] * size
    for mask in range(1, size):
        coalition = table.coalition_of(mask)
        if coalition not in normalized:
            raise IncompleteScheme(coalition)
        alloc = normalized[coalition]
        if set(alloc) != set(coalition):
            raise IncompleteScheme(coalition)
        payoffs[mask] = {lbl: as_rational(x) for lbl, x in alloc.items()}
    for mask in range(1, size):
        if sum(payoffs[mask].values(), Fraction(0)) != table.value(mask):
            return PmasFailure("efficiency", table.coalition_of(mask))
    for small in range(1, size):
        rest = ~small & (size - 1)
        add = rest
        while add:
            large = small | add
            ps, pl = payoffs[small], payoffs[large]
            for lbl in table.labels:
                if lbl in ps and ps[lbl] > pl[lbl]:
                    return PmasFailure(
                        "monotonicity",
                        table.coalition_of(small),
                        table.coalition_of(large),
                        lbl,
                    )
            add = (add - 1) & rest
    return None


# -- definitional bottleneck reference ----------------------------------


def bottleneck_arcs_bruteforce(network: FlowNetwork, limit: int = 10_000) -> frozenset:
    """Arcs achieving the minimum capacity on some simple source-sink path.

    Straight from the definition via full path enumeration; the
    independent reference for the recognizer's traversal-based bottleneck
    extraction.
    """
    out = set()
    for path in enumerate_simple_paths(network, limit):
        for label in path.arcs:
            if network.arc(label).capacity == path.capacity:
                out.add(label)
    return frozenset(out)
