"""The AB elimination procedure and cross-intersecting certificate checks.

A run of the procedure on a disjointness graph repeatedly picks a surviving
instance B_i, a neighbor A_i of B_i, and removes everything disjoint from
A_i.  The recorded (A_i, B_i) pairs form a skew cross-intersecting sequence,
so the run length is bounded by C(2k, k); the tool re-verifies that bound
on every trace rather than assuming it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb

from .core import (
    CapacityError,
    ConsistencyError,
    DisjointnessGraph,
    Verdict,
    VertexSet,
)

_INT64_MAX = 2**63 - 1


class IsolatedVertexError(ValueError):
    """The input graph has a degree-0 instance, so elimination cannot run."""

    def __init__(self, instance: int, edge: VertexSet):
        super().__init__(
            f"instance {instance} ({edge}) is disjoint from no other instance"
        )
        self.instance = instance
        self.edge = edge


class PreconditionError(ValueError):
    """A checker was invoked outside its stated hypotheses."""


class SetPairSequence:
    """Ordered (A_i, B_i) pairs with uniform sizes |A_i| = a, |B_i| = b."""

    __slots__ = ("_pairs", "_a_size", "_b_size")

    def __init__(self, pairs):
        pairs = tuple((a, b) for a, b in pairs)
        a_size = b_size = None
        for a, b in pairs:
            if a_size is None:
                a_size, b_size = len(a), len(b)
            elif len(a) != a_size or len(b) != b_size:
                raise ValueError(
                    f"pair ({a}, {b}) breaks the uniform sizes ({a_size}, {b_size})"
                )
        self._pairs = pairs
        self._a_size = a_size
        self._b_size = b_size

    @property
    def pairs(self) -> tuple[tuple[VertexSet, VertexSet], ...]:
        return self._pairs

    @property
    def a_size(self) -> int | None:
        return self._a_size

    @property
    def b_size(self) -> int | None:
        return self._b_size

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetPairSequence):
            return NotImplemented
        return self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        return f"SetPairSequence({list(self._pairs)!r})"


@dataclass(frozen=True)
class AbTrace:
    """Record of one elimination run."""

    sequence: SetPairSequence
    eliminated_per_step: tuple[int, ...]
    strategy: str


@dataclass(frozen=True)
class PairViolation:
    """A pair index (self condition) or index pair (cross condition)."""

    kind: str  # "self" or "cross"
    i: int
    j: int


def run_ab(
    graph: DisjointnessGraph,
    strategy: str = "lex",
    seed: int = 0,
) -> AbTrace:
    """Run the elimination procedure until no instance survives.

    Strategies: "lex" picks the lowest surviving instance index for B_i and
    the lowest-index neighbor for A_i; "random" draws both uniformly from a
    seeded generator.  A_i is taken among *surviving* neighbors of B_i when
    any exist; otherwise among all neighbors (the procedure only requires
    some neighbor, and one always exists since no instance is isolated).
    """
    if strategy not in ("lex", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    n = graph.num_vertices
    for u in range(n):
        if graph.degrees[u] == 0:
            raise IsolatedVertexError(u, graph.instances[u])

    rng = random.Random(seed) if strategy == "random" else None
    alive = (1 << n) - 1
    pairs: list[tuple[VertexSet, VertexSet]] = []
    eliminated: list[int] = []

    def pick(mask: int) -> int:
        if rng is None:
            return (mask & -mask).bit_length() - 1
        bits = []
        while mask:
            low = mask & -mask
            bits.append(low.bit_length() - 1)
            mask ^= low
        return rng.choice(bits)

    while alive:
        b = pick(alive)
        candidates = graph.adjacency[b] & alive
        if candidates == 0:
            candidates = graph.adjacency[b]
        a = pick(candidates)
        removed = graph.adjacency[a] & alive
        eliminated.append(removed.bit_count())
        alive &= ~removed
        pairs.append((graph.instances[a], graph.instances[b]))

    if n > 0:
        bound = comb(2 * graph.k, graph.k)
        if len(pairs) > bound:
            raise ConsistencyError(
                f"elimination took {len(pairs)} steps, past the certificate "
                f"bound {bound}"
            )
    descriptor = "deterministic-lex" if rng is None else f"seeded-random({seed})"
    return AbTrace(SetPairSequence(pairs), tuple(eliminated), descriptor)


def _violations(seq: SetPairSequence, skew: bool, cap: int) -> list[PairViolation]:
    if cap < 1:
        raise ValueError("witness cap must be at least 1")
    pairs = seq.pairs
    m = len(pairs)
    out: list[PairViolation] = []
    for i in range(m):
        if not pairs[i][0].isdisjoint(pairs[i][1]):
            out.append(PairViolation("self", i, i))
            if len(out) >= cap:
                return out
    for i in range(m):
        for j in range(m):
            if j == i or (skew and j < i):
                continue
            if pairs[i][0].isdisjoint(pairs[j][1]):
                out.append(PairViolation("cross", i, j))
                if len(out) >= cap:
                    return out
    return out


def check_skew_cross_intersecting(seq: SetPairSequence, witness_cap: int = 10) -> Verdict:
    """A_i disjoint from B_i for all i, and A_i meets B_j for all i < j."""
    found = _violations(seq, skew=True, cap=witness_cap)
    return Verdict(not found, tuple(found))


def check_cross_intersecting(seq: SetPairSequence, witness_cap: int = 10) -> Verdict:
    """A_i disjoint from B_i for all i, and A_i meets B_j for all i != j."""
    found = _violations(seq, skew=False, cap=witness_cap)
    return Verdict(not found, tuple(found))


def bollobas_bound(a: int, b: int) -> int:
    """C(a+b, b), the certificate-length bound for (a,b)-set-pair sequences."""
    if a < 0 or b < 0:
        raise ValueError(f"sizes must be nonnegative, got a={a}, b={b}")
    value = comb(a + b, b)
    if value > _INT64_MAX:
        raise CapacityError(f"C({a + b},{b}) exceeds 2**63-1")
    return value


@dataclass(frozen=True)
class ExtremalStructure:
    """Recovered base set, or the index where the forced structure failed."""

    base: VertexSet | None
    failed_index: int | None

    @property
    def found(self) -> bool:
        return self.base is not None


def detect_extremal_structure(seq: SetPairSequence) -> ExtremalStructure:
    """Recover the (a+b)-set S with every pair a complementary split of S.

    Preconditions (violations raise PreconditionError as a distinct failure
    mode): the sequence is cross-intersecting and has exactly C(a+b, a)
    pairs.  Under those hypotheses the structure is forced; a failure result
    would contradict the certificate bound and is therefore returned as an
    internal-consistency alarm rather than raised.
    """
    if len(seq) == 0:
        raise PreconditionError("empty sequence has no recoverable structure")
    a, b = seq.a_size, seq.b_size
    expected = comb(a + b, a)
    if len(seq) != expected:
        raise PreconditionError(
            f"sequence has {len(seq)} pairs; the extremal case needs "
            f"C({a + b},{a}) = {expected}"
        )
    verdict = check_cross_intersecting(seq)
    if not verdict.holds:
        raise PreconditionError(
            f"sequence is not cross-intersecting (first violation: "
            f"{verdict.witnesses[0]})"
        )
    first_a, first_b = seq.pairs[0]
    base = first_a | first_b
    for i, (ai, bi) in enumerate(seq.pairs):
        if not ai.issubset(base) or bi != base - ai:
            return ExtremalStructure(None, i)
    return ExtremalStructure(base, None)
