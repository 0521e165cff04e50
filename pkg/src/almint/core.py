"""Bitset-backed set families and the structure of their disjointness graphs.

Vertices are small nonnegative integer labels.  A family is a k-uniform
multihypergraph: a list of distinct k-sets, each carrying a positive
multiplicity.  The disjointness graph has one vertex per *instance* (one
per unit of multiplicity) and joins two instances exactly when their
underlying sets are disjoint; its degree bounds encode the
[a,b]-almost-intersecting property.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

GROUND_CAP_ENV = "ALMINT_MAX_VERTICES"
_DEFAULT_GROUND_CAP = 64

DEFAULT_WITNESS_CAP = 10

COMPLETE_BIPARTITE = "complete_bipartite"
MINUS_MATCHING = "complete_bipartite_minus_matching"
OTHER = "other"


class CapacityError(Exception):
    """A requested ground set exceeds the configured vertex-label bound."""


class ConsistencyError(Exception):
    """An internal check that a proven statement guarantees has failed."""


def ground_capacity() -> int:
    """Maximum admissible vertex label, overridable via ALMINT_MAX_VERTICES."""
    raw = os.environ.get(GROUND_CAP_ENV)
    if raw is None:
        return _DEFAULT_GROUND_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise CapacityError(f"{GROUND_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise CapacityError(f"{GROUND_CAP_ENV} must be positive, got {cap}")
    return cap


def require_capacity(max_vertex: int) -> None:
    cap = ground_capacity()
    if max_vertex > cap:
        raise CapacityError(
            f"vertex label {max_vertex} exceeds the ground-set bound {cap} "
            f"(override with {GROUND_CAP_ENV})"
        )


class VertexSet:
    """Immutable set of nonnegative vertex labels backed by an int bitmask."""

    __slots__ = ("_mask",)

    def __init__(self, members: Iterable[int] = ()):
        mask = 0
        for v in members:
            if v < 0:
                raise ValueError(f"vertex labels must be nonnegative, got {v}")
            mask |= 1 << v
        self._mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> "VertexSet":
        if mask < 0:
            raise ValueError("mask must be nonnegative")
        obj = cls.__new__(cls)
        obj._mask = mask
        return obj

    @property
    def mask(self) -> int:
        return self._mask

    def __len__(self) -> int:
        return self._mask.bit_count()

    def __bool__(self) -> bool:
        return self._mask != 0

    def __contains__(self, v: int) -> bool:
        return v >= 0 and (self._mask >> v) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        m = self._mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self._mask & other._mask == 0

    def intersection_size(self, other: "VertexSet") -> int:
        return (self._mask & other._mask).bit_count()

    def issubset(self, other: "VertexSet") -> bool:
        return self._mask & ~other._mask == 0

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask | other._mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask & other._mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask & ~other._mask)

    def max_vertex(self) -> int:
        """Largest member; -1 for the empty set."""
        return self._mask.bit_length() - 1

    def sort_key(self) -> tuple[int, ...]:
        """Key giving lexicographic order on ascending member lists."""
        return tuple(self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VertexSet) and self._mask == other._mask

    def __hash__(self) -> int:
        return hash(self._mask)

    def __repr__(self) -> str:
        return "{" + ",".join(str(v) for v in self) + "}"


class Multihypergraph:
    """A k-uniform family of distinct VertexSets with positive multiplicities.

    Edge order is preserved as given; a repeated underlying set must be
    expressed through its multiplicity, never as a second entry.  The family
    is *simple* when every multiplicity is 1.
    """

    __slots__ = ("_k", "_edges")

    def __init__(self, k: int, edges: Iterable[tuple[VertexSet, int]] = ()):
        if k < 1:
            raise ValueError(f"uniformity must be positive, got {k}")
        seen: set[int] = set()
        cleaned = []
        for edge, mult in edges:
            if len(edge) != k:
                raise ValueError(f"edge {edge} has {len(edge)} vertices, expected {k}")
            if mult < 1:
                raise ValueError(f"multiplicity must be positive, got {mult} for {edge}")
            if edge.mask in seen:
                raise ValueError(f"repeated edge {edge}; use multiplicity instead")
            seen.add(edge.mask)
            cleaned.append((edge, mult))
        self._k = k
        self._edges = tuple(cleaned)

    @classmethod
    def from_sets(cls, k: int, sets: Iterable[VertexSet]) -> "Multihypergraph":
        """Build from a list of sets, merging duplicates into multiplicities."""
        order: list[int] = []
        counts: dict[int, int] = {}
        for edge in sets:
            if edge.mask not in counts:
                counts[edge.mask] = 0
                order.append(edge.mask)
            counts[edge.mask] += 1
        return cls(k, [(VertexSet.from_mask(m), counts[m]) for m in order])

    @classmethod
    def simple(cls, k: int, sets: Iterable[VertexSet]) -> "Multihypergraph":
        """Build a simple family; duplicate sets are an error."""
        return cls(k, [(edge, 1) for edge in sets])

    @property
    def k(self) -> int:
        return self._k

    @property
    def edges(self) -> tuple[tuple[VertexSet, int], ...]:
        return self._edges

    @property
    def num_distinct(self) -> int:
        return len(self._edges)

    @property
    def total_instances(self) -> int:
        return sum(mult for _, mult in self._edges)

    @property
    def is_simple(self) -> bool:
        return all(mult == 1 for _, mult in self._edges)

    @property
    def ground(self) -> VertexSet:
        mask = 0
        for edge, _ in self._edges:
            mask |= edge.mask
        return VertexSet.from_mask(mask)

    def max_vertex(self) -> int:
        """Largest vertex label used; 0 for an empty family."""
        return max((edge.max_vertex() for edge, _ in self._edges), default=0)

    def instances(self) -> tuple[VertexSet, ...]:
        """Edge instances in deterministic order: edge index, then copy slot."""
        out: list[VertexSet] = []
        for edge, mult in self._edges:
            out.extend([edge] * mult)
        return tuple(out)

    def collapsed(self) -> "Multihypergraph":
        """The simple family with the same distinct edges."""
        return Multihypergraph(self._k, [(edge, 1) for edge, _ in self._edges])

    def edge_multiset(self) -> dict[int, int]:
        return {edge.mask: mult for edge, mult in self._edges}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multihypergraph):
            return NotImplemented
        return self._k == other._k and self.edge_multiset() == other.edge_multiset()

    def __hash__(self) -> int:
        return hash((self._k, frozenset(self.edge_multiset().items())))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{edge}" + (f"*{mult}" if mult > 1 else "") for edge, mult in self._edges
        )
        return f"Multihypergraph(k={self._k}, [{body}])"


class DisjointnessGraph:
    """Graph on edge instances with adjacency = disjointness of the sets.

    Instances are numbered by edge index and then copy slot.  Two copies of
    the same edge are never adjacent (a nonempty set meets itself), so the
    graph has no self-loops.  Adjacency rows are instance-index bitmasks.
    """

    __slots__ = (
        "family",
        "k",
        "instances",
        "instance_edge",
        "adjacency",
        "degrees",
    )

    def __init__(self, family: Multihypergraph):
        self.family = family
        self.k = family.k
        edges = family.edges
        m = len(edges)

        offsets = []
        pos = 0
        for _, mult in edges:
            offsets.append(pos)
            pos += mult
        total = pos

        inst: list[VertexSet] = []
        inst_edge: list[int] = []
        for i, (edge, mult) in enumerate(edges):
            inst.extend([edge] * mult)
            inst_edge.extend([i] * mult)

        # All instances of one edge share a single adjacency mask, built from
        # the distinct-edge disjointness relation.
        block_mask = [
            ((1 << edges[i][1]) - 1) << offsets[i] for i in range(m)
        ]
        masks = [edge.mask for edge, _ in edges]
        edge_adj_mask = [0] * m
        edge_degree = [0] * m
        for i in range(m):
            mi = masks[i]
            for j in range(i + 1, m):
                if mi & masks[j] == 0:
                    edge_adj_mask[i] |= block_mask[j]
                    edge_adj_mask[j] |= block_mask[i]
                    edge_degree[i] += edges[j][1]
                    edge_degree[j] += edges[i][1]

        self.instances = tuple(inst)
        self.instance_edge = tuple(inst_edge)
        self.adjacency = tuple(edge_adj_mask[inst_edge[u]] for u in range(total))
        self.degrees = tuple(edge_degree[inst_edge[u]] for u in range(total))

    @property
    def num_vertices(self) -> int:
        return len(self.instances)

    @property
    def min_degree(self) -> int:
        return min(self.degrees, default=0)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def num_adjacent_pairs(self) -> int:
        return sum(self.degrees) // 2

    def neighbors(self, u: int) -> Iterator[int]:
        m = self.adjacency[u]
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def components(self) -> list[tuple[int, ...]]:
        """Connected components as sorted instance tuples, by least member."""
        n = self.num_vertices
        unseen = (1 << n) - 1
        out: list[tuple[int, ...]] = []
        while unseen:
            start = (unseen & -unseen).bit_length() - 1
            comp = 1 << start
            frontier = comp
            while frontier:
                grown = 0
                f = frontier
                while f:
                    low = f & -f
                    u = low.bit_length() - 1
                    grown |= self.adjacency[u]
                    f ^= low
                frontier = grown & ~comp
                comp |= grown
            out.append(tuple(_mask_bits(comp)))
            unseen &= ~comp
        return out


def _mask_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def disjointness_graph(family: Multihypergraph) -> DisjointnessGraph:
    """Disjointness graph of a family; an empty family gives an empty graph."""
    return DisjointnessGraph(family)


@dataclass(frozen=True)
class InstanceWitness:
    """An offending edge instance together with its offending count."""

    instance: int
    edge: VertexSet
    count: int


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification; witnesses are nonempty whenever it fails."""

    holds: bool
    witnesses: tuple = ()

    def __post_init__(self):
        if not self.holds and not self.witnesses:
            raise ValueError("a failing verdict must carry witnesses")


def _instance_offsets(family: Multihypergraph) -> list[int]:
    offsets = []
    pos = 0
    for _, mult in family.edges:
        offsets.append(pos)
        pos += mult
    return offsets


def _degree_verdict(
    family: Multihypergraph,
    counts: Sequence[int],
    a: int,
    b: int,
    witness_cap: int,
) -> Verdict:
    if witness_cap < 1:
        raise ValueError("witness cap must be at least 1")
    offsets = _instance_offsets(family)
    witnesses: list[InstanceWitness] = []
    holds = True
    for i, (edge, mult) in enumerate(family.edges):
        if a <= counts[i] <= b:
            continue
        holds = False
        for slot in range(mult):
            if len(witnesses) >= witness_cap:
                break
            witnesses.append(InstanceWitness(offsets[i] + slot, edge, counts[i]))
        if len(witnesses) >= witness_cap:
            break
    return Verdict(holds, tuple(witnesses))


def verify_almost_intersecting(
    family: Multihypergraph,
    a: int,
    b: int,
    witness_cap: int = DEFAULT_WITNESS_CAP,
) -> Verdict:
    """Check that every instance is disjoint from between a and b others."""
    if not 0 <= a <= b:
        raise ValueError(f"need 0 <= a <= b, got a={a}, b={b}")
    edges = family.edges
    masks = [edge.mask for edge, _ in edges]
    mults = [mult for _, mult in edges]
    m = len(edges)
    counts = [0] * m
    for i in range(m):
        mi = masks[i]
        for j in range(i + 1, m):
            if mi & masks[j] == 0:
                counts[i] += mults[j]
                counts[j] += mults[i]
    return _degree_verdict(family, counts, a, b, witness_cap)


def verify_almost_t_intersecting(
    family: Multihypergraph,
    a: int,
    b: int,
    t: int,
    witness_cap: int = DEFAULT_WITNESS_CAP,
) -> Verdict:
    """Check that each instance meets between a and b others in < t vertices.

    At t=1 this coincides with verify_almost_intersecting.  When t exceeds
    the uniformity, distinct copies of one edge count toward each other's
    tallies (they meet in exactly k < t vertices).
    """
    if not 0 <= a <= b:
        raise ValueError(f"need 0 <= a <= b, got a={a}, b={b}")
    if t < 1:
        raise ValueError(f"intersection threshold must be >= 1, got {t}")
    edges = family.edges
    masks = [edge.mask for edge, _ in edges]
    mults = [mult for _, mult in edges]
    m = len(edges)
    counts = [0] * m
    for i in range(m):
        mi = masks[i]
        for j in range(i + 1, m):
            if (mi & masks[j]).bit_count() < t:
                counts[i] += mults[j]
                counts[j] += mults[i]
    if family.k < t:
        for i in range(m):
            counts[i] += mults[i] - 1
    return _degree_verdict(family, counts, a, b, witness_cap)


def find_pairwise_disjoint(masks: Sequence[int], want: int) -> list[int] | None:
    """Indices of `want` pairwise-disjoint masks, or None.

    Greedy seeding in the given order first; exact backtracking otherwise,
    returning the lexicographically least index set found.
    """
    n = len(masks)
    if want < 1:
        raise ValueError(f"need a positive target, got {want}")
    picked: list[int] = []
    taken = 0
    for i in range(n):
        if taken & masks[i] == 0:
            picked.append(i)
            taken |= masks[i]
            if len(picked) == want:
                return picked
    if want == 1:
        return None

    chosen: list[int] = []

    def extend(start: int, used: int) -> bool:
        if len(chosen) == want:
            return True
        # not enough candidates left to finish
        if n - start < want - len(chosen):
            return False
        for i in range(start, n):
            if used & masks[i] == 0:
                chosen.append(i)
                if extend(i + 1, used | masks[i]):
                    return True
                chosen.pop()
        return False

    if extend(0, 0):
        return chosen
    return None


def has_mutually_disjoint_edges(
    family: Multihypergraph, j: int
) -> tuple[bool, tuple[VertexSet, ...]]:
    """Whether j pairwise-disjoint edges exist, with a witness edge list.

    Copies of one edge are never mutually disjoint, so the search runs over
    distinct edges (clique search in the disjointness graph).
    """
    if j < 1:
        raise ValueError(f"need j >= 1, got {j}")
    edges = [edge for edge, _ in family.edges]
    edges.sort(key=VertexSet.sort_key)
    found = find_pairwise_disjoint([e.mask for e in edges], j)
    if found is None:
        return False, ()
    return True, tuple(edges[i] for i in found)


def blocking_set_exists(
    family: Multihypergraph,
    t: int,
    restrict_to_edges: bool = False,
) -> tuple[bool, VertexSet | None]:
    """Whether some t-set of vertices meets every edge, with a witness.

    With restrict_to_edges, only t-subsets of the edges themselves are
    tried.  Enumeration is direct, so the ground set must stay within the
    configured capacity.
    """
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    ground = family.ground
    require_capacity(family.max_vertex())
    masks = [edge.mask for edge, _ in family.edges]

    from itertools import combinations

    def hits_all(candidate_mask: int) -> bool:
        return all(candidate_mask & m for m in masks)

    if restrict_to_edges:
        seen: set[tuple[int, ...]] = set()
        for edge, _ in family.edges:
            for combo in combinations(edge.members, t):
                if combo in seen:
                    continue
                seen.add(combo)
                cand = VertexSet(combo)
                if hits_all(cand.mask):
                    return True, cand
        return False, None

    for combo in combinations(ground.members, t):
        cand = VertexSet(combo)
        if hits_all(cand.mask):
            return True, cand
    return False, None


@dataclass(frozen=True)
class NeighborhoodClass:
    """Vertices sharing one exact neighborhood in the disjointness graph."""

    neighborhood: tuple[int, ...]
    members: tuple[int, ...]


@dataclass(frozen=True)
class NeighborhoodPartition:
    classes: tuple[NeighborhoodClass, ...]
    max_overlap: int


def neighborhood_partition(graph: DisjointnessGraph) -> NeighborhoodPartition:
    """Partition non-isolated instances by exact neighborhood equality.

    Also reports the largest pairwise intersection between two distinct
    neighborhoods (0 when fewer than two classes exist).
    """
    by_mask: dict[int, list[int]] = {}
    for u in range(graph.num_vertices):
        if graph.degrees[u] == 0:
            continue
        by_mask.setdefault(graph.adjacency[u], []).append(u)
    classes = sorted(by_mask.items(), key=lambda item: item[1][0])
    max_overlap = 0
    nbhd_masks = [mask for mask, _ in classes]
    for i in range(len(nbhd_masks)):
        for j in range(i + 1, len(nbhd_masks)):
            inter = (nbhd_masks[i] & nbhd_masks[j]).bit_count()
            if inter > max_overlap:
                max_overlap = inter
    return NeighborhoodPartition(
        classes=tuple(
            NeighborhoodClass(tuple(_mask_bits(mask)), tuple(members))
            for mask, members in classes
        ),
        max_overlap=max_overlap,
    )


@dataclass(frozen=True)
class ComponentTag:
    """Shape of one connected component, verified by adjacency re-check."""

    kind: str
    p: int = 0
    q: int = 0

    def label(self) -> str:
        if self.kind == COMPLETE_BIPARTITE:
            return f"K{self.p},{self.q}"
        if self.kind == MINUS_MATCHING:
            return f"K{self.p},{self.p}-M"
        return "other"


@dataclass(frozen=True)
class ClassifiedComponent:
    tag: ComponentTag
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class ComponentClassification:
    components: tuple[ClassifiedComponent, ...]
    isolated: tuple[int, ...]

    def tag_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for comp in self.components:
            label = comp.tag.label()
            counts[label] = counts.get(label, 0) + 1
        return counts


def _bipartition(graph: DisjointnessGraph, comp: tuple[int, ...]) -> tuple[int, int] | None:
    """2-coloring of a connected component as (mask0, mask1), or None."""
    color = {comp[0]: 0}
    queue = deque([comp[0]])
    masks = [1 << comp[0], 0]
    while queue:
        u = queue.popleft()
        for v in graph.neighbors(u):
            if v not in color:
                color[v] = 1 - color[u]
                masks[color[v]] |= 1 << v
                queue.append(v)
            elif color[v] == color[u]:
                return None
    return masks[0], masks[1]


def classify_components(graph: DisjointnessGraph) -> ComponentClassification:
    """Tag every component with an edge by its verified shape.

    Complete bipartite parts are reported with p <= q.  The minus-matching
    tag requires equal parts of size p with every cross pair adjacent except
    a perfect matching.  Isolated instances are listed separately.
    """
    components: list[ClassifiedComponent] = []
    isolated: list[int] = []
    for comp in graph.components():
        if len(comp) == 1 and graph.degrees[comp[0]] == 0:
            isolated.append(comp[0])
            continue
        components.append(ClassifiedComponent(_classify_one(graph, comp), comp))
    return ComponentClassification(tuple(components), tuple(isolated))


def _classify_one(graph: DisjointnessGraph, comp: tuple[int, ...]) -> ComponentTag:
    parts = _bipartition(graph, comp)
    if parts is None:
        return ComponentTag(OTHER)
    mask0, mask1 = parts
    comp_mask = mask0 | mask1
    side0 = list(_mask_bits(mask0))
    side1 = list(_mask_bits(mask1))

    complete = all(
        graph.adjacency[u] & comp_mask == mask1 for u in side0
    ) and all(graph.adjacency[v] & comp_mask == mask0 for v in side1)
    if complete:
        p, q = sorted((len(side0), len(side1)))
        return ComponentTag(COMPLETE_BIPARTITE, p, q)

    if len(side0) == len(side1):
        matched = 0
        ok = True
        for u in side0:
            missing = mask1 & ~graph.adjacency[u]
            if missing.bit_count() != 1 or missing & matched:
                ok = False
                break
            matched |= missing
        if ok and matched == mask1:
            for v in side1:
                missing = mask0 & ~graph.adjacency[v]
                if missing.bit_count() != 1:
                    ok = False
                    break
            if ok:
                return ComponentTag(MINUS_MATCHING, len(side0), len(side0))
    return ComponentTag(OTHER)
