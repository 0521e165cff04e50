"""Sunflower extraction, repeated decomposition, and core-family diagnostics.

A sunflower is a list of edges whose pairwise intersections all equal one
common core; the leftover parts (petals) must be nonempty and pairwise
disjoint.  Extraction searches cores depth-first, growing by the most
frequent vertex first, so families of double stars decompose through their
natural cores instead of through incidental disjoint pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .core import (
    ConsistencyError,
    Multihypergraph,
    VertexSet,
    find_pairwise_disjoint,
)


@dataclass(frozen=True)
class Sunflower:
    """Core plus pairwise-disjoint nonempty petals; edges are core | petal."""

    core: VertexSet
    petals: tuple[VertexSet, ...]

    @property
    def member_edges(self) -> tuple[VertexSet, ...]:
        return tuple(self.core | petal for petal in self.petals)

    def validate(self) -> None:
        """Re-verify the defining property instead of trusting construction."""
        if not self.petals:
            raise ValueError("a sunflower needs at least one petal")
        for petal in self.petals:
            if not petal:
                raise ValueError("petals must be nonempty")
            if not petal.isdisjoint(self.core):
                raise ValueError(f"petal {petal} meets the core {self.core}")
        edges = self.member_edges
        for i in range(len(edges)):
            for j in range(i + 1, len(edges)):
                if (edges[i] & edges[j]) != self.core:
                    raise ValueError(
                        f"edges {edges[i]} and {edges[j]} intersect in "
                        f"{edges[i] & edges[j]}, not the core {self.core}"
                    )


@dataclass(frozen=True)
class SunflowerDecomposition:
    """Repeated extraction output: sunflowers plus a small leftover."""

    sunflowers: tuple[Sunflower, ...]
    leftover: tuple[VertexSet, ...]
    r: int
    threshold: int
    k: int


def extraction_threshold(k: int, r: int) -> int:
    """Edge count above which an r-petal sunflower is guaranteed."""
    return factorial(k) * (r - 1) ** k


def _sorted_masks(sets: list[VertexSet]) -> list[int]:
    return [e.mask for e in sorted(sets, key=VertexSet.sort_key)]


def _vertex_frequencies(links: list[int]) -> dict[int, int]:
    freq: dict[int, int] = {}
    for mask in links:
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            freq[v] = freq.get(v, 0) + 1
            m ^= low
    return freq


def _search_masks(
    core: int,
    links: list[int],
    link_size: int,
    r: int,
    visited: set[int],
) -> tuple[int, list[int]] | None:
    """Depth-first core search; links are the member edges minus the core."""
    if link_size >= 2:
        freq = _vertex_frequencies(links)
        order = sorted(freq, key=lambda v: (-freq[v], v))
        for v in order:
            if freq[v] < r:
                continue
            bit = 1 << v
            child_core = core | bit
            if child_core in visited:
                continue
            visited.add(child_core)
            child_links = [m & ~bit for m in links if m & bit]
            found = _search_masks(child_core, child_links, link_size - 1, r, visited)
            if found is not None:
                return found
    picks = find_pairwise_disjoint(links, r)
    if picks is not None:
        return core, [links[i] for i in picks]
    return None


def find_sunflower(family: Multihypergraph, r: int) -> Sunflower | None:
    """An r-petal sunflower among the distinct edges, or None if none exists.

    Multiplicities are collapsed first: repeated copies of one set can never
    supply two members, since their petals would be empty.  The search is
    exhaustive over candidate cores, so a None answer means no sunflower
    exists; one always exists when the distinct-edge count exceeds
    k!(r-1)^k.
    """
    if r < 1:
        raise ValueError(f"petal count must be positive, got {r}")
    masks = _sorted_masks([edge for edge, _ in family.edges])
    if not masks:
        return None
    if r == 1:
        return Sunflower(VertexSet(), (VertexSet.from_mask(masks[0]),))
    found = _search_masks(0, masks, family.k, r, set())
    if found is None:
        return None
    core, petal_masks = found
    return Sunflower(
        VertexSet.from_mask(core),
        tuple(VertexSet.from_mask(m) for m in petal_masks),
    )


def decompose(
    family: Multihypergraph,
    r: int,
    threshold: int | None = None,
) -> SunflowerDecomposition:
    """Extract r-petal sunflowers until fewer than `threshold` edges remain.

    The default threshold is k!(r-1)^k + 1, the least value at which every
    extraction is guaranteed to succeed.  A failed extraction above the
    guarantee bound raises ConsistencyError, since it would contradict the
    guarantee itself.
    """
    if not family.is_simple:
        raise ValueError("decomposition requires a simple family")
    if r < 1:
        raise ValueError(f"petal count must be positive, got {r}")
    k = family.k
    guarantee = extraction_threshold(k, r)
    if threshold is None:
        threshold = guarantee + 1
    if threshold <= guarantee:
        raise ValueError(
            f"threshold {threshold} must exceed the guarantee bound {guarantee}"
        )

    remaining = _sorted_masks([edge for edge, _ in family.edges])
    sunflowers: list[Sunflower] = []
    sticky_core: int | None = None
    while len(remaining) >= threshold:
        found = None
        if sticky_core is not None:
            # A core often hosts several sunflowers; drain it before moving on.
            links = [m & ~sticky_core for m in remaining if m & sticky_core == sticky_core]
            picks = find_pairwise_disjoint(links, r)
            if picks is not None:
                found = sticky_core, [links[i] for i in picks]
        if found is None:
            found = _search_masks(0, remaining, k, r, set())
            if found is None:
                raise ConsistencyError(
                    f"no {r}-petal sunflower among {len(remaining)} edges, "
                    f"although {len(remaining)} > {guarantee} guarantees one"
                )
        core, petal_masks = found
        sticky_core = core
        sf = Sunflower(
            VertexSet.from_mask(core),
            tuple(VertexSet.from_mask(m) for m in petal_masks),
        )
        member_masks = {core | m for m in petal_masks}
        remaining = [m for m in remaining if m not in member_masks]
        sunflowers.append(sf)
    return SunflowerDecomposition(
        tuple(sunflowers),
        tuple(VertexSet.from_mask(m) for m in remaining),
        r,
        threshold,
        k,
    )


def core_multihypergraph(decomposition: SunflowerDecomposition) -> Multihypergraph:
    """The (k-1)-uniform family of sunflower cores, dummy-padded when short.

    Cores smaller than k-1 are padded with fresh labels above every real
    label, one batch per sunflower, so padding introduces no intersections.
    Repeated cores become multiplicities.
    """
    k = decomposition.k
    if k < 2:
        raise ValueError("a 1-uniform family has no core structure")
    max_real = 0
    for sf in decomposition.sunflowers:
        for edge in sf.member_edges:
            max_real = max(max_real, edge.max_vertex())
    for edge in decomposition.leftover:
        max_real = max(max_real, edge.max_vertex())

    next_dummy = max_real + 1
    padded: list[VertexSet] = []
    for index, sf in enumerate(decomposition.sunflowers):
        core = sf.core
        if len(core) >= k:
            raise ConsistencyError(
                f"sunflower {index} has a core of size {len(core)} in a "
                f"{k}-uniform family; petals would be empty"
            )
        short = (k - 1) - len(core)
        if short:
            core = core | VertexSet(range(next_dummy, next_dummy + short))
            next_dummy += short
        padded.append(core)
    return Multihypergraph.from_sets(k - 1, padded)


@dataclass(frozen=True)
class CoreBoundReport:
    """Disjointness statistics of the cores against the r*s budget.

    For each core, T counts the other cores disjoint from it.  The check
    asserts T*(r-k)(r-k+1) <= r*s, the inequality the degree-sum argument
    yields; the stated per-core threshold r*s/(r-k)^2 is reported alongside
    without being asserted.  For r <= k the coefficient is nonpositive and
    the bound is vacuous.
    """

    r: int
    k: int
    s: int
    num_cores: int
    max_disjoint_cores: int
    min_disjoint_cores: int
    coefficient: int
    budget: int
    all_within_bound: bool
    every_core_has_disjoint_core: bool
    stated_threshold: float | None
    violations: tuple[tuple[int, int], ...]


def core_bound_check(
    decomposition: SunflowerDecomposition, s: int
) -> CoreBoundReport:
    """Evaluate the core-disjointness bound for a [1,s]-almost intersecting source."""
    r = decomposition.r
    k = decomposition.k
    cores = [sf.core.mask for sf in decomposition.sunflowers]
    n = len(cores)
    disjoint_counts = []
    for i in range(n):
        t_count = sum(
            1 for j in range(n) if j != i and cores[i] & cores[j] == 0
        )
        disjoint_counts.append(t_count)

    coefficient = (r - k) * (r - k + 1)
    budget = r * s
    violations = tuple(
        (i, t_count)
        for i, t_count in enumerate(disjoint_counts)
        if t_count * coefficient > budget
    )
    return CoreBoundReport(
        r=r,
        k=k,
        s=s,
        num_cores=n,
        max_disjoint_cores=max(disjoint_counts, default=0),
        min_disjoint_cores=min(disjoint_counts, default=0),
        coefficient=coefficient,
        budget=budget,
        all_within_bound=not violations,
        every_core_has_disjoint_core=n > 0 and min(disjoint_counts) >= 1,
        stated_threshold=(budget / (r - k) ** 2) if r != k else None,
        violations=violations,
    )
