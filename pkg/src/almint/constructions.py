"""Builders for the named almost-intersecting families.

Ground sets are labeled canonically: the central (2k-2)-set is {1,...,2k-2},
petal vertices come next.  Each builder has a prediction companion giving
the expected size and disjoint-degree range, which the CLI re-checks after
building.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Mapping

from .core import Multihypergraph, VertexSet, require_capacity


@dataclass(frozen=True)
class Prediction:
    """Expected edge count and disjoint-degree range of a construction."""

    size: int
    min_disjoint: int
    max_disjoint: int


class StarMap:
    """Complement-symmetric assignment of petal blocks to cores.

    The domain is all (k-1)-subsets of the central set A = {1,...,2k-2};
    each core S receives a block of s+1 petal vertices disjoint from A,
    with f(S) = f(A \\ S).
    """

    __slots__ = ("_k", "_s", "_table")

    def __init__(self, k: int, s: int, table: Mapping[VertexSet, VertexSet]):
        if k < 2:
            raise ValueError(f"need k >= 2, got {k}")
        if s < 1:
            raise ValueError(f"need s >= 1, got {s}")
        center = VertexSet(range(1, 2 * k - 1))
        expected = {VertexSet(c) for c in combinations(center.members, k - 1)}
        if set(table) != expected:
            raise ValueError(
                "table domain must be exactly the (k-1)-subsets of "
                f"{{1..{2 * k - 2}}}"
            )
        for core, petals in table.items():
            if len(petals) != s + 1:
                raise ValueError(
                    f"petal block for core {core} has {len(petals)} vertices, "
                    f"expected {s + 1}"
                )
            if not petals.isdisjoint(center):
                raise ValueError(f"petal block {petals} meets the central set")
            mirror = center - core
            if table[mirror] != petals:
                raise ValueError(
                    f"complement-symmetry violated: f({core}) != f({mirror})"
                )
        self._k = k
        self._s = s
        self._table = dict(table)

    @property
    def k(self) -> int:
        return self._k

    @property
    def s(self) -> int:
        return self._s

    @property
    def center(self) -> VertexSet:
        return VertexSet(range(1, 2 * self._k - 1))

    def cores(self) -> list[VertexSet]:
        """Domain in lexicographic order."""
        return [
            VertexSet(c)
            for c in combinations(range(1, 2 * self._k - 1), self._k - 1)
        ]

    def petals(self, core: VertexSet) -> VertexSet:
        return self._table[core]

    def petal_pool(self) -> VertexSet:
        pool = VertexSet()
        for petals in self._table.values():
            pool = pool | petals
        return pool

    @classmethod
    def constant(cls, k: int, s: int) -> "StarMap":
        """Every core shares the block {2k-1, ..., 2k+s-1}."""
        block = VertexSet(range(2 * k - 1, 2 * k + s))
        table = {
            VertexSet(c): block
            for c in combinations(range(1, 2 * k - 1), k - 1)
        }
        return cls(k, s, table)

    @classmethod
    def random(cls, k: int, s: int, seed: int, pool_size: int | None = None) -> "StarMap":
        """Seeded random map; complementary cores are assigned jointly."""
        if pool_size is None:
            pool_size = 2 * (s + 1)
        if pool_size < s + 1:
            raise ValueError(f"pool size {pool_size} cannot host {s + 1} petals")
        rng = random.Random(seed)
        pool = list(range(2 * k - 1, 2 * k - 1 + pool_size))
        center = VertexSet(range(1, 2 * k - 1))
        table: dict[VertexSet, VertexSet] = {}
        for combo in combinations(center.members, k - 1):
            core = VertexSet(combo)
            if core in table:
                continue
            block = VertexSet(rng.sample(pool, s + 1))
            table[core] = block
            table[center - core] = block
        return cls(k, s, table)

    def to_json_table(self) -> dict[str, list[int]]:
        return {
            " ".join(str(v) for v in core): list(self._table[core])
            for core in self.cores()
        }

    @classmethod
    def from_json_table(cls, k: int, s: int, table: Mapping[str, Iterable[int]]) -> "StarMap":
        parsed: dict[VertexSet, VertexSet] = {}
        for key, petals in table.items():
            try:
                core = VertexSet(int(x) for x in key.split())
            except ValueError as exc:
                raise ValueError(f"bad core key {key!r}") from exc
            parsed[core] = VertexSet(petals)
        return cls(k, s, parsed)

    @classmethod
    def load_json(cls, k: int, s: int, path: str) -> "StarMap":
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_json_table(k, s, json.load(fh))


def _double_star_edges(k: int, cores: list[VertexSet], petals_of) -> list[VertexSet]:
    edges = []
    for core in cores:
        for x in petals_of(core):
            edges.append(core | VertexSet((x,)))
    return edges


def build_mf(star_map: StarMap) -> Multihypergraph:
    """Union of double stars: each core extended by each of its petals."""
    require_capacity(max(2 * star_map.k - 2, star_map.petal_pool().max_vertex()))
    edges = _double_star_edges(star_map.k, star_map.cores(), star_map.petals)
    return Multihypergraph.simple(star_map.k, edges)


def build_l_family(k: int, s: int) -> Multihypergraph:
    """The minimum-ground instance: all cores share one petal block."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    require_capacity(2 * k + s - 1)
    return build_mf(StarMap.constant(k, s))


def build_mstar(k: int, s: int) -> Multihypergraph:
    """All k-subsets of {1,...,2k}, each with multiplicity s."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    require_capacity(2 * k)
    return Multihypergraph(
        k,
        [(VertexSet(c), s) for c in combinations(range(1, 2 * k + 1), k)],
    )


def build_complete(n: int, k: int) -> Multihypergraph:
    """All k-subsets of {1,...,n}."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    require_capacity(n)
    return Multihypergraph.simple(
        k, (VertexSet(c) for c in combinations(range(1, n + 1), k))
    )


def build_k2e(s: int) -> Multihypergraph:
    """K_{2,s+1} together with the edge joining its two centers."""
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")
    require_capacity(s + 3)
    edges = [VertexSet((1, 2))]
    for j in range(3, s + 4):
        edges.append(VertexSet((1, j)))
        edges.append(VertexSet((2, j)))
    return Multihypergraph.simple(2, edges)


def build_filled_mf(star_map: StarMap) -> Multihypergraph:
    """A double-star family plus every k-subset of its central set.

    At k=2 the central set is a single pair, so the filled family is the
    two-center construction build_k2e in disguise.
    """
    k = star_map.k
    base = build_mf(star_map)
    inner = [VertexSet(c) for c in combinations(range(1, 2 * k - 1), k)]
    edges = [edge for edge, _ in base.edges] + inner
    return Multihypergraph.simple(k, edges)


def predict_l_family(k: int, s: int) -> Prediction:
    return Prediction((s + 1) * comb(2 * k - 2, k - 1), s, s)


def predict_mf(k: int, s: int) -> Prediction:
    return Prediction((s + 1) * comb(2 * k - 2, k - 1), s, s)


def predict_mstar(k: int, s: int) -> Prediction:
    return Prediction(s * comb(2 * k, k), s, s)


def predict_complete(n: int, k: int) -> Prediction:
    d = comb(n - k, k) if n >= 2 * k else 0
    return Prediction(comb(n, k), d, d)


def predict_k2e(s: int) -> Prediction:
    return Prediction(2 * s + 3, 0, s)


def predict_filled_mf(k: int, s: int) -> Prediction:
    return Prediction(
        (s + 1) * comb(2 * k - 2, k - 1) + comb(2 * k - 2, k), 0, s
    )
