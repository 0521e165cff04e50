import random
from itertools import combinations

import pytest

from almint.core import Multihypergraph, VertexSet


def random_simple_family(rng, k, n, m):
    """m distinct random k-subsets of {1..n}, in ascending order."""
    pool = list(combinations(range(1, n + 1), k))
    picks = rng.sample(pool, min(m, len(pool)))
    picks.sort()
    return Multihypergraph.simple(k, (VertexSet(c) for c in picks))


def random_multifamily(rng, k, n, m, max_mult=3):
    base = random_simple_family(rng, k, n, m)
    return Multihypergraph(
        k, [(edge, rng.randint(1, max_mult)) for edge, _ in base.edges]
    )


def _set_disjoint_counts(edge_sets):
    return [
        sum(1 for j, other in enumerate(edge_sets) if j != i and not (mine & other))
        for i, mine in enumerate(edge_sets)
    ]


def random_window_family(rng, k, s, max_tries=200):
    """A random simple [1,s]-almost intersecting family, found by repair.

    Oversample, then alternately drop isolated edges and one worst
    offender until the disjointness degrees all land in [1, s].
    """
    for _ in range(max_tries):
        n = 2 * k + rng.randint(0, 3)
        pool = list(combinations(range(1, n + 1), k))
        high = min(len(pool), 8 * s + 8)
        m = rng.randint(min(3, high), high)
        edges = [set(c) for c in sorted(rng.sample(pool, m))]
        while edges:
            counts = _set_disjoint_counts(edges)
            zeros = [i for i, c in enumerate(counts) if c == 0]
            if zeros:
                edges = [e for i, e in enumerate(edges) if i not in set(zeros)]
                continue
            high = [i for i, c in enumerate(counts) if c > s]
            if not high:
                break
            worst = max(high, key=lambda i: (counts[i], -i))
            del edges[worst]
        if edges:
            return Multihypergraph.simple(k, (VertexSet(e) for e in edges))
    raise AssertionError(f"could not generate a [1,{s}] family for k={k}")


@pytest.fixture
def rng():
    return random.Random(0xA1)
