"""Exhaustive search for maximum almost-intersecting families at small scale.

Families are compared up to vertex relabeling through canonical_form, a
refinement-plus-backtracking canonical labeling whose output doubles as a
parseable ".hg" document.  exhaustive_max explores universes of k-subsets
of a capped ground set with sound degree pruning; brute_force_oracle
enumerates tiny spaces outright and exists to cross-check the search.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import hgio
from .core import (
    CapacityError,
    Multihypergraph,
    VertexSet,
    blocking_set_exists,
    ground_capacity,
    require_capacity,
)
from .constructions import build_k2e, build_l_family

ORACLE_MAX_DISTINCT = 15
_ORACLE_MAX_MULTI_STATES = 4_000_000

# Exact results for 2-uniform families hold for disjointness budgets above
# this; below it the searches report whatever the finite check finds.
K2_THEOREM_MIN_S = 14


@dataclass(frozen=True)
class SearchParams:
    """Hypothesis space of one search: degree window, caps, and side conditions."""

    k: int
    a: int
    b: int
    n_max: int
    edge_cap: int
    simple: bool = True
    require_no_blocking_set: int | None = None

    def __post_init__(self):
        if not 1 <= self.k <= self.n_max:
            raise ValueError(f"need 1 <= k <= n_max, got k={self.k}, n_max={self.n_max}")
        if not 0 <= self.a <= self.b:
            raise ValueError(f"need 0 <= a <= b, got a={self.a}, b={self.b}")
        if self.edge_cap < 1:
            raise ValueError(f"need edge_cap >= 1, got {self.edge_cap}")
        if self.n_max > ground_capacity():
            raise CapacityError(
                f"n_max={self.n_max} exceeds the ground-set bound {ground_capacity()}"
            )


@dataclass(frozen=True)
class SearchReport:
    """Search outcome; extremal families are canonically labeled and pairwise
    non-isomorphic.  complete=False means the edge cap cut off reachable
    states, so the maximum is only a lower bound."""

    params: SearchParams
    max_edges: int
    extremal_families: tuple[Multihypergraph, ...]
    nodes_explored: int
    complete: bool


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------


def canonical_form(family: Multihypergraph) -> bytes:
    """Bytes equal for exactly the families isomorphic under relabeling.

    The output is the ".hg" serialization of the canonically relabeled
    family, so it can be parsed back into a representative.  Labels are
    chosen by iterated incidence refinement followed by backtracking over
    the compatible vertex orderings, taking the least edge-list encoding;
    automorphisms discovered along the way prune symmetric branches.
    """
    ground = sorted(family.ground)
    require_capacity(family.max_vertex())
    n = len(ground)
    if n == 0:
        return f"{family.k} 0 0\n".encode("ascii")
    index_of = {v: i for i, v in enumerate(ground)}
    edges = [
        (tuple(index_of[v] for v in edge), mult) for edge, mult in family.edges
    ]
    incident: list[list[int]] = [[] for _ in range(n)]
    for e, (verts, _) in enumerate(edges):
        for v in verts:
            incident[v].append(e)

    def refine(cells: list[list[int]]) -> list[list[int]]:
        while True:
            color = [0] * n
            for ci, cell in enumerate(cells):
                for v in cell:
                    color[v] = ci
            edge_profile = [
                (mult, tuple(sorted(color[v] for v in verts)))
                for verts, mult in edges
            ]

            def sig(v: int) -> tuple:
                parts = []
                for e in incident[v]:
                    mult, others = edge_profile[e]
                    parts.append((mult, others, color[v]))
                return tuple(sorted(parts))

            new_cells: list[list[int]] = []
            changed = False
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict[tuple, list[int]] = {}
                for v in cell:
                    groups.setdefault(sig(v), []).append(v)
                if len(groups) == 1:
                    new_cells.append(cell)
                else:
                    changed = True
                    for key in sorted(groups):
                        new_cells.append(groups[key])
            cells = new_cells
            if not changed:
                return cells

    def encode(position: list[int]) -> tuple:
        # position[v] = canonical label of vertex index v
        labeled = sorted(
            (tuple(sorted(position[v] for v in verts)), mult)
            for verts, mult in edges
        )
        return tuple(labeled)

    best: dict = {"enc": None, "inv": None}
    generators: list[tuple[int, ...]] = []

    def orbit_reached(v: int, tried: list[int], fixed: tuple[int, ...]) -> bool:
        usable = [g for g in generators if all(g[f] == f for f in fixed)]
        if not usable:
            return False
        seen = {v}
        frontier = [v]
        while frontier:
            x = frontier.pop()
            for g in usable:
                y = g[x]
                if y not in seen:
                    if y in tried:
                        return True
                    seen.add(y)
                    frontier.append(y)
        return False

    def descend(cells: list[list[int]], fixed: tuple[int, ...]) -> None:
        target = None
        for ci, cell in enumerate(cells):
            if len(cell) > 1:
                target = ci
                break
        if target is None:
            position = [0] * n
            for label, cell in enumerate(cells):
                position[cell[0]] = label
            enc = encode(position)
            if best["enc"] is None or enc < best["enc"]:
                best["enc"] = enc
                inv = [0] * n
                for v in range(n):
                    inv[position[v]] = v
                best["inv"] = inv
            elif enc == best["enc"]:
                inv = best["inv"]
                sigma = tuple(inv[position[v]] for v in range(n))
                if sigma != tuple(range(n)) and sigma not in generators:
                    generators.append(sigma)
            return
        tried: list[int] = []
        for v in sorted(cells[target]):
            if orbit_reached(v, tried, fixed):
                continue
            tried.append(v)
            split = (
                cells[:target]
                + [[v], [u for u in cells[target] if u != v]]
                + cells[target + 1 :]
            )
            descend(refine(split), fixed + (v,))

    descend(refine([list(range(n))]), ())

    lines = [f"{family.k} {n} {len(edges)}"]
    for verts, mult in best["enc"]:
        body = " ".join(str(v + 1) for v in verts)
        if mult > 1:
            body += f" * {mult}"
        lines.append(body)
    return ("\n".join(lines) + "\n").encode("ascii")


def canonical_family(form: bytes) -> Multihypergraph:
    """Parse a canonical form back into its representative family."""
    return hgio.loads(form.decode("ascii"))


# ---------------------------------------------------------------------------
# Exhaustive search
# ---------------------------------------------------------------------------


def _universe(params: SearchParams) -> list[VertexSet]:
    return [
        VertexSet(c)
        for c in combinations(range(1, params.n_max + 1), params.k)
    ]


class _Incumbent:
    """Best size seen plus the canonical forms achieving it."""

    def __init__(self):
        self.size = 0
        self.forms: set[bytes] = set()

    def offer(self, size: int, family: Multihypergraph) -> None:
        if size < self.size:
            return
        if size > self.size:
            self.size = size
            self.forms.clear()
        self.forms.add(canonical_form(family))


def _families_from_forms(forms: set[bytes]) -> tuple[Multihypergraph, ...]:
    return tuple(canonical_family(f) for f in sorted(forms))


def _passes_side_condition(family: Multihypergraph, t: int | None) -> bool:
    if t is None:
        return True
    exists, _ = blocking_set_exists(family, t)
    return not exists


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def exhaustive_max(params: SearchParams) -> SearchReport:
    """Maximum family size and all extremal families under the caps.

    Edges are added in ascending lexicographic order only past the last
    edge, so every edge set (or multiplicity vector) is visited exactly
    once.  A branch dies as soon as some instance would exceed b
    disjointnesses or no completion can lift every degree to a; the a-side
    is otherwise only enforced where a family is recorded, since degrees
    grow monotonically.  When a >= 1 multiplicities beyond b+1 are never
    tried: a heavier edge either has no disjoint partner (degree 0 < a) or
    pushes a partner past b.  When a = 0 an edge with no disjoint partner
    is legitimate at any multiplicity, so only the edge cap bounds it.
    Extremal families are deduplicated by canonical form at collection
    time.
    """
    universe = _universe(params)
    masks = [e.mask for e in universe]
    u_count = len(masks)
    disj = [0] * u_count
    for i in range(u_count):
        for j in range(i + 1, u_count):
            if masks[i] & masks[j] == 0:
                disj[i] |= 1 << j
                disj[j] |= 1 << i

    a, b = params.a, params.b
    cap = params.edge_cap
    if params.simple:
        mult_bound = 1
    else:
        mult_bound = b + 1 if a >= 1 else cap
    incumbent = _Incumbent()
    stats = {"nodes": 0, "truncated": False}

    chosen: list[int] = []     # universe indices, ascending
    mults: list[int] = []
    degrees: list[int] = []    # disjoint-instance counts, aligned with chosen
    pos_of: dict[int, int] = {}
    chosen_mask = 0            # bitmask over universe indices

    def record_if_valid(size: int) -> None:
        if size == 0 or any(d < a for d in degrees):
            return
        fam = Multihypergraph(
            params.k, [(universe[i], m) for i, m in zip(chosen, mults)]
        )
        if not _passes_side_condition(fam, params.require_no_blocking_set):
            return
        incumbent.offer(size, fam)

    def addable(j: int) -> bool:
        hit = disj[j] & chosen_mask
        if sum(mults[pos_of[i]] for i in _bits(hit)) > b:
            return False
        return all(degrees[pos_of[i]] < b for i in _bits(hit))

    def walk(last: int, size: int) -> None:
        nonlocal chosen_mask
        stats["nodes"] += 1
        record_if_valid(size)

        if size == cap:
            if any(addable(j) for j in range(last + 1, u_count)):
                stats["truncated"] = True
            return

        # No completion can raise a too-low degree using only later edges.
        if a > 0 and chosen:
            later = ((1 << u_count) - 1) & ~((1 << (last + 1)) - 1)
            for pos, i in enumerate(chosen):
                if degrees[pos] < a:
                    headroom = (disj[i] & later & ~chosen_mask).bit_count()
                    if degrees[pos] + headroom * mult_bound < a:
                        return

        for j in range(last + 1, u_count):
            # Even taking every remaining edge cannot beat the incumbent.
            if min(cap, size + (u_count - j) * mult_bound) < incumbent.size:
                break
            hit = disj[j] & chosen_mask
            own = sum(mults[pos_of[i]] for i in _bits(hit))
            if own > b:
                continue
            c_limit = min(mult_bound, cap - size)
            for i in _bits(hit):
                c_limit = min(c_limit, b - degrees[pos_of[i]])
            for c in range(1, c_limit + 1):
                pos_of[j] = len(chosen)
                chosen.append(j)
                mults.append(c)
                degrees.append(own)
                for i in _bits(hit):
                    degrees[pos_of[i]] += c
                chosen_mask |= 1 << j
                walk(j, size + c)
                chosen_mask &= ~(1 << j)
                for i in _bits(hit):
                    degrees[pos_of[i]] -= c
                chosen.pop()
                mults.pop()
                degrees.pop()
                del pos_of[j]

    walk(-1, 0)
    return SearchReport(
        params=params,
        max_edges=incumbent.size,
        extremal_families=_families_from_forms(incumbent.forms),
        nodes_explored=stats["nodes"],
        complete=not stats["truncated"],
    )


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


def brute_force_oracle(params: SearchParams) -> SearchReport:
    """Direct enumeration of every family in the capped space, no pruning.

    Kept deliberately naive and separate from exhaustive_max so the two
    routes cross-check each other; refuses spaces with more than
    ORACLE_MAX_DISTINCT possible edges (or too many multiplicity vectors).
    """
    universe = _universe(params)
    u_count = len(universe)
    if u_count > ORACLE_MAX_DISTINCT:
        raise ValueError(
            f"oracle refuses {u_count} candidate edges (bound "
            f"{ORACLE_MAX_DISTINCT})"
        )
    members = [frozenset(e.members) for e in universe]
    disjoint = [
        [members[i].isdisjoint(members[j]) for j in range(u_count)]
        for i in range(u_count)
    ]

    a, b = params.a, params.b
    incumbent = _Incumbent()
    states = 0

    def consider(mult_vector: tuple[int, ...]) -> None:
        support = [i for i, c in enumerate(mult_vector) if c > 0]
        size = sum(mult_vector)
        if not support or size > params.edge_cap:
            return
        for i in support:
            degree = sum(
                mult_vector[j] for j in support if j != i and disjoint[i][j]
            )
            if degree < a or degree > b:
                return
        fam = Multihypergraph(
            params.k, [(universe[i], mult_vector[i]) for i in support]
        )
        if not _passes_side_condition(fam, params.require_no_blocking_set):
            return
        incumbent.offer(size, fam)

    if params.simple:
        for bits in range(1 << u_count):
            states += 1
            consider(tuple((bits >> i) & 1 for i in range(u_count)))
    else:
        mult_bound = b + 1 if a >= 1 else params.edge_cap
        total_states = (mult_bound + 1) ** u_count
        if total_states > _ORACLE_MAX_MULTI_STATES:
            raise ValueError(
                f"oracle refuses {total_states} multiplicity vectors (bound "
                f"{_ORACLE_MAX_MULTI_STATES})"
            )
        vector = [0] * u_count

        def enumerate_from(idx: int) -> None:
            nonlocal states
            if idx == u_count:
                states += 1
                consider(tuple(vector))
                return
            for c in range(mult_bound + 1):
                vector[idx] = c
                enumerate_from(idx + 1)
            vector[idx] = 0

        enumerate_from(0)

    return SearchReport(
        params=params,
        max_edges=incumbent.size,
        extremal_families=_families_from_forms(incumbent.forms),
        nodes_explored=states,
        complete=True,
    )


# ---------------------------------------------------------------------------
# Named-claim verification
# ---------------------------------------------------------------------------

KNOWN_CLAIMS = ("thm4.1", "thm4.2")


@dataclass(frozen=True)
class ClaimReport:
    """Comparison of a finite search against a named extremal claim.

    matches is None when the search was truncated (inconclusive);
    s_within_theorem_range records whether the claimed exact statement even
    applies at this s, so a factual mismatch below the range is not read as
    a refutation.
    """

    claim: str
    s: int
    params: SearchParams
    expected_max: int
    observed_max: int
    bound_matches: bool
    unique_extremal_matches: bool
    matches: bool | None
    complete: bool
    s_within_theorem_range: bool
    reference_form: bytes
    observed_forms: tuple[bytes, ...]


def verify_extremal_claim(
    claim: str,
    s: int,
    n_max: int | None = None,
    edge_cap: int | None = None,
) -> ClaimReport:
    """Search the claim's hypothesis space and compare with its extremal family.

    thm4.1: 2-uniform [1,s] families have at most 2s+2 edges, uniquely the
    complete bipartite graph with parts 2 and s+1.  thm4.2: 2-uniform [0,s]
    families with no single vertex meeting every edge have at most 2s+3
    edges, uniquely that graph plus the edge joining its two centers.  Both
    exact statements require large s; outside that range the report simply
    records what the finite check found.
    """
    if claim not in KNOWN_CLAIMS:
        raise ValueError(f"unknown claim id {claim!r}; known: {', '.join(KNOWN_CLAIMS)}")
    if s < 1:
        raise ValueError(f"need s >= 1, got {s}")

    if claim == "thm4.1":
        expected_max = 2 * s + 2
        reference = build_l_family(2, s)
        params = SearchParams(
            k=2,
            a=1,
            b=s,
            n_max=n_max if n_max is not None else s + 3,
            edge_cap=edge_cap if edge_cap is not None else expected_max + 2,
        )
    else:
        expected_max = 2 * s + 3
        reference = build_k2e(s)
        params = SearchParams(
            k=2,
            a=0,
            b=s,
            n_max=n_max if n_max is not None else s + 3,
            edge_cap=edge_cap if edge_cap is not None else expected_max + 2,
            require_no_blocking_set=1,
        )

    report = exhaustive_max(params)
    reference_form = canonical_form(reference)
    observed_forms = tuple(canonical_form(f) for f in report.extremal_families)
    bound_matches = report.max_edges == expected_max
    unique_match = observed_forms == (reference_form,)
    return ClaimReport(
        claim=claim,
        s=s,
        params=params,
        expected_max=expected_max,
        observed_max=report.max_edges,
        bound_matches=bound_matches,
        unique_extremal_matches=unique_match,
        matches=(bound_matches and unique_match) if report.complete else None,
        complete=report.complete,
        s_within_theorem_range=s >= K2_THEOREM_MIN_S,
        reference_form=reference_form,
        observed_forms=observed_forms,
    )
