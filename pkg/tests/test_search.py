import random

import pytest

import oracles
from almint.core import Multihypergraph, VertexSet
from almint.constructions import (
    StarMap,
    build_complete,
    build_filled_mf,
    build_k2e,
    build_l_family,
    build_mf,
    build_mstar,
)
from almint.search import (
    ClaimReport,
    SearchParams,
    brute_force_oracle,
    canonical_family,
    canonical_form,
    exhaustive_max,
    verify_extremal_claim,
)
from conftest import random_multifamily


def relabeled(family, mapping):
    return Multihypergraph(
        family.k,
        [(VertexSet(mapping[v] for v in edge), mult) for edge, mult in family.edges],
    )


class TestCanonicalForm:
    def test_relabe1ings_collide(self):
        fam = build_l_family(2, 2)
        image = relabeled(fam, {1: 9, 2: 4, 3: 2, 4: 7, 5: 1})
        assert canonical_form(fam) == canonical_form(image)

    def test_non_isomorphic_families_differ(self):
        bipartite = build_l_family(2, 2)  # six edges
        star_plus = Multihypergraph.simple(
            2, [VertexSet([1, a]) for a in range(2, 7)] + [VertexSet([7, 8])]
        )
        assert bipartite.num_distinct == star_plus.num_distinct
        assert canonical_form(bipartite) != canonical_form(star_plus)

    def test_all_double_star_shapes_at_k2_coincide(self):
        fam = build_l_family(2, 2)
        for seed in range(6):
            other = build_mf(StarMap.random(2, 2, seed=seed))
            assert canonical_form(other) == canonical_form(fam)

    def test_multiplicities_are_part_of_the_form(self):
        assert canonical_form(build_mstar(2, 2)) != canonical_form(build_complete(4, 2))

    def test_empty_family(self):
        assert canonical_form(Multihypergraph(3)) == b"3 0 0\n"

    def test_form_parses_back_to_an_isomorphic_family(self, rng):
        for _ in range(30):
            fam = random_multifamily(rng, rng.randint(1, 3), rng.randint(2, 6), rng.randint(1, 6))
            rep = canonical_family(canonical_form(fam))
            assert oracles.min_relabel_encoding(rep) == oracles.min_relabel_encoding(fam)

    def test_equality_agrees_with_brute_force_isomorphism(self, rng):
        for _ in range(80):
            k = rng.randint(1, 3)
            f1 = random_multifamily(rng, k, rng.randint(2, 6), rng.randint(1, 5), max_mult=2)
            f2 = random_multifamily(rng, k, rng.randint(2, 6), rng.randint(1, 5), max_mult=2)
            same_form = canonical_form(f1) == canonical_form(f2)
            same_class = (
                oracles.min_relabel_encoding(f1) == oracles.min_relabel_encoding(f2)
            )
            assert same_form == same_class

    def test_regular_families_that_refinement_cannot_split(self):
        # 2-regular everywhere, so color refinement alone sees no difference;
        # only the backtracking separates these.
        def cycle(labels):
            return [
                VertexSet([labels[i], labels[(i + 1) % len(labels)]])
                for i in range(len(labels))
            ]

        hexagon = Multihypergraph.simple(2, cycle([1, 2, 3, 4, 5, 6]))
        two_triangles = Multihypergraph.simple(2, cycle([1, 2, 3]) + cycle([4, 5, 6]))
        octagon = Multihypergraph.simple(2, cycle(list(range(1, 9))))
        two_squares = Multihypergraph.simple(2, cycle([1, 2, 3, 4]) + cycle([5, 6, 7, 8]))
        assert canonical_form(hexagon) != canonical_form(two_triangles)
        assert canonical_form(octagon) != canonical_form(two_squares)
        assert oracles.min_relabel_encoding(hexagon) != oracles.min_relabel_encoding(
            two_triangles
        )
        # sanity: rotations of a cycle are isomorphic to it
        rotated = Multihypergraph.simple(2, cycle([3, 4, 5, 6, 1, 2]))
        assert canonical_form(rotated) == canonical_form(hexagon)

    def test_labels_beyond_one_word(self, monkeypatch):
        monkeypatch.setenv("ALMINT_MAX_VERTICES", "300")
        base = build_l_family(3, 2)
        mapping = {v: v * 17 + 90 for v in base.ground}
        wide = relabeled(base, mapping)
        assert canonical_form(wide) == canonical_form(base)

    def test_edge_order_is_irrelevant(self, rng):
        for _ in range(20):
            fam = random_multifamily(rng, rng.randint(1, 3), rng.randint(3, 7), rng.randint(2, 8))
            edges = list(fam.edges)
            rng.shuffle(edges)
            shuffled = Multihypergraph(fam.k, edges)
            assert canonical_form(shuffled) == canonical_form(fam)

    def test_randomized_isomorphic_pairs_always_collide(self, rng):
        # relabel through a random bijection and also shuffle edge order
        for _ in range(60):
            k = rng.randint(1, 4)
            fam = random_multifamily(rng, k, rng.randint(k, 9), rng.randint(1, 10))
            labels = sorted(fam.ground)
            targets = rng.sample(range(1, 33), len(labels))
            mapping = dict(zip(labels, targets))
            edges = [
                (VertexSet(mapping[v] for v in edge), mult)
                for edge, mult in fam.edges
            ]
            rng.shuffle(edges)
            assert canonical_form(Multihypergraph(k, edges)) == canonical_form(fam)

    @pytest.mark.parametrize(
        "family",
        [
            build_l_family(2, 2),
            build_l_family(2, 5),
            build_l_family(3, 5),
            build_l_family(4, 1),
            build_mstar(2, 2),
            build_mstar(2, 3),
            build_mstar(3, 2),
            build_complete(4, 2),
            build_complete(6, 3),
            build_complete(7, 3),
            build_k2e(5),
            build_filled_mf(StarMap.constant(2, 3)),
            build_filled_mf(StarMap.constant(3, 5)),
            build_mf(StarMap.random(3, 2, seed=2)),
        ],
        ids=lambda f: f"{f.k}u-{f.total_instances}i",
    )
    def test_invariant_under_100_random_relabelings(self, family):
        rng = random.Random(family.total_instances)
        base = canonical_form(family)
        labels = sorted(family.ground)
        for _ in range(100):
            targets = rng.sample(range(1, 41), len(labels))
            mapping = dict(zip(labels, targets))
            assert canonical_form(relabeled(family, mapping)) == base


class TestExhaustiveMax:
    def test_unique_one_regular_maximum_is_the_complete_4_graph(self):
        report = exhaustive_max(SearchParams(k=2, a=1, b=1, n_max=6, edge_cap=8))
        assert report.max_edges == 6
        assert report.complete
        assert [canonical_form(f) for f in report.extremal_families] == [
            canonical_form(build_complete(4, 2))
        ]

    def test_multihypergraph_singletons(self):
        for s in (1, 2, 3):
            report = exhaustive_max(
                SearchParams(k=1, a=1, b=s, n_max=4, edge_cap=4 * s, simple=False)
            )
            assert report.max_edges == 2 * s
            expected = Multihypergraph(1, [(VertexSet([1]), s), (VertexSet([2]), s)])
            assert [canonical_form(f) for f in report.extremal_families] == [
                canonical_form(expected)
            ]

    def test_three_regular_maximum_is_the_complete_5_graph(self):
        report = exhaustive_max(SearchParams(k=2, a=3, b=3, n_max=5, edge_cap=10))
        assert report.max_edges == 10
        assert [canonical_form(f) for f in report.extremal_families] == [
            canonical_form(build_complete(5, 2))
        ]

    def test_empty_result_when_nothing_qualifies(self):
        report = exhaustive_max(SearchParams(k=2, a=1, b=1, n_max=3, edge_cap=3))
        assert report.max_edges == 0
        assert report.extremal_families == ()

    def test_edge_cap_truncation_is_reported(self):
        report = exhaustive_max(SearchParams(k=2, a=1, b=1, n_max=6, edge_cap=3))
        assert not report.complete

    def test_deterministic_reports(self):
        params = SearchParams(k=2, a=0, b=2, n_max=4, edge_cap=6)
        assert exhaustive_max(params) == exhaustive_max(params)

    def test_every_reported_family_reverifies(self, rng):
        params = SearchParams(k=2, a=1, b=2, n_max=5, edge_cap=8)
        report = exhaustive_max(params)
        for fam in report.extremal_families:
            assert oracles.is_almost_intersecting(fam, params.a, params.b)
            assert fam.total_instances == report.max_edges

    def test_blocking_side_condition_filters_stars(self):
        with_condition = exhaustive_max(
            SearchParams(k=2, a=0, b=1, n_max=4, edge_cap=6, require_no_blocking_set=1)
        )
        without = exhaustive_max(SearchParams(k=2, a=0, b=1, n_max=4, edge_cap=6))
        assert with_condition.max_edges == 6  # complete graph on 4 vertices
        assert without.max_edges == 6
        for fam in with_condition.extremal_families:
            assert not oracles.blocking_exists(fam, 1)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            SearchParams(k=3, a=0, b=1, n_max=2, edge_cap=5)
        with pytest.raises(ValueError):
            SearchParams(k=2, a=2, b=1, n_max=4, edge_cap=5)


class TestOracle:
    def test_unique_complete_4_graph(self):
        report = brute_force_oracle(SearchParams(k=2, a=1, b=1, n_max=4, edge_cap=6))
        assert report.max_edges == 6
        assert [canonical_form(f) for f in report.extremal_families] == [
            canonical_form(build_complete(4, 2))
        ]

    def test_triangle_ground_admits_nothing(self):
        report = brute_force_oracle(SearchParams(k=2, a=1, b=1, n_max=3, edge_cap=3))
        assert report.max_edges == 0
        assert report.extremal_families == ()

    def test_two_singletons(self):
        report = brute_force_oracle(SearchParams(k=1, a=1, b=1, n_max=2, edge_cap=2))
        assert report.max_edges == 2

    def test_refuses_large_universes(self):
        with pytest.raises(ValueError, match="refuses"):
            brute_force_oracle(SearchParams(k=2, a=0, b=1, n_max=7, edge_cap=4))

    def test_spot_agreement_with_search(self, rng):
        for _ in range(12):
            params = SearchParams(
                k=2,
                a=rng.randint(0, 2),
                b=rng.randint(2, 3),
                n_max=rng.randint(3, 5),
                edge_cap=rng.randint(2, 8),
                simple=True,
            )
            fast = exhaustive_max(params)
            slow = brute_force_oracle(params)
            assert fast.max_edges == slow.max_edges
            assert [canonical_form(f) for f in fast.extremal_families] == [
                canonical_form(f) for f in slow.extremal_families
            ]

    def test_multi_agreement_with_search(self, rng):
        for _ in range(6):
            params = SearchParams(
                k=1,
                a=rng.randint(0, 2),
                b=rng.randint(2, 3),
                n_max=rng.randint(2, 4),
                edge_cap=rng.randint(2, 8),
                simple=False,
            )
            fast = exhaustive_max(params)
            slow = brute_force_oracle(params)
            assert fast.max_edges == slow.max_edges
            assert fast.extremal_families == slow.extremal_families


class TestClaims:
    def test_unknown_claim_is_a_parameter_error(self):
        with pytest.raises(ValueError, match="unknown claim"):
            verify_extremal_claim("thm9.9", 2)

    def test_low_s_exception_beats_the_bipartite_bound(self):
        # at s=1 the complete graph on four vertices has 6 > 2s+2 edges
        report = verify_extremal_claim("thm4.1", 1)
        assert isinstance(report, ClaimReport)
        assert report.complete
        assert report.expected_max == 4
        assert report.observed_max == 6
        assert report.matches is False
        assert not report.s_within_theorem_range
        assert canonical_form(build_complete(4, 2)) in report.observed_forms

    def test_s2_maximum_is_tied_between_two_shapes(self):
        report = verify_extremal_claim("thm4.1", 2)
        assert report.observed_max == 6 == report.expected_max
        assert report.bound_matches
        observed = set(report.observed_forms)
        assert canonical_form(build_l_family(2, 2)) in observed
        assert canonical_form(build_complete(4, 2)) in observed
        assert report.matches is False  # uniqueness fails below the range

    def test_augmented_bipartite_claim_at_s1(self):
        report = verify_extremal_claim("thm4.2", 1, n_max=6, edge_cap=8)
        assert report.expected_max == 5
        assert report.reference_form == canonical_form(build_k2e(1))
        # the complete graph on 4 vertices has no blocking vertex either
        assert report.observed_max == 6
        assert report.matches is False

    def test_reference_family_satisfies_its_own_hypotheses(self):
        for s in (1, 2, 3):
            fam = build_k2e(s)
            assert oracles.is_almost_intersecting(fam, 0, s)
            assert not oracles.blocking_exists(fam, 1)
