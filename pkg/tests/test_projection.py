"""
Projection onto chain subspaces and cones, isotonic pooling and the stacked fan operator.
"""
from fractions import Fraction

import numpy as np
import pytest
from pytest import approx

from core_model.chains import MergeChain, enumerate_chains
from core_model.dissimilarity import DissimilarityMap
from core_model.ultrametric import Ultrametric
from projection.fan_operator import FanOperator, fan_operator, member_chains
from projection.isotonic import isotonic_regression
from projection.projector import (
    in_projection_cone,
    level_indicator_matrix,
    level_means,
    project_cone,
    project_subspace,
    squared_error,
)
from utils.error_handling import CapacityError, DimensionError

FORK = MergeChain.from_merges(4, [(0, 1), (2, 3), (0, 2)])
COMB = MergeChain.from_merges(4, [(0, 1), (0, 2), (0, 3)])
CHERRY_12 = MergeChain.from_merges(3, [(0, 1), (0, 2)])


class TestProjectSubspace:
    def test_fork_levels_and_error(self, ex25_map):
        outcome = project_subspace(ex25_map, FORK)
        assert outcome.levels == approx((1, 5, 15))
        assert outcome.squared_error == approx(388)
        assert outcome.in_cone
        assert not outcome.pooled

    def test_comb_exact(self, ex25_map):
        outcome = project_subspace(ex25_map, COMB, exact=True)
        assert outcome.levels == (1, 6, Fraction(53, 3))
        assert outcome.squared_error == Fraction(914, 3)

    @pytest.mark.parametrize("eps", [Fraction(0), Fraction(1, 2), Fraction(1)])
    def test_error_polynomials(self, ex25_with_eps, eps):
        d = ex25_with_eps(eps)
        fork = project_subspace(d, FORK, exact=True).squared_error
        comb = project_subspace(d, COMB, exact=True).squared_error
        assert fork == 388 + 26 * eps + Fraction(3, 4) * eps ** 2
        assert comb == Fraction(914, 3) + Fraction(62, 3) * eps + Fraction(2, 3) * eps ** 2
        assert float(fork) == approx(388 + 26 * float(eps) + 0.75 * float(eps) ** 2, rel=1e-9)

    def test_fixes_points_of_the_subspace(self):
        x = Ultrametric(COMB, (2.0, 3.5, 9.0))
        d = DissimilarityMap.from_values(x.expand().tolist())
        outcome = project_subspace(d, COMB)
        assert outcome.levels == approx((2.0, 3.5, 9.0))
        assert outcome.squared_error == approx(0.0, abs=1e-12)

    def test_size_mismatch(self, ex25_map):
        with pytest.raises(DimensionError):
            project_subspace(ex25_map, CHERRY_12)

    def test_level_means_match_indicator_rows(self, random_map):
        d = random_map(5)
        chain = next(iter(enumerate_chains(5)))
        indicator = level_indicator_matrix(chain)
        assert indicator.sum(axis=1).tolist() == chain.level_sizes.tolist()
        assert level_means(d, chain) == approx((indicator @ d.values / chain.level_sizes).tolist())


class TestProjectionCone:
    def test_prop35_comb_is_member(self, prop35_map):
        assert level_means(prop35_map, COMB, exact=True) == [1, 2, Fraction(13, 3)]
        assert in_projection_cone(prop35_map, COMB)
        assert in_projection_cone(prop35_map, COMB, strict=True)

    def test_constant_data_closed_not_strict(self):
        d = DissimilarityMap.from_values([3.0] * 6)
        for chain in enumerate_chains(4):
            assert in_projection_cone(d, chain)
            assert not in_projection_cone(d, chain, strict=True)

    def test_swapped_fork_not_member(self, ex25_map):
        swapped = MergeChain.from_merges(4, [(2, 3), (0, 1), (0, 2)])
        assert not in_projection_cone(ex25_map, swapped, exact=True)

    def test_exact_agrees_with_float(self, random_map):
        d = random_map(4)
        for chain in enumerate_chains(4):
            assert in_projection_cone(d, chain) == in_projection_cone(d, chain, exact=True)


class TestProjectCone:
    def test_pooling(self):
        d = DissimilarityMap.from_values([4, 1, 1])
        outcome = project_cone(d, CHERRY_12, exact=True)
        assert outcome.levels == (2, 2)
        assert outcome.squared_error == 6
        assert outcome.pooled
        assert outcome.in_cone
        assert not project_subspace(d, CHERRY_12).in_cone

    def test_monotone_means_unchanged(self, ex25_map):
        cone = project_cone(ex25_map, COMB)
        subspace = project_subspace(ex25_map, COMB)
        assert cone.levels == subspace.levels
        assert not cone.pooled

    def test_pooled_point_is_ultrametric(self, ex25_map):
        reversed_fork = MergeChain.from_merges(4, [(0, 2), (1, 3), (0, 1)])
        outcome = project_cone(ex25_map, reversed_fork)
        x = outcome.to_ultrametric()
        assert squared_error(ex25_map, x) == approx(outcome.squared_error)
        assert list(outcome.levels) == sorted(outcome.levels)


class TestProjectionProperties:
    def test_residual_orthogonal_to_level_sets(self, random_map):
        d = random_map(5)
        for chain in enumerate_chains(5):
            residual = d.values - project_subspace(d, chain).expand()
            assert level_indicator_matrix(chain) @ residual == approx(np.zeros(4), abs=1e-9)

    def test_pythagoras(self, random_map):
        d = random_map(5)
        for chain in enumerate_chains(5):
            x = project_subspace(d, chain).expand()
            assert float(d.values @ d.values) == approx(float(x @ x) + float((d.values - x) @ (d.values - x)))

    def test_translation_shifts_levels_only(self, random_map):
        d = random_map(5)
        moved = d.translate(Fraction(7, 2))
        for chain in enumerate_chains(5):
            before = project_subspace(d, chain)
            after = project_subspace(moved, chain)
            assert list(after.levels) == approx([v + 3.5 for v in before.levels])
            assert after.squared_error == approx(before.squared_error)
            assert after.in_cone == before.in_cone
            assert in_projection_cone(moved, chain) == in_projection_cone(d, chain)

    def test_cone_projection_beats_monotone_levels(self, rng, random_map):
        d = random_map(4)
        for chain in [FORK, COMB, MergeChain.from_merges(4, [(2, 3), (0, 3), (1, 3)])]:
            best = project_cone(d, chain).squared_error
            for _ in range(1000):
                levels = np.sort(rng.uniform(-5.0, 20.0, 3))
                assert best <= squared_error(d, Ultrametric(chain, tuple(levels.tolist()))) + 1e-9

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_member_iff_cone_projection_is_subspace_projection(self, rng, n):
        for _ in range(3):
            d = DissimilarityMap.from_values([int(v) for v in rng.integers(0, 4, n * (n - 1) // 2)])
            for chain in enumerate_chains(n):
                subspace = project_subspace(d, chain, exact=True)
                cone = project_cone(d, chain, exact=True)
                member = in_projection_cone(d, chain, exact=True)
                assert subspace.in_cone == member
                assert (cone.squared_error == subspace.squared_error) == member


class TestSquaredError:
    def test_upgma_output(self, ex25_map):
        assert squared_error(ex25_map, Ultrametric(FORK, (1, 5, 15))) == approx(388)

    def test_perturbed_data(self, ex25_with_eps):
        x = Ultrametric(FORK, (1, 5, Fraction(61, 4)))
        assert squared_error(ex25_with_eps(1), x) == Fraction(1659, 4)
        assert float(squared_error(ex25_with_eps(1), x)) == approx(414.75)

    def test_zero_at_the_point(self):
        x = Ultrametric(FORK, (1.0, 2.0, 4.0))
        assert squared_error(DissimilarityMap.from_values(x.expand().tolist()), x) == 0


class TestIsotonicRegression:
    def test_monotone_input_unchanged(self):
        assert isotonic_regression([1, 2, 3], [1, 1, 1]) == [1, 2, 3]

    def test_weighted_pool(self):
        assert isotonic_regression([4, 1], [1, 2]) == [2, 2]

    def test_cascading_pool(self):
        fitted = isotonic_regression([1.0, 5.0, 3.0, 2.0], [1, 1, 1, 1])
        assert fitted == approx([1.0, 10 / 3, 10 / 3, 10 / 3])

    def test_fractions(self):
        assert isotonic_regression([Fraction(3), Fraction(1)], [1, 1]) == [2, 2]

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            isotonic_regression([1, 2], [1])


class TestFanOperator:
    @pytest.mark.parametrize("n, chains, topologies", [(3, 3, 3), (4, 18, 15)])
    def test_sizes(self, n, chains, topologies):
        operator = fan_operator(n)
        assert len(operator.chains) == chains
        assert len(operator.topologies) == topologies
        assert operator.topology_incidence.sum() == chains

    def test_prop35_membership(self, prop35_map):
        members = member_chains(prop35_map)
        assert len(members) == 4
        assert COMB in members and FORK in members
        assert set(members) == set(member_chains(prop35_map, exact=True))

    def test_three_taxa_two_cones(self):
        d = DissimilarityMap.from_values([1, 2, 4])
        assert len(member_chains(d)) == 2

    def test_equilateral(self):
        operator = fan_operator(3)
        nonstrict, strict, boundary = operator.classify(np.ones(3))
        assert nonstrict.sum() == 3
        assert strict.sum() == 0
        assert boundary.all()

    def test_batches_match_single_rows(self, rng):
        operator = fan_operator(4)
        data = rng.standard_normal((300, 6))
        batched = operator.membership(data)
        single = np.vstack([operator.membership(row) for row in data[:20]])
        assert (batched[:20] == single).all()

    def test_rejects_wrong_width(self):
        with pytest.raises(ValueError):
            fan_operator(4).membership(np.ones(5))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            FanOperator(8)
