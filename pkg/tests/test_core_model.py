"""
Core model: pair indexing, partitions, chains of flats, ultrametrics and trees.
"""
import itertools
from fractions import Fraction

import numpy as np
import pytest
from pytest import approx

from core_model.chains import MergeChain, chain_count, chain_topology, comb_chains, enumerate_chains, level_sets
from core_model.dissimilarity import DissimilarityMap, TaxonSet
from core_model.pairs import PairIndex, pair_count, pair_from_index, pair_index
from core_model.partition import Partition, canonical_partition
from core_model.tree import tree_from_ultrametric
from core_model.ultrametric import Ultrametric, is_ultrametric_vector
from utils.error_handling import (
    CapacityError,
    DegenerateInputError,
    DimensionError,
    InvalidChainError,
    MalformedPartitionError,
    NotUltrametricError,
)

FORK = MergeChain.from_merges(4, [(0, 1), (2, 3), (0, 2)])
SWAPPED_FORK = MergeChain.from_merges(4, [(2, 3), (0, 1), (0, 2)])
COMB = MergeChain.from_merges(4, [(0, 1), (0, 2), (0, 3)])


class TestPairs:
    def test_row_major_order(self):
        assert [pair_index(i, j, 4) for i in range(4) for j in range(i + 1, 4)] == list(range(6))

    def test_argument_order_ignored(self):
        assert pair_index(3, 1, 5) == pair_index(1, 3, 5)

    def test_inverse(self):
        n = 7
        for k in range(pair_count(n)):
            i, j = pair_from_index(k, n)
            assert pair_index(i, j, n) == k

    def test_pair_index_tuple(self):
        assert PairIndex.from_pair(2, 0, 4) == PairIndex(0, 2, 1)
        assert PairIndex.from_index(5, 4) == PairIndex(2, 3, 5)

    def test_rejects_diagonal_and_out_of_range(self):
        with pytest.raises(ValueError):
            pair_index(2, 2, 4)
        with pytest.raises(IndexError):
            pair_index(0, 4, 4)


class TestPartition:
    def test_canonical_sort(self):
        assert canonical_partition([[2], [0, 1]], 3).blocks == ((0, 1), (2,))

    def test_singletons_unchanged(self):
        assert canonical_partition([[0], [1], [2]]) == Partition.singletons(3)

    def test_order_independent(self):
        assert canonical_partition([[0, 2], [1, 3]]) == canonical_partition([[1, 3], [2, 0]])

    def test_idempotent(self):
        p = canonical_partition([[3, 1], [0], [2, 4]])
        assert canonical_partition(p.blocks) == p

    @pytest.mark.parametrize("blocks, n", [([[0, 1], [1, 2]], None), ([[0], [2]], 3), ([[0, 1], []], None)])
    def test_malformed(self, blocks, n):
        with pytest.raises(MalformedPartitionError):
            canonical_partition(blocks, n)

    def test_refines(self):
        fine = canonical_partition([[0, 1], [2], [3]])
        assert fine.refines(canonical_partition([[0, 1, 2], [3]]))
        assert not fine.refines(canonical_partition([[0, 2], [1, 3]]))

    def test_rank(self):
        assert canonical_partition([[0, 1, 2], [3]]).rank == 2


class TestChains:
    def test_level_sets_three_taxa(self):
        chain = MergeChain.from_merges(3, [(0, 1), (0, 2)])
        assert level_sets(chain) == [(0,), (1, 2)]

    def test_level_sets_fork(self):
        assert level_sets(FORK) == [(0,), (5,), (1, 2, 3, 4)]

    def test_level_sets_cover_all_pairs(self):
        for chain in enumerate_chains(5):
            sets = level_sets(chain)
            assert sorted(k for s in sets for k in s) == list(range(10))
            assert [len(s) for s in sets] == chain.level_sizes.tolist()

    @pytest.mark.parametrize("n, expected", [(2, 1), (3, 3), (4, 18), (5, 180), (6, 2700)])
    def test_enumeration_count(self, n, expected):
        chains = list(enumerate_chains(n))
        assert len(chains) == expected == chain_count(n)
        assert len(set(chains)) == expected

    def test_enumeration_is_deterministic(self):
        assert [c.key for c in enumerate_chains(4)] == [c.key for c in enumerate_chains(4)]

    def test_enumeration_cap(self):
        with pytest.raises(CapacityError):
            next(enumerate_chains(9))

    def test_chain_count_closed_form(self):
        assert chain_count(6) == 2700
        assert chain_count(8) == 1587600

    def test_fork_topology_forgets_ranking(self):
        assert chain_topology(FORK) == "((1,2),(3,4))"
        assert chain_topology(SWAPPED_FORK) == "((1,2),(3,4))"
        assert FORK != SWAPPED_FORK

    def test_comb_topology(self):
        assert chain_topology(COMB) == "(((1,2),3),4)"

    def test_topology_with_labels(self):
        assert chain_topology(FORK, ["w", "x", "y", "z"]) == "((w,x),(y,z))"

    def test_comb_chains(self):
        combs = comb_chains(4)
        assert len(combs) == 6
        assert len({chain_topology(c) for c in combs}) == 6
        assert COMB in combs

    def test_from_partitions_round_trip(self):
        assert MergeChain.from_partitions(FORK.partitions) == FORK

    def test_from_partitions_rejects_skipped_rank(self):
        parts = list(COMB.partitions)
        del parts[1]
        with pytest.raises(InvalidChainError):
            MergeChain.from_partitions(parts)

    def test_repeated_merge_rejected(self):
        with pytest.raises(InvalidChainError):
            MergeChain.from_merges(3, [(0, 1), (1, 0)])

    def test_relabel(self):
        swapped = COMB.relabel([3, 1, 2, 0])
        assert chain_topology(swapped) == "(((2,4),3),1)"
        assert COMB.relabel([0, 1, 2, 3]) == COMB


class TestDissimilarityMap:
    def test_wrong_length(self):
        with pytest.raises(DimensionError):
            DissimilarityMap.from_values([1.0, 2.0])

    def test_needs_two_taxa(self):
        with pytest.raises(DegenerateInputError):
            TaxonSet(("a",))

    def test_rational_copy_kept(self, ex25_map):
        assert ex25_map.rational == tuple(Fraction(v) for v in (1, 2, 20, 10, 28, 5))
        assert ex25_map.vector(exact=True).dtype == object

    def test_matrix_round_trip(self, ex25_map):
        m = ex25_map.to_matrix()
        assert np.allclose(m, m.T)
        assert m[1, 3] == 28
        assert DissimilarityMap.from_matrix(m).values.tolist() == ex25_map.values.tolist()

    def test_translate_and_scale(self, ex25_map):
        assert ex25_map.translate(Fraction(1, 2)).rational[0] == Fraction(3, 2)
        assert ex25_map.scale(2).values.tolist() == [2, 4, 40, 20, 56, 10]

    def test_permute_moves_labels_with_taxa(self, ex25_map):
        moved = ex25_map.permute([1, 0, 2, 3])
        assert moved.taxa.labels == ("2", "1", "3", "4")
        assert moved.value(0, 2) == ex25_map.value(1, 2)


class TestUltrametric:
    def test_decreasing_levels_rejected(self):
        with pytest.raises(NotUltrametricError):
            Ultrametric(COMB, (1, 5, 3))

    def test_expand(self):
        x = Ultrametric(FORK, (1, 5, 15))
        assert x.expand().tolist() == [1, 15, 15, 15, 15, 5]
        assert is_ultrametric_vector(x.expand(), 4)

    def test_three_point_condition(self):
        assert not is_ultrametric_vector(np.array([1.0, 2.0, 3.0]), 3)

    def test_exact_levels(self):
        x = Ultrametric(COMB, (Fraction(1), Fraction(6), Fraction(53, 3)))
        assert x.exact
        assert x.expand()[5] == Fraction(53, 3)


class TestUltrametricRoundTrip:
    @pytest.mark.parametrize("n", [3, 5, 6])
    def test_random_ultrametrics(self, rng, n):
        chains = list(enumerate_chains(n))
        for _ in range(100):
            chain = chains[rng.integers(len(chains))]
            x = Ultrametric(chain, tuple(np.sort(rng.uniform(0.0, 10.0, n - 1)).tolist()))
            values = x.expand()
            assert is_ultrametric_vector(values, n)
            assert tree_from_ultrametric(x).pairwise_distances().tolist() == approx(values.tolist())
            m = DissimilarityMap.from_values(values.tolist()).to_matrix()
            for i, j, k in itertools.combinations(range(n), 3):
                _, b, c = sorted((m[i, j], m[i, k], m[j, k]))
                assert b == approx(c)

    def test_perturbed_ultrametric_fails(self):
        values = Ultrametric(FORK, (1.0, 5.0, 15.0)).expand().astype(float)
        values[0] += 20.0
        assert not is_ultrametric_vector(values, 4)


class TestEquidistantTree:
    def test_three_taxa_heights(self):
        tree = tree_from_ultrametric(Ultrametric(MergeChain.from_merges(3, [(0, 1), (0, 2)]), (1, 3)))
        assert tree.root.height == approx(1.5)
        cherry = next(child for child in tree.root.children if not child.is_leaf)
        assert cherry.height == approx(0.5)
        leaf3 = next(child for child in tree.root.children if child.is_leaf)
        assert leaf3.label == "3"
        weights = {(id(p), id(c)): w for p, c, w in tree.edge_weights()}
        assert weights[(id(tree.root), id(leaf3))] == approx(1.5)

    def test_fork_heights(self):
        tree = tree_from_ultrametric(Ultrametric(FORK, (1, 5, 15)))
        assert tree.root.height == approx(7.5)
        assert sorted(child.height for child in tree.root.children) == approx([0.5, 2.5])

    def test_equidistant_and_distances(self):
        x = Ultrametric(COMB, (1.0, 6.0, 53 / 3))
        tree = tree_from_ultrametric(x, ["a", "b", "c", "d"])
        assert tree.is_equidistant()
        assert list(tree.root_path_lengths().values()) == approx([53 / 6] * 4)
        assert tree.pairwise_distances().tolist() == approx(x.expand().tolist())

    def test_exact_tree(self):
        x = Ultrametric(COMB, (Fraction(1), Fraction(6), Fraction(53, 3)))
        tree = tree_from_ultrametric(x)
        assert tree.root.height == Fraction(53, 6)
        assert list(tree.pairwise_distances()) == list(x.expand())

    def test_two_taxa(self):
        tree = tree_from_ultrametric(Ultrametric(MergeChain.from_merges(2, [(0, 1)]), (5.0,)))
        assert tree.root.height == approx(2.5)
        assert tree.n == 2
