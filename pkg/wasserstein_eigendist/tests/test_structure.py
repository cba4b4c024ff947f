"""
Tests for lumpable partitions, quotients and product chains.
"""

import unittest
import warnings

import numpy as np

from ..eigendistance import verify_eigendistance
from ..example_chains import hamming, lazy_torus, parity_metric, random_lazy_chain, rho_L, spin_flip
from ..exceptions import BudgetExceeded, InvalidPartition, NotLumpable, ParameterRange, ParameterWarning, ValidationError
from ..models import Partition, PseudoMetric
from ..structure import (
    coarsest_lumpable_refinement,
    enumerate_lumpable_partitions,
    find_lumpable_partition,
    is_lumpable,
    lumpability_deviation,
    product_chain,
    projection_partition,
    quotient_chain,
    tensor_metric,
    zero_set_partition,
)

PARITY = Partition(((0, 2, 4), (1, 3, 5)))
MOD_THREE = Partition(((0, 3), (1, 4), (2, 5)))
REFLECTION = Partition(((0,), (1, 5), (2, 4), (3,)))


class TestPartition(unittest.TestCase):
    """Test cases for the Partition model."""

    def test_canonical_order(self):
        partition = Partition.from_blocks([[5, 3, 1], [4, 2, 0]], 6)
        self.assertEqual(partition, PARITY)
        np.testing.assert_array_equal(partition.labels(), [0, 1, 0, 1, 0, 1])

    def test_invalid_blocks(self):
        with self.assertRaises(InvalidPartition):
            Partition.from_blocks([[0, 1], [1, 2]], 3)
        with self.assertRaises(InvalidPartition):
            Partition.from_blocks([[0, 1]], 3)
        with self.assertRaises(InvalidPartition):
            Partition.from_blocks([[0, 1, 2], []], 3)

    def test_trivial(self):
        self.assertTrue(Partition.singletons(4).is_trivial)
        self.assertTrue(Partition.one_block(4).is_trivial)
        self.assertFalse(PARITY.is_trivial)


class TestLumpability(unittest.TestCase):
    """Test cases for the lumpability checks and searches."""

    def setUp(self):
        self.torus = lazy_torus(6, 0.2)

    def test_torus_partitions(self):
        for partition in (PARITY, MOD_THREE, REFLECTION):
            self.assertTrue(is_lumpable(self.torus, partition))

    def test_non_lumpable(self):
        partition = Partition(((0, 1, 2), (3, 4, 5)))
        self.assertFalse(is_lumpable(self.torus, partition))
        block, deviation = lumpability_deviation(self.torus, partition)
        self.assertAlmostEqual(deviation, 0.2)

    def test_enumeration_finds_torus_partitions(self):
        found = list(enumerate_lumpable_partitions(self.torus))
        for partition in (PARITY, MOD_THREE, REFLECTION):
            self.assertIn(partition, found)
        block_counts = [p.num_blocks for p in found]
        self.assertEqual(block_counts, sorted(block_counts))

    def test_exhaustive_search_returns_coarsest(self):
        # {0,1,3,4} | {2,5} precedes parity in restricted-growth order
        found = find_lumpable_partition(self.torus)
        self.assertEqual(found, Partition(((0, 1, 3, 4), (2, 5))))
        self.assertEqual(found.num_blocks, 2)

    def test_random_chain_is_irreducible(self):
        self.assertIsNone(find_lumpable_partition(random_lazy_chain(5, seed=4)))

    def test_heuristic_search(self):
        found = find_lumpable_partition(self.torus, mode="heuristic")
        self.assertIsNotNone(found)
        self.assertTrue(is_lumpable(self.torus, found))
        self.assertFalse(found.is_trivial)

    def test_refinement(self):
        refined = coarsest_lumpable_refinement(self.torus, Partition(((0,), (1, 2, 3, 4, 5))))
        self.assertEqual(refined, REFLECTION)

    def test_unknown_mode(self):
        with self.assertRaises(ValidationError):
            find_lumpable_partition(self.torus, mode="guess")

    def test_budget(self):
        with self.assertRaises(BudgetExceeded):
            find_lumpable_partition(lazy_torus(13, 0.2))


class TestQuotient(unittest.TestCase):
    """Test cases for quotient_chain and zero_set_partition."""

    def test_parity_quotient(self):
        quotient = quotient_chain(lazy_torus(6, 0.2), PARITY)
        np.testing.assert_allclose(quotient.matrix, [[0.6, 0.4], [0.4, 0.6]])
        self.assertEqual(quotient.labels, ["{0,2,4}", "{1,3,5}"])

    def test_not_lumpable(self):
        with self.assertRaises(NotLumpable):
            quotient_chain(lazy_torus(6, 0.2), Partition(((0, 1, 2), (3, 4, 5))))

    def test_zero_set_of_parity_metric(self):
        self.assertEqual(zero_set_partition(parity_metric(6)), PARITY)

    def test_zero_set_of_proper_metric(self):
        self.assertEqual(zero_set_partition(rho_L(6)), Partition.singletons(6))

    def test_zero_set_of_eigendistance_is_lumpable(self):
        chain = lazy_torus(6, 0.2)
        self.assertTrue(is_lumpable(chain, zero_set_partition(parity_metric(6))))


class TestProductChains(unittest.TestCase):
    """Test cases for product chains and tensor metrics."""

    def test_product_is_stochastic(self):
        chain = product_chain(lazy_torus(3, 0.2), lazy_torus(3, 0.25))
        self.assertEqual(chain.n, 9)
        np.testing.assert_allclose(chain.matrix.sum(axis=1), 1.0)

    def test_projection_quotient(self):
        left, right = lazy_torus(3, 0.2), lazy_torus(4, 0.25)
        chain = product_chain(left, right)
        np.testing.assert_allclose(quotient_chain(chain, projection_partition(3, 4, 0)).matrix, left.matrix)
        np.testing.assert_allclose(quotient_chain(chain, projection_partition(3, 4, 1)).matrix, right.matrix)

    def test_hamming_is_a_tensor(self):
        metric = tensor_metric(hamming(1), hamming(1))
        np.testing.assert_array_equal(metric.matrix, hamming(2).matrix)
        np.testing.assert_allclose(product_chain(spin_flip(1, 0.1), spin_flip(1, 0.1)).matrix, spin_flip(2, 0.1).matrix)

    def test_tensor_of_equal_curvature_eigendistances(self):
        chain = product_chain(spin_flip(1, 0.15), spin_flip(2, 0.15))
        metric = tensor_metric(hamming(1), hamming(2), a=2.0, b=0.5)
        check = verify_eigendistance(chain, metric)
        self.assertAlmostEqual(check.kappa_hat, 0.3, delta=1e-9)

    def test_pullback(self):
        metric = tensor_metric(hamming(1), hamming(1), a=1.0, b=0.0)
        self.assertEqual(metric.matrix[0, 1], 0.0)
        self.assertEqual(metric.matrix[0, 2], 1.0)

    def test_weights(self):
        with self.assertRaises(ParameterRange):
            tensor_metric(hamming(1), hamming(1), a=-1.0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            metric = tensor_metric(hamming(1), hamming(1), a=0.0, b=0.0)
        self.assertTrue(any(issubclass(w.category, ParameterWarning) for w in caught))
        self.assertTrue(metric.is_degenerate)

    def test_p2_tensor(self):
        metric = tensor_metric(PseudoMetric([[0, 3], [3, 0]]), PseudoMetric([[0, 4], [4, 0]]), p=2.0)
        self.assertAlmostEqual(metric.matrix[0, 3], 5.0)


if __name__ == "__main__":
    unittest.main()
