"""
Tests for coupling extraction, symmetrization, irreducibility and simulation.
"""

import dataclasses
import unittest

import numpy as np

from ..coupling import (
    PairSampler,
    coupling_irreducible,
    eigenrelation_error,
    export_coupling,
    extract_coupling,
    fiber_pairs,
    invariant_pair_set,
    invariant_partition,
    load_coupling,
    marginal_error,
    simulate_coupled,
    symmetrize,
)
from ..eigendistance import iterate_F, result_from_metric
from ..example_chains import hamming, lazy_torus, parity_metric, rho_L, spin_flip
from ..exceptions import EigenrelationViolation, MarginalViolation, ValidationError
from ..markov_core import indicator_metric, validate_chain
from ..structure import find_lumpable_partition, is_lumpable, product_chain, projection_partition, tensor_metric
from ..wasserstein_map import apply_W
from .helpers import certified_lazy_chains, random_stochastic, two_state_chain


class TestExtractCoupling(unittest.TestCase):
    """Test cases for extract_coupling and symmetrize."""

    def setUp(self):
        self.chain = lazy_torus(7, 0.2)
        self.eig = result_from_metric(self.chain, rho_L(7))

    def test_marginals_and_eigenrelation(self):
        coupling = extract_coupling(self.chain, self.eig)
        _, deviation = marginal_error(coupling, self.chain)
        _, miss = eigenrelation_error(coupling)
        self.assertLessEqual(deviation, 1e-10)
        self.assertLessEqual(miss, 1e-8)

    def test_diagonal_rows_stay_on_diagonal(self):
        coupling = extract_coupling(self.chain, self.eig)
        for (u, v), _ in coupling.row(3, 3):
            self.assertEqual(u, v)

    def test_rows_are_stochastic(self):
        coupling = extract_coupling(self.chain, self.eig)
        np.testing.assert_allclose(np.asarray(coupling.kernel.sum(axis=1)).ravel(), 1.0, atol=1e-12)

    def test_symmetrize(self):
        coupling = symmetrize(extract_coupling(self.chain, self.eig))
        self.assertTrue(coupling.symmetric)
        np.testing.assert_allclose(coupling.row_matrix(1, 4), coupling.row_matrix(4, 1).T, atol=1e-15)
        _, deviation = marginal_error(coupling, self.chain)
        _, miss = eigenrelation_error(coupling)
        self.assertLessEqual(deviation, 1e-10)
        self.assertLessEqual(miss, 1e-8)
        self.assertIs(symmetrize(coupling), coupling)

    def test_reuses_kept_plans(self):
        wp = apply_W(self.chain, self.eig.rho, keep_plans=True)
        direct = extract_coupling(self.chain, self.eig)
        reused = extract_coupling(self.chain, self.eig, wp=wp)
        self.assertAlmostEqual(abs(direct.kernel - reused.kernel).max(), 0.0)

    def test_marginal_error_locates_perturbed_pair(self):
        coupling = extract_coupling(self.chain, self.eig)
        kernel = coupling.kernel.tolil()
        row = coupling.index(2, 5)
        col = kernel.rows[row][0]
        u, v = coupling.pair(col)
        kernel[row, col] -= 1e-3
        kernel[row, coupling.index((u + 1) % 7, v)] += 1e-3
        perturbed = dataclasses.replace(coupling, kernel=kernel.tocsr())
        pair, deviation = marginal_error(perturbed, self.chain)
        self.assertEqual(pair, (2, 5))
        self.assertAlmostEqual(deviation, 1e-3, delta=1e-12)

    def test_wrong_plans(self):
        other = random_stochastic(7, seed=1)
        wp = apply_W(other, self.eig.rho, keep_plans=True)
        with self.assertRaises(MarginalViolation):
            extract_coupling(self.chain, self.eig, wp=wp)

    def test_wrong_kappa(self):
        wrong = dataclasses.replace(self.eig, kappa=self.eig.kappa + 0.1)
        with self.assertRaises(EigenrelationViolation):
            extract_coupling(self.chain, wrong)


class TestPairStructure(unittest.TestCase):
    """Test cases for irreducibility and invariant pair sets."""

    def test_single_pair_is_irreducible(self):
        chain = two_state_chain(0.3, 0.2)
        coupling = extract_coupling(chain, result_from_metric(chain, indicator_metric(2)))
        irreducible, classes = coupling_irreducible(coupling)
        self.assertTrue(irreducible)
        self.assertEqual(classes, [[(0, 1)]])

    def test_parity_zero_set_is_invariant(self):
        chain = lazy_torus(6, 0.2)
        coupling = extract_coupling(chain, result_from_metric(chain, parity_metric(6)))
        same_parity = fiber_pairs([x % 2 for x in range(6)])
        self.assertEqual(len(same_parity), 6)
        self.assertTrue(invariant_pair_set(coupling, same_parity))
        irreducible, classes = coupling_irreducible(coupling)
        self.assertFalse(irreducible)
        self.assertGreater(len(classes), 1)

    def test_parity_witness_is_lumpable(self):
        chain = lazy_torus(6, 0.2)
        coupling = extract_coupling(chain, result_from_metric(chain, parity_metric(6)))
        witness = invariant_partition(coupling)
        self.assertIsNotNone(witness)
        self.assertTrue(invariant_pair_set(coupling, fiber_pairs(witness.labels())))
        self.assertTrue(is_lumpable(chain, witness))

    def test_lumpable_free_chains_give_irreducible_couplings(self):
        chains = certified_lazy_chains(25)
        self.assertGreaterEqual(len(chains), 20)
        for seed, chain in chains:
            eig = iterate_F(chain)
            self.assertTrue(eig.converged, msg=f"seed {seed}")
            off = ~np.eye(chain.n, dtype=bool)
            self.assertGreater(eig.rho.matrix[off].min(), 1e-8, msg=f"seed {seed}")
            coupling = symmetrize(extract_coupling(chain, eig))
            irreducible, classes = coupling_irreducible(coupling)
            self.assertTrue(irreducible, msg=f"seed {seed}")
            self.assertIsNone(invariant_partition(coupling), msg=f"seed {seed}")
            self.assertEqual(sum(len(c) for c in classes), chain.n * (chain.n - 1) // 2)

    def test_product_chain_coupling_keeps_fibers(self):
        chain = product_chain(spin_flip(1, 0.1), spin_flip(2, 0.1))
        rho = tensor_metric(hamming(1), hamming(2))
        self.assertIsNotNone(find_lumpable_partition(chain))
        coupling = symmetrize(extract_coupling(chain, result_from_metric(chain, rho)))
        for coordinate in (0, 1):
            fibers = projection_partition(2, 4, coordinate)
            self.assertTrue(invariant_pair_set(coupling, fiber_pairs(fibers.labels())))
        irreducible, _ = coupling_irreducible(coupling)
        self.assertFalse(irreducible)
        witness = invariant_partition(coupling)
        self.assertIsNotNone(witness)
        self.assertFalse(witness.is_trivial)
        self.assertTrue(invariant_pair_set(coupling, fiber_pairs(witness.labels())))
        self.assertTrue(is_lumpable(chain, witness))

    def test_identity_chain_is_reducible(self):
        chain = validate_chain(np.eye(3))
        coupling = extract_coupling(chain, result_from_metric(chain, indicator_metric(3)))
        self.assertFalse(coupling_irreducible(coupling)[0])
        self.assertEqual(invariant_partition(coupling).blocks, ((0, 1), (2,)))

    def test_spin_flip_is_reducible(self):
        chain = spin_flip(2, 0.2)
        coupling = extract_coupling(chain, result_from_metric(chain, hamming(2)))
        self.assertFalse(coupling_irreducible(coupling)[0])

    def test_classes_cover_all_pairs(self):
        chain = lazy_torus(7, 0.2)
        coupling = extract_coupling(chain, result_from_metric(chain, rho_L(7)))
        _, classes = coupling_irreducible(coupling)
        self.assertEqual(sum(len(c) for c in classes), 21)

    def test_export_round_trip(self):
        chain = lazy_torus(5, 0.2)
        coupling = symmetrize(extract_coupling(chain, result_from_metric(chain, rho_L(5))))
        records = export_coupling(coupling)
        self.assertEqual(len(records), coupling.kernel.nnz)
        loaded = load_coupling(records, 5, coupling.kappa, coupling.p, coupling.rho, symmetric=True)
        self.assertAlmostEqual(abs(loaded.kernel - coupling.kernel).max(), 0.0)


class TestSimulateCoupled(unittest.TestCase):
    """Test cases for the pair-chain Monte Carlo."""

    def setUp(self):
        self.chain = lazy_torus(7, 0.2)
        self.eig = result_from_metric(self.chain, rho_L(7))
        self.coupling = symmetrize(extract_coupling(self.chain, self.eig))

    def test_mean_decay(self):
        T = 20
        sim = simulate_coupled(self.coupling, 0, 1, T, samples=20000, seed=3)
        self.assertEqual(sim.steps, T)
        expected = (1 - self.eig.kappa) ** np.arange(T + 1) * self.eig.rho.matrix[0, 1]
        slack = 4 * sim.stderr + 1e-12
        self.assertTrue(np.all(np.abs(sim.mean_rho_p - expected) <= slack))

    def test_deterministic_across_threads(self):
        first = simulate_coupled(self.coupling, 0, 2, 5, samples=25000, seed=11, workers=1)
        second = simulate_coupled(self.coupling, 0, 2, 5, samples=25000, seed=11, workers=3)
        np.testing.assert_array_equal(first.final_rho, second.final_rho)
        np.testing.assert_array_equal(first.tail_counts, second.tail_counts)

    def test_diagonal_start_stays_coalesced(self):
        sim = simulate_coupled(self.coupling, 2, 2, 5, samples=500, seed=0)
        np.testing.assert_array_equal(sim.mean_rho_p, 0.0)

    def test_histogram_counts_samples(self):
        sim = simulate_coupled(self.coupling, 0, 3, 4, samples=1000, seed=0, bins=10)
        self.assertEqual(int(sim.tail_counts.sum()), 1000)
        self.assertEqual(sim.bin_edges.size, 11)

    def test_empty_row(self):
        coupling = load_coupling([{'from': [0, 0], 'to': [0, 0], 'mass': 1.0}], 2)
        with self.assertRaises(ValidationError):
            PairSampler(coupling)

    def test_bad_start(self):
        with self.assertRaises(ValidationError):
            simulate_coupled(self.coupling, 0, 9, 3, samples=10)


if __name__ == "__main__":
    unittest.main()
