"""
Tests for the fixed-point iterations and the eigendistance checks.
"""

import math
import unittest
import warnings

import numpy as np

from ..eigendistance import (
    eigenfunction_bracket,
    iterate_F,
    iterate_maximal,
    lambda_scale,
    p_root_transfer,
    result_from_metric,
    sandwich_from_eigenfunction,
    verify_eigendistance,
)
from ..example_chains import (
    gamblers_ruin,
    hamming,
    harmonic_h,
    kappa_L,
    kappa_parity,
    lazy_torus,
    parity_metric,
    random_metric,
    rho_L,
    ruin_tau_comparison,
    spin_flip,
)
from ..exceptions import (
    DegenerateInput,
    InvalidReference,
    NotAnEigenfunction,
    ParameterWarning,
    ValidationError,
    ZeroSetViolation,
)
from ..markov_core import alpha_metric, indicator_metric, validate_chain
from ..models import PseudoMetric, Tolerances
from ..wasserstein_map import apply_W
from .helpers import certified_lazy_chains, random_stochastic, two_state_chain


class TestVerifyEigendistance(unittest.TestCase):
    """Test cases for verify_eigendistance against closed forms."""

    def test_sine_metric_on_torus(self):
        for L, q in [(7, 0.2), (13, 0.25), (16, 0.2)]:
            with self.subTest(L=L, q=q):
                check = verify_eigendistance(lazy_torus(L, q), rho_L(L))
                self.assertAlmostEqual(check.kappa_hat, kappa_L(L, 1 - 2 * q), delta=1e-9)
                self.assertLessEqual(check.residual, 1e-9)

    def test_torus_13_value(self):
        check = verify_eigendistance(lazy_torus(13, 0.25), rho_L(13))
        self.assertAlmostEqual(check.kappa_hat, 0.5 * (1 - math.cos(2 * math.pi / 13)), delta=1e-9)

    def test_parity_metric(self):
        for L in (8, 10):
            for q in (0.2, 0.3):
                with self.subTest(L=L, q=q):
                    check = verify_eigendistance(lazy_torus(L, q), parity_metric(L))
                    self.assertAlmostEqual(check.kappa_hat, kappa_parity(q), delta=1e-10)
                    self.assertLessEqual(check.residual, 1e-9)

    def test_spin_flip_hamming(self):
        check = verify_eigendistance(spin_flip(3, 0.1), hamming(3))
        self.assertAlmostEqual(check.kappa_hat, 0.2, delta=1e-9)

    def test_sine_metric_without_r_above_q_reports_residual(self):
        # r = 0.2 < q = 0.4: no eigendistance claim, only a finite residual
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ParameterWarning)
            check = verify_eigendistance(lazy_torus(7, 0.4), rho_L(7))
        self.assertTrue(np.isfinite(check.residual))
        self.assertGreaterEqual(check.residual, 0.0)

    def test_zero_set_violation(self):
        chain = validate_chain([[0.6, 0.0, 0.4], [0.0, 0.6, 0.4], [0.3, 0.3, 0.4]])
        rho = PseudoMetric([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        # rows 0 and 1 put the same mass on state 2, so W_1 keeps d(0, 1) = 0
        verify_eigendistance(chain, rho)
        chain = validate_chain([[0.6, 0.4, 0.0], [0.0, 0.6, 0.4], [0.3, 0.3, 0.4]])
        with self.assertRaises(ZeroSetViolation):
            verify_eigendistance(chain, rho)

    def test_zero_metric(self):
        with self.assertRaises(DegenerateInput):
            verify_eigendistance(two_state_chain(), PseudoMetric(np.zeros((2, 2))))

    def test_result_from_metric(self):
        result = result_from_metric(lazy_torus(7, 0.2), rho_L(7).scaled(3.0))
        self.assertEqual(result.method, "verified")
        self.assertAlmostEqual(result.rho.max_entry, 1.0)
        self.assertAlmostEqual(result.scale, 3.0 * rho_L(7).max_entry)
        self.assertAlmostEqual(result.kappa, kappa_L(7, 0.6), delta=1e-9)


class TestPRootTransfer(unittest.TestCase):
    """Test cases for the p-th-root transfer."""

    def test_torus(self):
        base = result_from_metric(lazy_torus(13, 0.25), rho_L(13))
        transferred = p_root_transfer(lazy_torus(13, 0.25), base, 2.0)
        self.assertAlmostEqual(transferred.kappa, 1 - math.sqrt(1 - base.kappa), delta=1e-12)
        self.assertLessEqual(transferred.residual, 1e-8)
        self.assertEqual(transferred.method, "p_root")

    def test_spin_flip(self):
        chain = spin_flip(3, 0.1)
        transferred = p_root_transfer(chain, result_from_metric(chain, hamming(3)), 2.0)
        self.assertAlmostEqual(transferred.kappa, 1 - math.sqrt(0.8), delta=1e-9)
        check = verify_eigendistance(chain, transferred.rho, 2.0)
        self.assertAlmostEqual(check.kappa_hat, 1 - math.sqrt(0.8), delta=1e-8)

    def test_requires_p_one(self):
        chain = spin_flip(2, 0.1)
        base = result_from_metric(chain, hamming(2))
        transferred = p_root_transfer(chain, base, 2.0)
        with self.assertRaises(ValidationError):
            p_root_transfer(chain, transferred, 3.0)


class TestLambdaScale(unittest.TestCase):
    """Test cases for lambda_scale."""

    def test_largest_ratio(self):
        rho = PseudoMetric([[0, 2, 1], [2, 0, 3], [1, 3, 0]])
        self.assertAlmostEqual(lambda_scale(rho, indicator_metric(3)), 3.0)

    def test_degenerate(self):
        with self.assertRaises(DegenerateInput):
            lambda_scale(PseudoMetric(np.zeros((3, 3))), indicator_metric(3))

    def test_invalid_reference(self):
        reference = PseudoMetric([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        with self.assertRaises(InvalidReference):
            lambda_scale(indicator_metric(3), reference)


class TestIterateF(unittest.TestCase):
    """Test cases for the normalized fixed-point iteration."""

    def test_two_state(self):
        result = iterate_F(two_state_chain(0.3, 0.2))
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.kappa, 0.5, delta=1e-10)
        self.assertAlmostEqual(result.rho.matrix[0, 1], 1.0)

    def test_random_chain_fixed_point(self):
        chain = random_stochastic(4, seed=3)
        result = iterate_F(chain)
        self.assertTrue(result.converged)
        self.assertLessEqual(result.residual, Tolerances().residual_tol)
        self.assertAlmostEqual(result.rho.max_entry, 1.0)
        check = verify_eigendistance(chain, result.rho)
        self.assertAlmostEqual(check.kappa_hat, result.kappa, delta=1e-8)

    def test_fixed_point_at_p2(self):
        chain = random_stochastic(4, seed=5)
        result = iterate_F(chain, p=2.0)
        self.assertTrue(result.converged)
        self.assertLessEqual(result.residual, Tolerances().residual_tol)

    def test_scale_invariance(self):
        chain = random_stochastic(4, seed=6)
        alpha = alpha_metric(chain)
        first = iterate_F(chain, init=alpha)
        second = iterate_F(chain, init=alpha.scaled(7.5))
        np.testing.assert_allclose(first.rho.matrix, second.rho.matrix, atol=1e-9)
        self.assertAlmostEqual(first.kappa, second.kappa, delta=1e-9)

    def test_limit_does_not_depend_on_init(self):
        chains = certified_lazy_chains(25)
        self.assertGreaterEqual(len(chains), 20)
        for seed, chain in chains:
            results = [
                iterate_F(chain, init=init)
                for init in (indicator_metric(chain.n), alpha_metric(chain), random_metric(chain.n, seed=seed + 500))
            ]
            for result in results:
                self.assertTrue(result.converged, msg=f"seed {seed}")
            for result in results[1:]:
                np.testing.assert_allclose(result.rho.matrix, results[0].rho.matrix, atol=1e-7, err_msg=f"seed {seed}")
                self.assertAlmostEqual(result.kappa, results[0].kappa, delta=1e-7, msg=f"seed {seed}")

    def test_trace_and_iteration_cap(self):
        chain = random_stochastic(4, seed=3)
        result = iterate_F(chain, tolerances=Tolerances(max_iter=1))
        self.assertFalse(result.converged)
        self.assertEqual(result.iterations, 1)
        self.assertEqual(len(result.trace), 1)

    def test_zero_init(self):
        with self.assertRaises(DegenerateInput):
            iterate_F(two_state_chain(), init=PseudoMetric(np.zeros((2, 2))))

    def test_reference_must_dominate_its_image(self):
        chain = two_state_chain(0.3, 0.2)
        chain3 = validate_chain([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
        reference = PseudoMetric([[0, 1e-3, 1], [1e-3, 0, 1], [1, 1, 0]])
        self.assertGreater((apply_W(chain3, reference).metric.matrix - reference.matrix).max(), 0)
        with self.assertRaises(InvalidReference):
            iterate_F(chain3, reference=reference)
        self.assertTrue(iterate_F(chain, reference=indicator_metric(2)).converged)


class TestIterateMaximal(unittest.TestCase):
    """Test cases for the unnormalized iteration."""

    def test_contracting_chain_is_degenerate(self):
        result = iterate_maximal(two_state_chain(0.3, 0.2))
        self.assertTrue(result.degenerate)
        self.assertEqual(result.rho.max_entry, 0.0)

    def test_absorbing_chain_keeps_a_fixed_point(self):
        chain = gamblers_ruin(3, 0.25)
        result = iterate_maximal(chain)
        self.assertTrue(result.converged)
        self.assertFalse(result.degenerate)
        self.assertEqual(result.kappa, 0.0)
        self.assertLessEqual(result.residual, 1e-8)
        self.assertAlmostEqual(result.rho.matrix[0, 3], 1.0)

    def test_iterates_decrease(self):
        chain = gamblers_ruin(3, 0.25)
        previous = indicator_metric(4).matrix
        for steps in range(1, 8):
            raw = iterate_maximal(chain, tolerances=Tolerances(max_iter=steps)).raw_rho.matrix
            self.assertLessEqual((raw - previous).max(), 1e-12, msg=f"step {steps}")
            previous = raw
        self.assertLess(previous[1, 2], 1.0)

    def test_ruin_converges_to_flat_fixed_point(self):
        for q in (0.25, 0.4):
            with self.subTest(q=q):
                chain = gamblers_ruin(5, q)
                result = iterate_maximal(chain)
                self.assertTrue(result.converged)
                self.assertFalse(result.degenerate)
                self.assertLessEqual(result.trace[-1], 1e-11)
                check = verify_eigendistance(chain, result.rho)
                self.assertLessEqual(abs(check.kappa_hat), 1e-9)


class TestSandwich(unittest.TestCase):
    """Test cases for sandwich_from_eigenfunction."""

    def test_bracket(self):
        lower, upper = eigenfunction_bracket(np.array([0.0, 0.5, 1.0]))
        self.assertAlmostEqual(lower.matrix[0, 2], 1.0)
        self.assertAlmostEqual(upper.matrix[1, 2], 1.5)
        self.assertEqual(upper.matrix[1, 1], 0.0)

    def test_harmonic_function_of_ruin(self):
        chain = gamblers_ruin(4, 0.25)
        h = harmonic_h(chain, [4], [0])
        result = sandwich_from_eigenfunction(chain, h, 1.0)
        self.assertTrue(result.converged)
        self.assertEqual(result.method, "sandwich")
        self.assertAlmostEqual(result.kappa, 0.0)
        self.assertLessEqual(result.residual, 1e-8)
        lower, upper = eigenfunction_bracket(h)
        raw = result.raw_rho.matrix
        self.assertTrue(np.all(raw >= lower.matrix - 1e-9))
        self.assertTrue(np.all(raw <= upper.matrix + 1e-9))

    def test_harmonic_bracket_on_every_state(self):
        chain = gamblers_ruin(5, 0.25)
        h = harmonic_h(chain, [5], [0])
        result = sandwich_from_eigenfunction(chain, h, 1.0)
        self.assertTrue(result.converged)
        raw = result.raw_rho.matrix
        lower, upper = eigenfunction_bracket(h)
        for x in range(6):
            for y in range(6):
                self.assertGreaterEqual(raw[x, y], lower.matrix[x, y] - 1e-9, msg=f"({x}, {y})")
                self.assertLessEqual(raw[x, y], upper.matrix[x, y] + 1e-9, msg=f"({x}, {y})")
        rows = ruin_tau_comparison(chain, result.raw_rho, [5], [0])
        self.assertEqual([row['y'] for row in rows], list(range(5)))
        for row in rows:
            self.assertAlmostEqual(row['hit_probability'], row['y'] / 5, delta=1e-12)
            self.assertGreaterEqual(row['rho'], row['lower_bracket'] - 1e-9)

    def test_constant_eigenfunction_falls_back(self):
        chain = two_state_chain(0.3, 0.2)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = sandwich_from_eigenfunction(chain, np.ones(2), 1.0)
        self.assertTrue(any(issubclass(w.category, ParameterWarning) for w in caught))
        self.assertEqual(result.method, "sandwich")
        self.assertAlmostEqual(result.kappa, 0.5, delta=1e-10)

    def test_rejects_non_eigenfunction(self):
        with self.assertRaises(NotAnEigenfunction):
            sandwich_from_eigenfunction(two_state_chain(), np.array([1.0, 2.0]), 1.0)

    def test_rejects_negative_h(self):
        with self.assertRaises(NotAnEigenfunction):
            sandwich_from_eigenfunction(two_state_chain(), np.array([1.0, -1.0]), 0.5)


if __name__ == "__main__":
    unittest.main()
