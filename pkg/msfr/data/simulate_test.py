import unittest

import numpy as np

from msfr.classes import marginal_covariance

from .scenarios import ScenarioSpec, get_scenario
from .simulate import generate_truth, generate_data


class GenerateTruthTestSuite(unittest.TestCase):

    def test_sparsity_and_ranges(self):
        spec = get_scenario('1')
        truth = generate_truth(spec, 120)
        phi = truth.get_phi()
        self.assertEqual((20 * 3) // 3, np.count_nonzero(phi))
        self.assertTrue(np.all((np.abs(phi[phi != 0]) >= 0.6) & (np.abs(phi[phi != 0]) <= 1.0)))
        for lam, psi in zip(truth.get_lambdas(), truth.get_psis()):
            self.assertEqual(20 // 3, np.count_nonzero(lam))
            self.assertTrue(np.all(np.abs(lam) <= 1.0))
            self.assertTrue(np.all((psi >= 1e-4) & (psi <= 1.0)))
        self.assertEqual((20, 2), truth.get_beta().shape)

    def test_full_column_rank(self):
        spec = get_scenario('2')
        for seed in range(5):
            truth = generate_truth(spec, seed)
            stacked = np.hstack([truth.get_phi()] + truth.get_lambdas())
            self.assertEqual(stacked.shape[1], np.linalg.matrix_rank(stacked))

    def test_deterministic(self):
        spec = get_scenario('1')
        first, second = generate_truth(spec, 5), generate_truth(spec, 5)
        np.testing.assert_array_equal(first.get_phi(), second.get_phi())
        np.testing.assert_array_equal(first.get_psi(1), second.get_psi(1))
        self.assertFalse(np.array_equal(first.get_phi(), generate_truth(spec, 6).get_phi()))


class GenerateDataTestSuite(unittest.TestCase):

    def test_shapes_and_ids(self):
        spec = ScenarioSpec('sim', q=2, q_s=1, n_studies=3, p_b=2, p=9, ns=[30, 40, 50])
        data = generate_data(generate_truth(spec, 121), spec, 121)
        self.assertEqual(['study1', 'study2', 'study3'], data.get_ids())
        self.assertEqual([30, 40, 50], data.get_ns())
        self.assertEqual((2, 40), data.get_study(1).get_b().shape)

    def test_deterministic(self):
        spec = get_scenario('1').scaled(0.1)
        truth = generate_truth(spec, 122)
        first, second = generate_data(truth, spec, 3), generate_data(truth, spec, 3)
        np.testing.assert_array_equal(first.stacked_x(), second.stacked_x())
        self.assertFalse(np.array_equal(first.stacked_x(), generate_data(truth, spec, 4).stacked_x()))

    def test_sample_covariance_matches_truth(self):
        spec = ScenarioSpec('sim', q=2, q_s=1, n_studies=1, p_b=1, p=6, ns=[20000])
        truth = generate_truth(spec, 123)
        study = generate_data(truth, spec, 123).get_study(0)
        residual = study.get_x() - truth.get_beta() @ study.get_b()
        sigma = marginal_covariance(truth).get_sigma(0)
        np.testing.assert_allclose(residual @ residual.T / study.get_n(), sigma, atol=0.15)


if __name__ == '__main__':
    unittest.main()
