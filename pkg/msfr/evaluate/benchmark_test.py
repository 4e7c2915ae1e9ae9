import os
import unittest

import numpy as np

from msfr.classes import ConvergenceConfig, Criterion, MethodType
from msfr.data import ScenarioSpec, get_scenario, generate_truth
from msfr.select import GridSpec

from .benchmark import BenchmarkReport, compare_to_truth, run_benchmark


def record(replication: int, method: str, criterion: str, q_hat: int, qs_hat: int, rv: float) -> dict:
    return {'replication': replication, 'seed': replication, 'method': method, 'criterion': criterion,
            'q_hat': q_hat, 'qs_hat': qs_hat, 'n_iter': 10, 'rv_phi': rv}


class CompareToTruthTestSuite(unittest.TestCase):

    def test_truth_against_itself(self):
        truth = generate_truth(ScenarioSpec('rv', q=2, q_s=1, n_studies=2, p_b=2, p=9, ns=[50, 50]), 150)
        values = compare_to_truth(truth, truth)
        self.assertEqual({'rv_beta', 'rv_phi', 'rv_sigma_phi', 'rv_lambda_1', 'rv_sigma_1', 'rv_lambda_2',
                          'rv_sigma_2'}, set(values))
        for value in values.values():
            self.assertAlmostEqual(1.0, value, places=12)

    def test_missing_blocks_give_nan(self):
        spec = ScenarioSpec('rv', q=2, q_s=1, n_studies=1, p_b=1, p=9, ns=[50])
        truth = generate_truth(spec, 151)
        estimate = truth.replace(beta=np.zeros((9, 0)), lambdas=[np.zeros((9, 0))])
        values = compare_to_truth(estimate, truth)
        self.assertTrue(np.isnan(values['rv_beta']))
        self.assertTrue(np.isnan(values['rv_lambda_1']))
        self.assertAlmostEqual(1.0, values['rv_phi'])
        self.assertLess(values['rv_sigma_1'], 1.0)


class BenchmarkReportTestSuite(unittest.TestCase):

    def setUp(self):
        records = [record(0, 'msfr', 'bic', 3, 1, 0.9), record(1, 'msfr', 'bic', 3, 1, 0.8),
                   record(2, 'msfr', 'bic', 2, 1, 0.7), record(0, 'msfr', 'aic', 4, 1, 0.6)]
        self.report = BenchmarkReport(get_scenario('1'), records, [{'replication': 3, 'error': 'SingularSystem'}])

    def test_modal_dims(self):
        self.assertEqual((3, 1), self.report.get_modal_dims(MethodType.MSFR, Criterion.BIC))
        self.assertAlmostEqual(2 / 3, self.report.get_dims_frequency(MethodType.MSFR, Criterion.BIC, (3, 1)))
        self.assertAlmostEqual(0.8, self.report.get_mean(MethodType.MSFR, Criterion.BIC, 'rv_phi'))

    def test_summary(self):
        summary = self.report.summary()
        self.assertEqual(2, len(summary))
        bic = summary[summary['criterion'] == 'bic'].iloc[0]
        self.assertAlmostEqual(8 / 3, bic['q_hat'])
        self.assertEqual(3, bic['n_reps'])
        self.assertEqual(4, len(self.report.long_frame()))
        self.assertEqual(1, len(self.report.get_failures()))


class RunBenchmarkTestSuite(unittest.TestCase):

    def test_small_run(self):
        spec = ScenarioSpec('tiny', q=1, q_s=1, n_studies=2, p_b=1, p=7, ns=[80, 80], n_reps=2, seed=3,
                            fixed_truth=True)
        report = run_benchmark(spec, [MethodType.MSFR, MethodType.FR], GridSpec([1, 2], [1]),
                               ConvergenceConfig(eps_star=1e-5, max_iter=5000))
        self.assertEqual([], report.get_failures())
        frame = report.to_frame()
        self.assertEqual(2 * 2 * 2, len(frame))
        self.assertEqual([3, 4], sorted(frame['seed'].unique().tolist()))
        self.assertTrue((frame[frame['method'] == 'fr']['qs_hat'] == 0).all())
        self.assertIsNotNone(report.get_truth())
        self.assertEqual(4, len(report.get_averages()))
        self.assertEqual((7, 7), report.get_averages()[('msfr', 'bic')]['sigma_phi'].shape)

    @unittest.skipUnless(os.environ.get('MSFR_SLOW_TESTS'), 'set MSFR_SLOW_TESTS to run')
    def test_first_scenario_recovers_parameters(self):
        spec = get_scenario('1').replace(n_reps=20, seed=7)
        report = run_benchmark(spec, [MethodType.MSFR], config=ConvergenceConfig(eps_star=1e-6), n_jobs=-1)
        self.assertEqual([], report.get_failures())
        self.assertEqual((3, 1), report.get_modal_dims(MethodType.MSFR, Criterion.BIC))
        self.assertGreaterEqual(report.get_dims_frequency(MethodType.MSFR, Criterion.BIC, (3, 1)), 0.8)

        def mean(metric):
            return report.get_mean(MethodType.MSFR, Criterion.BIC, metric)

        self.assertGreaterEqual(mean('rv_phi'), 0.97)
        self.assertGreaterEqual(mean('rv_beta'), 0.94)
        for s in (1, 2):
            self.assertGreaterEqual(mean('rv_sigma_%d' % s), 0.94)
            self.assertGreaterEqual(mean('rv_lambda_%d' % s), 0.88)

    @unittest.skipUnless(os.environ.get('MSFR_SLOW_TESTS'), 'set MSFR_SLOW_TESTS to run')
    def test_covariates_separate_specific_loadings(self):
        spec = get_scenario('2').scaled(0.2).replace(n_reps=10, seed=11)
        methods = [MethodType.MSFR, MethodType.MSFA_LR, MethodType.FR]
        report = run_benchmark(spec, methods, spec.default_grid(Criterion.AIC), ConvergenceConfig(eps_star=1e-6),
                               n_jobs=-1)

        def mean(method, metric):
            return report.get_mean(method, Criterion.AIC, metric)

        def mean_lambda(method):
            return np.mean([mean(method, 'rv_lambda_%d' % s) for s in range(1, spec.get_n_studies() + 1)])

        self.assertGreaterEqual(mean_lambda(MethodType.MSFR) - mean_lambda(MethodType.MSFA_LR), 0.3)
        self.assertGreater(mean(MethodType.FR, 'q_hat'), mean(MethodType.MSFR, 'q_hat'))


if __name__ == '__main__':
    unittest.main()
