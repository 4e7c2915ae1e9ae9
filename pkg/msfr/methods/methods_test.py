import unittest

import numpy as np

from msfr.classes import ConvergenceConfig, Criterion, MethodType
from msfr.data import ScenarioSpec, generate_truth, generate_data
from msfr.select import GridSpec, ols_beta

from . import get_method, fit_method, MSFRMethod, MSFALRMethod

CONFIG = ConvergenceConfig(eps_star=1e-5, max_iter=5000)


def covariate_data(seed: int = 110):
    spec = ScenarioSpec('methods', q=1, q_s=1, n_studies=2, p_b=2, p=7, ns=[120, 150])
    return generate_data(generate_truth(spec, seed), spec, seed)


class GetMethodTestSuite(unittest.TestCase):

    def test_lookup(self):
        self.assertIsInstance(get_method(MethodType.MSFR), MSFRMethod)
        self.assertIsInstance(get_method('msfa_lr'), MSFALRMethod)
        for method_type in MethodType:
            self.assertIs(method_type, get_method(method_type).method_type)


class FixedDimensionsTestSuite(unittest.TestCase):

    def test_msfr_keeps_covariates(self):
        result, params = get_method(MethodType.MSFR).fit_at(covariate_data(), 1, 1, CONFIG)
        self.assertEqual(2, params.get_p_b())
        self.assertEqual((1, 1), result.get_dims().get_qs())

    def test_msfa_ignores_covariates(self):
        result, params = get_method(MethodType.MSFA).fit_at(covariate_data(), 1, 1, CONFIG)
        self.assertEqual(0, params.get_p_b())
        self.assertEqual(0, result.get_dims().get_p_b())

    def test_fr_drops_specific_factors(self):
        result, params = get_method(MethodType.FR).fit_at(covariate_data(), 1, 2, CONFIG)
        self.assertEqual((0, 0), result.get_dims().get_qs())
        self.assertEqual((0, 0), params.get_qs())
        self.assertEqual(2, params.get_p_b())

    def test_msfa_lr_reports_least_squares_beta(self):
        data = covariate_data()
        result, params = get_method(MethodType.MSFA_LR).fit_at(data, 1, 1, CONFIG)
        np.testing.assert_allclose(params.get_beta(), ols_beta(data))
        self.assertEqual(0, result.get_params().get_p_b())

    def test_fit_fixed_returns_reported_params(self):
        data = covariate_data()
        method = get_method(MethodType.MSFA_LR)
        np.testing.assert_allclose(method.fit_fixed(data, 1, 1, CONFIG).get_beta(), ols_beta(data))


class GridFitTestSuite(unittest.TestCase):

    def test_fr_grid_has_no_specific_factors(self):
        fitted = fit_method(MethodType.FR, covariate_data(), GridSpec([1, 2], [1, 2]), CONFIG)
        self.assertEqual([(1, 0), (2, 0)], [(point.get_q(), point.get_q_s()) for point in fitted.get_report().get_points()])

    def test_reported_params_follow_criterion(self):
        fitted = fit_method(MethodType.MSFR, covariate_data(111), GridSpec([1, 2], [1], Criterion.AIC), CONFIG)
        self.assertIs(MethodType.MSFR, fitted.get_method_type())
        for criterion in Criterion:
            chosen = fitted.get_report().choose(criterion)
            np.testing.assert_array_equal(fitted.get_params(criterion).get_phi(), chosen.get_fit().get_params().get_phi())

    def test_msfa_lr_grid_beta(self):
        data = covariate_data(112)
        fitted = fit_method(MethodType.MSFA_LR, data, GridSpec([1], [1]), CONFIG)
        np.testing.assert_allclose(fitted.get_params().get_beta(), ols_beta(data))


if __name__ == '__main__':
    unittest.main()
