import unittest

import numpy as np

from msfr.classes import ModelDims, Params, FitResult, Criterion, ConvergenceConfig, StudyDataset, MultiStudyData
from msfr.errors import AllFitsFailed, RankConstraintViolated, ValidationError

from .selection import GridSpec, GridPointResult, SelectionReport, n_free_params, select


def fake_point(q: int, q_s: int, aic: float, bic: float, converged: bool = True) -> GridPointResult:
    p = 10
    dims = ModelDims(p, 0, q, [q_s, q_s], [50, 50])
    params = Params(np.zeros((p, 0)), np.zeros((p, q)), [np.zeros((p, q_s))] * 2, [np.ones(p)] * 2)
    result = FitResult(params, params, dims, [0.0], [0.0], 1, converged, 0.0, aic, bic, None)
    return GridPointResult(q, q_s, result)


def one_factor_data(seed: int = 70) -> MultiStudyData:
    # One strong common factor and one strong specific factor per study
    rng = np.random.default_rng(seed)
    phi = rng.uniform(0.7, 1.0, size=(6, 1))
    studies = []
    for study_id in ('a', 'b'):
        lam = rng.uniform(0.7, 1.0, size=(6, 1)) * np.array([[1.0], [-1.0], [1.0], [-1.0], [1.0], [-1.0]])
        x = phi @ rng.normal(size=(1, 200)) + lam @ rng.normal(size=(1, 200)) + np.sqrt(0.3) * rng.normal(size=(6, 200))
        studies.append(StudyDataset(study_id, x))
    return MultiStudyData(studies)


class GridSpecTestSuite(unittest.TestCase):

    def test_default_grid(self):
        grid = GridSpec.around(3, 1)
        self.assertEqual([1, 2, 3, 4, 5], grid.get_q_values())
        self.assertEqual([1, 2, 3], grid.get_qs_values())
        self.assertEqual((1, 1), grid.get_points()[0])
        self.assertEqual((1, 2), grid.get_points()[1])
        self.assertEqual(15, len(grid.get_points()))

    def test_empty(self):
        with self.assertRaises(ValidationError):
            GridSpec([], [1])

    def test_rank_check(self):
        with self.assertRaises(RankConstraintViolated):
            GridSpec([1, 5], [1]).check(6, 2)
        GridSpec([1, 2], [1]).check(6, 2)


class SelectionReportTestSuite(unittest.TestCase):

    def test_minimum(self):
        report = SelectionReport([fake_point(1, 1, 50.0, 60.0), fake_point(2, 1, 40.0, 70.0)])
        self.assertEqual((1, 1), (report.get_chosen().get_q(), report.get_chosen().get_q_s()))
        self.assertEqual(2, report.choose(Criterion.AIC).get_q())

    def test_tie_goes_to_fewer_factors(self):
        report = SelectionReport([fake_point(1, 2, 10.0, 10.0), fake_point(2, 1, 10.0, 10.0),
                                  fake_point(1, 1, 10.0, 10.0)])
        self.assertEqual((1, 1), (report.get_chosen().get_q(), report.get_chosen().get_q_s()))
        # equal totals: smaller q
        report = SelectionReport([fake_point(3, 1, 10.0, 10.0), fake_point(1, 2, 10.0, 10.0)])
        self.assertEqual(1, report.get_chosen().get_q())

    def test_unconverged_excluded(self):
        report = SelectionReport([fake_point(1, 1, 5.0, 5.0, converged=False), fake_point(2, 1, 9.0, 9.0)])
        self.assertEqual(2, report.get_chosen().get_q())

    def test_all_failed(self):
        report = SelectionReport([fake_point(1, 1, 5.0, 5.0, converged=False), GridPointResult(2, 1, None, 'boom')])
        with self.assertRaises(AllFitsFailed):
            report.get_chosen()
        frame = report.to_frame()
        self.assertFalse(frame['chosen_bic'].any())
        self.assertEqual('boom', frame['error'].iloc[1])

    def test_frame_marks_both_criteria(self):
        report = SelectionReport([fake_point(1, 1, 50.0, 60.0), fake_point(2, 1, 40.0, 70.0)])
        frame = report.to_frame()
        self.assertEqual([False, True], list(frame['chosen_aic']))
        self.assertEqual([True, False], list(frame['chosen_bic']))


class SelectTestSuite(unittest.TestCase):

    def test_free_parameters(self):
        self.assertEqual(180, n_free_params(ModelDims(20, 2, 3, [1, 1], [500, 500])))
        self.assertEqual(7, n_free_params(ModelDims(7, 0, 0, [0], [10])))
        single = n_free_params(ModelDims(10, 0, 2, [1], [10]))
        double = n_free_params(ModelDims(10, 0, 2, [1, 1], [10, 10]))
        self.assertEqual(10 + 10, double - single)

    def test_selects_generating_dimensions(self):
        data = one_factor_data()
        report = select(data, GridSpec([1, 2], [1, 2], Criterion.BIC), ConvergenceConfig(eps_star=1e-5, max_iter=5000))
        self.assertEqual(4, len(report.get_points()))
        self.assertEqual((1, 1), (report.get_chosen().get_q(), report.get_chosen().get_q_s()))

    def test_concurrency_does_not_change_results(self):
        data = one_factor_data(71)
        grid = GridSpec([1, 2], [1], Criterion.AIC)
        config = ConvergenceConfig(eps_star=1e-5, max_iter=5000)
        serial = select(data, grid, config, n_jobs=1).to_frame()
        parallel = select(data, grid, config, n_jobs=2).to_frame()
        np.testing.assert_allclose(serial['aic'].values, parallel['aic'].values, rtol=1e-12)


if __name__ == '__main__':
    unittest.main()
