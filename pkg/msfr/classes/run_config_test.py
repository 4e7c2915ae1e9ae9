import json
import os
import tempfile
import unittest

from msfr.classes import Criterion, MethodType, ScoreMethod
from msfr.errors import ValidationError, ParseError

from .run_config import RunConfig


class RunConfigTestSuite(unittest.TestCase):

    def test_defaults(self):
        config = RunConfig('fit')
        self.assertIs(Criterion.BIC, config.get_criterion())
        self.assertEqual(0, config.get_seed())
        self.assertEqual(1e-7, config.get_convergence().get_eps_star())
        self.assertIsNone(config.get_dims())
        self.assertIs(MethodType.MSFR, config.get_method())
        self.assertEqual([1, 2, 3], config.get_grid().get_q_values())

    def test_grid_parsing(self):
        config = RunConfig('select', {'q_grid': '1-4', 'qs_grid': '1,3', 'criterion': 'AIC'})
        grid = config.get_grid()
        self.assertEqual([1, 2, 3, 4], grid.get_q_values())
        self.assertEqual([1, 3], grid.get_qs_values())
        self.assertIs(Criterion.AIC, grid.get_criterion())
        self.assertEqual([2, 5], RunConfig('select', {'q_grid': [2, 5]}).get_grid().get_q_values())

    def test_dims(self):
        self.assertEqual((2, 1), RunConfig('fit', {'q': '2', 'qs': '1'}).get_dims())
        self.assertEqual((2, [1, 2]), RunConfig('fit', {'q': 2, 'qs': '1,2'}).get_dims())
        with self.assertRaises(ValidationError):
            RunConfig('fit', {'q': 2}).get_dims()

    def test_methods(self):
        config = RunConfig('cv', {'method': 'msfr,msfa_lr', 'score': 'thurstone'})
        self.assertEqual([MethodType.MSFR, MethodType.MSFA_LR], config.get_methods([]))
        self.assertEqual([ScoreMethod.THURSTONE], config.get_cv_spec().get_score_methods())
        with self.assertRaises(ValidationError):
            config.get_method()

    def test_rejects_bad_values(self):
        with self.assertRaises(ValidationError):
            RunConfig('fit', {'criterion': 'hqic'})
        with self.assertRaises(ValidationError):
            RunConfig('fit', {'method': 'pca'})
        with self.assertRaises(ValidationError):
            RunConfig('fit', {'q_grid': '1,x'})
        with self.assertRaises(ValidationError):
            RunConfig('fit', {'seed': 'abc'})
        with self.assertRaises(ValidationError):
            RunConfig('fit', {'colour': 'red'})
        with self.assertRaises(ValidationError):
            RunConfig('fit').require('manifest')

    def test_scenario(self):
        spec = RunConfig('benchmark', {'scenario': '2', 'scale': 0.1, 'seed': 9, 'reps': 3,
                                       'fixed_truth': True}).get_scenario()
        self.assertEqual((9, 3, True), (spec.get_seed(), spec.get_n_reps(), spec.has_fixed_truth()))
        self.assertEqual(126, spec.get_ns()[0])

    def test_file_and_flags(self):
        with tempfile.TemporaryDirectory() as root:
            path = os.path.join(root, 'config.json')
            with open(path, 'w') as handle:
                json.dump({'seed': 4, 'max-iter': 10, 'criterion': 'aic'}, handle)
            config = RunConfig.from_sources('fit', {'seed': 5, 'criterion': None}, path)
            self.assertEqual(5, config.get_seed())
            self.assertEqual(10, config.get_convergence().get_max_iter())
            self.assertIs(Criterion.AIC, config.get_criterion())
            self.assertEqual('fit', config.to_dict()['command'])

            with open(path, 'w') as handle:
                json.dump([1, 2], handle)
            with self.assertRaises(ParseError):
                RunConfig.from_sources('fit', {}, path)


if __name__ == '__main__':
    unittest.main()
