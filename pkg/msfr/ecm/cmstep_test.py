import unittest
from typing import *

import numpy as np

from msfr.classes import Params, StudyDataset, MultiStudyData

from .estep import EStepMoments, e_step, residualize
from .cmstep import cm_psi, cm_phi, cm_lambda, cm_beta
from .likelihood import expected_complete_loglik


def numeric_gradient(fn: Callable[[np.ndarray], float], value: np.ndarray, h: float = 1e-5) -> np.ndarray:
    grad = np.zeros_like(value)
    for index in np.ndindex(*value.shape):
        up, down = value.copy(), value.copy()
        up[index] += h
        down[index] -= h
        grad[index] = (fn(up) - fn(down)) / (2 * h)
    return grad


def hand_moments(c_xx, e_ff, e_ll, e_xf, e_xl, e_fl) -> EStepMoments:
    c_xx, e_ff, e_ll = np.atleast_2d(c_xx), np.atleast_2d(e_ff), np.atleast_2d(e_ll)
    q, q_s = e_ff.shape[0], e_ll.shape[0]
    p = c_xx.shape[0]
    return EStepMoments(1, c_xx, e_ff, e_ll, np.asarray(e_xf, dtype=float).reshape(p, q),
                        np.asarray(e_xl, dtype=float).reshape(p, q_s), np.asarray(e_fl, dtype=float).reshape(q, q_s),
                        np.zeros((q, p)), np.zeros((q_s, p)), np.zeros((q, q)), np.zeros((q_s, q_s)),
                        np.zeros((q, q_s)))


def random_state(seed: int, p: int = 6) -> Tuple[Params, List[EStepMoments], List[int]]:
    """
    Random parameters with q = 2, q_s = 1 over two studies, and the E-step moments of data with factor
    structure so the updates sit well inside the feasible region.
    """
    rng = np.random.default_rng(seed)
    ns = [int(n) for n in rng.integers(30, 80, size=2)]
    params = Params(np.zeros((p, 0)), rng.normal(size=(p, 2)), [rng.normal(size=(p, 1)) for _ in ns],
                    [rng.uniform(0.3, 1.2, size=p) for _ in ns])
    xs = [params.get_phi() @ rng.normal(size=(2, n)) + rng.normal(size=(p, n)) for n in ns]
    return params, [e_step(x, params, s) for s, x in enumerate(xs)], ns


class CMStepTestSuite(unittest.TestCase):

    def test_psi_hand_case(self):
        moments = hand_moments(4.0, 1.0, np.zeros((0, 0)), [1.0], np.zeros((1, 0)), np.zeros((1, 0)))
        np.testing.assert_allclose(cm_psi(moments, np.array([[1.0]]), np.zeros((1, 0))), [3.0])

    def test_psi_without_factors(self):
        c = np.array([[2.0, 0.5], [0.5, 3.0]])
        moments = hand_moments(c, np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((2, 0)), np.zeros((2, 0)),
                               np.zeros((0, 0)))
        np.testing.assert_allclose(cm_psi(moments, np.zeros((2, 0)), np.zeros((2, 0))), [2.0, 3.0])

    def test_psi_floor(self):
        moments = hand_moments(1.0, 1.0, np.zeros((0, 0)), [1.0], np.zeros((1, 0)), np.zeros((1, 0)))
        np.testing.assert_allclose(cm_psi(moments, np.array([[1.0]]), np.zeros((1, 0)), floor=1e-4), [1e-4])

    def test_lambda_hand_case(self):
        moments = hand_moments(np.eye(2), np.zeros((0, 0)), 2.0, np.zeros((2, 0)), [2.0, 4.0], np.zeros((0, 1)))
        np.testing.assert_allclose(cm_lambda(moments, np.zeros((2, 0))), [[1.0], [2.0]])

    def test_phi_single_study_closed_form(self):
        rng = np.random.default_rng(21)
        params = Params(np.zeros((5, 0)), rng.normal(size=(5, 2)), [np.zeros((5, 0))], [np.ones(5)])
        moments = e_step(rng.normal(size=(5, 30)), params)
        phi = cm_phi([moments], [np.zeros((5, 0))], [np.ones(5)], [30])
        expected = moments.get_e_xf() @ np.linalg.inv(moments.get_e_ff())
        np.testing.assert_allclose(phi, expected, atol=1e-10)

    def test_phi_single_factor_is_elementwise(self):
        rng = np.random.default_rng(22)
        params = Params(np.zeros((4, 0)), rng.normal(size=(4, 1)), [rng.normal(size=(4, 1)) for _ in range(2)],
                        [rng.uniform(0.5, 1.0, size=4) for _ in range(2)])
        moments = [e_step(rng.normal(size=(4, n)), params, s) for s, n in enumerate([20, 35])]
        psis = params.get_psis()
        phi = cm_phi(moments, params.get_lambdas(), psis, [20, 35])
        numerator = sum(n / psi * (m.get_e_xf()[:, 0] - lam[:, 0] * m.get_e_fl()[0, 0])
                        for m, lam, psi, n in zip(moments, params.get_lambdas(), psis, [20, 35]))
        denominator = sum(n / psi * m.get_e_ff()[0, 0] for m, psi, n in zip(moments, psis, [20, 35]))
        np.testing.assert_allclose(phi[:, 0], numerator / denominator, atol=1e-10)

    def test_phi_solves_matrix_equation(self):
        params, moments, ns = random_state(20)
        psis = [cm_psi(m, params.get_phi(), params.get_lambda(s)) for s, m in enumerate(moments)]
        phi = cm_phi(moments, params.get_lambdas(), psis, ns)
        lhs = sum(n / psi[:, None] * (phi @ m.get_e_ff()) for m, psi, n in zip(moments, psis, ns))
        rhs = sum(n / psi[:, None] * (m.get_e_xf() - lam @ m.get_e_fl().T)
                  for m, lam, psi, n in zip(moments, params.get_lambdas(), psis, ns))
        self.assertLess(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs), 1e-7)

    def test_no_common_factors(self):
        params = Params(np.zeros((3, 0)), np.zeros((3, 0)), [np.zeros((3, 1))], [np.ones(3)])
        moments = e_step(np.ones((3, 4)), params)
        self.assertEqual((3, 0), cm_phi([moments], params.get_lambdas(), params.get_psis(), [4]).shape)

    def test_stationarity(self):
        for seed in range(200, 220):
            with self.subTest(seed=seed):
                self.check_stationarity(*random_state(seed))

    def check_stationarity(self, params: Params, moments: List[EStepMoments], ns: List[int]):
        def q_value(value: Params) -> float:
            return expected_complete_loglik(value, moments, ns)

        # psi, in log coordinates
        psis = [cm_psi(m, params.get_phi(), params.get_lambda(s)) for s, m in enumerate(moments)]
        self.assertGreater(min(np.min(psi) for psi in psis), 1e-3)
        for s in range(len(ns)):
            def by_log_psi(log_psi, s=s):
                updated = list(psis)
                updated[s] = np.exp(log_psi)
                return q_value(params.replace(psis=updated))
            self.assertLess(np.max(np.abs(numeric_gradient(by_log_psi, np.log(psis[s])))), 1e-5)

        # phi, given the new psi
        phi = cm_phi(moments, params.get_lambdas(), psis, ns)
        grad = numeric_gradient(lambda value: q_value(params.replace(phi=value, psis=psis)), phi)
        self.assertLess(np.max(np.abs(grad)), 1e-5)

        # lambda_s, given the new psi and phi
        lambdas = [cm_lambda(m, phi) for m in moments]
        for s in range(len(ns)):
            def by_lambda(value, s=s):
                updated = list(lambdas)
                updated[s] = value
                return q_value(params.replace(phi=phi, lambdas=updated, psis=psis))
            self.assertLess(np.max(np.abs(numeric_gradient(by_lambda, lambdas[s]))), 1e-5)


class CMBetaTestSuite(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(30)
        self.data = MultiStudyData([StudyDataset('study%d' % (s + 1), rng.normal(size=(5, n)), rng.normal(size=(3, n)))
                                    for s, n in enumerate([25, 40])])

    def test_reduces_to_least_squares(self):
        x, b = self.data.stacked_x(), self.data.stacked_b()
        ols = np.linalg.lstsq(b.T, x.T, rcond=None)[0].T
        empty = [np.zeros((5, 0))] * 2
        means = [np.zeros((0, n)) for n in self.data.get_ns()]
        np.testing.assert_allclose(cm_beta(self.data, np.zeros((5, 0)), empty, means, means), ols, atol=1e-10)
        # equal variances across studies give the same answer
        equal = [np.full(5, 0.7)] * 2
        np.testing.assert_allclose(cm_beta(self.data, np.zeros((5, 0)), empty, means, means, equal), ols, atol=1e-10)

    def posterior_means(self, seed: int) -> Tuple[Params, List[np.ndarray], List[np.ndarray]]:
        rng = np.random.default_rng(seed)
        params = Params(rng.normal(size=(5, 3)), rng.normal(size=(5, 1)), [rng.normal(size=(5, 1)) for _ in range(2)],
                        [rng.uniform(0.2, 2.0, size=5) for _ in range(2)])
        xtildes = residualize(self.data, params.get_beta())
        moments = [e_step(xt, params, s) for s, xt in enumerate(xtildes)]
        e_f = [m.get_delta() @ xt for m, xt in zip(moments, xtildes)]
        e_l = [m.get_delta_s() @ xt for m, xt in zip(moments, xtildes)]
        return params, e_f, e_l

    def normal_equations(self, params: Params, beta: np.ndarray, e_f, e_l, weighted: bool) -> np.ndarray:
        gradient = np.zeros((5, 3))
        for study, lam, f, l, psi in zip(self.data, params.get_lambdas(), e_f, e_l, params.get_psis()):
            residual = study.get_x() - params.get_phi() @ f - lam @ l - beta @ study.get_b()
            gradient += (residual @ study.get_b().T) / (psi[:, None] if weighted else 1.0)
        return gradient

    def test_weighted_normal_equations(self):
        # sum_s Psi_s^-1 (R_s - beta B_s) B_s^T = 0
        for seed in range(31, 51):
            with self.subTest(seed=seed):
                params, e_f, e_l = self.posterior_means(seed)
                beta = cm_beta(self.data, params.get_phi(), params.get_lambdas(), e_f, e_l, params.get_psis())
                self.assertLess(np.max(np.abs(self.normal_equations(params, beta, e_f, e_l, True))), 1e-8)

    def test_pooled_normal_equations(self):
        # sum_s (R_s - beta B_s) B_s^T = 0
        params, e_f, e_l = self.posterior_means(51)
        beta = cm_beta(self.data, params.get_phi(), params.get_lambdas(), e_f, e_l)
        self.assertLess(np.max(np.abs(self.normal_equations(params, beta, e_f, e_l, False))), 1e-8)
        weighted = cm_beta(self.data, params.get_phi(), params.get_lambdas(), e_f, e_l, params.get_psis())
        self.assertGreater(np.max(np.abs(weighted - beta)), 1e-6)

    def test_no_covariates(self):
        data = self.data.without_covariates()
        means = [np.zeros((0, n)) for n in data.get_ns()]
        self.assertEqual((5, 0), cm_beta(data, np.zeros((5, 0)), [np.zeros((5, 0))] * 2, means, means).shape)


if __name__ == '__main__':
    unittest.main()
