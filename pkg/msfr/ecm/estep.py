from typing import *

import numpy as np

from msfr.classes import MultiStudyData, StudyDataset, Params
from msfr.errors import ShapeMismatch
from msfr.utils import woodbury_gain


class EStepMoments:
    """
    Conditional moments of one study's latent factors given its covariate-residualized data.
    """

    def __init__(self, n: int, c_xx: np.ndarray, e_ff: np.ndarray, e_ll: np.ndarray, e_xf: np.ndarray,
                 e_xl: np.ndarray, e_fl: np.ndarray, delta: np.ndarray, delta_s: np.ndarray,
                 big_delta: np.ndarray, big_delta_s: np.ndarray, delta_fl: np.ndarray):
        """
        Initializes EStepMoments.
        :param n: Number of subjects.
        :param c_xx: p x p second moment of the residualized data.
        :param e_ff: q x q averaged E[f f^T | x].
        :param e_ll: q_s x q_s averaged E[l l^T | x].
        :param e_xf: p x q averaged x E[f | x]^T.
        :param e_xl: p x q_s averaged x E[l | x]^T.
        :param e_fl: q x q_s averaged E[f l^T | x].
        :param delta: q x p gain, E[f | x] = delta x.
        :param delta_s: q_s x p gain, E[l | x] = delta_s x.
        :param big_delta: q x q posterior covariance of f.
        :param big_delta_s: q_s x q_s posterior covariance of l.
        :param delta_fl: q x q_s posterior cross-covariance of f and l.
        """
        self._n = n
        self._c_xx = c_xx
        self._e_ff = e_ff
        self._e_ll = e_ll
        self._e_xf = e_xf
        self._e_xl = e_xl
        self._e_fl = e_fl
        self._delta = delta
        self._delta_s = delta_s
        self._big_delta = big_delta
        self._big_delta_s = big_delta_s
        self._delta_fl = delta_fl

    ##
    #   Getter Functions
    ##

    def get_n(self) -> int:
        return self._n

    def get_c_xx(self) -> np.ndarray:
        return self._c_xx

    def get_e_ff(self) -> np.ndarray:
        return self._e_ff

    def get_e_ll(self) -> np.ndarray:
        return self._e_ll

    def get_e_xf(self) -> np.ndarray:
        return self._e_xf

    def get_e_xl(self) -> np.ndarray:
        return self._e_xl

    def get_e_fl(self) -> np.ndarray:
        return self._e_fl

    def get_delta(self) -> np.ndarray:
        return self._delta

    def get_delta_s(self) -> np.ndarray:
        return self._delta_s

    def get_big_delta(self) -> np.ndarray:
        return self._big_delta

    def get_big_delta_s(self) -> np.ndarray:
        return self._big_delta_s

    def get_delta_fl(self) -> np.ndarray:
        return self._delta_fl


def residualize(data: MultiStudyData, beta: np.ndarray) -> List[np.ndarray]:
    """
    Removes the covariate effect from every study.
    :param data: The MultiStudyData.
    :param beta: The p x p_b covariate effects.
    :return: One p x n_s matrix x - beta b per study.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (data.get_p(), data.get_p_b()):
        raise ShapeMismatch('beta has shape %s, data needs (%d, %d)' % (beta.shape, data.get_p(), data.get_p_b()))
    if data.get_p_b() == 0:
        return [np.array(study.get_x()) for study in data]
    return [study.get_x() - beta @ study.get_b() for study in data]


def second_moments(xtilde: np.ndarray) -> np.ndarray:
    """
    :param xtilde: A p x n residualized data matrix.
    :return: The uncentered second moment x x^T / n.
    """
    n = xtilde.shape[1]
    return xtilde @ xtilde.T / max(n, 1)


def residual_second_moments(study: StudyDataset, beta: np.ndarray) -> np.ndarray:
    """
    Second moment of x - beta b from the study's cached cross-products, without forming the residuals.
    """
    n = max(study.get_n(), 1)
    if study.get_p_b() == 0:
        return study.get_sxx() / n
    cross = beta @ study.get_sxb().T
    moment = (study.get_sxx() - cross - cross.T + beta @ study.get_sbb() @ beta.T) / n
    return (moment + moment.T) / 2


def e_step_from_moments(c_xx: np.ndarray, n: int, params: Params, s: int) -> EStepMoments:
    """
    E-step of one study given the second moment of its residualized data.
    The posterior of the stacked factors z = (f, l) uses the low-rank core (I + L^T Psi^-1 L)^-1
    of L = [phi | lambda_s], so no p x p matrix is inverted.
    :param c_xx: The p x p second moment.
    :param n: The number of subjects.
    :param params: The current parameters.
    :param s: The study index.
    :return: The EStepMoments.
    """
    q = params.get_q()
    gain, posterior = woodbury_gain(params.get_psi(s), params.get_stacked_loadings(s))
    cross = c_xx @ gain.T
    joint = gain @ cross + posterior
    joint = (joint + joint.T) / 2
    return EStepMoments(n=n, c_xx=c_xx,
                        e_ff=joint[:q, :q], e_ll=joint[q:, q:], e_fl=joint[:q, q:],
                        e_xf=cross[:, :q], e_xl=cross[:, q:],
                        delta=gain[:q], delta_s=gain[q:],
                        big_delta=posterior[:q, :q], big_delta_s=posterior[q:, q:], delta_fl=posterior[:q, q:])


def e_step(xtilde: np.ndarray, params: Params, s: int = 0) -> EStepMoments:
    """
    E-step of one study.
    :param xtilde: The p x n_s residualized data.
    :param params: The current parameters.
    :param s: The study index.
    :return: The EStepMoments.
    """
    xtilde = np.asarray(xtilde, dtype=float)
    if xtilde.shape[0] != params.get_p():
        raise ShapeMismatch('data has %d rows, parameters have p = %d' % (xtilde.shape[0], params.get_p()))
    return e_step_from_moments(second_moments(xtilde), xtilde.shape[1], params, s)
