from typing import *

import numpy as np

from .params import Params


class MarginalCov:
    """
    The per-study marginal covariances sigma_s = phi phi^T + lambda_s lambda_s^T + diag(psi_s).
    """

    def __init__(self, sigmas: Sequence[np.ndarray]):
        self._sigmas = [np.asarray(sigma, dtype=float) for sigma in sigmas]

    ##
    #   Getter Functions
    ##

    def get_sigmas(self) -> List[np.ndarray]:
        return list(self._sigmas)

    def get_sigma(self, s: int) -> np.ndarray:
        return self._sigmas[s]

    def get_n_studies(self) -> int:
        return len(self._sigmas)


def marginal_covariance(params: Params) -> MarginalCov:
    """
    Assembles the three-part covariance decomposition of every study.
    :param params: The parameters.
    :return: The MarginalCov, exactly symmetric.
    """
    common = params.get_common_covariance()
    sigmas = []
    for s in range(params.get_n_studies()):
        lam = params.get_lambda(s)
        sigma = common + lam @ lam.T + np.diag(params.get_psi(s))
        sigmas.append((sigma + sigma.T) / 2)
    return MarginalCov(sigmas)
