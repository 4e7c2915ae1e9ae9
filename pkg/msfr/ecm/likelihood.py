from typing import *

import numpy as np
from scipy import linalg

from msfr.classes import MultiStudyData, Params, ModelDims, marginal_covariance
from msfr.utils import cholesky_factor
from .estep import EStepMoments, residual_second_moments
from .cmstep import expected_residual_diagonal


def expected_complete_loglik(params: Params, moments: Sequence[EStepMoments], ns: Sequence[int]) -> float:
    """
    Expected complete-data log-likelihood of the observations given the factors,
    sum_s -(n_s / 2) [log|Psi_s| + tr(Psi_s^-1 E[(x - phi f - lambda_s l)(...)^T])],
    with the additive constant -(n p / 2) log(2 pi) and the factor prior terms omitted.
    :param params: The parameters at which the expectation is evaluated.
    :param moments: E-step moments of every study.
    :param ns: Study sizes.
    :return: The value.
    """
    total = 0.0
    for s, (m, n) in enumerate(zip(moments, ns)):
        psi = params.get_psi(s)
        residual = expected_residual_diagonal(m, params.get_phi(), params.get_lambda(s))
        total -= n / 2 * (np.sum(np.log(psi)) + np.sum(residual / psi))
    return float(total)


def study_loglik(c_xx: np.ndarray, n: int, sigma: np.ndarray) -> float:
    """
    Gaussian log-likelihood of n zero-mean observations with second moment c_xx under covariance sigma.
    """
    p = sigma.shape[0]
    factor = cholesky_factor(sigma)
    logdet = 2 * np.sum(np.log(np.diag(factor[0])))
    quadratic = np.trace(linalg.cho_solve(factor, c_xx, check_finite=False))
    return float(-n / 2 * (p * np.log(2 * np.pi) + logdet + quadratic))


def observed_loglik(data: MultiStudyData, params: Params) -> float:
    """
    Observed-data log-likelihood sum_s sum_i log N(x_is; beta b_is, sigma_s).
    :param data: The MultiStudyData.
    :param params: The parameters.
    :return: The value.
    """
    sigmas = marginal_covariance(params).get_sigmas()
    total = 0.0
    for study, sigma in zip(data, sigmas):
        total += study_loglik(residual_second_moments(study, params.get_beta()), study.get_n(), sigma)
    return float(total)


def information_criteria(loglik: float, dims: ModelDims) -> Tuple[float, float]:
    """
    :param loglik: The observed log-likelihood.
    :param dims: The fitted dimensions.
    :return: A tuple of (AIC, BIC) with the raw parameter count of dims.
    """
    k = dims.get_n_free_params()
    return -2 * loglik + 2 * k, -2 * loglik + k * np.log(dims.get_n())
