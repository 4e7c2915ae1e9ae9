import logging
from typing import *

import numpy as np
from scipy import linalg

from msfr.classes import MultiStudyData, ModelDims, Params, validate
from msfr.ecm.estep import residualize, residual_second_moments
from msfr.utils import spd_solve, PSI_FLOOR, PRINCIPAL_AXIS_ITERATIONS, INIT_EIGEN_FLOOR

logger = logging.getLogger(__name__)


def _top_eigen_loadings(matrix: np.ndarray, k: int, floor: float = 0.0) -> np.ndarray:
    """
    Eigen-loadings u_j sqrt(lambda_j) of the k largest eigenvalues of a symmetric matrix,
    eigenvalues clipped below at floor.
    """
    p = matrix.shape[0]
    if k == 0:
        return np.zeros((p, 0))
    values, vectors = linalg.eigh((matrix + matrix.T) / 2, subset_by_index=[p - k, p - 1])
    values, vectors = values[::-1], vectors[:, ::-1]
    return vectors * np.sqrt(np.maximum(values, floor))


def _fix_signs(loadings: np.ndarray) -> np.ndarray:
    if loadings.shape[1] == 0:
        return loadings
    pivots = loadings[np.argmax(np.abs(loadings), axis=0), np.arange(loadings.shape[1])]
    return loadings * np.where(pivots < 0, -1.0, 1.0)


def ols_beta(data: MultiStudyData) -> np.ndarray:
    """
    Pooled multivariate least squares of X on B over all studies: beta = (X B^T)(B B^T)^-1.
    :param data: The MultiStudyData.
    :return: The p x p_b coefficients (p x 0 without covariates).
    """
    if data.get_p_b() == 0:
        return np.zeros((data.get_p(), 0))
    sxb = sum(study.get_sxb() for study in data)
    sbb = sum(study.get_sbb() for study in data)
    return spd_solve(sbb, sxb.T).T


def pooled_residual_covariance(data: MultiStudyData, beta: np.ndarray) -> np.ndarray:
    """
    Sample covariance of x - beta b with every study centred on its own mean, pooled over studies.
    :param data: The MultiStudyData.
    :param beta: The p x p_b covariate effects.
    :return: The p x p covariance, normalized by the total number of subjects.
    """
    total = np.zeros((data.get_p(), data.get_p()))
    for xtilde in residualize(data, beta):
        centred = xtilde - np.mean(xtilde, axis=1, keepdims=True)
        total += centred @ centred.T
    return total / data.get_n()


def principal_axis(c: np.ndarray, k: int, iterations: int = PRINCIPAL_AXIS_ITERATIONS,
                   floor: float = PSI_FLOOR) -> Tuple[np.ndarray, np.ndarray]:
    """
    Principal-axis factoring of a second-moment matrix: start from principal components, then alternate
    between re-estimating communalities and refactoring the reduced matrix c - diag(psi).
    :param c: A p x p symmetric second-moment matrix.
    :param k: Number of factors.
    :param iterations: Number of communality re-estimations.
    :param floor: Lower bound on the uniquenesses.
    :return: A tuple of (p x k loadings, length-p uniquenesses).
    """
    loadings = _top_eigen_loadings(c, k)
    psi = np.maximum(np.diag(c) - np.sum(loadings ** 2, axis=1), floor)
    for _ in range(iterations if k > 0 else 0):
        loadings = _top_eigen_loadings(c - np.diag(psi), k)
        psi = np.maximum(np.diag(c) - np.sum(loadings ** 2, axis=1), floor)
    return loadings, psi


def initialize(data: MultiStudyData, dims: ModelDims, seed: int = 0) -> Params:
    """
    Two-step least-squares starting point.
    Step 1: beta from pooled least squares. Step 2: phi from principal components of the pooled residual
    sample covariance, scaled by the square roots of its eigenvalues; then per study, principal-axis factoring
    of the residual second moment with q + q_s factors gives psi_s, and lambda_s are the leading
    eigen-loadings of the study's factored part minus phi phi^T.
    :param data: The MultiStudyData.
    :param dims: The dimensions to fit.
    :param seed: Accepted for a uniform fitting interface; no random numbers are drawn.
    :return: The starting Params.
    """
    validate(data, dims)
    beta = ols_beta(data)
    moments = [residual_second_moments(study, beta) for study in data]

    q = dims.get_q()
    phi = _fix_signs(_top_eigen_loadings(pooled_residual_covariance(data, beta), q))
    common = phi @ phi.T

    lambdas, psis = [], []
    for c, q_s in zip(moments, dims.get_qs()):
        factored, psi = principal_axis(c, q + q_s)
        floor = INIT_EIGEN_FLOOR * np.mean(np.diag(c))
        lambdas.append(_fix_signs(_top_eigen_loadings(factored @ factored.T - common, q_s, floor)))
        psis.append(psi)

    logger.debug('initialized %s', dims)
    return Params(beta, phi, lambdas, psis)
