import logging
from typing import *

import numpy as np

from msfr.classes import Params, MultiStudyData, StudyDataset, marginal_covariance
from msfr.errors import DegenerateInput
from msfr.utils import make_rng, PSI_FLOOR, MAX_TRUTH_ATTEMPTS
from .scenarios import ScenarioSpec

logger = logging.getLogger(__name__)


def _sparse(rng: np.random.Generator, p: int, k: int, draw: Callable[[int], np.ndarray]) -> np.ndarray:
    # floor(p k / 3) non-zero entries at uniformly chosen positions
    matrix = np.zeros(p * k)
    count = (p * k) // 3
    positions = rng.choice(p * k, size=count, replace=False)
    matrix[positions] = draw(count)
    return matrix.reshape(p, k)


def generate_truth(spec: ScenarioSpec, seed: int) -> Params:
    """
    Draws true parameters for a scenario. One third of the loadings are non-zero: common loadings
    sign x U(0.6, 1), study-specific loadings U(-1, 1). Idiosyncratic variances are U(0, 1) floored,
    covariate effects standard normal. Loadings are redrawn until [phi | lambda_1 | ... | lambda_S] has full
    column rank.
    :param spec: The scenario.
    :param seed: The seed of this draw.
    :return: The true Params.
    """
    rng = make_rng(seed, 'truth')
    p, q, q_s, n_studies = spec.get_p(), spec.get_q(), spec.get_q_s(), spec.get_n_studies()

    def common(size):
        return rng.choice([-1.0, 1.0], size=size) * rng.uniform(0.6, 1.0, size=size)

    def specific(size):
        return rng.uniform(-1.0, 1.0, size=size)

    for attempt in range(MAX_TRUTH_ATTEMPTS):
        phi = _sparse(rng, p, q, common)
        lambdas = [_sparse(rng, p, q_s, specific) for _ in range(n_studies)]
        stacked = np.hstack([phi] + lambdas)
        if stacked.shape[1] == 0 or np.linalg.matrix_rank(stacked) == stacked.shape[1]:
            break
        logger.debug('loadings of attempt %d are rank deficient, redrawing', attempt + 1)
    else:
        raise DegenerateInput('no full-rank loadings after %d attempts' % MAX_TRUTH_ATTEMPTS)

    psis = [np.maximum(rng.uniform(0.0, 1.0, size=p), PSI_FLOOR) for _ in range(n_studies)]
    beta = rng.standard_normal((p, spec.get_p_b()))
    return Params(beta, phi, lambdas, psis)


def generate_data(truth: Params, spec: ScenarioSpec, seed: int) -> MultiStudyData:
    """
    Draws covariates b ~ N(0, I) and observations x ~ N(beta b, sigma_s) for every study.
    :param truth: The true parameters.
    :param spec: The scenario, for the sample sizes.
    :param seed: The seed of this draw; each study gets its own stream.
    :return: The MultiStudyData, studies labelled study1..studyS.
    """
    studies = []
    for s, (n, sigma) in enumerate(zip(spec.get_ns(), marginal_covariance(truth).get_sigmas())):
        rng = make_rng(seed, 'data', s)
        b = rng.standard_normal((truth.get_p_b(), n))
        z = rng.standard_normal((truth.get_p(), n))
        x = truth.get_beta() @ b + np.linalg.cholesky(sigma) @ z
        studies.append(StudyDataset('study%d' % (s + 1), x, b))
    return MultiStudyData(studies)
