from typing import *

import numpy as np

from msfr.classes import MultiStudyData, Params, ScoreMatrix, ScoreMethod
from msfr.ecm.estep import residualize
from msfr.errors import ShapeMismatch
from msfr.utils import woodbury_gain, spd_solve


def _check(xtildes: Sequence[np.ndarray], params: Params):
    if len(xtildes) != params.get_n_studies():
        raise ShapeMismatch('got data for %d studies, parameters have %d' % (len(xtildes), params.get_n_studies()))
    for xt in xtildes:
        if np.shape(xt)[0] != params.get_p():
            raise ShapeMismatch('data has %d rows, parameters have p = %d' % (np.shape(xt)[0], params.get_p()))


def thurstone_scores(xtildes: Sequence[np.ndarray], params: Params, study_ids: Sequence[str] = None) -> ScoreMatrix:
    """
    Regression (posterior-mean) scores E[f | x] = phi^T sigma_s^-1 x and E[l | x] = lambda_s^T sigma_s^-1 x.
    :param xtildes: Per study, the p x n_s covariate-residualized data.
    :param params: The parameters.
    :param study_ids: Optional study labels.
    :return: The ScoreMatrix.
    """
    _check(xtildes, params)
    q = params.get_q()
    common, specific = [], []
    for s, xt in enumerate(xtildes):
        gain, _ = woodbury_gain(params.get_psi(s), params.get_stacked_loadings(s))
        scores = gain @ np.asarray(xt, dtype=float)
        common.append(scores[:q])
        specific.append(scores[q:])
    return ScoreMatrix(ScoreMethod.THURSTONE, common, specific, study_ids)


def bartlett_scores(xtildes: Sequence[np.ndarray], params: Params, study_ids: Sequence[str] = None) -> ScoreMatrix:
    """
    Bartlett (generalized least squares) scores (L^T Psi^-1 L)^-1 L^T Psi^-1 x with L = [phi | lambda_s],
    split into common and study-specific blocks.
    :param xtildes: Per study, the p x n_s covariate-residualized data.
    :param params: The parameters.
    :param study_ids: Optional study labels.
    :return: The ScoreMatrix.
    """
    _check(xtildes, params)
    q = params.get_q()
    common, specific = [], []
    for s, xt in enumerate(xtildes):
        loadings = params.get_stacked_loadings(s)
        xt = np.asarray(xt, dtype=float)
        if loadings.shape[1] == 0:
            scores = np.zeros((0, xt.shape[1]))
        else:
            weighted = loadings / params.get_psi(s)[:, None]
            scores = spd_solve(loadings.T @ weighted, weighted.T @ xt)
        common.append(scores[:q])
        specific.append(scores[q:])
    return ScoreMatrix(ScoreMethod.BARTLETT, common, specific, study_ids)


def compute_scores(data: MultiStudyData, params: Params, method: ScoreMethod) -> ScoreMatrix:
    """
    Scores every subject of data. Observations are residualized with beta when the parameters carry
    covariate effects; parameters without covariates score the raw observations.
    """
    if params.get_p_b() > 0:
        xtildes = residualize(data, params.get_beta())
    else:
        xtildes = [study.get_x() for study in data]
    scorer = bartlett_scores if method is ScoreMethod.BARTLETT else thurstone_scores
    return scorer(xtildes, params, data.get_ids())


def score_correlation(first: ScoreMatrix, second: ScoreMatrix) -> np.ndarray:
    """
    Pearson correlation of each common factor's scores under two estimators, subjects pooled over studies.
    :param first: Scores from one estimator.
    :param second: Scores of the same subjects from another.
    :return: One correlation per common factor (nan for a constant factor).
    """
    a = np.hstack([first.get_common(s) for s in range(first.get_n_studies())])
    b = np.hstack([second.get_common(s) for s in range(second.get_n_studies())])
    if a.shape != b.shape:
        raise ShapeMismatch('score matrices of shapes %s and %s cannot be compared' % (a.shape, b.shape))
    a = a - a.mean(axis=1, keepdims=True)
    b = b - b.mean(axis=1, keepdims=True)
    with np.errstate(invalid='ignore', divide='ignore'):
        return np.sum(a * b, axis=1) / np.sqrt(np.sum(a * a, axis=1) * np.sum(b * b, axis=1))
