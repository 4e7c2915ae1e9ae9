import numpy as np

from msfr.classes import Params
from msfr.utils import varimax


def _order_and_sign(loadings: np.ndarray) -> np.ndarray:
    if loadings.shape[1] == 0:
        return loadings
    order = np.argsort(-np.sum(loadings ** 2, axis=0), kind='stable')
    loadings = loadings[:, order]
    pivots = loadings[np.argmax(np.abs(loadings), axis=0), np.arange(loadings.shape[1])]
    return loadings * np.where(pivots < 0, -1.0, 1.0)


def identify_loadings(loadings: np.ndarray) -> np.ndarray:
    """
    Varimax-rotates a loading block when it has two or more columns, then orders columns by decreasing
    sum of squares and flips signs so each column's largest-magnitude entry is positive.
    """
    loadings = np.asarray(loadings, dtype=float)
    if loadings.shape[1] >= 2:
        loadings = varimax(loadings)[0]
    return _order_and_sign(loadings)


def identify(params: Params) -> Params:
    """
    Identification pass applied to fitted loadings. Only phi and each lambda_s change, by orthogonal
    transformations, so every marginal covariance is preserved.
    :param params: The parameters.
    :return: The identified parameters.
    """
    return params.replace(phi=identify_loadings(params.get_phi()),
                          lambdas=[identify_loadings(lam) for lam in params.get_lambdas()])
