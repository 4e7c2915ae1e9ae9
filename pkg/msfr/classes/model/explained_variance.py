from typing import *

import numpy as np

from .params import Params
from .marginal_cov import marginal_covariance


class ExplainedVariance:
    """
    Shares of total variance explained by each factor.

    Common shares are averages over studies, weighted by n_s / n, of ||phi_j||^2 / tr(sigma_s).
    Each study-specific factor has a local share (denominator tr(sigma_s) of its own study) and a
    pooled share (its contribution to the weighted average, i.e. the local share times n_s / n).
    Common shares plus pooled shares add up to the weighted average of 1 - tr(psi_s) / tr(sigma_s).
    """

    def __init__(self, common: np.ndarray, specific_local: Sequence[np.ndarray], specific_pooled: Sequence[np.ndarray]):
        self._common = np.asarray(common, dtype=float)
        self._specific_local = [np.asarray(v, dtype=float) for v in specific_local]
        self._specific_pooled = [np.asarray(v, dtype=float) for v in specific_pooled]

    def get_total_share(self) -> float:
        return float(np.sum(self._common) + sum(np.sum(v) for v in self._specific_pooled))

    def get_weak_factors(self, threshold: float = 0.05) -> List[str]:
        """
        Lists factors explaining less than threshold of total variance. Study-specific factors are
        judged on their local share.
        :param threshold: The share below which a factor counts as weak.
        :return: Labels such as 'F2' or 'L1 (study 3)'.
        """
        weak = ['F%d' % (j + 1) for j, share in enumerate(self._common) if share < threshold]
        for s, shares in enumerate(self._specific_local):
            weak += ['L%d (study %d)' % (k + 1, s + 1) for k, share in enumerate(shares) if share < threshold]
        return weak

    def to_rows(self) -> List[dict]:
        """
        :return: One record per factor, for tabular output.
        """
        rows = [{'factor': 'F%d' % (j + 1), 'study': '', 'local_share': share, 'pooled_share': share}
                for j, share in enumerate(self._common)]
        for s, (local, pooled) in enumerate(zip(self._specific_local, self._specific_pooled)):
            rows += [{'factor': 'L%d' % (k + 1), 'study': s + 1, 'local_share': a, 'pooled_share': b}
                     for k, (a, b) in enumerate(zip(local, pooled))]
        return rows

    ##
    #   Getter Functions
    ##

    def get_common(self) -> np.ndarray:
        return self._common

    def get_specific_local(self) -> List[np.ndarray]:
        return list(self._specific_local)

    def get_specific_pooled(self) -> List[np.ndarray]:
        return list(self._specific_pooled)


def explained_variance(params: Params, ns: Optional[Sequence[int]] = None) -> ExplainedVariance:
    """
    Computes per-factor shares of total variance.
    :param params: The parameters.
    :param ns: Study sizes used as weights; equal weights when omitted.
    :return: The ExplainedVariance.
    """
    n_studies = params.get_n_studies()
    weights = np.ones(n_studies) if ns is None else np.asarray(ns, dtype=float)
    weights = weights / np.sum(weights)
    totals = np.array([np.trace(sigma) for sigma in marginal_covariance(params).get_sigmas()])

    common_norms = np.sum(params.get_phi() ** 2, axis=0)
    common = np.sum(weights[:, None] * common_norms[None, :] / totals[:, None], axis=0) \
        if params.get_q() > 0 else np.zeros(0)

    local, pooled = [], []
    for s in range(n_studies):
        share = np.sum(params.get_lambda(s) ** 2, axis=0) / totals[s]
        local.append(share)
        pooled.append(weights[s] * share)
    return ExplainedVariance(common, local, pooled)
