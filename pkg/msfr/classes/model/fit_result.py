from typing import *

import numpy as np

from .params import Params
from .model_dims import ModelDims
from .explained_variance import ExplainedVariance


class FitResult:
    """
    The outcome of one ECM fit.
    """

    def __init__(self, params: Params, raw_params: Params, dims: ModelDims, loglik_trace: Sequence[float],
                 complete_trace: Sequence[float], n_iter: int, converged: bool, observed_loglik: float,
                 aic: float, bic: float, explained: ExplainedVariance):
        """
        Initializes a FitResult.
        :param params: The identified parameters (varimax-rotated, columns ordered, signs fixed).
        :param raw_params: The parameters exactly as the ECM iterations left them.
        :param dims: The dimensions that were fitted.
        :param loglik_trace: Observed log-likelihood at the initial point and after every cycle.
        :param complete_trace: Expected complete log-likelihood (up to a constant) at the same points.
        :param n_iter: Number of completed ECM cycles.
        :param converged: Whether the stopping rule fired before max_iter.
        :param observed_loglik: Observed log-likelihood of the final parameters.
        :param aic: -2 loglik + 2k.
        :param bic: -2 loglik + k log(n).
        :param explained: Per-factor shares of total variance.
        """
        self._params = params
        self._raw_params = raw_params
        self._dims = dims
        self._loglik_trace = [float(v) for v in loglik_trace]
        self._complete_trace = [float(v) for v in complete_trace]
        self._n_iter = int(n_iter)
        self._converged = bool(converged)
        self._observed_loglik = float(observed_loglik)
        self._aic = float(aic)
        self._bic = float(bic)
        self._explained = explained

    def summary(self) -> dict:
        """
        :return: The scalar outcome of the fit, JSON-serializable.
        """
        return {'p': self._dims.get_p(), 'p_b': self._dims.get_p_b(), 'q': self._dims.get_q(),
                'q_s': list(self._dims.get_qs()), 'n_s': list(self._dims.get_ns()),
                'n_iter': self._n_iter, 'converged': self._converged,
                'observed_loglik': self._observed_loglik, 'aic': self._aic, 'bic': self._bic,
                'n_free_params': self._dims.get_n_free_params(),
                'explained_variance_total': self._explained.get_total_share(),
                'weak_factors': self._explained.get_weak_factors()}

    ##
    #   Getter Functions
    ##

    def get_params(self) -> Params:
        return self._params

    def get_raw_params(self) -> Params:
        return self._raw_params

    def get_dims(self) -> ModelDims:
        return self._dims

    def get_loglik_trace(self) -> List[float]:
        return list(self._loglik_trace)

    def get_complete_trace(self) -> List[float]:
        return list(self._complete_trace)

    def get_n_iter(self) -> int:
        return self._n_iter

    def is_converged(self) -> bool:
        return self._converged

    def get_observed_loglik(self) -> float:
        return self._observed_loglik

    def get_aic(self) -> float:
        return self._aic

    def get_bic(self) -> float:
        return self._bic

    def get_explained_variance(self) -> ExplainedVariance:
        return self._explained

    def __repr__(self):
        return 'FitResult(q=%d, q_s=%s, n_iter=%d, converged=%s, loglik=%.6g)' % (
            self._dims.get_q(), list(self._dims.get_qs()), self._n_iter, self._converged, self._observed_loglik)
