from msfr.errors import ValidationError
from msfr.utils.config import EPS_STAR, MAX_ITER


class ConvergenceConfig:
    """
    Stopping rule of the ECM engine.
    """

    def __init__(self, eps_star: float = EPS_STAR, max_iter: int = MAX_ITER, use_aitken: bool = True,
                 weighted_beta: bool = True):
        """
        Initializes a ConvergenceConfig.
        :param eps_star: Stop once the (Aitken-extrapolated) increment of the observed log-likelihood is below this.
        :param max_iter: Maximum number of ECM cycles.
        :param use_aitken: Use the Aitken-extrapolated increment; otherwise the raw increment.
        :param weighted_beta: Update beta row by row with 1/psi weights, the exact conditional maximizer.
            When False the pooled unweighted least-squares update is used.
        """
        if not eps_star > 0:
            raise ValidationError('eps_star must be positive, got %r' % eps_star)
        if int(max_iter) < 1:
            raise ValidationError('max_iter must be at least 1, got %r' % max_iter)
        self._eps_star = float(eps_star)
        self._max_iter = int(max_iter)
        self._use_aitken = bool(use_aitken)
        self._weighted_beta = bool(weighted_beta)

    def to_dict(self) -> dict:
        return {'eps_star': self._eps_star, 'max_iter': self._max_iter, 'use_aitken': self._use_aitken,
                'weighted_beta': self._weighted_beta}

    ##
    #   Getter Functions
    ##

    def get_eps_star(self) -> float:
        return self._eps_star

    def get_max_iter(self) -> int:
        return self._max_iter

    def use_aitken(self) -> bool:
        return self._use_aitken

    def use_weighted_beta(self) -> bool:
        return self._weighted_beta
