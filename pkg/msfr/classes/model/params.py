from typing import *

import numpy as np

from msfr.errors import ShapeMismatch, ValidationError
from .model_dims import ModelDims


def _matrix(value, rows: int, name: str) -> np.ndarray:
    value = np.array(value, dtype=float)
    if value.ndim == 1 and rows == value.shape[0]:
        value = value.reshape(rows, 1)
    if value.ndim != 2 or value.shape[0] != rows:
        raise ShapeMismatch('%s must have %d rows, got shape %s' % (name, rows, value.shape))
    value.flags.writeable = False
    return value


class Params:
    """
    The parameter set: covariate effects beta (p x p_b), common loadings phi (p x q),
    study-specific loadings lambda_s (p x q_s) and idiosyncratic variances psi_s (diagonal, length p).
    """

    def __init__(self, beta: np.ndarray, phi: np.ndarray, lambdas: Sequence[np.ndarray], psis: Sequence[np.ndarray]):
        """
        Initializes Params. Arrays are copied and frozen.
        :param beta: The p x p_b covariate effects (p_b may be 0).
        :param phi: The p x q common loadings (q may be 0).
        :param lambdas: One p x q_s loading matrix per study.
        :param psis: One length-p diagonal per study.
        """
        phi = np.array(phi, dtype=float)
        if phi.ndim != 2:
            raise ShapeMismatch('phi must be a matrix, got shape %s' % (phi.shape,))
        p = phi.shape[0]
        if len(lambdas) != len(psis) or len(psis) == 0:
            raise ShapeMismatch('got %d specific loading matrices and %d diagonals' % (len(lambdas), len(psis)))

        self._phi = _matrix(phi, p, 'phi')
        self._beta = _matrix(beta, p, 'beta')
        self._lambdas = [_matrix(lam, p, 'lambda_%d' % (s + 1)) for s, lam in enumerate(lambdas)]
        self._psis = []
        for s, psi in enumerate(psis):
            psi = np.array(psi, dtype=float).reshape(-1)
            if psi.shape[0] != p:
                raise ShapeMismatch('psi_%d has length %d, expected %d' % (s + 1, psi.shape[0], p))
            psi.flags.writeable = False
            self._psis.append(psi)

    def replace(self, beta: np.ndarray = None, phi: np.ndarray = None, lambdas: Sequence[np.ndarray] = None,
                psis: Sequence[np.ndarray] = None) -> 'Params':
        """
        :return: A copy with the given blocks replaced.
        """
        return Params(self._beta if beta is None else beta,
                      self._phi if phi is None else phi,
                      self._lambdas if lambdas is None else lambdas,
                      self._psis if psis is None else psis)

    def check_dims(self, dims: ModelDims):
        """
        Raises ShapeMismatch unless the blocks have the shapes dims prescribes.
        """
        expected = (dims.get_p(), dims.get_p_b(), dims.get_q(), dims.get_qs())
        actual = (self.get_p(), self.get_p_b(), self.get_q(), self.get_qs())
        if expected != actual:
            raise ShapeMismatch('parameters have (p, p_b, q, q_s) = %s, model expects %s' % (actual, expected))

    def check_psi_floor(self, floor: float):
        for s, psi in enumerate(self._psis):
            if np.min(psi) < floor:
                raise ValidationError('psi_%d has entry %.3e below the floor %.0e' % (s + 1, np.min(psi), floor))

    def get_stacked_loadings(self, s: int) -> np.ndarray:
        """
        :param s: The study index.
        :return: The p x (q + q_s) matrix [phi | lambda_s].
        """
        return np.hstack([self._phi, self._lambdas[s]])

    def get_common_covariance(self) -> np.ndarray:
        """
        :return: The p x p common covariance phi phi^T.
        """
        return self._phi @ self._phi.T

    def get_dims(self, ns: Sequence[int]) -> ModelDims:
        return ModelDims(self.get_p(), self.get_p_b(), self.get_q(), self.get_qs(), ns)

    ##
    #   Getter Functions
    ##

    def get_beta(self) -> np.ndarray:
        return self._beta

    def get_phi(self) -> np.ndarray:
        return self._phi

    def get_lambdas(self) -> List[np.ndarray]:
        return list(self._lambdas)

    def get_lambda(self, s: int) -> np.ndarray:
        return self._lambdas[s]

    def get_psis(self) -> List[np.ndarray]:
        return list(self._psis)

    def get_psi(self, s: int) -> np.ndarray:
        return self._psis[s]

    def get_p(self) -> int:
        return self._phi.shape[0]

    def get_p_b(self) -> int:
        return self._beta.shape[1]

    def get_q(self) -> int:
        return self._phi.shape[1]

    def get_qs(self) -> Tuple[int, ...]:
        return tuple(lam.shape[1] for lam in self._lambdas)

    def get_n_studies(self) -> int:
        return len(self._psis)

    def __repr__(self):
        return 'Params(p=%d, p_b=%d, q=%d, q_s=%s)' % (self.get_p(), self.get_p_b(), self.get_q(), list(self.get_qs()))
