from typing import *

import numpy as np

from msfr.errors import ShapeMismatch, ValidationError


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix.flags.writeable = False
    return matrix


class StudyDataset:
    """
    The observations of one study: a p x n_s matrix X whose columns are subjects, and a
    p_b x n_s covariate matrix B (p_b may be 0).
    """

    def __init__(self, study_id: str, x: np.ndarray, b: Optional[np.ndarray] = None):
        """
        Initializes a StudyDataset. Finiteness is checked by validation, not here.
        :param study_id: The label of the study.
        :param x: The p x n_s observation matrix (columns are subjects).
        :param b: The p_b x n_s covariate matrix, or None for no covariates.
        """
        x = np.array(x, dtype=float)
        if x.ndim != 2:
            raise ShapeMismatch("observations of study '%s' must be a matrix, got %d dimensions" % (study_id, x.ndim))
        if x.shape[0] < 1:
            raise ValidationError("study '%s' has no response variables" % study_id)
        b = np.zeros((0, x.shape[1])) if b is None else np.array(b, dtype=float)
        if b.ndim != 2 or b.shape[1] != x.shape[1]:
            raise ShapeMismatch("study '%s' has %d subjects in X but covariates of shape %s" % (study_id, x.shape[1], b.shape))

        self._id = str(study_id)
        self._x = _frozen(x)
        self._b = _frozen(b)

        # Sufficient statistics reused by every E-step
        self._sxx = _frozen(x @ x.T)
        self._sxb = _frozen(x @ b.T)
        self._sbb = _frozen(b @ b.T)

    def without_covariates(self) -> 'StudyDataset':
        return StudyDataset(self._id, self._x)

    def subset(self, columns: Sequence[int]) -> 'StudyDataset':
        """
        Selects a subset of subjects.
        :param columns: Indices of the subjects to keep, in order.
        :return: A new StudyDataset.
        """
        columns = np.asarray(columns, dtype=int)
        return StudyDataset(self._id, self._x[:, columns], self._b[:, columns])

    ##
    #   Getter Functions
    ##

    def get_id(self) -> str:
        return self._id

    def get_x(self) -> np.ndarray:
        return self._x

    def get_b(self) -> np.ndarray:
        return self._b

    def get_p(self) -> int:
        return self._x.shape[0]

    def get_p_b(self) -> int:
        return self._b.shape[0]

    def get_n(self) -> int:
        return self._x.shape[1]

    def get_sxx(self) -> np.ndarray:
        """
        :return: The p x p cross-product X X^T.
        """
        return self._sxx

    def get_sxb(self) -> np.ndarray:
        """
        :return: The p x p_b cross-product X B^T.
        """
        return self._sxb

    def get_sbb(self) -> np.ndarray:
        """
        :return: The p_b x p_b cross-product B B^T.
        """
        return self._sbb

    def __repr__(self):
        return "StudyDataset('%s', p=%d, p_b=%d, n=%d)" % (self._id, self.get_p(), self.get_p_b(), self.get_n())
