from typing import *

import numpy as np
import pandas as pd

from .score_method import ScoreMethod


class ScoreMatrix:
    """
    Subject-level factor scores: per study, a q x n_s common block and a q_s x n_s specific block.
    """

    def __init__(self, method: ScoreMethod, common: Sequence[np.ndarray], specific: Sequence[np.ndarray],
                 study_ids: Optional[Sequence[str]] = None):
        """
        Initializes a ScoreMatrix.
        :param method: The estimator that produced the scores.
        :param common: One q x n_s matrix per study.
        :param specific: One q_s x n_s matrix per study.
        :param study_ids: Labels of the studies, defaults to 1..S.
        """
        self._method = method
        self._common = [np.asarray(m, dtype=float) for m in common]
        self._specific = [np.asarray(m, dtype=float) for m in specific]
        self._study_ids = [str(s + 1) for s in range(len(self._common))] if study_ids is None else list(study_ids)

    def to_frame(self, s: int) -> pd.DataFrame:
        """
        Scores of one study as a subjects x factors table with columns F1..Fq, L1..Lq_s.
        :param s: The study index.
        :return: The DataFrame.
        """
        columns = ['F%d' % (j + 1) for j in range(self._common[s].shape[0])] + \
                  ['L%d' % (k + 1) for k in range(self._specific[s].shape[0])]
        values = np.vstack([self._common[s], self._specific[s]]).T
        return pd.DataFrame(values, columns=columns)

    ##
    #   Getter Functions
    ##

    def get_method(self) -> ScoreMethod:
        return self._method

    def get_common(self, s: int) -> np.ndarray:
        return self._common[s]

    def get_specific(self, s: int) -> np.ndarray:
        return self._specific[s]

    def get_study_ids(self) -> List[str]:
        return list(self._study_ids)

    def get_n_studies(self) -> int:
        return len(self._common)
