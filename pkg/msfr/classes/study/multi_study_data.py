from typing import *

import numpy as np

from msfr.errors import ShapeMismatch, ValidationError
from .study_dataset import StudyDataset


class MultiStudyData:
    """
    An ordered collection of studies observing the same p responses and the same p_b covariates.
    """

    def __init__(self, studies: Sequence[StudyDataset]):
        """
        Initializes the collection and checks that every study shares p and p_b.
        :param studies: The studies, in order.
        """
        studies = list(studies)
        if len(studies) == 0:
            raise ValidationError('at least one study is required')

        first = studies[0]
        for study in studies[1:]:
            if study.get_p() != first.get_p():
                raise ShapeMismatch("study '%s' has %d responses, study '%s' has %d"
                                    % (study.get_id(), study.get_p(), first.get_id(), first.get_p()))
            if study.get_p_b() != first.get_p_b():
                raise ShapeMismatch("study '%s' has %d covariates, study '%s' has %d"
                                    % (study.get_id(), study.get_p_b(), first.get_id(), first.get_p_b()))

        ids = [study.get_id() for study in studies]
        if len(set(ids)) != len(ids):
            raise ValidationError('study ids must be unique, got %s' % ids)

        self._studies = studies

    def without_covariates(self) -> 'MultiStudyData':
        """
        :return: The same observations with p_b = 0.
        """
        return MultiStudyData([study.without_covariates() for study in self._studies])

    def with_observations(self, xs: Sequence[np.ndarray]) -> 'MultiStudyData':
        """
        Replaces every study's observations, keeping ids and covariates.
        :param xs: One p x n_s matrix per study.
        :return: A new MultiStudyData.
        """
        if len(xs) != len(self._studies):
            raise ShapeMismatch('expected %d observation matrices, got %d' % (len(self._studies), len(xs)))
        return MultiStudyData([StudyDataset(study.get_id(), x, study.get_b()) for study, x in zip(self._studies, xs)])

    def subset(self, columns: Sequence[Sequence[int]]) -> 'MultiStudyData':
        """
        Selects subjects study by study.
        :param columns: One index array per study.
        :return: A new MultiStudyData.
        """
        if len(columns) != len(self._studies):
            raise ShapeMismatch('expected %d index sets, got %d' % (len(self._studies), len(columns)))
        return MultiStudyData([study.subset(cols) for study, cols in zip(self._studies, columns)])

    def permuted(self, order: Sequence[int]) -> 'MultiStudyData':
        return MultiStudyData([self._studies[i] for i in order])

    def stacked_x(self) -> np.ndarray:
        """
        :return: The p x n matrix of all subjects, studies concatenated in order.
        """
        return np.hstack([study.get_x() for study in self._studies])

    def stacked_b(self) -> np.ndarray:
        return np.hstack([study.get_b() for study in self._studies])

    ##
    #   Getter Functions
    ##

    def get_studies(self) -> List[StudyDataset]:
        return list(self._studies)

    def get_study(self, s: int) -> StudyDataset:
        return self._studies[s]

    def get_ids(self) -> List[str]:
        return [study.get_id() for study in self._studies]

    def get_n_studies(self) -> int:
        return len(self._studies)

    def get_p(self) -> int:
        return self._studies[0].get_p()

    def get_p_b(self) -> int:
        return self._studies[0].get_p_b()

    def get_ns(self) -> List[int]:
        return [study.get_n() for study in self._studies]

    def get_n(self) -> int:
        return sum(self.get_ns())

    def __iter__(self) -> Iterator[StudyDataset]:
        return iter(self._studies)

    def __len__(self) -> int:
        return len(self._studies)

    def __repr__(self):
        return 'MultiStudyData(S=%d, p=%d, p_b=%d, n=%s)' % (len(self), self.get_p(), self.get_p_b(), self.get_ns())
