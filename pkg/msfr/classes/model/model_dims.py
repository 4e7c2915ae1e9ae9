import numbers
from typing import *

from msfr.errors import ShapeMismatch, ValidationError


class ModelDims:
    """
    The dimension bundle (p, p_b, S, q, q_s, n_s) that governs every shape check.
    """

    def __init__(self, p: int, p_b: int, q: int, qs: Sequence[int], ns: Sequence[int]):
        """
        Initializes ModelDims. The rank constraint is checked by validation.
        :param p: Number of responses.
        :param p_b: Number of covariates (0 for none).
        :param q: Number of common factors.
        :param qs: Number of study-specific factors for each study.
        :param ns: Sample size of each study.
        """
        qs = tuple(int(v) for v in qs)
        ns = tuple(int(v) for v in ns)
        if len(qs) != len(ns):
            raise ShapeMismatch('got %d study-specific dimensions for %d studies' % (len(qs), len(ns)))
        if len(ns) == 0:
            raise ValidationError('at least one study is required')
        if p < 1 or p_b < 0 or q < 0 or min(qs) < 0 or min(ns) < 0:
            raise ValidationError('dimensions must be non-negative (p positive), got p=%d, p_b=%d, q=%d, q_s=%s'
                                  % (p, p_b, q, list(qs)))
        self._p = int(p)
        self._p_b = int(p_b)
        self._q = int(q)
        self._qs = qs
        self._ns = ns

    @classmethod
    def from_data(cls, data, q: int, qs: Union[int, Sequence[int]]) -> 'ModelDims':
        """
        Builds dims for a MultiStudyData.
        :param data: The MultiStudyData.
        :param q: Number of common factors.
        :param qs: Study-specific factors, one shared value or one per study.
        :return: The ModelDims.
        """
        if isinstance(qs, numbers.Integral):
            qs = [qs] * data.get_n_studies()
        return cls(data.get_p(), data.get_p_b(), q, qs, data.get_ns())

    def with_factors(self, q: int, qs: Union[int, Sequence[int]]) -> 'ModelDims':
        if isinstance(qs, numbers.Integral):
            qs = [qs] * self.get_n_studies()
        return ModelDims(self._p, self._p_b, q, qs, self._ns)

    def get_n_free_params(self) -> int:
        """
        Raw parameter count used by the information criteria: p p_b + p q + sum_s p q_s + S p.
        No correction for rotational non-identifiability is made.
        """
        return self._p * self._p_b + self._p * self._q + self._p * sum(self._qs) + self.get_n_studies() * self._p

    ##
    #   Getter Functions
    ##

    def get_p(self) -> int:
        return self._p

    def get_p_b(self) -> int:
        return self._p_b

    def get_q(self) -> int:
        return self._q

    def get_qs(self) -> Tuple[int, ...]:
        return self._qs

    def get_q_s(self, s: int) -> int:
        return self._qs[s]

    def get_ns(self) -> Tuple[int, ...]:
        return self._ns

    def get_n(self) -> int:
        return sum(self._ns)

    def get_n_studies(self) -> int:
        return len(self._ns)

    def get_total_factors(self) -> int:
        return self._q + sum(self._qs)

    def __eq__(self, other):
        return isinstance(other, ModelDims) and (self._p, self._p_b, self._q, self._qs, self._ns) == \
            (other._p, other._p_b, other._q, other._qs, other._ns)

    def __hash__(self):
        return hash((self._p, self._p_b, self._q, self._qs, self._ns))

    def __repr__(self):
        return 'ModelDims(p=%d, p_b=%d, S=%d, q=%d, q_s=%s, n_s=%s)' % (
            self._p, self._p_b, self.get_n_studies(), self._q, list(self._qs), list(self._ns))
