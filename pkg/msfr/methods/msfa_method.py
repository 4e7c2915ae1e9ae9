from typing import *

import numpy as np

from msfr.classes import MultiStudyData, MethodType

from .method import MethodInterface


class MSFAMethod(MethodInterface):
    """
    Multi-study factor analysis: the covariates are ignored (p_b = 0).
    """
    method_type = MethodType.MSFA

    def prepare(self, data: MultiStudyData) -> Tuple[MultiStudyData, Optional[np.ndarray]]:
        return data.without_covariates(), None
