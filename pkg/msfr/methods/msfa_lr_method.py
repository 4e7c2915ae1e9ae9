from typing import *

import numpy as np

from msfr.classes import MultiStudyData, MethodType
from msfr.ecm import residualize
from msfr.select import ols_beta

from .method import MethodInterface


class MSFALRMethod(MethodInterface):
    """
    Two-step baseline: pooled least-squares covariate effects first, then multi-study factor analysis of
    the residuals. The reported beta is the least-squares one.
    """
    method_type = MethodType.MSFA_LR

    def prepare(self, data: MultiStudyData) -> Tuple[MultiStudyData, Optional[np.ndarray]]:
        beta = ols_beta(data)
        residuals = data.with_observations(residualize(data, beta)).without_covariates()
        return residuals, beta
