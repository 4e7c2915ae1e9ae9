from typing import *

from msfr.classes import MultiStudyData, ConvergenceConfig, MethodType
from msfr.select import GridSpec

from .method import MethodInterface, MethodFit
from .msfr_method import MSFRMethod
from .msfa_method import MSFAMethod
from .fr_method import FRMethod
from .msfa_lr_method import MSFALRMethod

_METHODS = {
    MethodType.MSFR: MSFRMethod,
    MethodType.MSFA: MSFAMethod,
    MethodType.FR: FRMethod,
    MethodType.MSFA_LR: MSFALRMethod,
}


def get_method(method_type: Union[MethodType, str]) -> MethodInterface:
    if not isinstance(method_type, MethodType):
        method_type = MethodType.parse(method_type)
    return _METHODS[method_type]()


def fit_method(method_type: Union[MethodType, str], data: MultiStudyData, grid: GridSpec,
               config: ConvergenceConfig = None, seed: int = 0, n_jobs: int = 1, verbose: int = 0) -> MethodFit:
    """
    Fits one of the compared methods over a grid.
    :return: The MethodFit, holding the selection report and the chosen FitResult.
    """
    return get_method(method_type).fit(data, grid, config, seed, n_jobs, verbose)
