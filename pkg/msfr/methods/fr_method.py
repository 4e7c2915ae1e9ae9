from typing import *

from msfr.classes import MethodType
from msfr.select import GridSpec

from .method import MethodInterface


class FRMethod(MethodInterface):
    """
    Factor regression: covariates and common factors only, every q_s forced to 0.
    """
    method_type = MethodType.FR

    def adjust_grid(self, grid: GridSpec) -> GridSpec:
        return grid.with_specific([0])

    def adjust_dims(self, q: int, q_s: Union[int, Sequence[int]]) -> Tuple[int, Union[int, Sequence[int]]]:
        return q, 0
