from typing import *

import numpy as np

from msfr.classes import MultiStudyData, ModelDims, Params, ConvergenceConfig, FitResult, Criterion, MethodType
from msfr.ecm import fit
from msfr.select import GridSpec, GridPointResult, SelectionReport, initialize, select


class MethodFit:
    """
    The outcome of fitting one method over a grid: the selection report plus the parameters the method
    reports for a chosen grid point.
    """

    def __init__(self, method_type: MethodType, report: SelectionReport, beta: Optional[np.ndarray] = None):
        """
        Initializes a MethodFit.
        :param method_type: The method that was fitted.
        :param report: The grid selection report.
        :param beta: Covariate effects estimated outside the grid fits, replacing those of the chosen fit.
        """
        self._method_type = method_type
        self._report = report
        self._beta = beta

    def get_chosen(self, criterion: Optional[Criterion] = None) -> GridPointResult:
        return self._report.choose(criterion)

    def get_fit(self, criterion: Optional[Criterion] = None) -> FitResult:
        return self.get_chosen(criterion).get_fit()

    def get_params(self, criterion: Optional[Criterion] = None) -> Params:
        """
        :param criterion: The selection criterion, the report's own when omitted.
        :return: The identified parameters of the chosen fit, with the method's own beta when it has one.
        """
        params = self.get_fit(criterion).get_params()
        return params if self._beta is None else params.replace(beta=self._beta)

    ##
    #   Getter Functions
    ##

    def get_method_type(self) -> MethodType:
        return self._method_type

    def get_report(self) -> SelectionReport:
        return self._report


class MethodInterface:
    """
    A fitting strategy. Subclasses decide which data the grid fits see, which grid they run on and which
    covariate effects they report.
    """
    method_type: MethodType = None

    def prepare(self, data: MultiStudyData) -> Tuple[MultiStudyData, Optional[np.ndarray]]:
        """
        Placeholder for turning the input data into the data the factor model is fitted on.
        :param data: The MultiStudyData.
        :return: A tuple of the data to fit and the covariate effects estimated beforehand (or None).
        """
        return data, None

    def adjust_grid(self, grid: GridSpec) -> GridSpec:
        return grid

    def adjust_dims(self, q: int, q_s: Union[int, Sequence[int]]) -> Tuple[int, Union[int, Sequence[int]]]:
        return q, q_s

    def fit(self, data: MultiStudyData, grid: GridSpec, config: ConvergenceConfig = None, seed: int = 0,
            n_jobs: int = 1, verbose: int = 0) -> MethodFit:
        """
        Fits the method at every grid point.
        :param data: The MultiStudyData.
        :param grid: The grid of dimensions.
        :param config: The stopping rule.
        :param seed: Recorded for reproducibility.
        :param n_jobs: Number of concurrent grid fits.
        :param verbose: Logging level of each engine.
        :return: The MethodFit.
        """
        fit_data, beta = self.prepare(data)
        report = select(fit_data, self.adjust_grid(grid), config, seed, n_jobs, verbose)
        return MethodFit(self.method_type, report, beta)

    def fit_at(self, data: MultiStudyData, q: int, q_s: Union[int, Sequence[int]], config: ConvergenceConfig = None,
               verbose: int = 0) -> Tuple[FitResult, Params]:
        """
        Fits the method at fixed dimensions.
        :param data: The MultiStudyData.
        :param q: Number of common factors.
        :param q_s: Study-specific factors, one shared value or one per study.
        :param config: The stopping rule.
        :param verbose: Logging level of the engine.
        :return: A tuple of the FitResult and the identified parameters the method reports.
        """
        fit_data, beta = self.prepare(data)
        q, q_s = self.adjust_dims(q, q_s)
        dims = ModelDims.from_data(fit_data, q, q_s)
        result = fit(fit_data, dims, config, initialize(fit_data, dims), verbose)
        params = result.get_params()
        return result, params if beta is None else params.replace(beta=beta)

    def fit_fixed(self, data: MultiStudyData, q: int, q_s: Union[int, Sequence[int]],
                  config: ConvergenceConfig = None) -> Params:
        return self.fit_at(data, q, q_s, config)[1]
