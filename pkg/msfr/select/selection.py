import logging
from typing import *

import pandas as pd
from joblib import Parallel, delayed

from msfr.classes import MultiStudyData, ModelDims, ConvergenceConfig, FitResult, Criterion, validate_dims
from msfr.errors import AllFitsFailed, MSFRError, ValidationError
from msfr.ecm import fit
from .initialize import initialize

logger = logging.getLogger(__name__)


class GridSpec:
    """
    A grid of latent dimensions: every q in q_values crossed with every q_s in qs_values,
    the q_s value shared by all studies.
    """

    def __init__(self, q_values: Sequence[int], qs_values: Sequence[int], criterion: Criterion = Criterion.BIC):
        q_values = [int(v) for v in q_values]
        qs_values = [int(v) for v in qs_values]
        if len(q_values) == 0 or len(qs_values) == 0:
            raise ValidationError('grid values must be non-empty')
        if min(q_values) < 0 or min(qs_values) < 0:
            raise ValidationError('grid values must be non-negative')
        self._q_values = q_values
        self._qs_values = qs_values
        self._criterion = criterion

    @classmethod
    def around(cls, q: int, q_s: int, criterion: Criterion = Criterion.BIC) -> 'GridSpec':
        """
        The default grid q in 1..q+2, q_s in 1..q_s+2.
        """
        return cls(range(1, q + 3), range(1, q_s + 3), criterion)

    def with_specific(self, qs_values: Sequence[int]) -> 'GridSpec':
        return GridSpec(self._q_values, qs_values, self._criterion)

    def check(self, p: int, n_studies: int):
        """
        Raises RankConstraintViolated if a grid point breaks the rank constraint for p and S studies.
        """
        for q, q_s in self.get_points():
            validate_dims(ModelDims(p, 0, q, [q_s] * n_studies, [0] * n_studies))

    ##
    #   Getter Functions
    ##

    def get_points(self) -> List[Tuple[int, int]]:
        return [(q, q_s) for q in self._q_values for q_s in self._qs_values]

    def get_q_values(self) -> List[int]:
        return list(self._q_values)

    def get_qs_values(self) -> List[int]:
        return list(self._qs_values)

    def get_criterion(self) -> Criterion:
        return self._criterion


class GridPointResult:
    """
    The fit of one grid point, or the error that stopped it.
    """

    def __init__(self, q: int, q_s: int, fit_result: Optional[FitResult], error: Optional[str] = None):
        self._q = q
        self._q_s = q_s
        self._fit = fit_result
        self._error = error

    def score(self, criterion: Criterion) -> float:
        return self._fit.get_aic() if criterion is Criterion.AIC else self._fit.get_bic()

    def is_converged(self) -> bool:
        return self._fit is not None and self._fit.is_converged()

    def get_total_factors(self) -> int:
        return self._fit.get_dims().get_total_factors() if self._fit is not None else self._q

    ##
    #   Getter Functions
    ##

    def get_q(self) -> int:
        return self._q

    def get_q_s(self) -> int:
        return self._q_s

    def get_fit(self) -> Optional[FitResult]:
        return self._fit

    def get_error(self) -> Optional[str]:
        return self._error


class SelectionReport:
    """
    One row per grid point. The chosen point minimizes the criterion over converged fits; ties go to the
    smaller q + sum(q_s), then the smaller q.
    """

    def __init__(self, points: Sequence[GridPointResult], criterion: Criterion = Criterion.BIC):
        self._points = list(points)
        self._criterion = criterion

    def choose(self, criterion: Optional[Criterion] = None) -> GridPointResult:
        """
        :param criterion: The criterion to minimize, the report's own when omitted.
        :return: The chosen grid point.
        """
        criterion = criterion or self._criterion
        candidates = [point for point in self._points if point.is_converged()]
        if not candidates:
            raise AllFitsFailed('none of the %d grid points converged' % len(self._points))
        return min(candidates, key=lambda point: (point.score(criterion), point.get_total_factors(), point.get_q()))

    def to_frame(self) -> pd.DataFrame:
        """
        :return: The report as a table, with a column marking the chosen point under each criterion.
        """
        chosen = {}
        for criterion in Criterion:
            try:
                chosen[criterion] = self.choose(criterion)
            except AllFitsFailed:
                chosen[criterion] = None
        rows = []
        for point in self._points:
            fit_result = point.get_fit()
            rows.append({
                'q': point.get_q(), 'q_s': point.get_q_s(),
                'aic': fit_result.get_aic() if fit_result else float('nan'),
                'bic': fit_result.get_bic() if fit_result else float('nan'),
                'observed_loglik': fit_result.get_observed_loglik() if fit_result else float('nan'),
                'n_params': fit_result.get_dims().get_n_free_params() if fit_result else -1,
                'n_iter': fit_result.get_n_iter() if fit_result else 0,
                'converged': point.is_converged(),
                'chosen_aic': point is chosen[Criterion.AIC],
                'chosen_bic': point is chosen[Criterion.BIC],
                'error': point.get_error() or '',
            })
        return pd.DataFrame(rows)

    ##
    #   Getter Functions
    ##

    def get_points(self) -> List[GridPointResult]:
        return list(self._points)

    def get_criterion(self) -> Criterion:
        return self._criterion

    def get_chosen(self) -> GridPointResult:
        return self.choose(self._criterion)


def n_free_params(dims: ModelDims) -> int:
    """
    Parameter count for the information criteria: p p_b + p q + sum_s p q_s + S p.
    """
    return dims.get_n_free_params()


def fit_grid_point(data: MultiStudyData, q: int, q_s: int, config: ConvergenceConfig = None,
                   verbose: int = 0) -> GridPointResult:
    """
    Fits one grid point from its own initialization. Numerical failures are recorded, not raised.
    """
    dims = ModelDims.from_data(data, q, q_s)
    try:
        result = fit(data, dims, config, initialize(data, dims), verbose)
    except MSFRError as err:
        if isinstance(err, ValidationError):
            raise
        logger.warning('grid point q=%d, q_s=%d failed: %s', q, q_s, err)
        return GridPointResult(q, q_s, None, '%s: %s' % (type(err).__name__, err))
    if not result.is_converged():
        logger.warning('grid point q=%d, q_s=%d did not converge in %d iterations', q, q_s, result.get_n_iter())
    return GridPointResult(q, q_s, result)


def select(data: MultiStudyData, grid: GridSpec, config: ConvergenceConfig = None, seed: int = 0,
           n_jobs: int = 1, verbose: int = 0) -> SelectionReport:
    """
    Fits every grid point and picks the dimensions minimizing the grid's criterion.
    :param data: The MultiStudyData.
    :param grid: The grid of dimensions.
    :param config: The stopping rule of every fit.
    :param seed: Recorded for reproducibility; the fits themselves are deterministic.
    :param n_jobs: Number of concurrent fits (joblib semantics, -1 for all cores).
    :param verbose: Logging level of each engine.
    :return: The SelectionReport, one row per grid point in grid order.
    """
    grid.check(data.get_p(), data.get_n_studies())
    points = grid.get_points()
    logger.info('fitting %d grid points (seed %d)', len(points), seed)
    results = Parallel(n_jobs=n_jobs)(delayed(fit_grid_point)(data, q, q_s, config, verbose) for q, q_s in points)
    report = SelectionReport(results, grid.get_criterion())
    chosen = report.get_chosen()
    logger.info('%s chose q=%d, q_s=%d', grid.get_criterion().name, chosen.get_q(), chosen.get_q_s())
    return report
