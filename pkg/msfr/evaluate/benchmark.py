import logging
from collections import Counter
from typing import *

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from msfr.classes import Params, ConvergenceConfig, Criterion, MethodType, marginal_covariance
from msfr.data import ScenarioSpec, generate_truth, generate_data
from msfr.errors import MSFRError
from msfr.methods import fit_method
from msfr.select import GridSpec
from msfr.utils import rv_coefficient, rv_similarity, replication_seed

logger = logging.getLogger(__name__)


def compare_to_truth(params: Params, truth: Params) -> Dict[str, float]:
    """
    RV coefficients between estimated and true parameters: loadings and beta through their cross-products,
    the common covariance phi phi^T and every marginal covariance directly. Blocks absent on either side
    give nan.
    :param params: The estimated parameters.
    :param truth: The true parameters.
    :return: A dict with rv_beta, rv_phi, rv_sigma_phi, rv_lambda_<s> and rv_sigma_<s> (s from 1).
    """
    def rv_or_nan(a: np.ndarray, b: np.ndarray) -> float:
        if a.shape[1] == 0 or b.shape[1] == 0:
            return float('nan')
        return rv_coefficient(a, b)

    values = {'rv_beta': rv_or_nan(params.get_beta(), truth.get_beta()),
              'rv_phi': rv_or_nan(params.get_phi(), truth.get_phi())}
    values['rv_sigma_phi'] = values['rv_phi'] if np.isnan(values['rv_phi']) else \
        rv_similarity(params.get_common_covariance(), truth.get_common_covariance())
    estimated, actual = marginal_covariance(params), marginal_covariance(truth)
    for s in range(truth.get_n_studies()):
        values['rv_lambda_%d' % (s + 1)] = rv_or_nan(params.get_lambda(s), truth.get_lambda(s))
        values['rv_sigma_%d' % (s + 1)] = rv_similarity(estimated.get_sigma(s), actual.get_sigma(s))
    return values


class BenchmarkReport:
    """
    Per replication x method x criterion records of selected dimensions and RV coefficients, with the
    failed replications listed separately.
    """

    def __init__(self, spec: ScenarioSpec, records: Sequence[dict], failures: Sequence[dict],
                 truth: Optional[Params] = None, averages: Optional[Dict[Tuple[str, str], Dict[str, np.ndarray]]] = None):
        """
        Initializes a BenchmarkReport.
        :param spec: The scenario that was run.
        :param records: One dict per replication x method x criterion.
        :param failures: One dict per failed replication.
        :param truth: The fixed true parameters, when the truth was held fixed.
        :param averages: With a fixed truth, the average estimated beta and common covariance per
            (method, criterion).
        """
        self._spec = spec
        self._records = list(records)
        self._failures = list(failures)
        self._truth = truth
        self._averages = averages or {}

    def to_frame(self) -> pd.DataFrame:
        """
        :return: One row per replication x method x criterion.
        """
        return pd.DataFrame(self._records)

    def summary(self) -> pd.DataFrame:
        """
        :return: Means per method x criterion of the selected dimensions and every RV column.
        """
        frame = self.to_frame()
        if frame.empty:
            return frame
        columns = ['q_hat', 'qs_hat'] + [c for c in frame.columns if c.startswith('rv_')]
        summary = frame.groupby(['method', 'criterion'], sort=False)[columns].mean()
        summary['n_reps'] = frame.groupby(['method', 'criterion'], sort=False).size()
        return summary.reset_index()

    def long_frame(self) -> pd.DataFrame:
        """
        :return: Long-format RV values (replication, method, criterion, metric, value) for boxplots.
        """
        frame = self.to_frame()
        if frame.empty:
            return frame
        metrics = [c for c in frame.columns if c.startswith('rv_')]
        return frame.melt(id_vars=['replication', 'method', 'criterion'], value_vars=metrics, var_name='metric')

    def get_modal_dims(self, method: MethodType, criterion: Criterion) -> Tuple[int, int]:
        """
        :return: The most frequently selected (q, q_s) of a method under a criterion.
        """
        counts = Counter((r['q_hat'], r['qs_hat']) for r in self._records
                         if r['method'] == method.value and r['criterion'] == criterion.value)
        return counts.most_common(1)[0][0]

    def get_dims_frequency(self, method: MethodType, criterion: Criterion, dims: Tuple[int, int]) -> float:
        chosen = [(r['q_hat'], r['qs_hat']) for r in self._records
                  if r['method'] == method.value and r['criterion'] == criterion.value]
        return sum(1 for c in chosen if c == tuple(dims)) / len(chosen)

    def get_mean(self, method: MethodType, criterion: Criterion, metric: str) -> float:
        values = [r[metric] for r in self._records if r['method'] == method.value and r['criterion'] == criterion.value]
        return float(np.nanmean(values))

    ##
    #   Getter Functions
    ##

    def get_spec(self) -> ScenarioSpec:
        return self._spec

    def get_records(self) -> List[dict]:
        return list(self._records)

    def get_failures(self) -> List[dict]:
        return list(self._failures)

    def get_truth(self) -> Optional[Params]:
        return self._truth

    def get_averages(self) -> Dict[Tuple[str, str], Dict[str, np.ndarray]]:
        return dict(self._averages)


def run_replication(spec: ScenarioSpec, replication: int, methods: Sequence[MethodType], grid: GridSpec,
                    config: ConvergenceConfig = None, truth: Optional[Params] = None) -> dict:
    """
    One replication: draw the truth (unless given) and the data, fit every method, compare under AIC and BIC.
    :return: A dict with 'records', 'estimates' and 'failure' (None on success).
    """
    seed = replication_seed(spec.get_seed(), replication)
    records, estimates = [], {}
    try:
        truth = truth if truth is not None else generate_truth(spec, seed)
        data = generate_data(truth, spec, seed)
        for method in methods:
            method_fit = fit_method(method, data, grid, config, seed)
            for criterion in Criterion:
                chosen = method_fit.get_chosen(criterion)
                params = method_fit.get_params(criterion)
                record = {'replication': replication, 'seed': seed, 'method': method.value,
                          'criterion': criterion.value, 'q_hat': chosen.get_q(), 'qs_hat': chosen.get_q_s(),
                          'n_iter': chosen.get_fit().get_n_iter()}
                record.update(compare_to_truth(params, truth))
                records.append(record)
                estimates[(method.value, criterion.value)] = {'beta': params.get_beta(),
                                                              'sigma_phi': params.get_common_covariance()}
    except MSFRError as err:
        logger.warning('replication %d failed: %s', replication, err)
        return {'records': [], 'estimates': {}, 'failure': {'replication': replication, 'seed': seed,
                                                            'error': type(err).__name__, 'message': str(err)}}
    return {'records': records, 'estimates': estimates, 'failure': None}


def run_benchmark(spec: ScenarioSpec, methods: Sequence[MethodType] = tuple(MethodType), grid: GridSpec = None,
                  config: ConvergenceConfig = None, n_jobs: int = 1) -> BenchmarkReport:
    """
    Runs every replication of a scenario. Replication r uses seed + r, so results do not depend on
    scheduling. A replication in which any fit fails is excluded and listed as a failure.
    :param spec: The scenario.
    :param methods: The methods to compare.
    :param grid: The selection grid, the scenario's default when omitted.
    :param config: The stopping rule of every fit.
    :param n_jobs: Number of concurrent replications.
    :return: The BenchmarkReport.
    """
    grid = grid if grid is not None else spec.default_grid()
    truth = generate_truth(spec, spec.get_seed()) if spec.has_fixed_truth() else None
    logger.info('running %d replications of scenario %s', spec.get_n_reps(), spec.get_name())
    outcomes = Parallel(n_jobs=n_jobs)(delayed(run_replication)(spec, r, methods, grid, config, truth)
                                       for r in range(spec.get_n_reps()))

    records = [record for outcome in outcomes for record in outcome['records']]
    failures = [outcome['failure'] for outcome in outcomes if outcome['failure'] is not None]
    if failures:
        logger.warning('%d of %d replications failed', len(failures), spec.get_n_reps())

    averages = None
    if truth is not None:
        averages = {}
        successful = [outcome['estimates'] for outcome in outcomes if outcome['failure'] is None]
        for key in (successful[0] if successful else {}):
            averages[key] = {name: np.mean([estimates[key][name] for estimates in successful], axis=0)
                             for name in ('beta', 'sigma_phi')}
    return BenchmarkReport(spec, records, failures, truth, averages)
