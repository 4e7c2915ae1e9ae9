import logging
from typing import *

from msfr.classes import MultiStudyData, ModelDims, Params, ConvergenceConfig, FitResult, validate, \
    explained_variance
from msfr.scores.identify import identify
from msfr.utils import PSI_FLOOR, AITKEN_MAX_RATE
from .estep import EStepMoments, residualize, residual_second_moments, e_step_from_moments
from .cmstep import cm_psi, cm_phi, cm_lambda, cm_beta
from .likelihood import expected_complete_loglik, observed_loglik, information_criteria

logger = logging.getLogger(__name__)

# Aitken denominators below this fall back to the raw increment
_AITKEN_TINY = 1e-300


class ECM:
    """
    The Expectation/Conditional-Maximization engine. Each cycle runs the E-step at the current parameters,
    then the conditional maximizations psi -> phi -> lambda_s -> beta, each using the freshest blocks.
    """

    def __init__(self, data: MultiStudyData, dims: ModelDims, init: Params, config: ConvergenceConfig = None,
                 verbose: int = 0, psi_floor: float = PSI_FLOOR):
        """
        Initializes an ECM run.
        :param data: The MultiStudyData.
        :param dims: The dimensions to fit.
        :param init: The starting parameters.
        :param config: The stopping rule.
        :param verbose: 0 for no logs. 1 for a start and finish summary. 2 for one line per iteration.
        :param psi_floor: Lower bound on every idiosyncratic variance.
        """
        validate(data, dims)
        init.check_dims(dims)
        self.data = data
        self.dims = dims
        self.config = config if config is not None else ConvergenceConfig()
        self.verbose = verbose
        self.psi_floor = psi_floor
        self.params = init
        self.n_iter = 0
        self.started = False
        self.ended = False
        self.converged = False
        self.statistic = None
        self.loglik_trace = [observed_loglik(data, init)]
        self.complete_trace = []

    def step(self) -> bool:
        """
        Runs one ECM cycle. The stopping rule is checked on the observed log-likelihood trace right after the
        E-step, before the CM updates.
        :return: True when the run has ended (converged or out of iterations).
        """
        if self.ended:
            return True
        if not self.started:
            self._start()

        moments = self._e_step()
        self.complete_trace.append(expected_complete_loglik(self.params, moments, self.dims.get_ns()))
        self.statistic = self._stopping_statistic()
        if self.statistic is not None and self.statistic < self.config.get_eps_star():
            self.converged = True
            self._end()
            return True
        if self.n_iter >= self.config.get_max_iter():
            self._end()
            return True

        self.params = self._cm_steps(moments)
        self.n_iter += 1
        self.loglik_trace.append(observed_loglik(self.data, self.params))
        if self.verbose == 2:
            logger.debug('iteration %d: loglik %.10g, complete loglik %.10g, statistic %s', self.n_iter,
                         self.loglik_trace[-1], self.complete_trace[-1], self.statistic)
        return False

    def run(self) -> FitResult:
        """
        Runs cycles until the stopping rule fires or max_iter cycles are done.
        :return: The FitResult.
        """
        while not self.step():
            pass
        return self.result()

    def run_steps(self, n: int) -> bool:
        """
        Runs at most n cycles.
        :param n: Number of cycles.
        :return: True when the run has ended.
        """
        for _ in range(n):
            if self.step():
                return True
        return False

    def result(self) -> FitResult:
        """
        Packages the current state: identified and raw parameters, traces and information criteria.
        """
        loglik = self.loglik_trace[-1]
        aic, bic = information_criteria(loglik, self.dims)
        identified = identify(self.params)
        return FitResult(params=identified, raw_params=self.params, dims=self.dims,
                         loglik_trace=self.loglik_trace, complete_trace=self.complete_trace, n_iter=self.n_iter,
                         converged=self.converged, observed_loglik=loglik, aic=aic, bic=bic,
                         explained=explained_variance(identified, self.dims.get_ns()))

    ##
    # ECM Functions
    ##

    def _start(self):
        self.started = True
        if self.verbose >= 1:
            logger.info('fitting %s, initial loglik %.10g', self.dims, self.loglik_trace[0])

    def _end(self):
        self.ended = True
        if self.verbose >= 1:
            if self.converged:
                logger.info('converged after %d iterations, loglik %.10g', self.n_iter, self.loglik_trace[-1])
            else:
                logger.info('stopped at max_iter=%d without converging, loglik %.10g', self.n_iter,
                            self.loglik_trace[-1])

    def _e_step(self) -> List[EStepMoments]:
        beta = self.params.get_beta()
        return [e_step_from_moments(residual_second_moments(study, beta), study.get_n(), self.params, s)
                for s, study in enumerate(self.data)]

    def _cm_steps(self, moments: List[EStepMoments]) -> Params:
        params = self.params
        ns = self.dims.get_ns()
        psis = [cm_psi(m, params.get_phi(), params.get_lambda(s), self.psi_floor) for s, m in enumerate(moments)]
        phi = cm_phi(moments, params.get_lambdas(), psis, ns)
        lambdas = [cm_lambda(m, phi) for m in moments]
        beta = params.get_beta()
        if self.dims.get_p_b() > 0:
            xtildes = residualize(self.data, beta)
            e_f = [m.get_delta() @ xt for m, xt in zip(moments, xtildes)]
            e_l = [m.get_delta_s() @ xt for m, xt in zip(moments, xtildes)]
            beta = cm_beta(self.data, phi, lambdas, e_f, e_l, psis if self.config.use_weighted_beta() else None)
        return Params(beta, phi, lambdas, psis)

    def _stopping_statistic(self) -> Optional[float]:
        """
        |increment / (1 - c)| with c the ratio of successive increments of the observed log-likelihood.
        The raw increment when that ratio is undefined, when it is not below AITKEN_MAX_RATE, or when use_aitken
        is off. None before two evaluations exist.
        """
        trace = self.loglik_trace
        if len(trace) < 2:
            return None
        increment = trace[-1] - trace[-2]
        if self.config.use_aitken() and len(trace) >= 3:
            previous = trace[-2] - trace[-3]
            if previous > _AITKEN_TINY:
                rate = increment / previous
                if rate < AITKEN_MAX_RATE:
                    return abs(increment / (1 - rate))
        return abs(increment)


def fit(data: MultiStudyData, dims: ModelDims, config: ConvergenceConfig = None, init: Params = None,
        verbose: int = 0) -> FitResult:
    """
    Fits the model by ECM.
    :param data: The MultiStudyData.
    :param dims: The dimensions to fit.
    :param config: The stopping rule.
    :param init: Starting parameters; the two-step least-squares initialization when omitted.
    :param verbose: Logging level of the engine.
    :return: The FitResult.
    """
    if init is None:
        from msfr.select.initialize import initialize
        init = initialize(data, dims)
    return ECM(data, dims, init, config, verbose).run()
