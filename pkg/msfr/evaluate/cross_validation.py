import logging
from typing import *

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from sklearn.model_selection import KFold

from msfr.classes import MultiStudyData, ModelDims, Params, ConvergenceConfig, ScoreMethod, MethodType
from msfr.errors import TooFewSubjects, ValidationError
from msfr.methods import get_method
from msfr.scores import compute_scores
from msfr.utils import stream_seed, DEFAULT_FOLDS, MIN_TRAIN_SUBJECTS

logger = logging.getLogger(__name__)


class CVSpec:
    """
    k-fold cross-validation settings.
    """

    def __init__(self, k: int = DEFAULT_FOLDS, score_methods: Sequence[ScoreMethod] = tuple(ScoreMethod),
                 seed: int = 0):
        """
        Initializes a CVSpec.
        :param k: Number of folds, at least 2.
        :param score_methods: Score estimators used for prediction, each reported separately.
        :param seed: Seed of the fold assignment.
        """
        if int(k) < 2:
            raise ValidationError('k must be at least 2, got %r' % k)
        if isinstance(score_methods, ScoreMethod):
            score_methods = [score_methods]
        if len(score_methods) == 0:
            raise ValidationError('at least one score method is required')
        self._k = int(k)
        self._score_methods = list(score_methods)
        self._seed = int(seed)

    ##
    #   Getter Functions
    ##

    def get_k(self) -> int:
        return self._k

    def get_score_methods(self) -> List[ScoreMethod]:
        return list(self._score_methods)

    def get_seed(self) -> int:
        return self._seed


class Fold:
    """
    One train/test partition, as subject indices per study.
    """

    def __init__(self, train: Sequence[np.ndarray], test: Sequence[np.ndarray]):
        self._train = list(train)
        self._test = list(test)

    def get_train(self) -> List[np.ndarray]:
        return list(self._train)

    def get_test(self) -> List[np.ndarray]:
        return list(self._test)


def kfold_split(data: MultiStudyData, k: int, seed: int, min_train: int = MIN_TRAIN_SUBJECTS) -> List[Fold]:
    """
    Splits each study's subjects into k near-equal shuffled folds. The shuffle of a study depends only on
    the seed and the study id, so reordering studies leaves every fold unchanged.
    :param data: The MultiStudyData.
    :param k: Number of folds.
    :param seed: The seed.
    :param min_train: Minimum number of training subjects every study must keep.
    :return: k Folds; the test sets of each study partition its subjects.
    """
    per_study = []
    for study in data:
        n = study.get_n()
        if n < k:
            raise TooFewSubjects("study '%s' has %d subjects for %d folds" % (study.get_id(), n, k))
        splitter = KFold(n_splits=k, shuffle=True, random_state=stream_seed(seed, 'folds', study.get_id()))
        splits = list(splitter.split(np.arange(n)))
        smallest = min(len(train) for train, _ in splits)
        if smallest < min_train:
            raise TooFewSubjects("study '%s' keeps only %d training subjects per fold, need %d"
                                 % (study.get_id(), smallest, min_train))
        per_study.append(splits)
    return [Fold([splits[f][0] for splits in per_study], [splits[f][1] for splits in per_study]) for f in range(k)]


def predict(params: Params, score_method: ScoreMethod, test: MultiStudyData) -> List[np.ndarray]:
    """
    Reconstructs test observations from their factor scores: x_hat = beta b + phi f + lambda_s l when the
    parameters carry covariate effects, x_hat = phi f + lambda_s l otherwise (covariates ignored).
    :param params: Parameters fitted on training data.
    :param score_method: The score estimator.
    :param test: The test subjects.
    :return: One p x n_s reconstruction per study.
    """
    scores = compute_scores(test, params, score_method)
    predictions = []
    for s, study in enumerate(test):
        x_hat = params.get_phi() @ scores.get_common(s) + params.get_lambda(s) @ scores.get_specific(s)
        if params.get_p_b() > 0:
            x_hat = x_hat + params.get_beta() @ study.get_b()
        predictions.append(x_hat)
    return predictions


def _evaluate_fold(data: MultiStudyData, fold: Fold, method_type: MethodType, q: int, qs: Sequence[int],
                   config: ConvergenceConfig, score_methods: Sequence[ScoreMethod]) -> Dict[ScoreMethod, float]:
    train, test = data.subset(fold.get_train()), data.subset(fold.get_test())
    params = get_method(method_type).fit_fixed(train, q, qs, config)
    errors = {}
    for score_method in score_methods:
        predictions = predict(params, score_method, test)
        errors[score_method] = float(sum(np.sum((study.get_x() - x_hat) ** 2) for study, x_hat in zip(test, predictions)))
    return errors


class CVReport:
    """
    Cross-validated prediction errors per method and score estimator. Each fold's error is the summed
    squared residual divided by n p (per entry) or by n (per subject); folds are then averaged.
    """

    def __init__(self, methods: Sequence[MethodType], score_methods: Sequence[ScoreMethod],
                 fold_errors: Dict[Tuple[MethodType, ScoreMethod], List[float]], fold_sizes: Sequence[int], p: int):
        self._methods = list(methods)
        self._score_methods = list(score_methods)
        self._fold_errors = fold_errors
        self._fold_sizes = list(fold_sizes)
        self._p = p

    def get_mse(self, method: MethodType, score_method: ScoreMethod, per_subject: bool = False) -> float:
        """
        :param method: The method.
        :param score_method: The score estimator.
        :param per_subject: Divide by subjects only, instead of subjects times responses.
        :return: The fold-averaged mean squared error.
        """
        denominators = [n if per_subject else n * self._p for n in self._fold_sizes]
        return float(np.mean([sse / d for sse, d in zip(self._fold_errors[(method, score_method)], denominators)]))

    def to_frame(self, per_subject: bool = False) -> pd.DataFrame:
        """
        :return: The errors as methods x score estimators.
        """
        return pd.DataFrame([[self.get_mse(m, sm, per_subject) for sm in self._score_methods] for m in self._methods],
                            index=pd.Index([m.value for m in self._methods], name='method'),
                            columns=[sm.value for sm in self._score_methods])

    def to_long_frame(self) -> pd.DataFrame:
        rows = []
        for (method, score_method), errors in self._fold_errors.items():
            for f, (sse, n) in enumerate(zip(errors, self._fold_sizes)):
                rows.append({'method': method.value, 'score': score_method.value, 'fold': f + 1, 'n_test': n,
                             'sse': sse, 'mse_entry': sse / (n * self._p), 'mse_subject': sse / n})
        return pd.DataFrame(rows)

    ##
    #   Getter Functions
    ##

    def get_methods(self) -> List[MethodType]:
        return list(self._methods)

    def get_score_methods(self) -> List[ScoreMethod]:
        return list(self._score_methods)

    def get_fold_sizes(self) -> List[int]:
        return list(self._fold_sizes)


def cv_mse(data: MultiStudyData, dims: ModelDims, config: ConvergenceConfig, cvspec: CVSpec,
           methods: Sequence[MethodType] = (MethodType.MSFR, MethodType.MSFA), n_jobs: int = 1) -> CVReport:
    """
    k-fold prediction error: on every fold each method is fitted on the training subjects at the fixed
    dimensions of dims, then predicts the held-out subjects.
    :param data: The MultiStudyData.
    :param dims: The latent dimensions (chosen beforehand on the full data).
    :param config: The stopping rule of every fit.
    :param cvspec: The fold settings.
    :param methods: The methods to compare.
    :param n_jobs: Number of concurrent fold fits.
    :return: The CVReport.
    """
    q, qs = dims.get_q(), list(dims.get_qs())
    min_train = max(q + max(qs) + 1, MIN_TRAIN_SUBJECTS)
    folds = kfold_split(data, cvspec.get_k(), cvspec.get_seed(), min_train)
    jobs = [(method, fold) for method in methods for fold in folds]
    logger.info('cross-validating %d methods over %d folds', len(methods), len(folds))
    outcomes = Parallel(n_jobs=n_jobs)(
        delayed(_evaluate_fold)(data, fold, method, q, qs, config, cvspec.get_score_methods()) for method, fold in jobs)

    fold_errors = {(m, sm): [] for m in methods for sm in cvspec.get_score_methods()}
    for (method, _), errors in zip(jobs, outcomes):
        for score_method, sse in errors.items():
            fold_errors[(method, score_method)].append(sse)
    fold_sizes = [sum(len(test) for test in fold.get_test()) for fold in folds]
    return CVReport(methods, cvspec.get_score_methods(), fold_errors, fold_sizes, data.get_p())
