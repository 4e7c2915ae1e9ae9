from typing import *

from msfr.classes import ModelDims, Criterion, validate_dims
from msfr.errors import ValidationError
from msfr.select import GridSpec
from msfr.utils import DEFAULT_REPS


class ScenarioSpec:
    """
    A simulation design: true latent dimensions, study sizes, replication count and seed.
    """

    def __init__(self, name: str, q: int, q_s: int, n_studies: int, p_b: int, p: int, ns: Sequence[int],
                 n_reps: int = DEFAULT_REPS, seed: int = 0, fixed_truth: bool = False):
        """
        Initializes a ScenarioSpec.
        :param name: The scenario label.
        :param q: True number of common factors.
        :param q_s: True number of study-specific factors, shared by all studies.
        :param n_studies: Number of studies S.
        :param p_b: Number of covariates.
        :param p: Number of responses.
        :param ns: Sample size of each study.
        :param n_reps: Number of replications.
        :param seed: The base seed; replication r uses seed + r.
        :param fixed_truth: Draw the true parameters once and vary only the data across replications.
        """
        ns = [int(n) for n in ns]
        if len(ns) != n_studies:
            raise ValidationError('scenario %s lists %d sample sizes for %d studies' % (name, len(ns), n_studies))
        if int(n_reps) < 1:
            raise ValidationError('n_reps must be at least 1, got %r' % n_reps)
        self._name = str(name)
        self._q = int(q)
        self._q_s = int(q_s)
        self._n_studies = int(n_studies)
        self._p_b = int(p_b)
        self._p = int(p)
        self._ns = ns
        self._n_reps = int(n_reps)
        self._seed = int(seed)
        self._fixed_truth = bool(fixed_truth)
        validate_dims(self.get_dims())

    def replace(self, **changes) -> 'ScenarioSpec':
        values = self.to_dict()
        values.update(changes)
        return ScenarioSpec(**values)

    def scaled(self, fraction: float) -> 'ScenarioSpec':
        """
        :param fraction: Multiplier of every sample size, e.g. 0.2 for one-fifth.
        :return: The same design with smaller studies (at least p + 1 subjects each).
        """
        if not fraction > 0:
            raise ValidationError('scale fraction must be positive, got %r' % fraction)
        return self.replace(ns=[max(int(round(n * fraction)), self._p + 1) for n in self._ns])

    def default_grid(self, criterion: Criterion = Criterion.BIC) -> GridSpec:
        return GridSpec.around(self._q, self._q_s, criterion)

    def get_dims(self) -> ModelDims:
        return ModelDims(self._p, self._p_b, self._q, [self._q_s] * self._n_studies, self._ns)

    def to_dict(self) -> dict:
        return {'name': self._name, 'q': self._q, 'q_s': self._q_s, 'n_studies': self._n_studies,
                'p_b': self._p_b, 'p': self._p, 'ns': list(self._ns), 'n_reps': self._n_reps,
                'seed': self._seed, 'fixed_truth': self._fixed_truth}

    ##
    #   Getter Functions
    ##

    def get_name(self) -> str:
        return self._name

    def get_q(self) -> int:
        return self._q

    def get_q_s(self) -> int:
        return self._q_s

    def get_n_studies(self) -> int:
        return self._n_studies

    def get_p_b(self) -> int:
        return self._p_b

    def get_p(self) -> int:
        return self._p

    def get_ns(self) -> List[int]:
        return list(self._ns)

    def get_n_reps(self) -> int:
        return self._n_reps

    def get_seed(self) -> int:
        return self._seed

    def has_fixed_truth(self) -> bool:
        return self._fixed_truth


# The three simulation designs. Scenario 1 uses two studies of 500 subjects.
SCENARIOS = {
    '1': ScenarioSpec('1', q=3, q_s=1, n_studies=2, p_b=2, p=20, ns=[500, 500]),
    '2': ScenarioSpec('2', q=4, q_s=1, n_studies=6, p_b=7, p=42, ns=[1257, 1444, 2126, 4940, 2314, 897]),
    '3': ScenarioSpec('3', q=4, q_s=1, n_studies=6, p_b=9, p=42, ns=[1257, 1444, 2126, 4940, 2314, 897]),
}


def get_scenario(name: Union[int, str]) -> ScenarioSpec:
    name = str(name)
    if name not in SCENARIOS:
        raise ValidationError('unknown scenario %r, expected one of %s' % (name, sorted(SCENARIOS)))
    return SCENARIOS[name]
