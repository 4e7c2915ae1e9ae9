from typing import *

from msfr.classes import ConvergenceConfig, Criterion, MethodType, ScoreMethod
from msfr.data import ScenarioSpec, get_scenario
from msfr.errors import ValidationError, ParseError
from msfr.evaluate import CVSpec
from msfr.select import GridSpec
from msfr.utils import EPS_STAR, MAX_ITER, DEFAULT_FOLDS
from msfr.utils.io import read_json


def _int_list(value: Union[str, int, Sequence[int]], key: str) -> List[int]:
    """
    Parses "1,2,3", "1-4" or a JSON list into a list of ints.
    """
    if isinstance(value, int):
        return [value]
    if isinstance(value, str):
        values = []
        for part in value.split(','):
            part = part.strip()
            if not part:
                continue
            try:
                if '-' in part:
                    low, high = part.split('-', 1)
                    values.extend(range(int(low), int(high) + 1))
                else:
                    values.append(int(part))
            except ValueError:
                raise ValidationError('%s expects integers, got %r' % (key, value))
        return values
    try:
        return [int(v) for v in value]
    except (TypeError, ValueError):
        raise ValidationError('%s expects a list of integers, got %r' % (key, value))


def _names(value: Union[str, Sequence[str]]) -> List[str]:
    if isinstance(value, str):
        return [part.strip() for part in value.split(',') if part.strip()]
    return [str(v) for v in value]


def _choice(parse: Callable[[str], Any], text: str, key: str) -> Any:
    try:
        return parse(text)
    except ValueError:
        raise ValidationError('unknown %s %r' % (key, text))


class RunConfig:
    """
    The settings of one command: a JSON config file merged with command-line flags, flags winning.
    Keys use underscores; hyphens are accepted in the file.
    """

    DEFAULTS = {
        'seed': 0,
        'criterion': 'bic',
        'q_grid': None,
        'qs_grid': None,
        'q': None,
        'qs': None,
        'eps': EPS_STAR,
        'max_iter': MAX_ITER,
        'use_aitken': True,
        'weighted_beta': True,
        'reps': None,
        'scenario': '1',
        'scale': None,
        'fixed_truth': False,
        'method': None,
        'score': None,
        'folds': DEFAULT_FOLDS,
        'out': 'out',
        'manifest': None,
        'params': None,
        'truth': None,
        'n_jobs': 1,
        'verbose': 0,
    }

    def __init__(self, command: str, values: Optional[dict] = None):
        """
        Initializes a RunConfig.
        :param command: The subcommand being configured.
        :param values: Settings overriding the defaults. None values are ignored.
        """
        values = {str(k).replace('-', '_'): v for k, v in (values or {}).items()}
        unknown = sorted(set(values) - set(self.DEFAULTS))
        if unknown:
            raise ValidationError('unknown configuration keys: %s' % ', '.join(unknown))
        self._command = command
        self._values = dict(self.DEFAULTS)
        self._values.update({k: v for k, v in values.items() if v is not None})

        # Parse once so bad values fail before any work starts
        self._criterion = _choice(Criterion.parse, self._values['criterion'], 'criterion')
        self._methods = [_choice(MethodType.parse, m, 'method') for m in _names(self._values['method'])] \
            if self._values['method'] is not None else None
        self._score_methods = [_choice(ScoreMethod.parse, m, 'score method') for m in _names(self._values['score'])] \
            if self._values['score'] is not None else None
        for key in ('q_grid', 'qs_grid'):
            if self._values[key] is not None:
                self._values[key] = _int_list(self._values[key], key)
        if self._values['qs'] is not None:
            qs = _int_list(self._values['qs'], 'qs')
            self._values['qs'] = qs[0] if len(qs) == 1 else qs
        for key in ('seed', 'max_iter', 'folds', 'n_jobs', 'verbose'):
            self._values[key] = self._as_int(key)
        if self._values['q'] is not None:
            self._values['q'] = self._as_int('q')
        if self._values['reps'] is not None:
            self._values['reps'] = self._as_int('reps')

    def _as_int(self, key: str) -> int:
        try:
            return int(self._values[key])
        except (TypeError, ValueError):
            raise ValidationError('%s expects an integer, got %r' % (key, self._values[key]))

    @classmethod
    def from_sources(cls, command: str, flags: dict, config_path: Optional[str] = None) -> 'RunConfig':
        """
        Builds a RunConfig from an optional JSON file and the parsed flags.
        :param command: The subcommand.
        :param flags: Flag values; None means the flag was not given.
        :param config_path: The JSON config file, if any.
        :return: The merged RunConfig.
        """
        values = {}
        if config_path is not None:
            content = read_json(config_path)
            if not isinstance(content, dict):
                raise ParseError('config must be a JSON object', config_path)
            values.update({str(k).replace('-', '_'): v for k, v in content.items()})
        values.update({k: v for k, v in flags.items() if v is not None})
        return cls(command, values)

    def get_convergence(self) -> ConvergenceConfig:
        return ConvergenceConfig(float(self._values['eps']), self._values['max_iter'],
                                 bool(self._values['use_aitken']), bool(self._values['weighted_beta']))

    def get_grid(self, default: Optional[GridSpec] = None) -> GridSpec:
        """
        :param default: The grid used for values the configuration leaves unset.
        :return: The GridSpec of --q-grid x --qs-grid under the configured criterion.
        """
        q_values = self._values['q_grid'] or (default.get_q_values() if default else [1, 2, 3])
        qs_values = self._values['qs_grid'] or (default.get_qs_values() if default else [1, 2, 3])
        return GridSpec(q_values, qs_values, self._criterion)

    def get_scenario(self) -> ScenarioSpec:
        spec = get_scenario(self._values['scenario'])
        if self._values['scale'] is not None:
            spec = spec.scaled(float(self._values['scale']))
        changes = {'seed': self._values['seed'], 'fixed_truth': bool(self._values['fixed_truth'])}
        if self._values['reps'] is not None:
            changes['n_reps'] = self._values['reps']
        return spec.replace(**changes)

    def get_cv_spec(self) -> CVSpec:
        return CVSpec(self._values['folds'], self.get_score_methods(list(ScoreMethod)), self._values['seed'])

    def get_methods(self, default: Sequence[MethodType]) -> List[MethodType]:
        return list(self._methods) if self._methods else list(default)

    def get_method(self) -> MethodType:
        methods = self.get_methods([MethodType.MSFR])
        if len(methods) != 1:
            raise ValidationError('%s takes a single --method, got %d' % (self._command, len(methods)))
        return methods[0]

    def get_score_methods(self, default: Sequence[ScoreMethod]) -> List[ScoreMethod]:
        return list(self._score_methods) if self._score_methods else list(default)

    def get_dims(self) -> Optional[Tuple[int, Union[int, List[int]]]]:
        """
        :return: The fixed (q, q_s) from --q and --qs, or None when neither is set.
        """
        q, qs = self._values['q'], self._values['qs']
        if q is None and qs is None:
            return None
        if q is None or qs is None:
            raise ValidationError('--q and --qs must be given together')
        return q, qs

    def require(self, key: str) -> Any:
        """
        :return: A setting that must be present for the current command.
        """
        if self._values.get(key) is None:
            raise ValidationError('%s needs --%s' % (self._command, key.replace('_', '-')))
        return self._values[key]

    def to_dict(self) -> dict:
        values = dict(self._values)
        values['command'] = self._command
        values['criterion'] = self._criterion.value
        return values

    ##
    #   Getter Functions
    ##

    def get_command(self) -> str:
        return self._command

    def get_seed(self) -> int:
        return self._values['seed']

    def get_criterion(self) -> Criterion:
        return self._criterion

    def get_out(self) -> str:
        return self._values['out']

    def get_n_jobs(self) -> int:
        return self._values['n_jobs']

    def get_verbose(self) -> int:
        return self._values['verbose']

    def get_manifest(self) -> Optional[str]:
        return self._values['manifest']

    def get_params_dir(self) -> Optional[str]:
        return self._values['params']

    def get_truth_dir(self) -> Optional[str]:
        return self._values['truth']
