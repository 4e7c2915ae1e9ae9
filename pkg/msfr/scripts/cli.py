import argparse
import json
import logging
import os
import sys
import time
from typing import *

import pandas as pd

from msfr.classes import MethodType, ScoreMethod, ModelDims, Criterion
from msfr.classes.run_config import RunConfig
from msfr.data import generate_truth, generate_data, write_multistudy, load_multistudy
from msfr.errors import MSFRError, ValidationError
from msfr.evaluate import cv_mse, run_benchmark, compare_to_truth
from msfr.methods import get_method
from msfr.scores import compute_scores, score_correlation
from msfr.utils.io import write_params, read_params, write_table, write_matrix, write_json, write_run_record, \
    variable_names
from msfr.utils import PARAM_FLOAT_FORMAT

logger = logging.getLogger(__name__)

EXIT_CODES = {'validation': 2, 'numerical': 3, 'selection': 4, 'io': 5}


##
# Commands
##

def _simulate(config: RunConfig) -> List[str]:
    spec = config.get_scenario()
    truth = generate_truth(spec, spec.get_seed())
    data = generate_data(truth, spec, spec.get_seed())
    manifest = write_multistudy(data, os.path.join(config.get_out(), 'data'))
    truth_dir = write_params(truth, os.path.join(config.get_out(), 'truth'), data.get_ids())
    write_json(spec.to_dict(), os.path.join(config.get_out(), 'scenario.json'))
    print('wrote %d studies to %s' % (len(data), manifest))
    return [manifest, truth_dir, os.path.join(config.get_out(), 'scenario.json')]


def _write_fit(result, params, ids: Sequence[str], out: str) -> List[str]:
    params_dir = write_params(params, os.path.join(out, 'params'), ids)
    raw_dir = write_params(result.get_raw_params(), os.path.join(out, 'raw_params'), ids)

    traces = pd.DataFrame({'observed_loglik': pd.Series(result.get_loglik_trace(), dtype=float),
                           'complete_loglik': pd.Series(result.get_complete_trace(), dtype=float)})
    traces.index.name = 'iteration'
    traces_path = os.path.join(out, 'traces.csv')
    write_table(traces.reset_index(), traces_path, PARAM_FLOAT_FORMAT)

    explained_path = os.path.join(out, 'explained_variance.csv')
    write_table(pd.DataFrame(result.get_explained_variance().to_rows()), explained_path)

    common_path = os.path.join(out, 'common_covariance.csv')
    names = variable_names(params.get_p())
    write_matrix(params.get_common_covariance(), common_path, names, names)
    return [params_dir, raw_dir, traces_path, explained_path, common_path]


def _fit(config: RunConfig) -> List[str]:
    data = load_multistudy(config.require('manifest'))
    dims = config.get_dims()
    if dims is None:
        raise ValidationError('fit needs --q and --qs')
    method = get_method(config.get_method())
    result, params = method.fit_at(data, dims[0], dims[1], config.get_convergence(), config.get_verbose())

    outputs = _write_fit(result, params, data.get_ids(), config.get_out())
    summary = result.summary()
    summary['method'] = method.method_type.value
    if config.get_truth_dir() is not None:
        truth, _ = read_params(config.get_truth_dir())
        summary['truth_comparison'] = compare_to_truth(params, truth)
        for key, value in summary['truth_comparison'].items():
            print('%s\t%.6f' % (key, value))
    summary_path = os.path.join(config.get_out(), 'summary.json')
    write_json(summary, summary_path)
    print('loglik %.6f after %d iterations (converged: %s)'
          % (result.get_observed_loglik(), result.get_n_iter(), result.is_converged()))
    return outputs + [summary_path]


def _select(config: RunConfig) -> List[str]:
    data = load_multistudy(config.require('manifest'))
    method = get_method(config.get_method())
    method_fit = method.fit(data, config.get_grid(), config.get_convergence(), config.get_seed(),
                            config.get_n_jobs(), config.get_verbose())
    report_path = os.path.join(config.get_out(), 'selection.csv')
    os.makedirs(config.get_out(), exist_ok=True)
    write_table(method_fit.get_report().to_frame(), report_path)

    chosen = method_fit.get_chosen()
    outputs = _write_fit(chosen.get_fit(), method_fit.get_params(), data.get_ids(), config.get_out())
    summary = chosen.get_fit().summary()
    summary.update({'method': method.method_type.value, 'criterion': config.get_criterion().value,
                    'chosen': {c.value: [method_fit.get_chosen(c).get_q(), method_fit.get_chosen(c).get_q_s()]
                               for c in Criterion}})
    summary_path = os.path.join(config.get_out(), 'summary.json')
    write_json(summary, summary_path)
    print('chosen q=%d, q_s=%d by %s' % (chosen.get_q(), chosen.get_q_s(), config.get_criterion().value))
    return [report_path, summary_path] + outputs


def _score(config: RunConfig) -> List[str]:
    data = load_multistudy(config.require('manifest'))
    params, ids = read_params(config.require('params'))
    if params.get_p_b() == 0 and data.get_p_b() > 0:
        # Parameters fitted without covariates score the raw observations
        data = data.without_covariates()
    os.makedirs(config.get_out(), exist_ok=True)

    outputs, matrices = [], []
    for score_method in config.get_score_methods([ScoreMethod.BARTLETT, ScoreMethod.THURSTONE]):
        scores = compute_scores(data, params, score_method)
        matrices.append(scores)
        for s, study_id in enumerate(data.get_ids()):
            path = os.path.join(config.get_out(), 'scores_%s_%s.csv' % (score_method.value, study_id))
            write_table(scores.to_frame(s), path, PARAM_FLOAT_FORMAT)
            outputs.append(path)

    if len(matrices) == 2 and params.get_q() > 0:
        correlation = score_correlation(matrices[0], matrices[1])
        path = os.path.join(config.get_out(), 'score_correlation.csv')
        write_table(pd.DataFrame({'factor': ['F%d' % (j + 1) for j in range(len(correlation))],
                                  'correlation': correlation}), path)
        outputs.append(path)
        print('score correlation (%s vs %s): %s' % (matrices[0].get_method().value, matrices[1].get_method().value,
                                                   ', '.join('%.4f' % c for c in correlation)))
    return outputs


def _cv(config: RunConfig) -> List[str]:
    data = load_multistudy(config.require('manifest'))
    dims = config.get_dims()
    if dims is None:
        # Dimensions are chosen once on the full data
        chosen = get_method(MethodType.MSFR).fit(data, config.get_grid(), config.get_convergence(),
                                                 config.get_seed(), config.get_n_jobs()).get_chosen()
        dims = chosen.get_q(), chosen.get_q_s()
        logger.info('cross-validating at q=%d, q_s=%d', *dims)
    report = cv_mse(data, ModelDims.from_data(data, dims[0], dims[1]), config.get_convergence(),
                    config.get_cv_spec(), config.get_methods([MethodType.MSFR, MethodType.MSFA]),
                    config.get_n_jobs())

    os.makedirs(config.get_out(), exist_ok=True)
    outputs = [os.path.join(config.get_out(), name) for name in ('cv_mse.csv', 'cv_mse_subject.csv', 'cv_folds.csv')]
    write_table(report.to_frame(), outputs[0], index=True)
    write_table(report.to_frame(per_subject=True), outputs[1], index=True)
    write_table(report.to_long_frame(), outputs[2])
    print(report.to_frame().to_string())
    return outputs


def _benchmark(config: RunConfig) -> List[str]:
    spec = config.get_scenario()
    report = run_benchmark(spec, config.get_methods(list(MethodType)), config.get_grid(spec.default_grid()),
                           config.get_convergence(), config.get_n_jobs())

    out = config.get_out()
    os.makedirs(out, exist_ok=True)
    tables = {'benchmark_replications.csv': report.to_frame(), 'benchmark_summary.csv': report.summary(),
              'benchmark_long.csv': report.long_frame(), 'benchmark_failures.csv': pd.DataFrame(report.get_failures())}
    outputs = []
    for name, frame in tables.items():
        outputs.append(os.path.join(out, name))
        write_table(frame, outputs[-1])

    if report.get_truth() is not None:
        truth = report.get_truth()
        names = variable_names(truth.get_p())
        matrices = {'truth_beta.csv': truth.get_beta(), 'truth_sigma_phi.csv': truth.get_common_covariance()}
        for (method, criterion), averages in report.get_averages().items():
            matrices['average_beta_%s_%s.csv' % (method, criterion)] = averages['beta']
            matrices['average_sigma_phi_%s_%s.csv' % (method, criterion)] = averages['sigma_phi']
        for name, matrix in matrices.items():
            if matrix.shape[1] == 0:
                continue
            columns = names if name.find('sigma_phi') >= 0 else variable_names(matrix.shape[1], 'b')
            outputs.append(os.path.join(out, name))
            write_matrix(matrix, outputs[-1], columns, names)

    summary = report.summary()
    if not summary.empty:
        print(summary[summary['criterion'] == config.get_criterion().value].to_string(index=False))
    return outputs


COMMANDS = {
    'simulate': _simulate,
    'fit': _fit,
    'select': _select,
    'score': _score,
    'cv': _cv,
    'benchmark': _benchmark,
}


##
# Dispatch
##

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON file of settings; flags override it')
    common.add_argument('--seed', type=int)
    common.add_argument('--criterion', type=str.lower, choices=[c.value for c in Criterion])
    common.add_argument('--q-grid', help='common factor counts, e.g. 1,2,3 or 1-5')
    common.add_argument('--qs-grid', help='study-specific factor counts, e.g. 1,2')
    common.add_argument('--q', type=int, help='fixed number of common factors')
    common.add_argument('--qs', help='fixed study-specific factors, one value or one per study')
    common.add_argument('--eps', type=float, help='stopping threshold (default 1e-7)')
    common.add_argument('--max-iter', type=int, help='iteration cap (default 50000)')
    common.add_argument('--reps', type=int, help='benchmark replications')
    common.add_argument('--scenario', choices=['1', '2', '3'])
    common.add_argument('--scale', type=float, help='multiplier of every scenario sample size')
    common.add_argument('--fixed-truth', action='store_true', default=None,
                        help='draw the true parameters once for all replications')
    common.add_argument('--method', help='msfr, msfa, fr or msfa-lr; comma-separated for cv and benchmark')
    common.add_argument('--score', help='bartlett or thurstone; comma-separated for both')
    common.add_argument('--folds', type=int)
    common.add_argument('--manifest', help='study manifest (JSON)')
    common.add_argument('--params', help='parameter directory written by fit or select')
    common.add_argument('--truth', help='true parameter directory written by simulate')
    common.add_argument('--n-jobs', type=int)
    common.add_argument('--out', help='output directory')
    common.add_argument('-v', '--verbose', action='count')

    parser = argparse.ArgumentParser(prog='msfr', description='Multi-study factor regression')
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('simulate', parents=[common], help='draw a synthetic dataset from a scenario')
    commands.add_parser('fit', parents=[common], help='fit at fixed --q and --qs')
    commands.add_parser('select', parents=[common], help='choose dimensions over a grid')
    commands.add_parser('score', parents=[common], help='estimate factor scores')
    commands.add_parser('cv', parents=[common], help='cross-validated prediction error')
    commands.add_parser('benchmark', parents=[common], help='replicated simulation study')
    return parser


def _report_error(err: Exception, category: str):
    sys.stderr.write(json.dumps({'error': category, 'type': type(err).__name__, 'message': str(err)}) + '\n')


def cli_dispatch(argv: Sequence[str]) -> int:
    """
    Runs one subcommand.
    :param argv: The arguments, without the program name.
    :return: The exit status: 0 on success, 2 validation, 3 numerical, 4 selection, 5 io, 1 otherwise.
    """
    args = build_parser().parse_args(list(argv))
    logging.basicConfig(level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose or 0, 2)],
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')

    flags = {k: v for k, v in vars(args).items() if k not in ('command', 'config')}
    started = time.time()
    try:
        config = RunConfig.from_sources(args.command, flags, args.config)
        outputs = COMMANDS[args.command](config)
        write_run_record(config.get_out(), args.command, config.to_dict(), config.get_seed(), started, time.time(),
                         outputs)
    except MSFRError as err:
        _report_error(err, err.category)
        return EXIT_CODES.get(err.category, 1)
    except Exception as err:
        logger.debug('unexpected failure', exc_info=True)
        _report_error(err, 'internal')
        return 1
    return 0


def main():
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == '__main__':
    main()
