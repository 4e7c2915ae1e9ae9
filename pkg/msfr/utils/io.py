import json
import os
import platform
import sys
from typing import *

import joblib
import numpy as np
import pandas as pd
import scipy
import sklearn

import msfr
from msfr.classes import Params
from msfr.errors import ParseError, ShapeMismatch
from .config import PARAM_FLOAT_FORMAT, SUMMARY_FLOAT_FORMAT


##
# CSV Matrices
##

def read_table(path: str, index_col: Optional[int] = None) -> pd.DataFrame:
    """
    Reads a numeric CSV file with a header row.
    :param path: The CSV file.
    :param index_col: Column holding row labels, if any.
    :return: The DataFrame of floats. Empty cells become NaN.
    """
    try:
        frame = pd.read_csv(path, index_col=index_col, float_precision='round_trip')
    except FileNotFoundError:
        raise ParseError('file not found', path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as err:
        raise ParseError(str(err), path)

    numeric = frame.apply(pd.to_numeric, errors='coerce')
    bad = numeric.isna() & frame.notna()
    if bad.values.any():
        row, col = np.argwhere(bad.values)[0]
        # Line 1 is the header
        raise ParseError('non-numeric value %r in column %r' % (frame.iat[row, col], frame.columns[col]), path, row + 2)
    return numeric.astype(float)


def read_matrix(path: str) -> np.ndarray:
    """
    Reads a subjects-in-rows CSV and returns it variables-in-rows.
    """
    return read_table(path).values.T.copy()


def write_table(frame: pd.DataFrame, path: str, float_format: str = SUMMARY_FLOAT_FORMAT, index: bool = False):
    frame.to_csv(path, index=index, float_format=float_format, lineterminator='\n', encoding='utf-8')


def write_matrix(matrix: np.ndarray, path: str, columns: Sequence[str], rows: Optional[Sequence[str]] = None,
                 float_format: str = PARAM_FLOAT_FORMAT):
    """
    Writes a matrix as CSV with a header row, optionally labelling rows in a leading column.
    """
    matrix = np.asarray(matrix, dtype=float)
    frame = pd.DataFrame(matrix, columns=list(columns))
    if rows is not None:
        frame.insert(0, 'variable', list(rows))
    write_table(frame, path, float_format)


def variable_names(p: int, prefix: str = 'x') -> List[str]:
    return ['%s%d' % (prefix, j + 1) for j in range(p)]


##
# Parameter Directories
##

def write_params(params: Params, directory: str, study_ids: Sequence[str]) -> str:
    """
    Writes parameters as beta.csv, phi.csv, lambda_<id>.csv, psi.csv and params.json (shapes), all with
    17 significant digits so they reload exactly. Empty blocks get no CSV.
    :param params: The Params.
    :param directory: The output directory, created if missing.
    :param study_ids: Labels of the studies.
    :return: The directory.
    """
    os.makedirs(directory, exist_ok=True)
    rows = variable_names(params.get_p())
    if params.get_p_b() > 0:
        write_matrix(params.get_beta(), os.path.join(directory, 'beta.csv'), variable_names(params.get_p_b(), 'b'), rows)
    if params.get_q() > 0:
        write_matrix(params.get_phi(), os.path.join(directory, 'phi.csv'), variable_names(params.get_q(), 'F'), rows)
    for study_id, lam in zip(study_ids, params.get_lambdas()):
        if lam.shape[1] > 0:
            write_matrix(lam, os.path.join(directory, 'lambda_%s.csv' % study_id), variable_names(lam.shape[1], 'L'), rows)
    write_matrix(np.column_stack(params.get_psis()), os.path.join(directory, 'psi.csv'), list(study_ids), rows)
    write_json({'p': params.get_p(), 'p_b': params.get_p_b(), 'q': params.get_q(), 'q_s': list(params.get_qs()),
                'study_ids': list(study_ids)}, os.path.join(directory, 'params.json'))
    return directory


def read_params(directory: str) -> Tuple[Params, List[str]]:
    """
    Reads a directory written by write_params.
    :param directory: The parameter directory.
    :return: A tuple of (Params, study ids).
    """
    shapes = read_json(os.path.join(directory, 'params.json'))
    try:
        p, p_b, q, qs, ids = shapes['p'], shapes['p_b'], shapes['q'], shapes['q_s'], shapes['study_ids']
    except KeyError as err:
        raise ParseError('missing key %s' % err, os.path.join(directory, 'params.json'))

    def block(name: str, cols: int) -> np.ndarray:
        if cols == 0:
            return np.zeros((p, 0))
        values = read_table(os.path.join(directory, name), index_col=0).values
        if values.shape != (p, cols):
            raise ShapeMismatch('%s has shape %s, expected (%d, %d)' % (name, values.shape, p, cols))
        return values

    psi = block('psi.csv', len(ids))
    lambdas = [block('lambda_%s.csv' % study_id, q_s) for study_id, q_s in zip(ids, qs)]
    return Params(block('beta.csv', p_b), block('phi.csv', q), lambdas, list(psi.T)), list(ids)


##
# JSON and Run Records
##

def _default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def write_json(content: Any, path: str):
    with open(path, 'w', encoding='utf-8', newline='\n') as handle:
        json.dump(content, handle, indent=2, default=_default)
        handle.write('\n')


def read_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise ParseError('file not found', path)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, path, err.lineno)


def library_versions() -> Dict[str, str]:
    return {'msfr': msfr.__version__, 'python': sys.version.split()[0], 'numpy': np.__version__,
            'scipy': scipy.__version__, 'pandas': pd.__version__, 'scikit-learn': sklearn.__version__,
            'joblib': joblib.__version__, 'platform': platform.platform()}


def write_run_record(directory: str, command: str, config: dict, seed: int, started: float, finished: float,
                     outputs: Sequence[str] = ()) -> str:
    """
    Writes run.json: the echoed configuration, seed, library versions and wall time of a command.
    :return: The path of the record.
    """
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, 'run.json')
    write_json({'command': command, 'seed': seed, 'config': config, 'versions': library_versions(),
                'started': started, 'finished': finished, 'wall_time_seconds': finished - started,
                'outputs': sorted(outputs)}, path)
    return path
