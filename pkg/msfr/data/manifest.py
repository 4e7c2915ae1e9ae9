import logging
import os
from typing import *

from msfr.classes import MultiStudyData, StudyDataset, validate_data
from msfr.errors import ParseError
from msfr.utils.io import read_json, read_matrix, write_matrix, write_json, variable_names
from msfr.utils import SUMMARY_FLOAT_FORMAT, PARAM_FLOAT_FORMAT

logger = logging.getLogger(__name__)


def load_multistudy(manifest_path: str) -> MultiStudyData:
    """
    Loads the studies listed in a JSON manifest of the form
    {"studies": [{"id": "...", "data": "a.csv", "covariates": "a_cov.csv"}, ...]}.
    Paths are relative to the manifest; "covariates" is optional. CSVs hold subjects in rows and variables
    in columns under a header row.
    :param manifest_path: The manifest file.
    :return: The validated MultiStudyData.
    """
    manifest = read_json(manifest_path)
    entries = manifest.get('studies') if isinstance(manifest, dict) else None
    if not isinstance(entries, list) or len(entries) == 0:
        raise ParseError("manifest needs a non-empty 'studies' list", manifest_path)

    root = os.path.dirname(os.path.abspath(manifest_path))
    studies = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or 'id' not in entry or 'data' not in entry:
            raise ParseError("study entry %d needs 'id' and 'data'" % (i + 1), manifest_path)
        x = read_matrix(os.path.join(root, entry['data']))
        b = read_matrix(os.path.join(root, entry['covariates'])) if entry.get('covariates') else None
        studies.append(StudyDataset(entry['id'], x, b))

    data = MultiStudyData(studies)
    validate_data(data)
    logger.info('loaded %s from %s', data, manifest_path)
    return data


def write_multistudy(data: MultiStudyData, directory: str, exact: bool = True) -> str:
    """
    Writes every study as <id>_data.csv (and <id>_covariates.csv) plus a manifest.json listing them.
    :param data: The MultiStudyData.
    :param directory: The output directory, created if missing.
    :param exact: Write 17 significant digits; 6 otherwise.
    :return: The path of the manifest.
    """
    os.makedirs(directory, exist_ok=True)
    float_format = PARAM_FLOAT_FORMAT if exact else SUMMARY_FLOAT_FORMAT
    entries = []
    for study in data:
        entry = {'id': study.get_id(), 'data': '%s_data.csv' % study.get_id()}
        write_matrix(study.get_x().T, os.path.join(directory, entry['data']), variable_names(study.get_p()),
                     float_format=float_format)
        if study.get_p_b() > 0:
            entry['covariates'] = '%s_covariates.csv' % study.get_id()
            write_matrix(study.get_b().T, os.path.join(directory, entry['covariates']),
                         variable_names(study.get_p_b(), 'b'), float_format=float_format)
        entries.append(entry)
    path = os.path.join(directory, 'manifest.json')
    write_json({'studies': entries}, path)
    return path
