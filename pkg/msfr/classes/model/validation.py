import numpy as np

from msfr.errors import ShapeMismatch, RankConstraintViolated, NonFiniteData, ValidationError
from msfr.classes.study import MultiStudyData
from .model_dims import ModelDims


def _check_finite(study_id: str, matrix: np.ndarray, name: str):
    bad = np.argwhere(~np.isfinite(matrix))
    if bad.size:
        row, col = bad[0]
        raise NonFiniteData(study_id, int(row), int(col), name)


def validate_data(data: MultiStudyData):
    """
    Checks the data-only invariants: finite entries and enough subjects to estimate beta.
    :param data: The MultiStudyData.
    """
    for study in data:
        _check_finite(study.get_id(), study.get_x(), 'X')
        _check_finite(study.get_id(), study.get_b(), 'B')
    if data.get_p_b() > 0 and data.get_n() < data.get_p_b() + 1:
        raise ValidationError('%d subjects cannot identify %d covariate effects' % (data.get_n(), data.get_p_b()))


def validate_dims(dims: ModelDims):
    """
    Checks the full-column-rank constraints q + sum(q_s) <= p and q + q_s < p.
    """
    p, q = dims.get_p(), dims.get_q()
    if dims.get_total_factors() > p:
        raise RankConstraintViolated('q + sum(q_s) = %d exceeds p = %d' % (dims.get_total_factors(), p))
    for s, q_s in enumerate(dims.get_qs()):
        if q + q_s >= p:
            raise RankConstraintViolated('q + q_s = %d for study %d is not below p = %d' % (q + q_s, s + 1, p))


def validate(data: MultiStudyData, dims: ModelDims) -> bool:
    """
    Confirms that data and dims satisfy every model invariant. Side-effect free.
    :param data: The MultiStudyData.
    :param dims: The ModelDims.
    :return: True, or raises a ValidationError naming the violated constraint.
    """
    if dims.get_n_studies() != data.get_n_studies():
        raise ShapeMismatch('model has %d studies, data has %d' % (dims.get_n_studies(), data.get_n_studies()))
    if dims.get_p() != data.get_p() or dims.get_p_b() != data.get_p_b():
        raise ShapeMismatch('model has (p, p_b) = (%d, %d), data has (%d, %d)'
                            % (dims.get_p(), dims.get_p_b(), data.get_p(), data.get_p_b()))
    for s, study in enumerate(data):
        if dims.get_ns()[s] != study.get_n():
            raise ShapeMismatch("model expects %d subjects in study '%s', data has %d"
                                % (dims.get_ns()[s], study.get_id(), study.get_n()))
    validate_dims(dims)
    validate_data(data)
    return True
