from typing import *

import numpy as np

from msfr.classes import MultiStudyData
from msfr.errors import ShapeMismatch
from msfr.utils import kronecker, vec, unvec, solve_kron_system, spd_solve, PSI_FLOOR
from .estep import EStepMoments


def _row_dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # diag(a b^T)
    return np.sum(a * b, axis=1)


def expected_residual_diagonal(moments: EStepMoments, phi: np.ndarray, lambda_s: np.ndarray) -> np.ndarray:
    """
    Diagonal of the averaged E[(x - phi f - lambda_s l)(x - phi f - lambda_s l)^T | x].
    """
    phi_ff = phi @ moments.get_e_ff()
    lam_ll = lambda_s @ moments.get_e_ll()
    phi_fl = phi @ moments.get_e_fl()
    return np.diag(moments.get_c_xx()) + _row_dot(phi_ff, phi) + _row_dot(lam_ll, lambda_s) \
        - 2 * _row_dot(moments.get_e_xf(), phi) - 2 * _row_dot(moments.get_e_xl(), lambda_s) \
        + 2 * _row_dot(phi_fl, lambda_s)


def cm_psi(moments: EStepMoments, phi: np.ndarray, lambda_s: np.ndarray, floor: float = PSI_FLOOR) -> np.ndarray:
    """
    CM1: the idiosyncratic variances of one study.
    :param moments: The study's E-step moments.
    :param phi: The p x q common loadings.
    :param lambda_s: The p x q_s study-specific loadings.
    :param floor: Lower bound applied to every entry.
    :return: The length-p diagonal.
    """
    return np.maximum(expected_residual_diagonal(moments, phi, lambda_s), floor)


def cm_phi(moments: Sequence[EStepMoments], lambdas: Sequence[np.ndarray], psis: Sequence[np.ndarray],
           ns: Sequence[int]) -> np.ndarray:
    """
    CM2: the common loadings, solving sum_s n_s Psi_s^-1 phi E_ff = sum_s n_s Psi_s^-1 (E_xf - lambda_s E_fl^T)
    through its vec form sum_s (E_ff^T kron n_s Psi_s^-1) vec(phi) = vec(rhs).
    :param moments: E-step moments of every study.
    :param lambdas: The study-specific loadings, freshest values.
    :param psis: The idiosyncratic variances, freshest values.
    :param ns: Study sizes.
    :return: The p x q common loadings.
    """
    if not len(moments) == len(lambdas) == len(psis) == len(ns):
        raise ShapeMismatch('cm_phi needs one moment set, loading, diagonal and size per study')
    p = moments[0].get_c_xx().shape[0]
    q = moments[0].get_e_ff().shape[0]
    if q == 0:
        return np.zeros((p, 0))

    coef = np.zeros((p * q, p * q))
    rhs = np.zeros((p, q))
    for m, lam, psi, n in zip(moments, lambdas, psis, ns):
        precision = n / np.asarray(psi, dtype=float)
        coef += kronecker(m.get_e_ff().T, np.diag(precision))
        rhs += precision[:, None] * (m.get_e_xf() - lam @ m.get_e_fl().T)
    return unvec(solve_kron_system(coef, vec(rhs)), p, q)


def cm_lambda(moments: EStepMoments, phi: np.ndarray) -> np.ndarray:
    """
    CM3: the study-specific loadings (E_xl - phi E_fl) E_ll^-1.
    """
    target = moments.get_e_xl() - phi @ moments.get_e_fl()
    if target.shape[1] == 0:
        return target
    return spd_solve(moments.get_e_ll(), target.T).T


def cm_beta(data: MultiStudyData, phi: np.ndarray, lambdas: Sequence[np.ndarray], e_f: Sequence[np.ndarray],
            e_l: Sequence[np.ndarray], psis: Optional[Sequence[np.ndarray]] = None) -> np.ndarray:
    """
    CM4: the covariate effects, regressing x - phi E[f|x] - lambda_s E[l|x] on b.
    Without psis this is the pooled least-squares formula
    beta = [sum r b^T][sum b b^T]^-1. With psis each response row j is solved with study weights 1 / psi_js,
    the exact maximizer of the expected complete log-likelihood when studies differ in Psi.
    :param data: The MultiStudyData.
    :param phi: The p x q common loadings.
    :param lambdas: The p x q_s study-specific loadings.
    :param e_f: Per study, the q x n_s posterior means of the common factors.
    :param e_l: Per study, the q_s x n_s posterior means of the study-specific factors.
    :param psis: Optional per-study idiosyncratic variances for the weighted update.
    :return: The p x p_b covariate effects.
    """
    p, p_b = data.get_p(), data.get_p_b()
    if p_b == 0:
        return np.zeros((p, 0))

    cross = []
    for study, lam, f, l in zip(data, lambdas, e_f, e_l):
        residual = study.get_x() - phi @ f - lam @ l
        cross.append(residual @ study.get_b().T)

    if psis is None:
        total_bb = sum(study.get_sbb() for study in data)
        return spd_solve(total_bb, sum(cross).T).T

    beta = np.zeros((p, p_b))
    weights = [1 / np.asarray(psi, dtype=float) for psi in psis]
    for j in range(p):
        total_bb = sum(w[j] * study.get_sbb() for w, study in zip(weights, data))
        total_rb = sum(w[j] * c[j] for w, c in zip(weights, cross))
        beta[j] = spd_solve(total_bb, total_rb)
    return beta
