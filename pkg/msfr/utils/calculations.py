import warnings
from typing import *

import numpy as np
from scipy import linalg

from msfr.errors import SingularSystem, DegenerateInput, ShapeMismatch, ValidationError
from .config import SINGULAR_TOL, VARIMAX_TOL, VARIMAX_ANGLE_TOL, VARIMAX_MAX_SWEEPS


##
# Kronecker Product and Vec Operator
##

def kronecker(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Kronecker product of an m x n and an r x q matrix.
    :param a: The left matrix.
    :param b: The right matrix.
    :return: The mr x nq matrix whose (i, j) block is a[i, j] * b.
    """
    return np.kron(np.atleast_2d(np.asarray(a, dtype=float)), np.atleast_2d(np.asarray(b, dtype=float)))


def vec(a: np.ndarray) -> np.ndarray:
    """
    Stacks the columns of a matrix into a vector (column-major order).
    :param a: An m x n matrix.
    :return: The vector of length mn with element m*j + i equal to a[i, j].
    """
    return np.reshape(np.asarray(a, dtype=float), (-1,), order='F')


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """
    Inverse of vec.
    :param v: A vector of length rows * cols.
    :param rows: Row count of the result.
    :param cols: Column count of the result.
    :return: The rows x cols matrix.
    """
    v = np.asarray(v, dtype=float)
    if v.size != rows * cols:
        raise ShapeMismatch('cannot reshape a vector of length %d into %d x %d' % (v.size, rows, cols))
    return np.reshape(v, (rows, cols), order='F')


##
# Linear Solves
##

def solve_kron_system(coef: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solves the stacked linear system coef . z = rhs that arises from vec-ing a
    Sylvester-type matrix equation such as sum_s A_s X B_s = C.
    :param coef: A square, nonsingular coefficient matrix.
    :param rhs: The right-hand side vector (or matrix of right-hand sides).
    :return: The solution z.
    """
    coef = np.asarray(coef, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if coef.ndim != 2 or coef.shape[0] != coef.shape[1]:
        raise ShapeMismatch('coefficient matrix must be square, got %s' % (coef.shape,))
    if rhs.shape[0] != coef.shape[0]:
        raise ShapeMismatch('right-hand side has %d rows, system has %d' % (rhs.shape[0], coef.shape[0]))
    if coef.shape[0] == 0:
        return np.zeros(rhs.shape)
    if not np.all(np.isfinite(coef)):
        raise SingularSystem('coefficient matrix has non-finite entries')
    scale = np.max(np.abs(coef))
    if scale == 0:
        raise SingularSystem('coefficient matrix is zero')
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(coef, check_finite=False)
    pivot = np.min(np.abs(np.diag(lu)))
    if pivot < SINGULAR_TOL * scale:
        raise SingularSystem('relative pivot %.3e below %.0e' % (pivot / scale, SINGULAR_TOL))
    return linalg.lu_solve((lu, piv), rhs, check_finite=False)


def cholesky_factor(m: np.ndarray) -> Tuple[np.ndarray, bool]:
    """
    Cholesky factor of a symmetric positive definite matrix, in scipy's cho_factor form.
    Raises SingularSystem when the matrix is not numerically positive definite.
    :param m: A symmetric matrix.
    :return: The (factor, lower) pair accepted by scipy.linalg.cho_solve.
    """
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise SingularSystem('matrix has non-finite entries')
    scale = np.max(np.abs(np.diag(m))) if m.size else 1.0
    try:
        factor, lower = linalg.cho_factor(m, lower=True, check_finite=False)
    except linalg.LinAlgError as err:
        raise SingularSystem('matrix is not positive definite: %s' % err)
    pivots = np.diag(factor) ** 2
    if scale <= 0 or np.min(pivots) < SINGULAR_TOL * scale:
        raise SingularSystem('relative pivot %.3e below %.0e' % (np.min(pivots) / max(scale, 1e-300), SINGULAR_TOL))
    return factor, lower


def spd_solve(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solves m . z = rhs for a symmetric positive definite m.
    """
    rhs = np.asarray(rhs, dtype=float)
    if np.shape(m)[0] == 0:
        return np.zeros(rhs.shape)
    return linalg.cho_solve(cholesky_factor(m), rhs, check_finite=False)


def spd_inverse(m: np.ndarray) -> np.ndarray:
    """
    Inverse of a symmetric positive definite matrix, symmetrized.
    """
    n = np.shape(m)[0]
    inverse = spd_solve(m, np.eye(n))
    return (inverse + inverse.T) / 2


def spd_logdet(m: np.ndarray) -> float:
    """
    Log-determinant of a symmetric positive definite matrix via its Cholesky factor.
    """
    if np.shape(m)[0] == 0:
        return 0.0
    factor, _ = cholesky_factor(m)
    return float(2 * np.sum(np.log(np.diag(factor))))


##
# Woodbury Identity
##

def _check_low_rank(psi: np.ndarray, loadings: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    psi = np.asarray(psi, dtype=float)
    loadings = np.asarray(loadings, dtype=float)
    if loadings.ndim != 2 or loadings.shape[0] != psi.shape[0]:
        raise ShapeMismatch('loadings of shape %s do not match a diagonal of length %d' % (loadings.shape, psi.shape[0]))
    if np.any(psi <= 0) or not np.all(np.isfinite(psi)):
        raise ValidationError('diagonal entries must be positive and finite')
    return psi, loadings


def woodbury_inverse(psi: np.ndarray, loadings: np.ndarray) -> np.ndarray:
    """
    Inverse of L L^T + Psi through the k x k core (I_k + L^T Psi^-1 L), never inverting a p x p matrix.
    :param psi: The diagonal of Psi (length p, positive).
    :param loadings: L, a p x k matrix.
    :return: The symmetric p x p matrix (L L^T + Psi)^-1.
    """
    psi, loadings = _check_low_rank(psi, loadings)
    psi_inv = 1 / psi
    if loadings.shape[1] == 0:
        return np.diag(psi_inv)
    scaled = loadings * psi_inv[:, None]
    core = np.eye(loadings.shape[1]) + loadings.T @ scaled
    inverse = np.diag(psi_inv) - scaled @ spd_solve(core, scaled.T)
    return (inverse + inverse.T) / 2


def woodbury_gain(psi: np.ndarray, loadings: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Posterior operators of a low-rank-plus-diagonal Gaussian model x = L z + e, z ~ N(0, I), e ~ N(0, Psi).
    With G = (I_k + L^T Psi^-1 L)^-1, the gain L^T (L L^T + Psi)^-1 equals G L^T Psi^-1 and the
    posterior covariance Var[z | x] equals G.
    :param psi: The diagonal of Psi (length p, positive).
    :param loadings: L, a p x k matrix.
    :return: A tuple of the k x p gain and the k x k posterior covariance.
    """
    psi, loadings = _check_low_rank(psi, loadings)
    p, k = loadings.shape
    if k == 0:
        return np.zeros((0, p)), np.zeros((0, 0))
    scaled = loadings / psi[:, None]
    core_inv = spd_inverse(np.eye(k) + loadings.T @ scaled)
    return core_inv @ scaled.T, core_inv


##
# Rotation
##

def _kaiser_normalize(loadings: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    norms = np.sqrt(np.sum(loadings ** 2, axis=1))
    norms = np.where(norms > 0, norms, 1.0)
    return loadings / norms[:, None], norms


def varimax_criterion(loadings: np.ndarray, normalize: bool = True) -> float:
    """
    The varimax criterion: summed over columns, the variance of the squared loadings.
    :param loadings: A p x k loading matrix.
    :param normalize: Evaluate on Kaiser-normalized (unit row norm) loadings.
    :return: The criterion value.
    """
    loadings = np.asarray(loadings, dtype=float)
    if normalize:
        loadings = _kaiser_normalize(loadings)[0]
    squared = loadings ** 2
    return float(np.sum(np.mean(squared ** 2, axis=0) - np.mean(squared, axis=0) ** 2))


def _planar_angle(x: np.ndarray, y: np.ndarray) -> float:
    # Kaiser's closed-form optimum for rotating the column pair (x, y)
    d = x.shape[0]
    u = x * x - y * y
    v = 2 * x * y
    usum, vsum = u.sum(), v.sum()
    numer = 2 * (u @ v) - 2 * usum * vsum / d
    denom = (u @ u) - (v @ v) - (usum ** 2 - vsum ** 2) / d
    scale = (x @ x + y @ y) ** 2
    if np.hypot(numer, denom) <= 1e-14 * scale:
        return 0.0
    return float(np.arctan2(numer, denom) / 4)


def varimax(loadings: np.ndarray, normalize: bool = True, tol: float = VARIMAX_TOL,
            angle_tol: float = VARIMAX_ANGLE_TOL, max_sweeps: int = VARIMAX_MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """
    Varimax rotation by cyclic sweeps of planar rotations over every column pair.
    Each planar step maximizes the criterion exactly, so the criterion never decreases.
    :param loadings: A p x k loading matrix.
    :param normalize: Rotate the Kaiser-normalized loadings (the rotation is then applied to the raw ones).
    :param tol: Stop once a sweep improves the criterion by less than this...
    :param angle_tol: ...and its largest planar angle is below this.
    :param max_sweeps: Hard cap on sweeps.
    :return: A tuple of (rotated loadings, orthogonal k x k rotation) with rotated = loadings . rotation.
    """
    loadings = np.asarray(loadings, dtype=float)
    k = loadings.shape[1]
    if k < 2:
        return loadings.copy(), np.eye(k)

    work = _kaiser_normalize(loadings)[0] if normalize else loadings.copy()
    rotation = np.eye(k)
    criterion = varimax_criterion(work, normalize=False)
    for _ in range(max_sweeps):
        largest_angle = 0.0
        for i in range(k - 1):
            for j in range(i + 1, k):
                theta = _planar_angle(work[:, i], work[:, j])
                if theta == 0.0:
                    continue
                c, s = np.cos(theta), np.sin(theta)
                planar = np.array([[c, -s], [s, c]])
                work[:, [i, j]] = work[:, [i, j]] @ planar
                rotation[:, [i, j]] = rotation[:, [i, j]] @ planar
                largest_angle = max(largest_angle, abs(theta))
        updated = varimax_criterion(work, normalize=False)
        improvement = updated - criterion
        criterion = updated
        if improvement < tol and largest_angle < angle_tol:
            break
    return loadings @ rotation, rotation


##
# Similarity
##

def rv_similarity(sa: np.ndarray, sb: np.ndarray) -> float:
    """
    RV coefficient between two symmetric p x p matrices: tr(SA SB) / sqrt(tr(SA^2) tr(SB^2)).
    :param sa: First symmetric matrix, e.g. a covariance.
    :param sb: Second symmetric matrix.
    :return: A value in [0, 1] for positive semidefinite inputs.
    """
    sa = np.asarray(sa, dtype=float)
    sb = np.asarray(sb, dtype=float)
    if sa.shape != sb.shape:
        raise ShapeMismatch('cannot compare matrices of shapes %s and %s' % (sa.shape, sb.shape))
    norm_a = np.linalg.norm(sa, 'fro')
    norm_b = np.linalg.norm(sb, 'fro')
    if norm_a == 0 or norm_b == 0:
        raise DegenerateInput('RV coefficient is undefined for a zero matrix')
    value = np.sum(sa * sb) / (norm_a * norm_b)
    return float(min(max(value, 0.0), 1.0))


def rv_coefficient(a: np.ndarray, b: np.ndarray) -> float:
    """
    RV coefficient of two loading-like matrices, computed on their cross-products A A^T and B B^T,
    so it ignores column rotation, permutation and sign.
    :param a: A p x k1 matrix.
    :param b: A p x k2 matrix.
    :return: The RV coefficient in [0, 1].
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatch('RV coefficient needs equal row counts, got %d and %d' % (a.shape[0], b.shape[0]))
    return rv_similarity(a @ a.T, b @ b.T)
