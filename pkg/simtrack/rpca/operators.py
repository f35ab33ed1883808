# -*- coding: utf-8 -*-
"""Proximal operators and the closed-form block updates of the three-term
decomposition ``X = L + S + E``::

    min ||L||_* + tau * ||S||_1 + lam * ||E||_F^2   s.t.  X = L + S + E

"""
import logging

import numpy as np
from scipy import linalg

from ..exceptions import SvdFailure


logger = logging.getLogger(__name__)


def soft_threshold(M: np.ndarray, alpha: float) -> np.ndarray:
    """Elementwise shrinkage ``sign(M) * max(|M| - alpha, 0)``.

    :Example:

        >>> soft_threshold(np.array([[3.0, -1.0]]), 1.0).tolist()
        [[2.0, 0.0]]

    """
    M = np.asarray(M, dtype=float)
    return np.sign(M) * np.maximum(np.abs(M) - alpha, 0.0)


def _svd(M: np.ndarray):
    try:
        return linalg.svd(M, full_matrices=False, lapack_driver='gesdd')
    except linalg.LinAlgError:
        logger.debug('gesdd did not converge, retrying with gesvd')
    try:
        return linalg.svd(M, full_matrices=False, lapack_driver='gesvd')
    except linalg.LinAlgError as exc:
        raise SvdFailure('SVD did not converge for a {}x{} matrix'.format(
            *M.shape)) from exc


def svt(M: np.ndarray, tau: float) -> np.ndarray:
    """Singular value soft-thresholding ``U diag((s - tau)+) V^T``.

    :raises SvdFailure:  If neither LAPACK driver converges.

    """
    M = np.asarray(M, dtype=float)
    U, s, Vt = _svd(M)
    shrunk = np.maximum(s - tau, 0.0)
    keep = shrunk > 0
    if not np.any(keep):
        return np.zeros_like(M)
    return (U[:, keep] * shrunk[keep]) @ Vt[keep]


def nuclear_norm(M: np.ndarray) -> float:
    return float(np.sum(_svd(np.asarray(M, dtype=float))[1]))


def rpca_objective(L: np.ndarray, S: np.ndarray, E: np.ndarray, tau: float,
                   lam: float) -> float:
    """``||L||_* + tau * ||S||_1 + lam * ||E||_F^2``."""
    return (nuclear_norm(L) + tau * float(np.sum(np.abs(S))) +
            lam * float(np.sum(np.square(E))))


def augmented_lagrangian(X, L, S, E, Y, beta: float, tau: float,
                         lam: float) -> float:
    """The augmented lagrangian minimized block by block::

        obj(L, S, E) + <Y, X - L - S - E> + beta / 2 * ||X - L - S - E||_F^2

    """
    R = X - L - S - E
    return (rpca_objective(L, S, E, tau, lam) + float(np.sum(Y * R)) +
            0.5 * beta * float(np.sum(np.square(R))))


def update_low_rank(X, S, E, Y, beta: float) -> np.ndarray:
    return svt(X - E - S + Y / beta, 1.0 / beta)


def update_sparse(X, L, E, Y, beta: float, tau: float) -> np.ndarray:
    return soft_threshold(X - E + Y / beta - L, tau / beta)


def update_error(X, L, S, Y, beta: float, lam: float) -> np.ndarray:
    return (X - L - S + Y / beta) / (1.0 + 2.0 * lam / beta)
