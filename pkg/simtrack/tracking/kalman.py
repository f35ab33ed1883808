# -*- coding: utf-8 -*-
"""Constant velocity Kalman filter in the pixel plane.

The state is ``(u, v, udot, vdot)``; measurements are ``(u, v)``.

"""
import logging
from typing import Tuple

import numpy as np
from scipy import linalg


logger = logging.getLogger(__name__)

JITTER = 1e-9

H = np.array([[1.0, 0.0, 0.0, 0.0],
              [0.0, 1.0, 0.0, 0.0]])
H.setflags(write=False)


def cv_transition(dt: float) -> np.ndarray:
    F = np.eye(4)
    F[0, 2] = F[1, 3] = dt
    return F


def process_noise(dt: float, q: float) -> np.ndarray:
    """White acceleration noise of intensity ``q`` (px**2 / s**3)."""
    block = q * np.array([[dt ** 3 / 3.0, dt ** 2 / 2.0],
                          [dt ** 2 / 2.0, dt]])
    Q = np.zeros((4, 4))
    Q[np.ix_([0, 2], [0, 2])] = block
    Q[np.ix_([1, 3], [1, 3])] = block
    return Q


def measurement_noise(std: float) -> np.ndarray:
    return np.eye(2) * float(std) ** 2


def repair_covariance(P: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Symmetrize ``P``; if it is not positive definite add ``1e-9 * I``
    until it is.  Returns the matrix and whether jitter was needed.

    """
    P = 0.5 * (P + P.T)
    repaired = False
    for attempt in range(20):
        try:
            linalg.cholesky(P, lower=True)
            return P, repaired
        except linalg.LinAlgError:
            scale = max(float(np.abs(np.diag(P)).max()), 1.0)
            P = P + np.eye(P.shape[0]) * JITTER * scale * (10 ** attempt)
            repaired = True
            logger.warning('covariance repaired with jitter')
    return P, repaired


def predict(x: np.ndarray, P: np.ndarray, dt: float, q: float
            ) -> Tuple[np.ndarray, np.ndarray]:
    F = cv_transition(dt)
    return F @ x, F @ P @ F.T + process_noise(dt, q)


def innovation(x: np.ndarray, P: np.ndarray, z: np.ndarray, R: np.ndarray
               ) -> Tuple[np.ndarray, np.ndarray]:
    """Innovation ``y`` and its covariance ``S``."""
    return np.asarray(z, dtype=float) - H @ x, H @ P @ H.T + R


def mahalanobis2(x: np.ndarray, P: np.ndarray, z: np.ndarray,
                 R: np.ndarray) -> float:
    y, S = innovation(x, P, z, R)
    return float(y @ linalg.solve(S, y, assume_a='pos'))


def update(x: np.ndarray, P: np.ndarray, z: np.ndarray, R: np.ndarray
           ) -> Tuple[np.ndarray, np.ndarray, float]:
    """Joseph form measurement update.

    :returns:  ``(x, P, nis)`` with ``nis`` the normalized innovation
               squared.

    """
    y, S = innovation(x, P, z, R)
    K = linalg.solve(S, H @ P, assume_a='pos').T
    nis = float(y @ linalg.solve(S, y, assume_a='pos'))
    A = np.eye(4) - K @ H
    return x + K @ y, A @ P @ A.T + K @ R @ K.T, nis
