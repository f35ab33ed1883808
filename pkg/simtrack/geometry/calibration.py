# -*- coding: utf-8 -*-
import logging
from typing import NamedTuple, Sequence, Tuple, Any

import numpy as np
from scipy import linalg, optimize
from scipy.spatial.transform import Rotation

from .camera import CameraModel, project_points
from ..exceptions import InsufficientCorrespondences, RankDeficientGeometry


logger = logging.getLogger(__name__)

MIN_CORRESPONDENCES = 6
RANK_TOLERANCE = 1e-10


class ExtrinsicFit(NamedTuple):
    """Result of :func:`calibrate_extrinsics`."""

    rotation: np.ndarray
    translation: np.ndarray
    reprojection_error: float
    """Mean euclidean pixel distance between observed and reprojected
    points."""


def _split(correspondences) -> Tuple[np.ndarray, np.ndarray]:
    world = []
    pixel = []
    for p, q in correspondences:
        world.append([p[0], p[1], p[2]])
        pixel.append([q[0], q[1]])
    return np.asarray(world, dtype=float), np.asarray(pixel, dtype=float)


def _normalize(world: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """Center the points and scale them to a mean distance of sqrt(3)."""
    centroid = world.mean(axis=0)
    centered = world - centroid
    mean_dist = np.mean(np.linalg.norm(centered, axis=1))
    scale = np.sqrt(3.0) / mean_dist if mean_dist > 0 else 1.0
    return centered * scale, centroid, scale


def _dlt(world: np.ndarray, rays: np.ndarray
         ) -> Tuple[np.ndarray, np.ndarray]:
    """Linear estimate of ``(R, T)`` from world points and normalized
    image rays ``[u v 1] @ inv(K)``.

    """
    normed, centroid, scale = _normalize(world)
    x = rays[:, 0] / rays[:, 2]
    y = rays[:, 1] / rays[:, 2]

    n = world.shape[0]
    h = np.hstack([normed, np.ones((n, 1))])
    zeros = np.zeros((n, 4))
    A = np.vstack([
        np.hstack([h, zeros, -x[:, None] * h]),
        np.hstack([zeros, h, -y[:, None] * h]),
    ])

    _, s, vt = linalg.svd(A)
    if s[-2] < RANK_TOLERANCE * s[0]:
        raise RankDeficientGeometry(
            'correspondences do not constrain the pose '
            '(singular values {:.3g} / {:.3g})'.format(s[-2], s[0]))

    # column-convention 3x4 matrix; its transpose is the 4x3 [R; T] stack
    P = vt[-1].reshape(3, 4).T
    Rh, Th = P[:3], P[3]
    if np.linalg.det(Rh) < 0:
        Rh, Th = -Rh, -Th

    U, S, Vt = linalg.svd(Rh)
    R = U @ Vt
    lam = np.mean(S) * scale
    T = Th / lam - centroid @ R
    return R, T


def _residuals(params: np.ndarray, world: np.ndarray, pixel: np.ndarray,
               cam: CameraModel) -> np.ndarray:
    R = Rotation.from_rotvec(params[:3]).as_matrix().T
    c = world @ R + params[3:]
    uvw = c @ cam.intrinsic
    return (uvw[:, :2] / uvw[:, 2:3] - pixel).ravel()


def _mean_error(cam: CameraModel, world: np.ndarray,
                pixel: np.ndarray) -> float:
    uv, _ = project_points(world, cam)
    return float(np.mean(np.linalg.norm(uv - pixel, axis=1)))


def calibrate_extrinsics(correspondences: Sequence[Tuple[Any, Any]],
                         intrinsic: Any, refine: bool=True,
                         image_size: Tuple[int, int]=(1, 1)) -> ExtrinsicFit:
    """Estimate the camera rotation and translation from world / pixel
    correspondences with a known intrinsic matrix.

    A normalized direct linear transform gives the first estimate; ``R`` is
    projected onto the nearest orthonormal matrix.  With ``refine`` the
    pixel reprojection error is minimized over a rotation vector and ``T``
    with Levenberg-Marquardt.

    :param correspondences:  Pairs of ``(WorldPoint, PixelPoint)`` (any
                             indexable pair of ``(x, y, z)`` and ``(u, v)``).
    :param intrinsic:  3x3 intrinsic matrix ``K``.
    :param refine:  Run the non-linear refinement.
    :param image_size:  Only used to build the returned camera model's
                        bookkeeping; does not influence the fit.

    :raises InsufficientCorrespondences:  With fewer than 6 pairs.
    :raises RankDeficientGeometry:  When the points do not determine the
                                    pose (for example all coplanar).

    :Example:

        >>> R, T, err = calibrate_extrinsics(pairs, cam.intrinsic)

    """
    correspondences = list(correspondences)
    if len(correspondences) < MIN_CORRESPONDENCES:
        raise InsufficientCorrespondences(
            'need at least {} correspondences, got {}'.format(
                MIN_CORRESPONDENCES, len(correspondences)))

    world, pixel = _split(correspondences)
    K = np.asarray(intrinsic, dtype=float).reshape(3, 3)
    rays = np.hstack([pixel, np.ones((pixel.shape[0], 1))]) @ linalg.inv(K)

    R, T = _dlt(world, rays)
    cam = CameraModel(K, R, T, *image_size)

    if refine:
        x0 = np.concatenate([Rotation.from_matrix(R.T).as_rotvec(), T])
        fit = optimize.least_squares(
            _residuals, x0, args=(world, pixel, cam), method='lm',
            xtol=1e-15, ftol=1e-15, gtol=1e-15)
        R_ref = Rotation.from_rotvec(fit.x[:3]).as_matrix().T
        cam_ref = cam.with_extrinsics(R_ref, fit.x[3:])
        if _mean_error(cam_ref, world, pixel) <= _mean_error(cam, world,
                                                               pixel):
            cam = cam_ref
        else:
            logger.debug('refinement did not improve the linear estimate')

    error = _mean_error(cam, world, pixel)
    logger.info('calibrated extrinsics from %d points, mean error %.4f px',
                len(correspondences), error)
    return ExtrinsicFit(np.array(cam.rotation), np.array(cam.translation),
                        error)
