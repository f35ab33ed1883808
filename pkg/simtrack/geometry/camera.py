# -*- coding: utf-8 -*-
"""Pinhole camera in the row-vector convention
``w * [u v 1] = [X Y Z 1] @ [R; T] @ K``.

``R`` is stacked on top of the translation row ``T`` to form a 4x3 matrix,
``K`` carries the focal lengths on its diagonal and the principal point on
its last row.  The column convention used by most text books is the
transpose of every factor: ``w * [u v 1]^T = K^T @ [R^T | T^T] @ [X Y Z 1]^T``.

"""
import json
import logging
from typing import NamedTuple, Tuple, Any, Union

import numpy as np

from ..exceptions import DegenerateProjection, BehindCamera, InvalidCamera


logger = logging.getLogger(__name__)

W_EPSILON = 1e-12
"""Smallest homogeneous scale accepted by a projection."""

ORTHONORMAL_TOLERANCE = 1e-9


class WorldPoint(NamedTuple):
    """A point in the local ENU frame (meters)."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


class PixelPoint(NamedTuple):
    """A point in the image plane (pixels, continuous)."""

    u: float
    v: float
    in_frame: bool = True


class CameraModel(object):
    """Intrinsics and extrinsics of a pinhole camera.

    Instances are read-only after construction; the arrays handed out are
    non-writeable copies.

    :param intrinsic:  3x3 matrix ``K`` (row-vector convention, last column
                       ``(0, 0, 1)``).
    :param rotation:  3x3 orthonormal matrix ``R``.
    :param translation:  3-vector ``T`` (meters).
    :param image_width:  Frame width in pixels.
    :param image_height:  Frame height in pixels.

    :raises InvalidCamera:  If any of the invariants above do not hold.

    """
    __slots__ = ('_intrinsic', '_rotation', '_translation', '_width',
                 '_height')

    def __init__(self, intrinsic: Any, rotation: Any, translation: Any,
                 image_width: int, image_height: int) -> None:
        K = np.array(intrinsic, dtype=float).reshape(3, 3)
        R = np.array(rotation, dtype=float).reshape(3, 3)
        T = np.array(translation, dtype=float).reshape(3)

        if not (np.all(np.isfinite(K)) and np.all(np.isfinite(R)) and
                np.all(np.isfinite(T))):
            raise InvalidCamera('camera entries must be finite')
        if K[0, 0] <= 0 or K[1, 1] <= 0:
            raise InvalidCamera('focal entries of K must be positive')
        if not np.allclose(K[:, 2], (0.0, 0.0, 1.0), rtol=0, atol=1e-12):
            raise InvalidCamera('last column of K must be (0, 0, 1)')
        err = np.max(np.abs(R.T @ R - np.eye(3)))
        if err >= ORTHONORMAL_TOLERANCE:
            raise InvalidCamera('R is not orthonormal ({:.3g})'.format(err))
        if int(image_width) <= 0 or int(image_height) <= 0:
            raise InvalidCamera('image size must be positive')

        for arr in (K, R, T):
            arr.flags.writeable = False
        object.__setattr__(self, '_intrinsic', K)
        object.__setattr__(self, '_rotation', R)
        object.__setattr__(self, '_translation', T)
        object.__setattr__(self, '_width', int(image_width))
        object.__setattr__(self, '_height', int(image_height))

    def __setattr__(self, key, value):
        raise AttributeError('CameraModel is immutable')

    @property
    def intrinsic(self) -> np.ndarray:
        return self._intrinsic

    @property
    def rotation(self) -> np.ndarray:
        return self._rotation

    @property
    def translation(self) -> np.ndarray:
        return self._translation

    @property
    def image_width(self) -> int:
        return self._width

    @property
    def image_height(self) -> int:
        return self._height

    @property
    def extrinsic(self) -> np.ndarray:
        """The 4x3 stack ``[R; T]``."""
        return np.vstack([self._rotation, self._translation])

    @property
    def position(self) -> np.ndarray:
        """Camera centre in world coordinates (``p @ R + T == 0``)."""
        return -self._translation @ self._rotation.T

    def contains(self, u: float, v: float) -> bool:
        return bool(0 <= u < self._width and 0 <= v < self._height)

    def with_extrinsics(self, rotation, translation) -> 'CameraModel':
        return CameraModel(self._intrinsic, rotation, translation,
                           self._width, self._height)

    def to_dict(self) -> dict:
        """The structured form used by camera files."""
        return {
            'K': [float(v) for v in self._intrinsic.ravel()],
            'R': [float(v) for v in self._rotation.ravel()],
            'T': [float(v) for v in self._translation],
            'width': self._width,
            'height': self._height,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'CameraModel':
        try:
            return cls(
                np.reshape(data['K'], (3, 3)),
                np.reshape(data['R'], (3, 3)),
                data['T'],
                data['width'],
                data['height'],
            )
        except KeyError as exc:
            raise InvalidCamera('missing camera key: {}'.format(exc))
        except (TypeError, ValueError) as exc:
            raise InvalidCamera(str(exc))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CameraModel):
            return NotImplemented
        return (np.array_equal(self._intrinsic, other._intrinsic) and
                np.array_equal(self._rotation, other._rotation) and
                np.array_equal(self._translation, other._translation) and
                self._width == other._width and
                self._height == other._height)

    __hash__ = None

    def __repr__(self) -> str:
        return '{}(focal={}, size=({}, {}), position={})'.format(
            self.__class__.__name__,
            float(self._intrinsic[0, 0]),
            self._width, self._height,
            tuple(round(float(c), 3) for c in self.position),
        )


def intrinsic_matrix(focal: float, cu: float, cv: float,
                     focal_v: float=None) -> np.ndarray:
    """Build ``K`` in the row-vector convention.

    :Example:

        >>> intrinsic_matrix(1000, 1920, 1080).tolist()
        [[1000.0, 0.0, 0.0], [0.0, 1000.0, 0.0], [1920.0, 1080.0, 1.0]]

    """
    fv = focal if focal_v is None else focal_v
    return np.array([[focal, 0.0, 0.0],
                     [0.0, fv, 0.0],
                     [cu, cv, 1.0]], dtype=float)


def rotation_from_pose(azimuth_deg: float, pitch_deg: float) -> np.ndarray:
    """Rotation of a camera looking along ``azimuth`` (degrees clockwise from
    north) and ``pitch`` (degrees above the horizon), without roll.

    The columns of the result are the camera's right, down and forward axes
    in world coordinates.

    """
    a = np.radians(azimuth_deg)
    p = np.radians(pitch_deg)
    forward = np.array([np.sin(a) * np.cos(p),
                        np.cos(a) * np.cos(p),
                        np.sin(p)])
    right = np.array([np.cos(a), -np.sin(a), 0.0])
    down = np.cross(forward, right)
    return np.column_stack([right, down, forward])


def camera_from_pose(position: Any, azimuth_deg: float, pitch_deg: float,
                     focal: float, image_width: int, image_height: int,
                     principal: Tuple[float, float]=None) -> CameraModel:
    """Build a :class:`CameraModel` from a position and a viewing direction.

    :param position:  Camera centre in world coordinates.
    :param principal:  Principal point, defaults to the frame centre.

    """
    position = np.asarray(position, dtype=float).reshape(3)
    R = rotation_from_pose(azimuth_deg, pitch_deg)
    T = -position @ R
    if principal is None:
        principal = (image_width / 2.0, image_height / 2.0)
    K = intrinsic_matrix(focal, principal[0], principal[1])
    return CameraModel(K, R, T, image_width, image_height)


def homogeneous(points: Any, cam: CameraModel) -> np.ndarray:
    """Homogeneous image coordinates ``[X Y Z 1] @ [R; T] @ K`` for an
    ``(n, 3)`` array of points.

    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return (pts @ cam.rotation + cam.translation) @ cam.intrinsic


def pixel_from_homogeneous(uvw: Any, cam: CameraModel) -> PixelPoint:
    """Divide a homogeneous triple by its scale.

    :raises DegenerateProjection:  If ``|w| <= 1e-12``.
    :raises BehindCamera:  If ``w < 0``.

    """
    uvw = np.asarray(uvw, dtype=float).reshape(3)
    w = float(uvw[2])
    if abs(w) <= W_EPSILON:
        raise DegenerateProjection('point lies on the camera plane')
    if w < 0:
        raise BehindCamera('point lies behind the camera (w={:.3g})'
                           .format(w))
    u = float(uvw[0] / w)
    v = float(uvw[1] / w)
    return PixelPoint(u, v, cam.contains(u, v))


def project_world_to_pixel(p: Union[WorldPoint, Any],
                           cam: CameraModel) -> PixelPoint:
    """Project a world point into the image plane.

    :Example:

        >>> cam = CameraModel(intrinsic_matrix(1000, 1920, 1080), np.eye(3),
        ...                   np.zeros(3), 3840, 2160)
        >>> project_world_to_pixel(WorldPoint(1, 0, 100), cam)
        PixelPoint(u=1930.0, v=1080.0, in_frame=True)

    """
    return pixel_from_homogeneous(homogeneous(p, cam)[0], cam)


def project_points(points: Any, cam: CameraModel
                   ) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised projection.

    :returns:  ``(uv, w)``: an ``(n, 2)`` array of pixel coordinates and the
               homogeneous scale of every point.  Entries with ``w <= 1e-12``
               are ``nan`` in ``uv``.

    """
    uvw = homogeneous(points, cam)
    w = uvw[:, 2]
    uv = np.full((uvw.shape[0], 2), np.nan)
    ok = w > W_EPSILON
    uv[ok] = uvw[ok, :2] / w[ok, None]
    return uv, w


def load_camera(path) -> CameraModel:
    """Load a camera file (JSON with keys ``K``, ``R``, ``T``, ``width`` and
    ``height``; matrices row-major).

    """
    with open(str(path)) as fh:
        try:
            data = json.load(fh)
        except ValueError as exc:
            raise InvalidCamera('{}: {}'.format(path, exc))
    logger.debug('loaded camera from %s', path)
    return CameraModel.from_dict(data)


def save_camera(cam: CameraModel, path) -> None:
    with open(str(path), 'w') as fh:
        json.dump(cam.to_dict(), fh, indent=2)
