# -*- coding: utf-8 -*-
"""EO frame synthesis.

A frame is a low rank static background, a cloud field drifting across the
view, gaussian point targets and sensor noise, quantized to 8 bits.  Each
frame draws its noise from its own random substream so frames can be made
in any order.

"""
import logging
import warnings
from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np
from scipy import ndimage

from .scenario import Scenario
from ..geometry import project_points
from ..model import EoTruth
from ..utils import substream
from ..exceptions import TargetNeverVisible


logger = logging.getLogger(__name__)

BACKGROUND_STREAM = 1
CLOUD_STREAM = 2
NOISE_STREAM = 3

PSF_RADIUS = 4.0
"""Point spread functions are cut off at this many sigmas."""


@dataclass
class EoData(object):
    """Frames ``(K, H, W)`` uint8, their times and the truth rows."""

    frames: np.ndarray
    timestamps: np.ndarray
    truth: List[EoTruth]


def _background(scn: Scenario) -> Tuple[np.ndarray, np.ndarray]:
    """Spatial basis ``(r, H, W)`` and per component temporal phase."""
    w, h = scn.frame_size
    rng = substream(scn.seed, BACKGROUND_STREAM)
    yy, xx = np.mgrid[0:h, 0:w]
    basis = [np.full((h, w), scn.background_level)]
    for _ in range(scn.background_rank - 1):
        fx, fy = rng.uniform(0.5, 2.0, size=2)
        phase = rng.uniform(0, 2 * np.pi)
        amp = rng.uniform(10.0, 25.0)
        basis.append(amp * np.cos(2 * np.pi * (fx * xx / w + fy * yy / h) +
                                  phase))
    return np.array(basis), rng.uniform(0, 2 * np.pi, size=len(basis))


def _cloud_field(scn: Scenario) -> np.ndarray:
    """Band limited field wide enough for the whole drift, unit std."""
    w, h = scn.frame_size
    travel = int(np.ceil(abs(scn.cloud_speed) * scn.duration)) + 2
    rng = substream(scn.seed, CLOUD_STREAM)
    raw = rng.standard_normal((h, w + travel))
    field = ndimage.gaussian_filter(raw, scn.cloud_scale, mode='wrap')
    std = field.std()
    return field / std if std > 0 else field


def _cloud_at(field: np.ndarray, width: int, shift: float) -> np.ndarray:
    """The view of ``field`` moved ``shift`` columns, linearly
    interpolated.

    """
    shift = abs(shift)
    lo = int(np.floor(shift))
    frac = shift - lo
    a = field[:, lo:lo + width]
    if frac == 0:
        return a
    b = field[:, lo + 1:lo + 1 + width]
    return (1.0 - frac) * a + frac * b


def target_pixels(scn: Scenario, t: float) -> List[Tuple[int, np.ndarray,
                                                         float, float]]:
    """``(target, (u, v), range, in_frame)`` rows at time ``t``."""
    rv = []
    cam_pos = scn.camera.position
    for i, target in enumerate(scn.targets):
        p = target.position(t)
        uv, w = project_points(p, scn.camera)
        rng = float(np.linalg.norm(p - cam_pos))
        inside = bool(w[0] > 0 and not np.isnan(uv[0, 0]) and
                      scn.camera.contains(uv[0, 0], uv[0, 1]))
        rv.append((i, uv[0], rng, inside))
    return rv


def render_frame(scn: Scenario, k: int, basis: np.ndarray=None,
                 phases: np.ndarray=None, clouds: np.ndarray=None
                 ) -> Tuple[np.ndarray, List[EoTruth]]:
    """Frame ``k`` as uint8 and the truth rows of the targets in view."""
    w, h = scn.frame_size
    t = k / scn.frame_rate
    if basis is None:
        basis, phases = _background(scn)
    if clouds is None and scn.cloud_amplitude > 0:
        clouds = _cloud_field(scn)

    coeff = np.ones(len(basis))
    if scn.background_drift:
        coeff[1:] += scn.background_drift * np.sin(
            2 * np.pi * t / max(scn.duration, 1e-9) + phases[1:])
    frame = np.tensordot(coeff, basis, axes=1)
    if scn.cloud_amplitude > 0:
        frame = frame + scn.cloud_amplitude * _cloud_at(
            clouds, w, scn.cloud_speed * t)

    truth = []
    yy, xx = np.mgrid[0:h, 0:w]
    for i, (u, v), rng, inside in target_pixels(scn, t):
        if np.isnan(u):
            continue
        target = scn.targets[i]
        sigma = target.pixel_sigma
        if -PSF_RADIUS * sigma <= u < w + PSF_RADIUS * sigma and \
                -PSF_RADIUS * sigma <= v < h + PSF_RADIUS * sigma:
            amp = target.pixel_contrast * (scn.range_ref / rng) ** 2
            frame = frame + amp * np.exp(
                -((xx - u) ** 2 + (yy - v) ** 2) / (2.0 * sigma ** 2))
        if inside:
            truth.append(EoTruth(t=t, target=i, u=float(u), v=float(v),
                                 range=rng))

    if scn.noise_std > 0:
        noise = substream(scn.seed, NOISE_STREAM, k).standard_normal((h, w))
        frame = frame + scn.noise_std * noise
    return np.clip(np.rint(frame), 0, 255).astype(np.uint8), truth


def iter_eo(scn: Scenario) -> Iterator[Tuple[int, np.ndarray,
                                             List[EoTruth]]]:
    """Yield ``(k, frame, truth)`` for every frame of the scenario."""
    basis, phases = _background(scn)
    clouds = _cloud_field(scn) if scn.cloud_amplitude > 0 else None
    for k in range(scn.frame_count):
        frame, truth = render_frame(scn, k, basis, phases, clouds)
        yield k, frame, truth


def generate_eo(scn: Scenario) -> EoData:
    """The frame stack of a scenario and per frame target pixels.

    Warns :class:`TargetNeverVisible` for targets that never project into
    the frame.

    """
    frames = []
    truth = []
    for _, frame, rows in iter_eo(scn):
        frames.append(frame)
        truth.extend(rows)
    seen = {row.target for row in truth}
    for i, target in enumerate(scn.targets):
        if i not in seen:
            warnings.warn(TargetNeverVisible(
                'target {} ({}) never enters the frame'.format(
                    i, target.device)))
            logger.warning('target %d (%s) never visible', i, target.device)
    w, h = scn.frame_size
    stack = np.array(frames, dtype=np.uint8) if frames else \
        np.zeros((0, h, w), dtype=np.uint8)
    return EoData(frames=stack, timestamps=scn.frame_times, truth=truth)
