# -*- coding: utf-8 -*-
import logging
from dataclasses import dataclass
from typing import List, Sequence, Iterable, Any

import numpy as np
from scipy import ndimage

from ..config import SectionParams
from ..model import Detection2D, POSITIVE, NEGATIVE, EO_RPCA
from ..utils import robust_sigma
from ..exceptions import ConfigError, DataError, DegenerateFrame


logger = logging.getLogger(__name__)

POLARITIES = ('both', POSITIVE, NEGATIVE)

EIGHT_CONNECTED = np.ones((3, 3), dtype=int)


@dataclass
class MaskParams(SectionParams):
    """Foreground mask and connected component settings.

    ``min_amplitude`` (normalized intensity) bounds the threshold from below
    when the robust scale of a frame is (near) zero.  ``polarity`` selects
    the contrast modes that are extracted and fused.

    """
    k_sigma: float = 3.0
    min_area: int = 1
    max_area: int = 400
    dedup_radius: float = 5.0
    min_amplitude: float = 0.03
    polarity: str = 'both'

    def validate(self) -> None:
        if not self.k_sigma > 0:
            raise ConfigError('k_sigma must be positive')
        if not 0 < self.min_area <= self.max_area:
            raise ConfigError('need 0 < min_area <= max_area')
        if self.dedup_radius < 0 or self.min_amplitude < 0:
            raise ConfigError('dedup_radius and min_amplitude must be >= 0')
        if self.polarity not in POLARITIES:
            raise ConfigError('polarity must be one of {}'.format(
                ', '.join(POLARITIES)))

    @property
    def modes(self) -> Sequence[str]:
        if self.polarity == 'both':
            return (POSITIVE, NEGATIVE)
        return (self.polarity,)


def frame_threshold(S: np.ndarray, params: MaskParams) -> float:
    """``max(k_sigma * sigma, min_amplitude)`` with ``sigma`` the MAD scale
    of the frame, or of its non-zero entries when that is zero.

    :raises DegenerateFrame:  For a constant non-zero frame.

    """
    flat = S.ravel()
    if flat.size and flat[0] != 0 and np.all(flat == flat[0]):
        raise DegenerateFrame('constant non-zero frame ({})'.format(
            flat[0]))
    sigma = robust_sigma(flat)
    if sigma == 0:
        sigma = robust_sigma(flat[flat != 0])
    return max(params.k_sigma * sigma, params.min_amplitude)


def extract_detections(S_frame: Any, t: float, mode: str=POSITIVE,
                       params: MaskParams=None) -> List[Detection2D]:
    """Threshold one frame of the sparse component and turn the 8-connected
    components of the mask into detections.

    The centroid is weighted by ``|S|``; the score is the mean ``|S|`` over
    the component.  Results are ordered by ``(v, u)``.

    :param mode:  ``'positive'`` keeps ``S > thr``, ``'negative'`` keeps
                  ``S < -thr``.

    """
    params = params or MaskParams()
    S = np.asarray(S_frame, dtype=float)
    if not np.all(np.isfinite(S)):
        raise DataError('sparse frame holds non-finite values')
    if mode not in (POSITIVE, NEGATIVE):
        raise ValueError(mode)
    if not np.any(S):
        return []

    thr = frame_threshold(S, params)
    mask = S > thr if mode == POSITIVE else S < -thr
    labels, count = ndimage.label(mask, structure=EIGHT_CONNECTED)
    if count == 0:
        return []

    index = np.arange(1, count + 1)
    weight = np.abs(S)
    areas = ndimage.sum_labels(np.ones_like(S), labels, index)
    scores = ndimage.mean(weight, labels, index)
    centers = ndimage.center_of_mass(weight, labels, index)

    rv = []
    for area, score, (v, u) in zip(areas, scores, centers):
        if not params.min_area <= area <= params.max_area:
            continue
        rv.append(Detection2D(
            t=float(t), u=float(u), v=float(v), score=float(score),
            contrast=mode, source=EO_RPCA, area=int(area),
        ))
    rv.sort(key=lambda d: (d.v, d.u))
    return rv


def dedup(detections: Iterable[Detection2D], radius: float
          ) -> List[Detection2D]:
    """Greedy non-maximum suppression per time stamp: detections are taken
    by descending score (ties keep input order) and dropped when a kept one
    lies within ``radius`` pixels.

    """
    by_time = {}
    for det in detections:
        by_time.setdefault(det.t, []).append(det)

    rv = []
    for t in sorted(by_time):
        kept = []
        for det in sorted(by_time[t], key=lambda d: -d.score):
            if all(np.hypot(det.u - k.u, det.v - k.v) > radius
                   for k in kept):
                kept.append(det)
        rv.extend(sorted(kept, key=lambda d: (d.v, d.u)))
    return rv


def fuse_contrast_detections(pos: Sequence[Detection2D],
                             neg: Sequence[Detection2D],
                             dedup_radius: float) -> List[Detection2D]:
    """Union of the two polarity lists with duplicates within
    ``dedup_radius`` merged to the higher scoring member.

    """
    return dedup(list(pos) + list(neg), dedup_radius)


def detect_frame(S_frame: Any, t: float, params: MaskParams=None
                 ) -> List[Detection2D]:
    """Extract every configured polarity of a frame and fuse them."""
    params = params or MaskParams()
    found = [extract_detections(S_frame, t, mode, params)
             for mode in params.modes]
    if len(found) == 1:
        return dedup(found[0], params.dedup_radius)
    return fuse_contrast_detections(found[0], found[1], params.dedup_radius)


def detect_stack(sparse: Any, timestamps: Sequence[float],
                 params: MaskParams=None, executor=None
                 ) -> List[Detection2D]:
    """Run :func:`detect_frame` over a ``K x H x W`` sparse stack.  Frames
    may be processed by ``executor``; the output is in frame order.

    """
    params = params or MaskParams()
    sparse = np.asarray(sparse)
    jobs = list(zip(sparse, timestamps))
    if executor is None:
        results = [detect_frame(s, t, params) for s, t in jobs]
    else:
        results = list(executor.map(
            lambda job: detect_frame(job[0], job[1], params), jobs))
    rv = [d for frame in results for d in frame]
    logger.debug('%d detections over %d frames', len(rv), len(jobs))
    return rv
