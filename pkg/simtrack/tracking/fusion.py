# -*- coding: utf-8 -*-
import bisect
import logging
from typing import Iterable, List, Mapping, Sequence

import numpy as np

from ..geometry import CameraModel, project_points
from ..model import Detection2D, Detections, RFLocation, RF_PROJECTED
from ..exceptions import MissingOffset


logger = logging.getLogger(__name__)

TIME_TOLERANCE = 1e-9


def _snap(t: float, anchors: Sequence[float]) -> float:
    """Return the anchor within :data:`TIME_TOLERANCE` of ``t``, or ``t``."""
    i = bisect.bisect_left(anchors, t - TIME_TOLERANCE)
    if i < len(anchors) and abs(anchors[i] - t) <= TIME_TOLERANCE:
        return anchors[i]
    return t


def align_timeline(streams: Iterable[Sequence[Detection2D]],
                   offsets: Mapping[str, float],
                   anchors: Iterable[float] = ()) -> List[Detection2D]:
    """Merge detection streams onto the unified timeline.

    Every detection is copied with ``t - offsets[source]`` and the result is
    sorted by time.  A shifted stamp within a nanosecond of an unshifted one
    (or of one of ``anchors``) takes that exact value, so floating point
    residue of the subtraction never splits a frame.  At equal times EO
    detections come before RF projected ones; otherwise input order is kept.

    :param streams:  Lists of detections (sources may be mixed).
    :param offsets:  Seconds to subtract, per detection source.
    :param anchors:  Extra exact times to snap onto, typically frame times.

    :raises MissingOffset:  For a source without a configured offset.

    """
    merged, shifted = [], []
    exact = set(anchors)
    for stream in streams:
        for det in stream:
            if det.source not in offsets:
                raise MissingOffset(det.source)
            offset = float(offsets[det.source])
            if offset:
                det = det.copy(t=det.t - offset)
                shifted.append(len(merged))
            else:
                exact.add(det.t)
            merged.append(det)
    if shifted:
        exact = sorted(exact)
        for i in shifted:
            t = _snap(merged[i].t, exact)
            if t != merged[i].t:
                merged[i] = merged[i].copy(t=t)
    merged.sort(key=lambda d: (d.t, d.source == RF_PROJECTED))
    return merged


def project_rf_locations(locs: Iterable[RFLocation], cam: CameraModel
                         ) -> Detections:
    """Project RF position fixes into the image.  Fixes behind the camera
    or outside the frame are dropped and counted in ``rejected``.

    """
    locs = list(locs)
    if not locs:
        return Detections()
    uv, w = project_points(np.array([loc.position for loc in locs]), cam)
    kept = []
    for loc, (u, v) in zip(locs, uv):
        if np.isnan(u) or not cam.contains(u, v):
            continue
        kept.append(Detection2D(t=loc.t, u=float(u), v=float(v), score=1.0,
                                label=loc.label, source=RF_PROJECTED))
    rejected = len(locs) - len(kept)
    if rejected:
        logger.info('dropped %d RF fixes outside the camera view', rejected)
    return Detections(kept, rejected=rejected)
