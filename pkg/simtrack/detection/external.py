# -*- coding: utf-8 -*-
import logging
from typing import Tuple

from ..model import Detection2D, Detections, EO_EXTERNAL
from ..query import Query


logger = logging.getLogger(__name__)


def ingest_external_detections(path, frame_size: Tuple[int, int]=None
                               ) -> Detections:
    """Read detections produced by an external detector (csv with header
    ``t,u,v,score,label``).

    Rows outside the frame are rejected and counted in the returned
    list's ``rejected`` attribute.

    :param frame_size:  ``(width, height)`` of the frames.  Without it only
                        negative coordinates are rejected.

    :raises ParseError:  With the offending line number.
    :raises MissingInput:  If the file does not exist.

    """
    rows = Query(path, Detection2D).all()
    kept = []
    rejected = 0
    for det in rows:
        inside = det.u >= 0 and det.v >= 0
        if inside and frame_size is not None:
            inside = det.u < frame_size[0] and det.v < frame_size[1]
        if not inside:
            rejected += 1
            continue
        kept.append(det.copy(source=EO_EXTERNAL))
    if rejected:
        logger.warning('rejected %d out-of-frame external detections from %s',
                       rejected, path)
    kept.sort(key=lambda d: d.t)
    return Detections(kept, rejected=rejected)
