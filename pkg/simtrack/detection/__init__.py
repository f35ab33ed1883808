# -*- coding: utf-8 -*-
from .masks import (
    MaskParams, frame_threshold, extract_detections, dedup,
    fuse_contrast_detections, detect_frame, detect_stack
)
from .external import ingest_external_detections


__all__ = (
    'MaskParams', 'frame_threshold', 'extract_detections', 'dedup',
    'fuse_contrast_detections', 'detect_frame', 'detect_stack',
    'ingest_external_detections',
)
