# -*- coding: utf-8 -*-
from .assignment import Assignment, hungarian_assign
from .fusion import align_timeline, project_rf_locations
from .tracker import (
    TENTATIVE, CONFIRMED, DELETED, NO_LABEL, HUNGARIAN_NOTIONAL,
    RF_FINGERPRINT, FusionConfig, TrackState, Tracker, track_step,
    assign_device_labels
)


__all__ = (
    'Assignment', 'hungarian_assign', 'align_timeline',
    'project_rf_locations', 'TENTATIVE', 'CONFIRMED', 'DELETED', 'NO_LABEL',
    'HUNGARIAN_NOTIONAL', 'RF_FINGERPRINT', 'FusionConfig', 'TrackState',
    'Tracker', 'track_step', 'assign_device_labels',
)
