# -*- coding: utf-8 -*-
"""Scoring of a fusion run against simulator truth."""
import math
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from .config import SectionParams
from .model import Association, Detection2D, EoTruth, RFLocation, \
    TrackRecord, TrackSummary
from .exceptions import ConfigError


logger = logging.getLogger(__name__)


@dataclass
class EvalParams(SectionParams):
    """``match_radius_px`` is how close a detection must be to a target's
    true pixel position to count as that target's.

    """
    match_radius_px: float = 8.0
    confirmed_only: bool = True

    def validate(self) -> None:
        if not self.match_radius_px > 0:
            raise ConfigError('match_radius_px must be positive')


class TruthIndex(object):
    """Per frame truth pixel positions with nearest target lookup."""

    def __init__(self, truth: Sequence[EoTruth], frame_rate: float) -> None:
        self.frame_rate = float(frame_rate)
        self.by_frame = defaultdict(list)
        self.by_target = defaultdict(list)
        for row in truth:
            self.by_frame[self.frame_of(row.t)].append(row)
            self.by_target[row.target].append(row)
        for rows in self.by_target.values():
            rows.sort(key=lambda r: r.t)

    def frame_of(self, t: float) -> int:
        return int(round(t * self.frame_rate))

    def match(self, t: float, u: float, v: float, radius: float
              ) -> Optional[EoTruth]:
        """The truth row nearest to ``(u, v)`` at ``t`` within
        ``radius``.

        """
        rows = self.by_frame.get(self.frame_of(t), [])
        best, best_d = None, radius
        for row in rows:
            d = math.hypot(row.u - u, row.v - v)
            if d <= best_d:
                best, best_d = row, d
        return best

    def position(self, target: int, t: float) -> Optional[np.ndarray]:
        """Interpolated truth pixel of ``target`` at ``t`` inside its
        visible span.

        """
        rows = self.by_target.get(target)
        if not rows or not rows[0].t <= t <= rows[-1].t:
            return None
        ts = np.array([r.t for r in rows])
        return np.array([np.interp(t, ts, [r.u for r in rows]),
                         np.interp(t, ts, [r.v for r in rows])])


def _finite(value: float) -> Optional[float]:
    return None if value is None or not math.isfinite(value) else \
        float(value)


def first_detection_ranges(detections: Sequence[Detection2D],
                           index: TruthIndex, devices: Sequence[str],
                           radius: float) -> Dict[str, Dict]:
    """Range and time of the first EO detection of every target, overall
    and per contrast polarity.

    """
    rv = {}
    for det in sorted(detections, key=lambda d: d.t):
        if det.is_rf:
            continue
        row = index.match(det.t, det.u, det.v, radius)
        if row is None:
            continue
        entry = rv.setdefault(devices[row.target], {'target': row.target})
        if 'range' not in entry:
            entry['range'] = float(row.range)
            entry['t'] = float(det.t)
        key = '{}_range'.format(det.contrast)
        if key not in entry:
            entry[key] = float(row.range)
    return rv


def evaluate_run(truth: Sequence[EoTruth], devices: Sequence[str],
                 frame_rate: float, associations: Sequence[Association],
                 records: Sequence[TrackRecord],
                 summaries: Sequence[TrackSummary],
                 detections: Sequence[Detection2D]=(),
                 rf_locations: Sequence[RFLocation]=(),
                 rf_offset: float=0.0, params: EvalParams=None) -> Dict:
    """Metrics of a fusion run.

    :param devices:  The device class of each target index.
    :param rf_offset:  Seconds subtracted from RF fix times to put them on
                       the unified timeline.

    :returns:  A json-ready dict with per track purity, label correctness
               and latency, pixel RMSE and first detection ranges.

    """
    params = params or EvalParams()
    index = TruthIndex(truth, frame_rate)
    radius = params.match_radius_px
    rf_times = sorted(float(loc.t) - rf_offset for loc in rf_locations)

    per_track = defaultdict(list)
    for assoc in associations:
        row = index.match(assoc.t, assoc.u, assoc.v, radius)
        per_track[assoc.track_id].append(None if row is None else row.target)

    rows_by_track = defaultdict(list)
    for rec in records:
        rows_by_track[rec.track_id].append(rec)

    tracks = []
    for summary in sorted(summaries, key=lambda s: s.track_id):
        confirmed = _finite(summary.confirmed_t)
        if params.confirmed_only and confirmed is None:
            continue
        hits = per_track.get(summary.track_id, [])
        counts = Counter(h for h in hits if h is not None)
        entry = {'track_id': summary.track_id,
                 'device_label': summary.device_label,
                 'provenance': summary.provenance,
                 'associations': len(hits),
                 'confirmed_t': confirmed,
                 'label_overwrites': summary.label_overwrites}
        if not counts:
            entry.update(target=None, purity=0.0)
            tracks.append(entry)
            continue
        target, best = sorted(counts.items(),
                              key=lambda kv: (-kv[1], kv[0]))[0]
        truth_label = devices[target]
        entry.update(target=target, true_device=truth_label,
                     purity=best / float(len(hits)),
                     label_correct=summary.device_label == truth_label)

        labeled = _finite(summary.labeled_t)
        first_fix = next((t for t in rf_times
                          if confirmed is not None and t >= confirmed), None)
        entry['first_rf_fix_t'] = first_fix
        if entry['label_correct'] and labeled is not None and \
                first_fix is not None:
            entry['label_latency'] = max(labeled - first_fix, 0.0)
        else:
            entry['label_latency'] = None

        errors = []
        for rec in rows_by_track.get(summary.track_id, []):
            if rec.status != 'confirmed':
                continue
            pos = index.position(target, rec.t)
            if pos is not None:
                errors.append(float(np.sum((pos - (rec.u, rec.v)) ** 2)))
        entry['rmse_px'] = float(np.sqrt(np.mean(errors))) if errors \
            else None
        tracks.append(entry)

    report = {
        'confirmed_tracks': len(tracks),
        'tracks': tracks,
        'targets_tracked': sorted({t['target'] for t in tracks
                                   if t.get('target') is not None}),
        'label_overwrites': int(sum(t['label_overwrites'] for t in tracks)),
        'first_detection': first_detection_ranges(detections, index,
                                                  devices, radius),
        'rf_fixes': len(rf_times),
    }
    purities = [t['purity'] for t in tracks if t.get('target') is not None]
    report['mean_purity'] = float(np.mean(purities)) if purities else None
    logger.info('%d confirmed tracks, mean purity %s', len(tracks),
                report['mean_purity'])
    return report
