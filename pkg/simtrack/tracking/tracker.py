# -*- coding: utf-8 -*-
"""Multi target tracking in the pixel plane.

Detections from every source update the same constant velocity filters.
Association is a gated global nearest neighbour solved per time step.  A
track is confirmed with 3 hits in the last 5 frame steps and deleted after
``n_miss`` consecutive missed frame steps; tentative tracks are deleted as
soon as they can no longer be confirmed.

Track labels start as a notional id.  RF projected detections carrying a
device label vote for it; the label with most votes is kept and ties keep
the current one.

"""
import math
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy import stats

from . import kalman
from .assignment import hungarian_assign
from ..config import SectionParams
from ..model import Association, Detection2D, TrackRecord, TrackSummary, \
    EO_RPCA, EO_EXTERNAL, RF_PROJECTED
from ..exceptions import ConfigError, DataError


logger = logging.getLogger(__name__)

TENTATIVE = 'tentative'
CONFIRMED = 'confirmed'
DELETED = 'deleted'

NO_LABEL = 'none'
HUNGARIAN_NOTIONAL = 'hungarian_notional'
RF_FINGERPRINT = 'rf_fingerprint'


@dataclass
class FusionConfig(SectionParams):
    """Filter, association and track management settings.

    ``gate`` is a threshold on the squared Mahalanobis distance; without
    it the ``gate_probability`` quantile of the 2 degree of freedom chi
    square distribution is used.  Unassigned detections within ``spawn_gate``
    (by default its ``spawn_gate_probability`` quantile) of a confirmed
    track do not start a new track.  ``offsets`` are the seconds subtracted
    from the timestamps of each detection source; EO sources default to 0.
    Without any ``offsets`` RF projected fixes are taken to be on the
    unified timeline already, which is what the localize stage writes when it
    applies the scenario clock offsets.

    """
    gate: Optional[float] = None
    gate_probability: float = 0.99
    spawn_gate: Optional[float] = None
    spawn_gate_probability: float = 0.9999
    q: float = 10.0
    r_eo: float = 1.0
    r_rf: float = 5.0
    m_confirm: int = 3
    confirm_window: int = 5
    n_miss: int = 15
    init_velocity_std: float = 50.0
    label_radius_px: float = 15.0
    output_rate: float = 10.0
    rf_as_measurement: bool = True
    rf_until_labeled: bool = False
    offsets: Optional[Dict[str, float]] = None

    aliases = {'gate_px': 'gate', 'M_confirm': 'm_confirm',
               'N_miss': 'n_miss'}

    def validate(self) -> None:
        for name in ('q', 'r_eo', 'r_rf', 'init_velocity_std',
                     'label_radius_px', 'output_rate'):
            if not getattr(self, name) > 0:
                raise ConfigError('{} must be positive'.format(name))
        if self.gate is not None and not self.gate > 0:
            raise ConfigError('gate must be positive')
        if not 0 < self.gate_probability < 1:
            raise ConfigError('gate_probability must be in (0, 1)')
        if self.spawn_gate is not None and not self.spawn_gate > 0:
            raise ConfigError('spawn_gate must be positive')
        if not 0 < self.spawn_gate_probability < 1:
            raise ConfigError('spawn_gate_probability must be in (0, 1)')
        if not 1 <= self.m_confirm <= self.confirm_window:
            raise ConfigError('m_confirm must be in [1, confirm_window]')
        if self.n_miss < 1:
            raise ConfigError('n_miss must be positive')
        offsets = {EO_RPCA: 0.0, EO_EXTERNAL: 0.0}
        if self.offsets is None:
            offsets[RF_PROJECTED] = 0.0
        for source, value in (self.offsets or {}).items():
            value = float(value)
            if not math.isfinite(value):
                raise ConfigError('offset of {} is not finite'.format(source))
            offsets[source] = value
        self.offsets = offsets

    @property
    def gate_value(self) -> float:
        if self.gate is not None:
            return float(self.gate)
        return float(stats.chi2.ppf(self.gate_probability, 2))

    @property
    def spawn_gate_value(self) -> float:
        if self.spawn_gate is not None:
            return float(self.spawn_gate)
        return max(float(stats.chi2.ppf(self.spawn_gate_probability, 2)),
                   self.gate_value)

    def noise(self, source: str) -> np.ndarray:
        std = self.r_rf if source == RF_PROJECTED else self.r_eo
        return kalman.measurement_noise(std)


@dataclass
class TrackState(object):
    """A track.  ``t`` is the time ``x`` and ``P`` refer to."""

    track_id: int
    x: np.ndarray
    P: np.ndarray
    t: float
    device_label: Optional[str] = None
    provenance: str = NO_LABEL
    hits: int = 1
    misses: int = 0
    status: str = TENTATIVE
    history: deque = field(default_factory=lambda: deque(maxlen=5))
    votes: Counter = field(default_factory=Counter)
    first_t: Optional[float] = None
    confirmed_t: Optional[float] = None
    labeled_t: Optional[float] = None
    rf_hits: int = 0
    label_overwrites: int = 0

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.P = np.asarray(self.P, dtype=float)
        if self.first_t is None:
            self.first_t = self.t

    @property
    def position(self) -> np.ndarray:
        return self.x[:2]

    @property
    def velocity(self) -> np.ndarray:
        return self.x[2:]

    @property
    def is_live(self) -> bool:
        return self.status != DELETED

    def state_at(self, t: float) -> np.ndarray:
        """The state predicted to ``t`` (the track is not changed)."""
        dt = t - self.t
        return kalman.cv_transition(dt) @ self.x if dt else self.x.copy()

    def vote(self, label: str, t: float) -> None:
        """Count an RF label for the track."""
        self.votes[label] += 1
        if self.device_label is None or self.provenance != RF_FINGERPRINT:
            self.device_label = label
            self.provenance = RF_FINGERPRINT
            self.labeled_t = t
            logger.info('track %d labelled %s at %.3f s', self.track_id,
                        label, t)
            return
        if label == self.device_label:
            return
        logger.info('track %d: conflicting label %s (holding %s)',
                    self.track_id, label, self.device_label)
        if self.votes[label] > self.votes[self.device_label]:
            logger.warning('track %d relabelled %s -> %s', self.track_id,
                           self.device_label, label)
            self.device_label = label
            self.labeled_t = t
            self.label_overwrites += 1

    def record(self, t: float) -> TrackRecord:
        x = self.state_at(t)
        return TrackRecord(t=float(t), track_id=self.track_id,
                           device_label=self.device_label,
                           provenance=self.provenance, u=float(x[0]),
                           v=float(x[1]), udot=float(x[2]),
                           vdot=float(x[3]), status=self.status)

    def summary(self, last_t: float=None) -> TrackSummary:
        nan = float('nan')
        return TrackSummary(
            track_id=self.track_id, device_label=self.device_label,
            provenance=self.provenance, status=self.status,
            first_t=float(self.first_t),
            last_t=float(self.t if last_t is None else last_t),
            confirmed_t=nan if self.confirmed_t is None else
            float(self.confirmed_t),
            labeled_t=nan if self.labeled_t is None else
            float(self.labeled_t),
            hits=self.hits, rf_hits=self.rf_hits,
            label_overwrites=self.label_overwrites)


def assign_device_labels(tracks: Sequence[TrackState],
                         rf_detections: Iterable[Detection2D],
                         radius_px: float) -> Sequence[TrackState]:
    """Give each labelled RF detection's label to the nearest live track
    within ``radius_px``.  Detections without a label are ignored.

    """
    live = [tr for tr in tracks if tr.is_live]
    for det in rf_detections:
        if not det.label or not live:
            continue
        dist = [float(np.hypot(*(tr.state_at(det.t)[:2] -
                                 (det.u, det.v)))) for tr in live]
        best = int(np.argmin(dist))
        if dist[best] <= radius_px:
            live[best].vote(det.label, det.t)
    return tracks


class Tracker(object):
    """Runs the filters of all tracks of one scenario.

    :param config:  The :class:`FusionConfig`.
    :param tracks:  Tracks to continue from.

    :Example:

        >>> tracker = Tracker(FusionConfig())
        >>> tracker.step([Detection2D(t=0.0, u=10.0, v=20.0)], t=0.0)
        [TrackState(track_id=1, ...)]

    """
    def __init__(self, config: FusionConfig=None,
                 tracks: Iterable[TrackState]=None) -> None:
        self.config = config or FusionConfig()
        self.tracks = list(tracks or [])
        self.next_id = max((tr.track_id for tr in self.tracks), default=0) + 1
        self.repairs = 0
        self.nis = []  # type: List[float]
        self.associations = []  # type: List[Association]
        self.records = []  # type: List[TrackRecord]
        self.t = max((tr.t for tr in self.tracks), default=None)

    @property
    def live(self) -> List[TrackState]:
        return [tr for tr in self.tracks if tr.is_live]

    def _repair(self, P: np.ndarray) -> np.ndarray:
        P, repaired = kalman.repair_covariance(P)
        if repaired:
            self.repairs += 1
        return P

    def spawn(self, det: Detection2D, t: float, frame_step: bool
              ) -> TrackState:
        cfg = self.config
        r = cfg.r_rf if det.is_rf else cfg.r_eo
        P = np.diag([r ** 2, r ** 2, cfg.init_velocity_std ** 2,
                     cfg.init_velocity_std ** 2])
        track = TrackState(track_id=self.next_id,
                           x=np.array([det.u, det.v, 0.0, 0.0]), P=P, t=t,
                           history=deque([True] if frame_step else [],
                                         maxlen=cfg.confirm_window))
        if det.is_rf:
            track.rf_hits = 1
            if det.label:
                track.vote(det.label, t)
        self.next_id += 1
        self.tracks.append(track)
        logger.debug('track %d spawned at (%.1f, %.1f)', track.track_id,
                     det.u, det.v)
        return track

    def predict_to(self, t: float) -> None:
        for tr in self.live:
            dt = t - tr.t
            if dt > 0:
                x, P = kalman.predict(tr.x, tr.P, dt, self.config.q)
                tr.x, tr.P, tr.t = x, self._repair(P), t

    def _held_labels(self) -> set:
        return {tr.device_label for tr in self.live
                if tr.status == CONFIRMED and tr.provenance == RF_FINGERPRINT}

    def step(self, detections: Sequence[Detection2D], t: float,
             frame_step: bool=True) -> List[TrackState]:
        """Advance all tracks to ``t`` and process the detections taken at
        ``t``.  Misses and confirmations are only counted on frame steps.

        """
        cfg = self.config
        if self.t is not None and t < self.t:
            raise DataError('time went backwards: {} < {}'.format(t, self.t))
        rf = [d for d in detections if d.is_rf]
        measured = [d for d in detections if not d.is_rf]
        label_only = []
        if cfg.rf_as_measurement:
            held = self._held_labels() if cfg.rf_until_labeled else set()
            for det in rf:
                (label_only if det.label and det.label in held
                 else measured).append(det)
        else:
            label_only = rf

        self.predict_to(t)
        live = self.live
        cost = np.array([[kalman.mahalanobis2(tr.x, tr.P, (d.u, d.v),
                                              cfg.noise(d.source))
                          for d in measured] for tr in live]
                        ).reshape(len(live), len(measured))
        assignment = hungarian_assign(cost, cfg.gate_value)

        matched = set()
        for row, col in assignment.matches:
            tr, det = live[row], measured[col]
            x, P, nis = kalman.update(tr.x, tr.P, (det.u, det.v),
                                      cfg.noise(det.source))
            tr.x, tr.P = x, self._repair(P)
            self.nis.append(nis)
            tr.hits += 1
            tr.misses = 0
            matched.add(tr.track_id)
            if det.is_rf:
                tr.rf_hits += 1
                if det.label:
                    tr.vote(det.label, t)
            self.associations.append(Association(
                t=t, track_id=tr.track_id, source=det.source,
                u=float(det.u), v=float(det.v), label=det.label))

        if frame_step:
            for tr in live:
                hit = tr.track_id in matched
                tr.history.append(hit)
                if not hit:
                    tr.misses += 1
                self._transition(tr, t)

        confirmed = [row for row, tr in enumerate(live)
                     if tr.status == CONFIRMED]
        for col in assignment.unassigned_cols:
            det = measured[col]
            if confirmed and \
                    cost[confirmed, col].min() <= cfg.spawn_gate_value:
                logger.debug('detection at (%.1f, %.1f) left unassigned '
                             'next to a confirmed track', det.u, det.v)
                if det.is_rf:
                    label_only.append(det)
                continue
            track = self.spawn(det, t, frame_step)
            self.associations.append(Association(
                t=t, track_id=track.track_id, source=det.source,
                u=float(det.u), v=float(det.v), label=det.label))

        if label_only:
            assign_device_labels(self.tracks, label_only, cfg.label_radius_px)
        self.t = t
        return self.tracks

    def _transition(self, tr: TrackState, t: float) -> None:
        cfg = self.config
        if tr.status == TENTATIVE:
            if sum(tr.history) >= cfg.m_confirm:
                tr.status = CONFIRMED
                tr.confirmed_t = t
                if tr.provenance == NO_LABEL:
                    tr.provenance = HUNGARIAN_NOTIONAL
                logger.info('track %d confirmed at %.3f s', tr.track_id, t)
            elif list(tr.history).count(False) > \
                    cfg.confirm_window - cfg.m_confirm:
                tr.status = DELETED
        elif tr.misses >= cfg.n_miss:
            tr.status = DELETED
            logger.info('track %d deleted at %.3f s', tr.track_id, t)

    def _emit(self, g: float) -> None:
        for tr in self.live:
            if tr.first_t <= g:
                self.records.append(tr.record(g))

    def run(self, stream: Iterable[Detection2D],
            frame_times: Iterable[float]=()) -> 'Tracker':
        """Process a time ordered detection stream.

        :param stream:  Detections on the unified timeline (see
                        :func:`align_timeline`).
        :param frame_times:  Times of the EO frames.  Every frame time is a
                             frame step even without detections.

        Track states are recorded every ``1 / output_rate`` seconds.

        """
        groups = {}
        for det in stream:
            groups.setdefault(float(det.t), []).append(det)
        frames = {float(t) for t in frame_times}
        frames.update(t for t, dets in groups.items()
                      if any(not d.is_rf for d in dets))
        times = sorted(set(groups) | frames)
        if not times:
            return self

        rate = self.config.output_rate
        k = math.ceil(times[0] * rate - 1e-9)
        for t in times:
            while k / rate < t - 1e-12:
                self._emit(k / rate)
                k += 1
            self.step(groups.get(t, []), t, frame_step=t in frames)
        while k / rate <= times[-1] + 1e-12:
            self._emit(k / rate)
            k += 1
        logger.info('%d tracks, %d confirmed, %d covariance repairs',
                    len(self.tracks),
                    sum(tr.confirmed_t is not None for tr in self.tracks),
                    self.repairs)
        return self

    def summaries(self) -> List[TrackSummary]:
        return [tr.summary() for tr in self.tracks]


def track_step(tracks: Sequence[TrackState], detections: Sequence[Detection2D],
               cfg: FusionConfig, dt: float) -> List[TrackState]:
    """One frame step of ``dt`` seconds after the latest track time.

    :raises DataError:  If ``dt`` is not positive.

    """
    if not dt > 0:
        raise DataError('dt must be positive')
    tracker = Tracker(cfg, tracks)
    t = (tracker.t if tracker.t is not None else 0.0) + dt
    return tracker.step(detections, t, frame_step=True)
