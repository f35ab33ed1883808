# -*- coding: utf-8 -*-
"""The processing stages and the artifacts they exchange.

Every stage reads its inputs from and writes its outputs to the pipeline's
output directory, so stages can be run (and rerun) one at a time::

    simulate      scenario.json, frames/, iq/, eo_truth.csv, rf_truth.csv
    fingerprint   templates.bin, confusion.csv, confidences_<sensor>.csv
    localize-rf   rf_locations.csv
    detect-eo     detections_eo.csv
    fuse          tracks.csv, track_summary.csv, associations.csv
    evaluate      metrics.json

"""
import os
import json
import bisect
import logging
import dataclasses
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .base import BasePipeline
from .config import PipelineConfig, SectionParams
from .decorators import requires_inputs
from .detection import MaskParams, detect_stack, ingest_external_detections
from .evaluate import EvalParams, evaluate_run
from .fingerprint import (
    ConfidenceVector, ClassTemplates, FingerprintParams, TemplateClassifier,
    average_confidence, confusion_matrix, declare_class,
    ingest_external_confidences, load_templates, save_templates,
    train_templates, write_confidences, write_confusion
)
from .localization import SensorLayout, TdoaParams, localize, pairwise_tdoas
from .model import Association, Detection2D, EoTruth, RFLocation, RfTruth, \
    TrackRecord, TrackSummary, EO_RPCA, RF_PROJECTED
from .query import Query
from .rf import extract_fingerprint_vectors, prepare_for_tdoa, read_iq, \
    write_iq
from .rpca import RpcaParams, frame_batches, frame_files, load_frames, \
    rpca_tiled, write_pgm_frames
from .simulator import PRESETS, Scenario, generate_eo, iter_rf_epochs, \
    load_scenario, preset, save_scenario, simulate_fingerprint_pass
from .tracking import FusionConfig, Tracker, align_timeline, \
    project_rf_locations
from .exceptions import ConfigError, EvalUnavailable, InsufficientData, \
    MissingInput, NumericalError, TrainRequired, UnknownPreset


__all__ = ('EoParams', 'Pipeline')


logger = logging.getLogger(__name__)

SCENARIO_FILE = 'scenario.json'
FRAMES_DIR = 'frames'
IQ_DIR = 'iq'
EO_TRUTH = 'eo_truth.csv'
RF_TRUTH = 'rf_truth.csv'
TEMPLATES = 'templates.bin'
CONFUSION = 'confusion.csv'
RF_LOCATIONS = 'rf_locations.csv'
EO_DETECTIONS = 'detections_eo.csv'
TRACKS = 'tracks.csv'
TRACK_SUMMARY = 'track_summary.csv'
ASSOCIATIONS = 'associations.csv'
METRICS = 'metrics.json'


def confidences_file(sensor_id: str) -> str:
    return 'confidences_{}.csv'.format(sensor_id)


def iq_file(sensor_id: str) -> str:
    return os.path.join(IQ_DIR, '{}.iq'.format(sensor_id))


@dataclass
class EoParams(SectionParams):
    """Settings of the EO detection stage.

    ``frames`` is a frame directory or cube file (default: the simulated
    frames); ``external`` a detection csv used instead of running the
    decomposition.  Frames are decomposed in batches of ``batch`` frames,
    each split into ``tile_rows x tile_cols`` tiles.

    """
    frames: Optional[str] = None
    external: Optional[str] = None
    frame_rate: Optional[float] = None
    batch: int = 30
    tile_rows: int = 1
    tile_cols: int = 1

    def validate(self) -> None:
        if int(self.batch) < 2:
            raise ConfigError('batch must hold at least 2 frames')
        if int(self.tile_rows) < 1 or int(self.tile_cols) < 1:
            raise ConfigError('tile counts must be positive')
        if self.frame_rate is not None and not self.frame_rate > 0:
            raise ConfigError('frame_rate must be positive')


def label_fixes(fixes: Sequence[RFLocation],
                stream: Sequence[ConfidenceVector], span: float,
                threshold: float=None) -> int:
    """Set the ``label`` of every fix from the confidence vectors stamped
    within ``span`` seconds after it.  Returns the number of labelled
    fixes.

    """
    stream = sorted(stream, key=lambda cv: cv.t)
    times = [cv.t for cv in stream]
    count = 0
    for fix in fixes:
        lo = bisect.bisect_left(times, fix.t - 1e-9)
        hi = bisect.bisect_left(times, fix.t + span)
        if lo == hi:
            continue
        conf = ConfidenceVector(t=fix.t,
                                conf=average_confidence(stream[lo:hi]))
        fix.label = declare_class(conf, threshold)
        count += fix.label is not None
    return count


class Pipeline(BasePipeline):
    """Runs the stages for a :class:`PipelineConfig`.

    :param config:  The configuration, default: :data:`config.DEFAULTS`
                    with the environment defaults.

    :Example:

        >>> pipeline = Pipeline(PipelineConfig.load('run.json'))
        >>> report = pipeline.run_all()
        >>> report['confirmed_tracks']
        2

    """

    def __init__(self, config: PipelineConfig=None) -> None:
        if config is None:
            config = PipelineConfig.load()
        super().__init__(**config)
        self.config = config

    def params(self, cls, section: str):
        """Build ``cls`` from a configuration section."""
        return cls.from_mapping(self.config.section(section))

    def exists(self, *parts: str) -> bool:
        return os.path.exists(self.path(*parts))

    # scenario
    def scenario(self) -> Scenario:
        """The configured scenario: a preset name or a scenario file, with
        ``SCENARIO_OVERRIDES`` and ``SEED`` applied.

        :raises UnknownPreset:  If ``SCENARIO`` is neither.

        """
        name = self.config.get('SCENARIO')
        seed = self.seed
        if name in PRESETS:
            scn = preset(name, seed or 0)
        else:
            path = self.config.resolve_path(name) if name else None
            if path is None or not (str(name).endswith('.json') or
                                    os.path.isfile(path)):
                raise UnknownPreset('unknown scenario preset {!r}, choose '
                                    'one of {}'.format(
                                        name, ', '.join(sorted(PRESETS))))
            scn = load_scenario(path)
            if seed is not None:
                scn = scn.replace(seed=seed)
        overrides = self.config.get('SCENARIO_OVERRIDES') or {}
        if overrides:
            scn = scn.replace(**overrides)
        return scn

    @requires_inputs(SCENARIO_FILE)
    def load_scenario_artifact(self) -> Scenario:
        """The scenario written by :meth:`simulate`."""
        return load_scenario(self.path(SCENARIO_FILE))

    def _scenario_or_none(self) -> Optional[Scenario]:
        if self.exists(SCENARIO_FILE):
            return self.load_scenario_artifact()
        return None

    def tdoa_params(self, scn: Scenario) -> TdoaParams:
        """The ``TDOA`` section with the scenario filling what it leaves
        out: the RF clock offsets and the flight altitude.

        """
        params = self.params(TdoaParams, 'TDOA')
        changes = {}
        if params.clock_offsets is None:
            changes['clock_offsets'] = dict(scn.rf_offsets)
        if params.altitude is None and scn.flight_altitude is not None:
            changes['altitude'] = scn.flight_altitude
        return dataclasses.replace(params, **changes) if changes else params

    def localization_groups(self, scn: Scenario, params: TdoaParams
                            ) -> List[SensorLayout]:
        """Sensor layouts localized together, with their reference sensor.
        Groups of fewer than 3 sensors are left out.

        """
        rv = []
        for group in params.groups or scn.groups():
            unknown = [sid for sid in group if sid not in scn.sensors]
            if unknown:
                raise ConfigError('unknown sensors in TDOA.groups: {}'.format(
                    ', '.join(unknown)))
            if len(group) < 3:
                logger.warning('skipping group %s, need 3 sensors', group)
                continue
            ref = params.reference if params.reference in group else None
            rv.append(scn.sensors.subset(group, ref))
        return rv

    # stages
    def simulate(self) -> Scenario:
        """Synthesize the frames, IQ captures and truth of the scenario."""
        scn = self.scenario()
        os.makedirs(self.path(IQ_DIR), exist_ok=True)
        save_scenario(scn, self.path(SCENARIO_FILE))

        if os.path.isdir(self.path(FRAMES_DIR)):
            for name in frame_files(self.path(FRAMES_DIR)):
                os.remove(name)
        eo = generate_eo(scn)
        write_pgm_frames(eo.frames, self.path(FRAMES_DIR))
        EoTruth.write_csv(self.path(EO_TRUTH), eo.truth)

        for sid in scn.sensors.ids:
            write_iq(self.path(iq_file(sid)), [])
        truth = []
        epochs = 0
        for epoch in iter_rf_epochs(scn):
            for sid, cap in epoch.captures.items():
                write_iq(self.path(iq_file(sid)), [cap], append=True)
            truth.extend(epoch.truth)
            epochs += 1
        RfTruth.write_csv(self.path(RF_TRUTH), truth)
        logger.info('simulated %s: %d frames, %d capture epochs on %d '
                    'sensors', scn.name, len(eo.frames), epochs,
                    len(scn.sensors))
        return scn

    def templates(self, params: FingerprintParams, seed: int=0
                  ) -> ClassTemplates:
        """Load the configured templates or train them on simulated passes.

        :raises TrainRequired:  If training is off and no stored templates
                                exist.

        """
        if params.templates:
            path = self.config.resolve_path(params.templates)
            if os.path.exists(path):
                return load_templates(path)
            if not params.train:
                raise TrainRequired('templates {} not found and training is '
                                    'off'.format(path))
        elif not params.train:
            raise TrainRequired('no FINGERPRINT.templates configured and '
                                'training is off')
        vectors = self.fingerprint_passes(params, params.train_passes, seed)
        return train_templates(vectors, params.labels, params.min_vectors)

    def fingerprint_passes(self, params: FingerprintParams,
                           passes: Sequence[int], seed: int=0) -> List:
        jobs = [(label, p) for label in params.labels for p in passes]

        def run(job):
            return simulate_fingerprint_pass(job[0], job[1],
                                             params.vectors_per_pass, seed)

        with self.executor_ctx() as pool:
            results = list(pool.map(run, jobs))
        return [v for vectors in results for v in vectors]

    @requires_inputs(SCENARIO_FILE)
    def fingerprint(self) -> Dict[str, str]:
        """Classify the captures of every group's reference sensor.

        Writes ``templates.bin`` and ``confusion.csv`` (mean confidences of
        the held out test passes) when templates are used, and one
        ``confidences_<sensor>.csv`` per reference sensor.  Returns the
        confidence files by sensor.

        """
        params = self.params(FingerprintParams, 'FINGERPRINT')
        scn = self.load_scenario_artifact()
        tdoa = self.tdoa_params(scn)
        refs = [layout.reference_id
                for layout in self.localization_groups(scn, tdoa)]
        unknown = sorted(set(params.confidences) - set(refs))
        if unknown:
            raise ConfigError('external confidences for sensors that are '
                              'not a group reference: {}'.format(
                                  ', '.join(unknown)))

        classifier = None
        needs_templates = any(ref not in params.confidences for ref in refs)
        if needs_templates or params.train or params.templates:
            templates = self.templates(params, scn.seed)
            save_templates(self.path(TEMPLATES), templates)
            classifier = TemplateClassifier(templates, params.kappa)
            if params.test_passes:
                by_truth = defaultdict(list)
                for v in self.fingerprint_passes(params, params.test_passes,
                                                 scn.seed):
                    by_truth[v.device_truth].append(classifier.classify(v))
                write_confusion(self.path(CONFUSION),
                                confusion_matrix(by_truth, templates.labels),
                                templates.labels)

        rv = {}
        for ref in refs:
            if ref in params.confidences:
                stream = ingest_external_confidences(
                    self.config.resolve_path(params.confidences[ref]),
                    params.labels)
                labels = params.labels
            else:
                caps = read_iq(self.path(iq_file(ref)),
                               tdoa.clock_offset(ref))
                with self.executor_ctx() as pool:
                    found = list(pool.map(extract_fingerprint_vectors, caps))
                stream = [classifier.classify(v)
                          for vectors in found for v in vectors]
                labels = classifier.labels
            rv[ref] = self.path(confidences_file(ref))
            write_confidences(rv[ref], stream, labels)
            logger.info('%s: %d confidence vectors', ref, len(stream))
        return rv

    def _localize_epoch(self, layout: SensorLayout, caps,
                        params: TdoaParams) -> Optional[RFLocation]:
        prepared = {cap.sensor_id: prepare_for_tdoa(cap, params.rate)
                    for cap in caps}
        tdoas = pairwise_tdoas(prepared, layout, params)
        if len(tdoas) < 2:
            logger.debug('%d usable pairs at %s, no fix', len(tdoas),
                         caps[0].start)
            return None
        try:
            return localize(tdoas, layout, params)
        except (NumericalError, InsufficientData) as exc:
            logger.info('no fix at %s: %s', caps[0].start, exc)
            return None

    @requires_inputs(SCENARIO_FILE)
    def localize_rf(self) -> List[RFLocation]:
        """TDOA position fixes of every capture epoch and sensor group,
        labelled from the group reference's confidences when present.

        """
        fp = self.params(FingerprintParams, 'FINGERPRINT')
        scn = self.load_scenario_artifact()
        params = self.tdoa_params(scn)

        fixes = []
        for layout in self.localization_groups(scn, params):
            records = [read_iq(self.path(iq_file(sid)),
                               params.clock_offset(sid))
                       for sid in layout.ids]
            if len({len(r) for r in records}) > 1:
                logger.warning('sensors %s hold different record counts, '
                               'using the common epochs', layout.ids)
            epochs = list(zip(*records))
            with self.executor_ctx() as pool:
                found = [f for f in pool.map(
                    lambda caps: self._localize_epoch(layout, caps, params),
                    epochs) if f is not None]

            conf_path = self.path(confidences_file(layout.reference_id))
            if os.path.exists(conf_path):
                stream = ingest_external_confidences(conf_path)
                labelled = label_fixes(found, stream, scn.rf_epoch,
                                       fp.threshold)
                logger.info('%s: %d of %d fixes labelled',
                            layout.reference_id, labelled, len(found))
            fixes.extend(found)

        fixes.sort(key=lambda f: f.t)
        RFLocation.write_csv(self.path(RF_LOCATIONS), fixes)
        logger.info('wrote %d RF fixes', len(fixes))
        return fixes

    def detect_eo(self) -> List[Detection2D]:
        """EO detections from the low-rank plus sparse decomposition of the
        frames, or from an external detector's csv.

        """
        params = self.params(EoParams, 'EO')
        scn = self._scenario_or_none()
        if params.external:
            dets = ingest_external_detections(
                self.config.resolve_path(params.external),
                scn.frame_size if scn else None)
        else:
            rate = params.frame_rate or (scn.frame_rate if scn else None)
            if rate is None:
                raise ConfigError('EO.frame_rate is needed without a '
                                  'simulated scenario')
            source = self.config.resolve_path(params.frames) \
                if params.frames else self.path(FRAMES_DIR)
            frames = load_frames(source)
            count = frames.shape[0]
            if count < 2:
                raise InsufficientData('need at least 2 frames in {}'.format(
                    source))
            rpca = self.params(RpcaParams, 'RPCA')
            mask = self.params(MaskParams, 'MASK')
            times = np.arange(count) / float(rate)
            dets = []
            with self.executor_ctx() as pool:
                for start, stop in frame_batches(count, int(params.batch)):
                    sparse = rpca_tiled(frames[start:stop],
                                        int(params.tile_rows),
                                        int(params.tile_cols), rpca,
                                        executor=pool)
                    dets.extend(detect_stack(sparse, times[start:stop], mask,
                                             executor=pool))
        os.makedirs(self.output_dir, exist_ok=True)
        Detection2D.write_csv(self.path(EO_DETECTIONS), dets)
        logger.info('wrote %d EO detections', len(dets))
        return dets

    @requires_inputs(EO_DETECTIONS)
    def fuse(self) -> Tracker:
        """Align the detection streams, track and label."""
        config = self.params(FusionConfig, 'FUSION')
        scn = self._scenario_or_none()
        streams = [Query(self.path(EO_DETECTIONS), Detection2D).all()]
        if self.config.get('USE_RF'):
            if not self.exists(RF_LOCATIONS):
                raise MissingInput('fuse with USE_RF needs {}, run '
                                   'localize-rf first'.format(
                                       self.path(RF_LOCATIONS)))
            if scn is None:
                raise MissingInput('projecting RF fixes needs the camera of '
                                   '{}'.format(self.path(SCENARIO_FILE)))
            locs = Query(self.path(RF_LOCATIONS), RFLocation).all()
            streams.append(project_rf_locations(locs, scn.camera))

        frame_times = ()
        if scn is not None:
            frame_times = scn.frame_times - config.offsets.get(EO_RPCA, 0.0)
        stream = align_timeline(streams, config.offsets,
                                anchors=[float(t) for t in frame_times])
        tracker = Tracker(config).run(stream, frame_times)

        TrackRecord.write_csv(self.path(TRACKS), tracker.records)
        TrackSummary.write_csv(self.path(TRACK_SUMMARY), tracker.summaries())
        Association.write_csv(self.path(ASSOCIATIONS), tracker.associations)
        return tracker

    @requires_inputs(SCENARIO_FILE, TRACKS, TRACK_SUMMARY, ASSOCIATIONS)
    def evaluate(self) -> Dict:
        """Score the fusion output against the simulator truth and write
        ``metrics.json``.

        :raises EvalUnavailable:  Without ``eo_truth.csv``.

        """
        if not self.exists(EO_TRUTH):
            raise EvalUnavailable('no truth at {}, evaluation needs a '
                                  'simulated scenario'.format(
                                      self.path(EO_TRUTH)))
        params = self.params(EvalParams, 'EVALUATE')
        fusion = self.params(FusionConfig, 'FUSION')
        scn = self.load_scenario_artifact()

        def read(name, model):
            return Query(self.path(name), model).all() \
                if self.exists(name) else ()

        report = evaluate_run(
            truth=Query(self.path(EO_TRUTH), EoTruth).all(),
            devices=[t.device for t in scn.targets],
            frame_rate=scn.frame_rate,
            associations=read(ASSOCIATIONS, Association),
            records=read(TRACKS, TrackRecord),
            summaries=read(TRACK_SUMMARY, TrackSummary),
            detections=read(EO_DETECTIONS, Detection2D),
            rf_locations=read(RF_LOCATIONS, RFLocation),
            rf_offset=fusion.offsets.get(RF_PROJECTED, 0.0),
            params=params,
        )
        report['scenario'] = scn.name
        report['seed'] = scn.seed
        with open(self.path(METRICS), 'w') as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write('\n')
        return report

    def run_all(self) -> Dict:
        """Every stage in order, sharing one executor."""
        with self.shared_executor():
            self.simulate()
            if self.config.get('USE_RF'):
                self.fingerprint()
                self.localize_rf()
            self.detect_eo()
            self.fuse()
            return self.evaluate()
