# -*- coding: utf-8 -*-
"""Template classifier over burst features.

Every class is summarised by the centre and spread of each feature: the
median and median absolute deviation of a scalar feature, the per dimension
mean and standard deviation of a vector feature.  A vector's distance to a
class is the mean standardized squared distance over a feature's
dimensions, averaged over the features, and its confidence is
``exp(-D**2 / (2 * kappa))``.

"""
import io
import os
import zipfile
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .classifier_abc import ClassifierABC
from .confidence import ClassSet, ConfidenceVector, DEFAULT_LABELS
from .features import FEATURES, extract_features
from ..config import SectionParams
from ..rf import FingerprintVector, FINGERPRINT_FS
from ..exceptions import ConfigError, InsufficientData, MissingInput, \
    ParseError, DataError


logger = logging.getLogger(__name__)

TEMPLATE_MAGIC = b'STPL'
TEMPLATE_VERSION = 1
MIN_VECTORS = 50
KAPPA = 20.0
SPREAD_FLOOR = 0.5
MAD_SCALE = 1.4826

MIN_SPREAD = {
    'rise_time': 8.0 / FINGERPRINT_FS,
    'burst_length': 8.0 / FINGERPRINT_FS,
    'bandwidth': 2e3,
    'cfo': 1e3,
    'leakage': 0.5,
    'iq_imbalance': 0.02,
}
"""Smallest spread of the scalar features: 8 samples for the times, Hz,
dB and a plain ratio."""


@dataclass
class FingerprintParams(SectionParams):
    """Settings of the fingerprint stage.

    ``templates`` is an optional stored template blob used instead of
    training; with ``train`` off it must exist.  ``confidences`` maps a
    reference sensor to an external confidence csv used instead of
    classifying that sensor's captures.

    """
    labels: List[str] = field(default_factory=lambda: list(DEFAULT_LABELS))
    kappa: float = KAPPA
    threshold: Optional[float] = None
    min_vectors: int = MIN_VECTORS
    train_passes: List[int] = field(default_factory=lambda: [13, 15])
    test_passes: List[int] = field(default_factory=lambda: [14, 16])
    vectors_per_pass: int = 60
    templates: Optional[str] = None
    train: bool = True
    confidences: Dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        if not self.kappa > 0:
            raise ConfigError('kappa must be positive')
        if self.threshold is not None and not 0 <= self.threshold <= 1:
            raise ConfigError('threshold must be in [0, 1]')
        if self.min_vectors < 1 or self.vectors_per_pass < 1:
            raise ConfigError('vector counts must be positive')
        if not isinstance(self.confidences, dict):
            raise ConfigError('confidences must map sensor ids to files')
        if set(self.train_passes) & set(self.test_passes):
            raise ConfigError('train and test passes must be disjoint')
        try:
            ClassSet(self.labels)
        except DataError as exc:
            raise ConfigError(str(exc))


def _feature_matrix(vectors: Sequence[FingerprintVector], name: str
                    ) -> np.ndarray:
    return np.vstack([extract_features(v.iq, v.fs)[name] for v in vectors])


def _canonical(rows: np.ndarray) -> np.ndarray:
    """Rows in a fixed order, so reductions do not depend on input order."""
    order = np.lexsort(rows.T[::-1])
    return rows[order]


def _statistics(name: str, rows: np.ndarray
                ) -> Tuple[np.ndarray, np.ndarray]:
    """Centre and spread of one feature over a class.

    Scalar features use the median and the scaled median absolute
    deviation, floored at :data:`MIN_SPREAD`; vector features use the mean
    and standard deviation per dimension, floored at half their rms.

    """
    if rows.shape[1] == 1:
        centre = np.median(rows, axis=0)
        spread = MAD_SCALE * np.median(np.abs(rows - centre), axis=0)
        return centre, np.maximum(spread, MIN_SPREAD.get(name, 1e-12))
    mean = rows.mean(axis=0)
    spread = rows.std(axis=0)
    floor = SPREAD_FLOOR * np.sqrt(np.mean(spread ** 2))
    return mean, np.maximum(spread, max(floor, 1e-12))


class ClassTemplates(object):
    """Per class feature statistics.

    :param labels:  The ordered classes.
    :param stats:  ``{label: {feature: (mean, spread)}}`` with 1-D arrays.

    """
    def __init__(self, labels: Iterable[str],
                 stats: Dict[str, Dict[str, Tuple[np.ndarray, np.ndarray]]]
                 ) -> None:
        self.labels = ClassSet(labels)
        missing = [label for label in self.labels if label not in stats]
        if missing:
            raise DataError('no statistics for {}'.format(', '.join(missing)))
        self.stats = {
            label: {name: (np.asarray(mean, dtype=float),
                           np.asarray(spread, dtype=float))
                    for name, (mean, spread) in stats[label].items()}
            for label in self.labels
        }

    def mean(self, label: str, feature: str) -> np.ndarray:
        return self.stats[label][feature][0]

    def spread(self, label: str, feature: str) -> np.ndarray:
        return self.stats[label][feature][1]

    def distance(self, features: Dict[str, np.ndarray], label: str) -> float:
        """Squared normalized distance of ``features`` to a class."""
        per_feature = []
        for name, (mean, spread) in self.stats[label].items():
            z = (features[name] - mean) / spread
            per_feature.append(float(np.mean(z * z)))
        return float(np.mean(per_feature))

    def __eq__(self, other):
        if not isinstance(other, ClassTemplates):
            return NotImplemented
        if self.labels != other.labels:
            return False
        for label in self.labels:
            if set(self.stats[label]) != set(other.stats[label]):
                return False
            for name, (mean, spread) in self.stats[label].items():
                om, os_ = other.stats[label][name]
                if not (np.array_equal(mean, om) and
                        np.array_equal(spread, os_)):
                    return False
        return True

    __hash__ = None

    def __repr__(self):
        return '{}(labels={!r})'.format(self.__class__.__name__,
                                        tuple(self.labels))


def train_templates(data: Iterable[FingerprintVector],
                    labels: Sequence[str]=None,
                    min_vectors: int=MIN_VECTORS) -> ClassTemplates:
    """Build :class:`ClassTemplates` from labelled vectors.

    :param labels:  Classes to train, default: the labels seen, in
                    :data:`DEFAULT_LABELS` order where known.
    :param min_vectors:  Vectors required per class.

    :raises InsufficientData:  If a class has fewer than ``min_vectors``
                               vectors.

    """
    by_label = defaultdict(list)
    for vec in data:
        if vec.device_truth is None:
            raise DataError('training vectors need a device label')
        by_label[vec.device_truth].append(vec)
    if labels is None:
        labels = [lb for lb in DEFAULT_LABELS if lb in by_label] + sorted(
            lb for lb in by_label if lb not in DEFAULT_LABELS)
    stats = {}
    for label in labels:
        vectors = by_label.get(label, [])
        if len(vectors) < min_vectors:
            raise InsufficientData('{} training vectors for {}, need {}'
                                   .format(len(vectors), label, min_vectors))
        stats[label] = {}
        feats = [extract_features(v.iq, v.fs) for v in vectors]
        for name in FEATURES:
            rows = _canonical(np.vstack([f[name] for f in feats]))
            stats[label][name] = _statistics(name, rows)
        logger.info('trained %s on %d vectors', label, len(vectors))
    return ClassTemplates(labels, stats)


class TemplateClassifier(ClassifierABC):
    """Classifier backed by :class:`ClassTemplates`.

    :param templates:  Trained templates.
    :param kappa:  Distance scale of the confidence squashing.

    """
    def __init__(self, templates: ClassTemplates, kappa: float=KAPPA) -> None:
        self.templates = templates
        self.kappa = float(kappa)

    @property
    def labels(self) -> ClassSet:
        return self.templates.labels

    def classify(self, vector: FingerprintVector) -> ConfidenceVector:
        feats = extract_features(vector.iq, vector.fs)
        conf = {}
        for label in self.labels:
            d2 = self.templates.distance(feats, label)
            conf[label] = float(np.exp(-d2 / (2.0 * self.kappa)))
        return ConfidenceVector(t=vector.window_t, conf=conf,
                                sensor_id=vector.sensor_id,
                                truth=vector.device_truth)


def classify(v: FingerprintVector, tpl: ClassTemplates,
             kappa: float=KAPPA) -> ConfidenceVector:
    """Confidence per class of ``v`` against ``tpl``."""
    return TemplateClassifier(tpl, kappa).classify(v)


def dump_templates(tpl: ClassTemplates) -> bytes:
    """The versioned binary form of ``tpl``: magic, little endian ``u2``
    schema version, then an ``npz`` archive.

    """
    arrays = {'labels': np.array(list(tpl.labels), dtype='U')}
    for i, label in enumerate(tpl.labels):
        for name, (mean, spread) in tpl.stats[label].items():
            arrays['{}:{}:mean'.format(i, name)] = mean
            arrays['{}:{}:spread'.format(i, name)] = spread
    buf = io.BytesIO()
    np.savez(buf, **arrays)
    return TEMPLATE_MAGIC + np.array(TEMPLATE_VERSION, '<u2').tobytes() + \
        buf.getvalue()


def loads_templates(blob: bytes) -> ClassTemplates:
    """Inverse of :func:`dump_templates`.

    :raises ParseError:  On a bad magic, an unknown version or a damaged
                         archive.

    """
    if blob[:4] != TEMPLATE_MAGIC:
        raise ParseError('not a template blob (magic {!r})'.format(blob[:4]))
    if len(blob) < 6:
        raise ParseError('truncated template blob')
    version = int(np.frombuffer(blob[4:6], '<u2')[0])
    if version != TEMPLATE_VERSION:
        raise ParseError('unsupported template version {}'.format(version))
    try:
        with np.load(io.BytesIO(blob[6:]), allow_pickle=False) as archive:
            labels = [str(lb) for lb in archive['labels']]
            stats = {label: {} for label in labels}
            for key in archive.files:
                if key == 'labels':
                    continue
                index, name, kind = key.split(':')
                label = labels[int(index)]
                mean, spread = stats[label].get(name, (None, None))
                if kind == 'mean':
                    mean = archive[key]
                else:
                    spread = archive[key]
                stats[label][name] = (mean, spread)
    except (OSError, ValueError, KeyError, IndexError,
            zipfile.BadZipFile) as exc:
        raise ParseError('damaged template blob: {}'.format(exc))
    return ClassTemplates(labels, stats)


def save_templates(path, tpl: ClassTemplates) -> None:
    with open(str(path), 'wb') as fh:
        fh.write(dump_templates(tpl))


def load_templates(path) -> ClassTemplates:
    path = str(path)
    if not os.path.isfile(path):
        raise MissingInput('template file not found: {}'.format(path))
    with open(path, 'rb') as fh:
        blob = fh.read()
    try:
        return loads_templates(blob)
    except ParseError as exc:
        raise ParseError(str(exc), path=path)
