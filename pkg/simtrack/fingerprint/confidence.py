# -*- coding: utf-8 -*-
import csv
import os
import logging
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from ..model import format_value
from ..exceptions import DataError, EmptyStream, MissingInput, ParseError, \
    ConfidenceClamped


logger = logging.getLogger(__name__)

DEFAULT_LABELS = ('IF1200', 'Mavic', 'Phantom', 'm600')


class ClassSet(tuple):
    """Ordered, distinct device classes.

    :Example:

        >>> ClassSet()
        ClassSet('IF1200', 'Mavic', 'Phantom', 'm600')

    """
    def __new__(cls, labels: Iterable[str]=DEFAULT_LABELS):
        labels = tuple(str(label) for label in labels)
        if not labels:
            raise DataError('a class set needs at least one label')
        if len(set(labels)) != len(labels):
            raise DataError('class labels must be distinct')
        return super().__new__(cls, labels)

    def __repr__(self):
        return '{}({})'.format(self.__class__.__name__,
                               ', '.join(repr(label) for label in self))


@dataclass
class ConfidenceVector(object):
    """Per class confidence in ``[0, 1]`` at time ``t``.  Values need not
    sum to one.

    """
    t: float
    conf: Dict[str, float]
    sensor_id: Optional[str] = None
    truth: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for label, value in self.conf.items():
            if not 0.0 <= value <= 1.0:
                raise DataError('confidence {} for {} outside [0, 1]'.format(
                    value, label))

    @property
    def labels(self) -> List[str]:
        return list(self.conf)

    def best(self) -> str:
        """The label with the largest confidence (first on ties)."""
        return max(self.conf, key=lambda label: self.conf[label])


def declare_class(conf: ConfidenceVector, threshold: float=None
                  ) -> Optional[str]:
    """Take the maximum over the trained classes.  With a ``threshold``,
    ``None`` is returned unless the maximum reaches it.

    """
    label = conf.best()
    if threshold is not None and conf.conf[label] < threshold:
        return None
    return label


def average_confidence(stream: Sequence[ConfidenceVector]
                       ) -> Dict[str, float]:
    """Arithmetic mean per label over a stream.

    :raises EmptyStream:  For an empty stream.

    """
    stream = list(stream)
    if not stream:
        raise EmptyStream('no confidence vectors to average')
    labels = list(stream[0].conf)
    return {label: float(np.mean([v.conf.get(label, 0.0) for v in stream]))
            for label in labels}


def confusion_matrix(stream_by_truth: Mapping[str, Sequence[ConfidenceVector]],
                     labels: Sequence[str]=DEFAULT_LABELS
                     ) -> Dict[str, Dict[str, float]]:
    """Mean confidence per class for the vectors of every true class.
    True classes without vectors are left out.

    """
    rv = {}
    for truth in labels:
        stream = stream_by_truth.get(truth) or []
        if stream:
            avg = average_confidence(stream)
            rv[truth] = {label: avg.get(label, 0.0) for label in labels}
    return rv


def write_confusion(path, matrix: Mapping[str, Mapping[str, float]],
                    labels: Sequence[str]=DEFAULT_LABELS) -> None:
    with open(str(path), 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['truth'] + list(labels))
        for truth, row in matrix.items():
            writer.writerow([truth] + [format_value(float(row[label]))
                                       for label in labels])


def write_confidences(path, stream: Iterable[ConfidenceVector],
                      labels: Sequence[str]=DEFAULT_LABELS) -> int:
    """Write the ``t,<label>...`` confidence csv; returns the row count."""
    count = 0
    with open(str(path), 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['t'] + list(labels))
        for vec in stream:
            writer.writerow([format_value(float(vec.t))] + [
                format_value(float(vec.conf.get(label, 0.0)))
                for label in labels])
            count += 1
    return count


def ingest_external_confidences(path, labels: Sequence[str]=None
                                ) -> List[ConfidenceVector]:
    """Read a confidence csv (header ``t`` followed by one column per
    label).  Values are clamped to ``[0, 1]`` with a
    :class:`ConfidenceClamped` warning; the result is sorted by ``t``.

    :param labels:  Expected label columns, default: the header's columns.

    :raises ParseError:  With the line number of a malformed row.

    """
    path = str(path)
    if not os.path.isfile(path):
        raise MissingInput('confidence file not found: {}'.format(path))
    rv = []
    clamped = 0
    with open(path, newline='') as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if header and header[0] != 't':
            raise ParseError('first column must be t', line=1, path=path)
        columns = list(labels) if labels is not None else header[1:]
        missing = [c for c in columns if c not in header]
        if header and missing:
            raise ParseError('missing columns: {}'.format(', '.join(missing)),
                             line=1, path=path)
        for row in reader:
            try:
                t = float(row['t'])
                values = {c: float(row[c]) for c in columns}
            except (TypeError, ValueError) as exc:
                raise ParseError(str(exc), line=reader.line_num, path=path)
            for label, value in values.items():
                if not 0.0 <= value <= 1.0:
                    clamped += 1
                    values[label] = float(np.clip(value, 0.0, 1.0))
            rv.append(ConfidenceVector(t=t, conf=values))
    if clamped:
        warnings.warn(ConfidenceClamped(
            '{} confidence values clamped to [0, 1] in {}'.format(clamped,
                                                                  path)))
        logger.warning('clamped %d confidence values in %s', clamped, path)
    rv.sort(key=lambda v: v.t)
    return rv
