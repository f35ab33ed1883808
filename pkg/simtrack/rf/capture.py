# -*- coding: utf-8 -*-
"""Capture records and the IQ file format.

An IQ file is a sequence of records.  Every record is a 40 byte little
endian header (``magic, fs, f_center, t0, sensor_id, n``) followed by ``n``
interleaved float32 ``(I, Q)`` pairs.

"""
import os
import logging
from dataclasses import dataclass, field
from typing import Iterator, Iterable, List, Optional, Any

import numpy as np

from ..utils import sensor_number, sensor_name
from ..exceptions import DataError, MissingInput, ParseError


logger = logging.getLogger(__name__)

IQ_MAGIC = b'SIQ1'

IQ_HEADER = np.dtype([
    ('magic', 'S4'),
    ('fs', '<f8'),
    ('f_center', '<f8'),
    ('t0', '<f8'),
    ('sensor_id', '<u4'),
    ('n', '<u8'),
])

IQ_SAMPLE = np.dtype('<c8')

MAX_CLOCK_OFFSET = 60.0

FINGERPRINT_FS = 250e3
FINGERPRINT_LENGTH = 2600


@dataclass
class RFCapture(object):
    """A stretch of complex baseband samples from one sensor.

    ``t0`` is the time of the first sample on the sensor's clock;
    ``clock_offset`` is that clock minus the unified timeline.

    """
    samples: np.ndarray
    fs: float
    f_center: float
    t0: float
    sensor_id: str
    clock_offset: float = 0.0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.ndim != 1:
            raise DataError('capture samples must be 1-D')
        if not self.fs > 0:
            raise DataError('fs must be positive')
        if not np.all(np.isfinite(self.samples)):
            raise DataError('capture holds non-finite samples')
        if abs(self.clock_offset) >= MAX_CLOCK_OFFSET:
            raise DataError('clock offset {} s out of range'.format(
                self.clock_offset))
        self.sensor_id = str(self.sensor_id)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        return self.n / self.fs

    @property
    def start(self) -> float:
        """Time of the first sample on the unified timeline."""
        return self.t0 - self.clock_offset

    def replace(self, **changes) -> 'RFCapture':
        values = dict(samples=self.samples, fs=self.fs,
                      f_center=self.f_center, t0=self.t0,
                      sensor_id=self.sensor_id,
                      clock_offset=self.clock_offset)
        values.update(changes)
        return RFCapture(**values)

    def __add__(self, other: 'RFCapture') -> 'RFCapture':
        if (other.fs, other.n, other.t0) != (self.fs, self.n, self.t0):
            raise DataError('captures are not aligned')
        return self.replace(samples=self.samples + other.samples)

    def __repr__(self):
        return '{}(sensor_id={!r}, fs={}, f_center={}, t0={}, n={})'.format(
            self.__class__.__name__, self.sensor_id, self.fs, self.f_center,
            self.t0, self.n)


@dataclass
class FingerprintVector(object):
    """A 2600 sample burst at 250 kHz starting at its rising edge."""

    iq: np.ndarray
    window_t: float
    fs: float = FINGERPRINT_FS
    device_truth: Optional[str] = None
    sensor_id: Optional[str] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.iq = np.asarray(self.iq, dtype=complex)
        if self.iq.shape != (FINGERPRINT_LENGTH,):
            raise DataError('fingerprint vectors hold {} samples, got {}'
                            .format(FINGERPRINT_LENGTH, self.iq.shape))
        if self.fs != FINGERPRINT_FS:
            raise DataError('fingerprint vectors are sampled at 250 kHz')


def iter_iq(path, clock_offset: float=0.0) -> Iterator[RFCapture]:
    """Yield the records of an IQ file one at a time.

    :raises MissingInput:  If the file does not exist.
    :raises ParseError:  On a bad magic or a truncated record.

    """
    path = str(path)
    if not os.path.isfile(path):
        raise MissingInput('IQ file not found: {}'.format(path))
    with open(path, 'rb') as fh:
        record = 0
        while True:
            raw = fh.read(IQ_HEADER.itemsize)
            if not raw:
                return
            if len(raw) != IQ_HEADER.itemsize:
                raise ParseError('truncated header in record {}'.format(
                    record), path=path)
            header = np.frombuffer(raw, dtype=IQ_HEADER)[0]
            if header['magic'] != IQ_MAGIC:
                raise ParseError('bad magic {!r} in record {}'.format(
                    header['magic'], record), path=path)
            n = int(header['n'])
            samples = np.fromfile(fh, dtype=IQ_SAMPLE, count=n)
            if samples.size != n:
                raise ParseError('record {} holds {} of {} samples'.format(
                    record, samples.size, n), path=path)
            yield RFCapture(
                samples=samples.astype(complex),
                fs=float(header['fs']),
                f_center=float(header['f_center']),
                t0=float(header['t0']),
                sensor_id=sensor_name(int(header['sensor_id'])),
                clock_offset=clock_offset,
            )
            record += 1


def read_iq(path, clock_offset: float=0.0) -> List[RFCapture]:
    return list(iter_iq(path, clock_offset))


def write_iq(path, captures: Iterable[RFCapture], append: bool=False
             ) -> int:
    """Write ``captures`` as records of an IQ file; returns the record
    count.

    """
    count = 0
    with open(str(path), 'ab' if append else 'wb') as fh:
        for cap in captures:
            header = np.zeros(1, dtype=IQ_HEADER)
            header['magic'] = IQ_MAGIC
            header['fs'] = cap.fs
            header['f_center'] = cap.f_center
            header['t0'] = cap.t0
            header['sensor_id'] = sensor_number(cap.sensor_id)
            header['n'] = cap.n
            header.tofile(fh)
            cap.samples.astype(IQ_SAMPLE).tofile(fh)
            count += 1
    return count


def concatenate(captures: List[Any]) -> RFCapture:
    """Join consecutive records of one sensor into a single capture.  Gaps
    between records are not allowed.

    """
    if not captures:
        raise DataError('nothing to concatenate')
    first = captures[0]
    expected = first.t0
    for cap in captures:
        if cap.fs != first.fs or cap.f_center != first.f_center:
            raise DataError('records differ in rate or tuning')
        if abs(cap.t0 - expected) > 0.5 / first.fs:
            raise DataError('records are not contiguous')
        expected = cap.t0 + cap.duration
    return first.replace(
        samples=np.concatenate([c.samples for c in captures]))
