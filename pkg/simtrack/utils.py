# -*- coding: utf-8 -*-
import os
import logging
from typing import Union

import numpy as np
from scipy import fft


# CONFIGURATION
SIMTRACK_LOG = os.environ.get('SIMTRACK_LOG', 'WARNING')

SPEED_OF_LIGHT = 299792458.0
"""Propagation speed used for every range / delay conversion (m/s)."""

_LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure_logging(level: Union[str, int, None]=None) -> logging.Logger:
    """Configure the package logger.

    :param level:  A logging level name or number.  Falls back to the
                   ``SIMTRACK_LOG`` environment variable (default
                   ``'WARNING'``).

    """
    level = level or SIMTRACK_LOG
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logger = logging.getLogger('simtrack')
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_LOG_FORMAT))
        logger.addHandler(handler)
    logger.setLevel(level)
    return logger


def robust_sigma(values: np.ndarray) -> float:
    """Median absolute deviation scaled to a gaussian standard deviation.

    :Example:

        >>> robust_sigma(np.array([0.0, 0.0, 0.0]))
        0.0
        >>> round(robust_sigma(np.array([1.0, 2.0, 3.0, 4.0, 100.0])), 4)
        1.4826

    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        return 0.0
    med = np.median(values)
    return float(1.4826 * np.median(np.abs(values - med)))


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Return an independent random generator for ``(seed, *keys)``.

    Streams are keyed by counters (stream id, frame index, window index ...)
    so any item can be synthesized on its own, in any order.

    """
    entropy = [int(seed)] + [int(k) for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def delay_signal(x: np.ndarray, shift: float, length: int=None,
                 pad: int=64) -> np.ndarray:
    """Band-limited resampling of ``x`` at ``n + shift`` for
    ``n = 0 .. length - 1``.  Samples outside ``x`` read as zero.

    A positive ``shift`` advances the signal; a delay of ``d`` samples is
    ``shift=-d``.

    """
    x = np.asarray(x)
    if length is None:
        length = x.shape[-1]
    whole = int(np.floor(shift))
    frac = float(shift - whole)

    start = whole - pad
    stop = whole + length + pad + 1
    seg = np.zeros(stop - start, dtype=complex)
    lo, hi = max(start, 0), min(stop, x.shape[-1])
    if hi > lo:
        seg[lo - start:hi - start] = x[lo:hi]

    if frac != 0.0:
        n = fft.next_fast_len(seg.size + 2 * pad)
        spec = fft.fft(seg, n)
        freqs = fft.fftfreq(n)
        seg = fft.ifft(spec * np.exp(2j * np.pi * freqs * frac))[:seg.size]
    return seg[pad:pad + length]


def moving_average(x: np.ndarray, width: int, mode: str='trailing'
                   ) -> np.ndarray:
    """Moving average of ``x`` over ``width`` samples.

    :param mode:  ``'trailing'`` averages ``x[i - width + 1 .. i]``,
                  ``'leading'`` averages ``x[i .. i + width - 1]`` and
                  ``'centered'`` is the centered window.  Samples outside
                  ``x`` count as zero.

    """
    x = np.asarray(x, dtype=float)
    kernel = np.ones(width) / width
    full = np.convolve(x, kernel)
    if mode == 'trailing':
        return full[:x.size]
    if mode == 'leading':
        return full[width - 1:width - 1 + x.size]
    if mode == 'centered':
        offset = (width - 1) // 2
        return full[offset:offset + x.size]
    raise ValueError(mode)


def sensor_number(sensor_id: str) -> int:
    """The numeric id stored in IQ file headers.

    :Example:

        >>> sensor_number('d106')
        106

    """
    return int(str(sensor_id).lstrip('dD'))


def sensor_name(number: int) -> str:
    """Inverse of :func:`sensor_number`.

    :Example:

        >>> sensor_name(106)
        'd106'

    """
    return 'd{}'.format(int(number))
