# -*- coding: utf-8 -*-
import math
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import fft

from ..rf import RFCapture
from ..exceptions import DataError, InsufficientData, NoPeak


logger = logging.getLogger(__name__)

FINE_STEPS = 8
"""Interpolation points per sample around the integer peak."""


@dataclass
class TdoaMeasurement(object):
    """Arrival at ``pair[0]`` minus arrival at ``pair[1]`` (seconds)."""

    pair: Tuple[str, str]
    delta_tau: float
    t: float
    peak_quality: float = float('inf')

    def reversed(self) -> 'TdoaMeasurement':
        return TdoaMeasurement((self.pair[1], self.pair[0]), -self.delta_tau,
                               self.t, self.peak_quality)


def _main_lobe(mag: np.ndarray, peak: int) -> Tuple[int, int]:
    """Walk from ``peak`` down to the local minima on each side."""
    lo = peak
    while lo > 0 and mag[lo - 1] < mag[lo]:
        lo -= 1
    hi = peak
    while hi < mag.size - 1 and mag[hi + 1] < mag[hi]:
        hi += 1
    return lo, hi


def _interpolated(spectrum: np.ndarray, freqs: np.ndarray,
                  lags: np.ndarray) -> np.ndarray:
    """Band-limited correlation magnitude at fractional lags (samples)."""
    return np.array([abs(np.dot(np.exp(2j * np.pi * freqs * lag), spectrum))
                     for lag in lags]) / spectrum.size


def estimate_tdoa(a: RFCapture, b: RFCapture, max_lag: float,
                  min_quality: float=2.0) -> TdoaMeasurement:
    """Time difference of arrival between two captures of one emission.

    The peak of ``|sum_n a[n + k] conj(b[n])|`` is searched for lags within
    ``+/- max_lag`` (after the start times on the unified timeline are
    accounted for), refined on an eighth-sample grid of the band-limited
    correlation and finished with a 3 point parabolic fit.

    ``peak_quality`` is the peak over the largest correlation value outside
    the main lobe.

    :raises DataError:  If the sample rates differ.
    :raises InsufficientData:  If the captures do not overlap in time.
    :raises NoPeak:  If ``peak_quality < min_quality``.

    """
    if a.fs != b.fs:
        raise DataError('sample rates differ: {} / {}'.format(a.fs, b.fs))
    fs = a.fs
    na, nb = a.n, b.n
    offset = a.start - b.start
    if (a.start > b.start + nb / fs + max_lag or
            b.start > a.start + na / fs + max_lag or na == 0 or nb == 0):
        raise InsufficientData('captures of {} and {} do not overlap'.format(
            a.sensor_id, b.sensor_id))

    n = fft.next_fast_len(na + nb - 1)
    spectrum = fft.fft(a.samples, n) * np.conj(fft.fft(b.samples, n))
    corr = fft.ifft(spectrum)

    # lag k in samples maps to offset + k / fs
    ks = np.arange(-(nb - 1), na)
    mag = np.abs(corr[ks % n])
    lags = offset + ks / fs
    window = np.flatnonzero(np.abs(lags) <= max_lag)
    if window.size == 0:
        raise InsufficientData('no lag within +/- {} s'.format(max_lag))

    peak = int(window[np.argmax(mag[window])])
    peak_value = mag[peak]
    if peak_value <= 0:
        raise NoPeak('zero correlation between {} and {}'.format(
            a.sensor_id, b.sensor_id))
    lo, hi = _main_lobe(mag, peak)
    side = np.concatenate([mag[:lo], mag[hi + 1:]])
    quality = float(peak_value / side.max()) if side.size and \
        side.max() > 0 else math.inf
    quality = max(quality, 1.0)
    if quality < min_quality:
        raise NoPeak('peak quality {:.2f} between {} and {}'.format(
            quality, a.sensor_id, b.sensor_id))

    freqs = fft.fftfreq(n)
    grid = ks[peak] + np.arange(-FINE_STEPS, FINE_STEPS + 1) / FINE_STEPS
    fine = _interpolated(spectrum, freqs, grid)
    j = int(np.clip(np.argmax(fine), 1, fine.size - 2))
    y0, y1, y2 = fine[j - 1], fine[j], fine[j + 1]
    denom = y0 - 2 * y1 + y2
    delta = 0.5 * (y0 - y2) / denom if denom < 0 else 0.0
    delta = float(np.clip(delta, -0.5, 0.5))
    k_hat = grid[j] + delta / FINE_STEPS

    return TdoaMeasurement(
        pair=(a.sensor_id, b.sensor_id),
        delta_tau=float(offset + k_hat / fs),
        t=float(max(a.start, b.start)),
        peak_quality=quality,
    )
