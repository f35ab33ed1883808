# -*- coding: utf-8 -*-
import logging
from fractions import Fraction
from typing import List, Tuple, Optional

import numpy as np
from scipy import signal

from .capture import RFCapture, FingerprintVector, FINGERPRINT_FS, \
    FINGERPRINT_LENGTH
from ..utils import moving_average
from ..exceptions import BandOutOfCapture, InsufficientData, NoSignal, \
    DataError


logger = logging.getLogger(__name__)

DECISION_WINDOW = 5250
"""Samples per 0.0210 s decision window at 250 kHz."""

ENERGY_AVERAGE = 32
OCCUPANCY_RATIO = 10.0
"""Spectrum bins 10 dB above the median floor count as occupied."""

EDGE_RATIO = 4.0
"""Energy detector threshold, 6 dB above the reference level."""

TDOA_RATE = 10e6
MIN_HOP_SAMPLES = 256
RESAMPLE_WINDOW = ('kaiser', 8.0)


def _rational(ratio: float) -> Tuple[int, int]:
    frac = Fraction(ratio).limit_denominator(100000)
    if abs(float(frac) - ratio) > 1e-12 * max(1.0, ratio):
        raise BandOutOfCapture('rate ratio {} is not rational'.format(ratio))
    return frac.numerator, frac.denominator


def mix(samples: np.ndarray, shift: float, fs: float) -> np.ndarray:
    """Multiply by ``exp(-2j pi shift n / fs)``."""
    n = np.arange(samples.size)
    return samples * np.exp(-2j * np.pi * shift * n / fs)


def downconvert_filter_decimate(cap: RFCapture, f_target: float,
                                bw: float) -> RFCapture:
    """Move ``f_target`` to DC, low-pass to ``bw / 2`` and resample to
    ``bw`` samples per second.

    The polyphase resampler uses a Kaiser (beta 8) linear-phase filter whose
    delay is compensated, so the first output sample is still at ``t0``.

    :raises BandOutOfCapture:  If the band does not fit in the capture or
                               the rate ratio is not rational.

    """
    offset = f_target - cap.f_center
    if abs(offset) + bw / 2.0 > cap.fs / 2.0 + 1e-6:
        raise BandOutOfCapture(
            'band {:.0f} Hz +/- {:.0f} Hz outside capture at {:.0f} Hz '
            '(fs {:.0f})'.format(f_target, bw / 2, cap.f_center, cap.fs))
    up, down = _rational(bw / cap.fs)

    mixed = mix(cap.samples, offset, cap.fs) if offset else cap.samples
    if up == down:
        out = np.array(mixed)
    else:
        out = signal.resample_poly(mixed, up, down, window=RESAMPLE_WINDOW)
    return cap.replace(samples=out, fs=float(bw), f_center=float(f_target))


def _band(cap: RFCapture, window: Optional[float]=None
          ) -> Tuple[float, float, float]:
    x = cap.samples
    if window is not None:
        x = x[:int(round(window * cap.fs))]
    if x.size < MIN_HOP_SAMPLES:
        raise InsufficientData('need {} samples, got {}'.format(
            MIN_HOP_SAMPLES, x.size))

    nperseg = min(1024, max(32, x.size // 8))
    f, P = signal.welch(x, fs=cap.fs, nperseg=nperseg,
                        return_onesided=False, detrend=False)
    f = np.fft.fftshift(f)
    P = np.fft.fftshift(P)

    floor = np.median(P)
    occupied = P > OCCUPANCY_RATIO * floor
    if floor <= 0:
        occupied = P > 0
    if not np.any(occupied):
        raise NoSignal('no occupied band in {} samples of {}'.format(
            x.size, cap.sensor_id))

    # contiguous runs of occupied bins, keep the one holding most power
    edges = np.diff(np.concatenate([[0], occupied.astype(int), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    powers = [P[a:b].sum() for a, b in zip(starts, stops)]
    best = int(np.argmax(powers))
    a, b = starts[best], stops[best]
    centroid = float(np.sum(f[a:b] * P[a:b]) / np.sum(P[a:b]))
    width = float(b - a) * cap.fs / nperseg
    # noise density from the bins outside every occupied run
    density = float(np.median(P[~occupied])) if np.any(~occupied) else 0.0
    return cap.f_center + centroid, width, density


def occupied_band(cap: RFCapture, window: Optional[float]=None
                  ) -> Tuple[float, float]:
    """Centre frequency (absolute, Hz) and width of the dominant contiguous
    band of spectrum bins 10 dB above the noise floor.

    :param window:  Only look at the first ``window`` seconds.

    :raises InsufficientData:  With fewer than 256 samples.
    :raises NoSignal:  If no bin is occupied.

    """
    centre, width, _ = _band(cap, window)
    return centre, width


def detect_hop_center(cap: RFCapture, window: Optional[float]=None) -> float:
    """Power-weighted centre (Hz) of the dominant occupied band, for example
    the current hop of a frequency hopping emitter.

    """
    return occupied_band(cap, window)[0]


def _rising_edges(ma_trail: np.ndarray, thr: float) -> np.ndarray:
    above = ma_trail > thr
    rising = np.zeros_like(above)
    rising[1:] = above[1:] & ~above[:-1]
    return np.flatnonzero(rising)


def segment_and_trim(baseband: RFCapture, device_truth: str=None
                     ) -> List[FingerprintVector]:
    """Cut a 250 kHz stream into 5250 sample decision windows and emit the
    2600 samples starting at the first burst rising edge of each window.

    Edges come from a 32 sample moving average of the power crossing four
    times (6 dB) the lowest decile of that average.  Samples after the
    falling edge are zeroed; a burst running past the stream end is zero
    padded.  Windows without a rising edge yield nothing; a burst already on
    when the stream starts has no rising edge.

    """
    if abs(baseband.fs - FINGERPRINT_FS) > 1e-6:
        raise DataError('segmentation expects 250 kHz, got {}'.format(
            baseband.fs))
    x = baseband.samples
    n_windows = x.size // DECISION_WINDOW
    if n_windows == 0:
        return []

    m = ENERGY_AVERAGE
    power = np.abs(x) ** 2
    trailing = moving_average(power, m, 'trailing')
    leading = moving_average(power, m, 'leading')
    floor = np.percentile(trailing[m - 1:], 10) if x.size >= m else 0.0
    thr = EDGE_RATIO * floor

    # the average is partial over the first m samples, a burst running at
    # the stream start shows a false edge there
    edges = _rising_edges(trailing, thr)
    edges = edges[edges >= m]
    rv = []
    for w in range(n_windows):
        lo, hi = w * DECISION_WINDOW, (w + 1) * DECISION_WINDOW
        inside = edges[(edges >= lo) & (edges < hi)]
        if inside.size == 0:
            continue
        rise = int(inside[0])
        start = rise
        lowest = max(rise - (m - 1), 0)
        while start > lowest and power[start - 1] > thr:
            start -= 1

        fall = start + 1
        below = np.flatnonzero(leading[fall:] <= thr)
        fall = fall + int(below[0]) if below.size else x.size
        while fall < x.size and power[fall] > thr:
            fall += 1

        vec = np.zeros(FINGERPRINT_LENGTH, dtype=complex)
        chunk = x[start:min(start + FINGERPRINT_LENGTH, fall, x.size)]
        vec[:chunk.size] = chunk
        window_t = baseband.start + w * DECISION_WINDOW / baseband.fs
        rv.append(FingerprintVector(
            iq=vec, window_t=window_t, device_truth=device_truth,
            sensor_id=baseband.sensor_id,
        ))
    logger.debug('%s: %d bursts in %d windows', baseband.sensor_id, len(rv),
                 n_windows)
    return rv


def _gate(x: np.ndarray, width: int, noise_power: float) -> np.ndarray:
    """Zero sub-windows whose energy is below four times (6 dB) the noise
    energy expected over their length.

    :param noise_power:  Expected noise power per sample of ``x``.

    """
    out = np.array(x)
    for a in range(0, x.size, width):
        b = min(a + width, x.size)
        e = np.sum(np.abs(x[a:b]) ** 2)
        if e == 0 or e < EDGE_RATIO * noise_power * (b - a):
            out[a:b] = 0
    return out


def prepare_for_tdoa(cap: RFCapture, rate: float=TDOA_RATE,
                     numtaps: int=129, gate_width: int=DECISION_WINDOW
                     ) -> RFCapture:
    """Band-limit a capture to its occupied band, resample to ``rate`` and
    zero the sub-windows holding no more than noise.

    Sub-windows of ``gate_width`` samples are kept when their energy is
    6 dB above the noise expected in the passband, with the noise density
    taken from the unoccupied part of the spectrum, so a burst filling the
    whole capture is kept.  The band-pass is a linear-phase FIR with an odd
    number of taps applied with ``'same'`` alignment, so the timeline is
    unchanged.  A capture with no occupied band comes back as zeros.

    :raises BandOutOfCapture:  If ``cap.fs < rate``.

    """
    if cap.fs < rate - 1e-6:
        raise BandOutOfCapture('capture rate {} below {}'.format(cap.fs,
                                                                 rate))
    n_out = int(round(cap.n * rate / cap.fs))
    try:
        hop, width, density = _band(cap)
    except (NoSignal, InsufficientData):
        logger.debug('%s: no signal, zero stream', cap.sensor_id)
        return cap.replace(samples=np.zeros(n_out, dtype=complex),
                           fs=float(rate))

    room = (cap.fs - rate) / 2.0
    centre = cap.f_center + float(np.clip(hop - cap.f_center, -room, room))
    out = downconvert_filter_decimate(cap, centre, rate)

    half = min(0.625 * width + 100e3, 0.45 * rate)
    taps = signal.firwin(numtaps | 1, half, fs=rate)
    n = np.arange(taps.size) - taps.size // 2
    taps = taps * np.exp(2j * np.pi * (hop - centre) * n / rate)
    filtered = np.convolve(out.samples, taps, mode='same')

    # in-band noise: density times the two-sided passband 2 * half
    return out.replace(samples=_gate(filtered, gate_width,
                                     density * 2.0 * half))


def extract_fingerprint_vectors(cap: RFCapture, device_truth: str=None
                                ) -> List[FingerprintVector]:
    """Fingerprint vectors of a capture: find the active band, bring it to
    250 kHz baseband and cut out the bursts.  A capture without signal
    yields nothing.

    """
    try:
        centre = detect_hop_center(cap)
    except (NoSignal, InsufficientData):
        return []
    room = (cap.fs - FINGERPRINT_FS) / 2.0
    centre = cap.f_center + float(np.clip(centre - cap.f_center, -room, room))
    baseband = downconvert_filter_decimate(cap, centre, FINGERPRINT_FS)
    return segment_and_trim(baseband, device_truth)
