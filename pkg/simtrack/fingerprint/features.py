# -*- coding: utf-8 -*-
"""Amplitude invariant burst features.

A burst is summarised by its shape (envelope, spectrum, rise time, occupied
bandwidth, length) and by three transmitter impairments: the offset of the
band from the carrier leakage line (``cfo``), the level of that line and
the strength of the IQ imbalance image.

"""
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import optimize, signal

from ..rf import FINGERPRINT_FS
from ..utils import moving_average


FEATURES = ('envelope', 'spectrum', 'rise_time', 'bandwidth',
            'burst_length', 'cfo', 'leakage', 'iq_imbalance')

ENVELOPE_AVERAGE = 32
SPECTRUM_BINS = 64
BANDWIDTH_SEGMENT = 256
OCCUPIED_FRACTION = 0.99
LINE_SEGMENT = 256
IMAGE_SEARCH = 20e3
"""Largest offset (Hz) of the image correlation peak from DC."""
MIN_PLATEAU = 64


def _smoothed(iq: np.ndarray) -> np.ndarray:
    return moving_average(np.abs(iq), ENVELOPE_AVERAGE, 'centered')


def _level(env: np.ndarray) -> float:
    """Typical on-level of a smoothed envelope: the median of the samples
    above a quarter of the peak, 0 for a silent vector.

    """
    peak = env.max() if env.size else 0.0
    if peak <= 0:
        return 0.0
    return float(np.median(env[env >= 0.25 * peak]))


def plateau(iq: np.ndarray) -> Optional[Tuple[int, int]]:
    """First and last index where the smoothed envelope is at least half of
    the on-level, or ``None`` for a silent vector.

    """
    env = _smoothed(iq)
    level = _level(env)
    if level <= 0:
        return None
    on = np.flatnonzero(env >= 0.5 * level)
    return int(on[0]), int(on[-1])


def envelope(iq: np.ndarray) -> np.ndarray:
    """Centered 32 sample moving average of ``|iq|`` with unit norm."""
    env = _smoothed(iq)
    norm = np.linalg.norm(env)
    return env / norm if norm > 0 else env


def log_spectrum(iq: np.ndarray, fs: float=FINGERPRINT_FS) -> np.ndarray:
    """Two-sided Welch spectrum in dB over 64 bins, mean removed."""
    _, P = signal.welch(iq, fs=fs, nperseg=SPECTRUM_BINS,
                        return_onesided=False, detrend=False)
    P = np.fft.fftshift(P)
    floor = max(float(P.max()) * 1e-12, np.finfo(float).tiny)
    db = 10.0 * np.log10(np.maximum(P, floor))
    return db - db.mean()


def rise_time(iq: np.ndarray, fs: float=FINGERPRINT_FS) -> float:
    """Seconds from 10% to 90% of the on-level of the moving average
    envelope.

    """
    env = _smoothed(iq)
    level = _level(env)
    if level <= 0:
        return 0.0
    first = np.flatnonzero(env >= 0.1 * level)[0]
    last = np.flatnonzero(env >= 0.9 * level)[0]
    return float(max(last - first, 0)) / fs


def burst_length(iq: np.ndarray, fs: float=FINGERPRINT_FS) -> float:
    """Seconds between the half level crossings of the envelope."""
    span = plateau(iq)
    if span is None:
        return 0.0
    return float(span[1] - span[0] + 1) / fs


def occupied_bandwidth(iq: np.ndarray, fs: float=FINGERPRINT_FS) -> float:
    """Width (Hz) holding 99% of the power."""
    f, P = signal.welch(iq, fs=fs, nperseg=BANDWIDTH_SEGMENT,
                        return_onesided=False, detrend=False)
    f = np.fft.fftshift(f)
    P = np.fft.fftshift(P)
    total = P.sum()
    if total <= 0:
        return 0.0
    cum = np.cumsum(P) / total
    tail = (1.0 - OCCUPIED_FRACTION) / 2.0
    lo = int(np.searchsorted(cum, tail))
    hi = int(np.searchsorted(cum, 1.0 - tail))
    hi = min(hi, f.size - 1)
    return float(f[hi] - f[lo] + fs / BANDWIDTH_SEGMENT)


def _correlate(x: np.ndarray, freq: float, fs: float) -> complex:
    n = np.arange(x.size)
    return complex(np.mean(x * np.exp(-2j * np.pi * freq * n / fs)))


def carrier_line(x: np.ndarray, fs: float=FINGERPRINT_FS
                 ) -> Tuple[float, complex]:
    """Frequency (Hz) and complex amplitude of the strongest spectral line.

    The Welch peak is refined by maximizing the correlation with a complex
    exponential within one bin, which is the least squares fit of a
    constant amplitude line.

    """
    nperseg = min(LINE_SEGMENT, x.size)
    f, P = signal.welch(x, fs=fs, nperseg=nperseg, return_onesided=False,
                        detrend=False)
    f = np.fft.fftshift(f)
    P = np.fft.fftshift(P)
    k = int(np.argmax(P))
    step = fs / nperseg
    result = optimize.minimize_scalar(
        lambda freq: -abs(_correlate(x, freq, fs)),
        bounds=(f[k] - step, f[k] + step), method='bounded',
        options={'xatol': 1.0})
    freq = float(result.x)
    return freq, _correlate(x, freq, fs)


def impairments(iq: np.ndarray, fs: float=FINGERPRINT_FS
                ) -> Tuple[float, float, float]:
    """``(cfo, leakage, iq_imbalance)`` measured over the burst plateau.

    ``cfo`` (Hz) is the offset of the band centre from the carrier leakage
    line, ``leakage`` the line power relative to the burst power in dB and
    ``iq_imbalance`` the largest normalized correlation of the line-free
    signal with its own conjugate within :data:`IMAGE_SEARCH` of DC.  A
    burst shorter than 64 samples gives zeros.

    """
    span = plateau(iq)
    if span is None or span[1] - span[0] + 1 < MIN_PLATEAU:
        return 0.0, 0.0, 0.0
    x = np.asarray(iq[span[0]:span[1] + 1], dtype=complex)
    power = float(np.mean(np.abs(x) ** 2))
    freq, amp = carrier_line(x, fs)
    leakage = 10.0 * np.log10(max(abs(amp) ** 2 / power, 1e-12))

    n = np.arange(x.size)
    rest = x - amp * np.exp(2j * np.pi * freq * n / fs)
    nfft = 1 << int(np.ceil(np.log2(8 * x.size)))
    image = np.abs(np.fft.fft(rest ** 2, nfft))
    near = np.abs(np.fft.fftfreq(nfft, 1.0 / fs)) <= IMAGE_SEARCH
    energy = float(np.sum(np.abs(rest) ** 2))
    imbalance = float(image[near].max() / energy) if energy > 0 else 0.0
    return -freq, float(leakage), imbalance


def extract_features(iq: np.ndarray, fs: float=FINGERPRINT_FS
                     ) -> Dict[str, np.ndarray]:
    """All features of one burst, each as a 1-D array."""
    iq = np.asarray(iq, dtype=complex)
    cfo, leakage, imbalance = impairments(iq, fs)
    return {
        'envelope': envelope(iq),
        'spectrum': log_spectrum(iq, fs),
        'rise_time': np.array([rise_time(iq, fs)]),
        'bandwidth': np.array([occupied_bandwidth(iq, fs)]),
        'burst_length': np.array([burst_length(iq, fs)]),
        'cfo': np.array([cfo]),
        'leakage': np.array([leakage]),
        'iq_imbalance': np.array([imbalance]),
    }
