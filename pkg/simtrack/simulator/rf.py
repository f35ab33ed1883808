# -*- coding: utf-8 -*-
"""RF capture synthesis.

For every capture snapshot each drone's emission is built once on a grid a
little wider than the snapshot and then delayed per sensor by the
propagation time with a band-limited fractional delay, scaled by
``range_ref / range`` and summed with white noise.  Symbols are drawn from
a substream per burst, so every sensor receives the same waveform.

"""
import logging
import warnings
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np
from scipy import signal

from .scenario import Scenario, TxSpec, DEVICES, device_tx
from ..model import RfTruth
from ..rf import RFCapture, FingerprintVector, extract_fingerprint_vectors
from ..utils import SPEED_OF_LIGHT, delay_signal, sensor_number, substream
from ..exceptions import BandCollision, ConfigError


logger = logging.getLogger(__name__)

SYMBOL_STREAM = 10
RF_NOISE_STREAM = 11
PASS_STREAM = 12

RRC_SPAN = 8
"""Pulse shaping filter length in symbols."""

GRID_PAD = 128


def rrc_taps(rolloff: float, sps: int, span: int=RRC_SPAN) -> np.ndarray:
    """Root raised cosine impulse response with unit energy."""
    t = np.arange(-span * sps // 2, span * sps // 2 + 1) / float(sps)
    b = rolloff
    h = np.empty_like(t)
    for i, ti in enumerate(t):
        if abs(ti) < 1e-12:
            h[i] = 1.0 - b + 4.0 * b / np.pi
        elif b > 0 and abs(abs(4.0 * b * ti) - 1.0) < 1e-9:
            h[i] = b / np.sqrt(2.0) * (
                (1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * b)) +
                (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * b)))
        else:
            num = np.sin(np.pi * ti * (1.0 - b)) + \
                4.0 * b * ti * np.cos(np.pi * ti * (1.0 + b))
            h[i] = num / (np.pi * ti * (1.0 - (4.0 * b * ti) ** 2))
    return h / np.linalg.norm(h)


def _ramp(length: int, rise: int) -> np.ndarray:
    """Raised cosine on and off ramps of ``rise`` samples."""
    env = np.ones(length)
    if rise > 0:
        edge = 0.5 - 0.5 * np.cos(np.pi * np.arange(rise) / rise)
        env[:rise] = edge
        env[length - rise:] = edge[::-1]
    return env


def _iq_imbalance(x: np.ndarray, gain_db: float, skew_deg: float
                  ) -> np.ndarray:
    g = 10.0 ** (gain_db / 20.0)
    phi = np.radians(skew_deg)
    mu = 0.5 * (1.0 + g * np.exp(-1j * phi))
    nu = 0.5 * (1.0 - g * np.exp(1j * phi))
    return mu * x + nu * np.conj(x)


def burst_waveform(tx: TxSpec, fs: float, rng: np.random.Generator
                   ) -> Tuple[np.ndarray, np.ndarray]:
    """One burst at complex baseband: ``(data, envelope)``.

    ``data`` is the impaired, ramped QPSK signal at the device's carrier
    (without frequency offset); ``envelope`` the ramp, used for the
    carrier leakage.

    """
    sps = fs / tx.symbol_rate
    if abs(sps - round(sps)) > 1e-9:
        raise ConfigError('capture rate must be a multiple of the symbol '
                          'rate')
    sps = int(round(sps))
    length = int(round(tx.burst_len * fs))
    n_sym = int(np.ceil(length / sps)) + RRC_SPAN
    bits = rng.integers(0, 2, size=(2, n_sym))
    symbols = ((2 * bits[0] - 1) + 1j * (2 * bits[1] - 1)) / np.sqrt(2.0)
    taps = rrc_taps(tx.rolloff, sps)
    shaped = signal.upfirdn(taps, symbols, up=sps)
    start = taps.size // 2 + (RRC_SPAN // 2) * sps
    shaped = shaped[start:start + length]
    shaped = shaped / np.sqrt(np.mean(np.abs(shaped) ** 2))
    env = _ramp(length, int(round(tx.rise_time * fs)))
    data = _iq_imbalance(shaped, tx.iq_gain_imbalance, tx.iq_phase_skew)
    return data * env, env


def emission(tx: TxSpec, key: Sequence[int], seed: int, g0: float, n: int,
             fs: float, f_center: float) -> np.ndarray:
    """The emission of ``tx`` on the grid ``g0 + m / fs``, ``m < n``, at
    baseband around ``f_center``.

    Burst ``j`` starts at ``burst_phase + j * burst_period``, rounded to the
    grid; its symbols come from ``substream(seed, *key, j)``.

    """
    out = np.zeros(n, dtype=complex)
    g1 = g0 + n / fs
    first = max(int(np.floor((g0 - tx.burst_len - tx.burst_phase) /
                             tx.burst_period)), 0)
    last = int(np.ceil((g1 - tx.burst_phase) / tx.burst_period))
    amp = 10.0 ** (tx.tx_power / 20.0)
    leak = 10.0 ** (tx.leakage_dbc / 20.0)
    for j in range(first, last + 1):
        tau = tx.burst_phase + j * tx.burst_period
        m0 = int(round((tau - g0) * fs))
        data, env = burst_waveform(tx, fs, substream(seed, *key, j))
        lo, hi = max(m0, 0), min(m0 + data.size, n)
        if hi <= lo:
            continue
        seg = slice(lo - m0, hi - m0)
        t = g0 + np.arange(lo, hi) / fs
        carrier = tx.carrier_at(tau) - f_center
        out[lo:hi] += amp * (
            data[seg] * np.exp(2j * np.pi * (carrier + tx.cfo) * t) +
            leak * env[seg] * np.exp(2j * np.pi * carrier * t))
    return out


@dataclass
class RfEpoch(object):
    """One capture snapshot of every sensor."""

    index: int
    t: float
    captures: Dict[str, RFCapture]
    truth: List[RfTruth]


def _noise(seed: int, key: Sequence[int], n: int, std: float) -> np.ndarray:
    rng = substream(seed, *key)
    return std / np.sqrt(2.0) * (rng.standard_normal(n) +
                                 1j * rng.standard_normal(n))


def _audible(scn: Scenario) -> Dict[str, List[int]]:
    """Targets in band, per sensor."""
    rv = {}
    for sid in scn.sensors.ids:
        fc = scn.sensor_tuning[sid]
        rv[sid] = [i for i, target in enumerate(scn.targets)
                   if target.tx.in_band(fc, scn.rf_fs)]
    return rv


def iter_rf_epochs(scn: Scenario) -> Iterator[RfEpoch]:
    """Yield the capture snapshots of a scenario in time order.

    Capture ``t0`` values are on each sensor's clock, that is the unified
    time plus ``rf_offsets``.  Warns :class:`BandCollision` for sensors that
    hear more than one target.

    """
    fs = scn.rf_fs
    n = int(round(scn.rf_window * fs))
    audible = _audible(scn)
    for sid, heard in audible.items():
        if len(heard) > 1:
            warnings.warn(BandCollision('{} hears targets {}'.format(
                sid, heard)))
            logger.warning('band collision at %s: targets %s', sid, heard)
    positions = scn.sensors.array()
    max_range = 0.0
    for target in scn.targets:
        wp = np.asarray(target.waypoints)[:, 1:]
        max_range = max(max_range, float(np.max(np.linalg.norm(
            wp[:, None, :] - positions[None, :, :], axis=-1))))
    pad = int(np.ceil(max_range / SPEED_OF_LIGHT * fs)) + GRID_PAD
    noise_std = 10.0 ** (-scn.rf_snr_db / 20.0)

    for k, t in enumerate(scn.epoch_times):
        t = float(t)
        g0 = t - pad / fs
        samples = {sid: np.zeros(n, dtype=complex) for sid in scn.sensors.ids}
        truth = []
        for i, target in enumerate(scn.targets):
            p = target.position(t)
            listeners = [sid for sid in scn.sensors.ids if i in audible[sid]]
            waves = {}
            for sid in listeners:
                fc = scn.sensor_tuning[sid]
                if fc not in waves:
                    waves[fc] = emission(
                        target.tx, (SYMBOL_STREAM, i), scn.seed, g0,
                        n + 2 * pad, fs, fc)
                r = float(np.linalg.norm(p - np.asarray(
                    scn.sensors.position(sid))))
                delay = r / SPEED_OF_LIGHT
                shifted = delay_signal(waves[fc], (t - delay - g0) * fs, n)
                samples[sid] += (scn.range_ref / r) * \
                    np.exp(-2j * np.pi * fc * delay) * shifted
            for group in scn.groups():
                members = [sid for sid in group if sid in listeners]
                if len(members) < 2:
                    continue
                ref = members[0]
                for sid in members[1:]:
                    truth.append(RfTruth(
                        t=t, pair='{}-{}'.format(sid, ref), target=i,
                        delta_tau=scn.sensors.true_tdoa(p, sid, ref)))
        captures = {}
        for sid in scn.sensors.ids:
            x = samples[sid]
            if noise_std > 0:
                x = x + _noise(scn.seed, (RF_NOISE_STREAM, k,
                                          sensor_number(sid)), n, noise_std)
            captures[sid] = RFCapture(
                samples=x, fs=fs, f_center=scn.sensor_tuning[sid],
                t0=t + scn.rf_offsets.get(sid, 0.0), sensor_id=sid)
        yield RfEpoch(index=k, t=t, captures=captures, truth=truth)


def generate_rf(scn: Scenario) -> Tuple[Dict[str, List[RFCapture]],
                                        List[RfTruth]]:
    """All captures of a scenario per sensor, and the true TDOAs."""
    captures = defaultdict(list)
    truth = []
    for epoch in iter_rf_epochs(scn):
        for sid, cap in epoch.captures.items():
            captures[sid].append(cap)
        truth.extend(epoch.truth)
    return dict(captures), truth


def simulate_fingerprint_pass(device: str, pass_index: int, n_vectors: int,
                              seed: int=0, fs: float=10e6,
                              snr_db: float=20.0) -> List[FingerprintVector]:
    """Labelled fingerprint vectors of one recorded pass of ``device``.

    The pass draws its range (300 to 500 m) and burst timing from its own
    substream; consecutive 0.021 s snapshots go through the same
    preprocessing chain as field captures until ``n_vectors`` vectors are
    collected.

    """
    if device not in DEVICES:
        raise ConfigError('unknown device {!r}'.format(device))
    dev = sorted(DEVICES).index(device)
    rng = substream(seed, PASS_STREAM, pass_index, dev)
    rng_m = rng.uniform(300.0, 500.0)
    tx = device_tx(device, burst_phase=float(rng.uniform(0.0, 10.5e-3)))
    fc = tx.center_freq
    n = int(round(0.021 * fs))
    amp = 200.0 / rng_m
    noise_std = 10.0 ** (-snr_db / 20.0)
    rv = []
    for w in range(4 * n_vectors):
        if len(rv) >= n_vectors:
            break
        t = w * n / fs
        x = amp * emission(tx, (PASS_STREAM, pass_index, dev, SYMBOL_STREAM),
                           seed, t, n, fs, fc)
        x = x + _noise(seed, (PASS_STREAM, pass_index, dev, w), n, noise_std)
        cap = RFCapture(samples=x, fs=fs, f_center=fc, t0=t,
                        sensor_id='d{}'.format(100 + dev))
        rv.extend(extract_fingerprint_vectors(cap, device))
    logger.info('pass %d of %s: %d vectors', pass_index, device, len(rv))
    return rv[:n_vectors]
