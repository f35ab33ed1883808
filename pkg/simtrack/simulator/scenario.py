# -*- coding: utf-8 -*-
"""Scenario descriptions and the built-in presets.

Coordinates are meters with x east, y north and z up.  The camera of the
presets stands at the origin looking east, the drones cross its view from
north to south about 450 m out at a constant altitude.

"""
import json
import math
import copy
import logging
import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..geometry import CameraModel, camera_from_pose
from ..localization import SensorLayout
from ..exceptions import ConfigError, MissingInput, UnknownPreset


logger = logging.getLogger(__name__)


@dataclass
class TxSpec(object):
    """Burst transmitter of a drone.

    The waveform is root raised cosine shaped QPSK.  ``hop_pattern`` lists
    carrier frequencies visited every ``hop_dwell`` seconds; the front end
    impairments (``cfo``, IQ imbalance, ``rise_time``, carrier leakage) are
    what the fingerprint classifier keys on.

    """
    center_freq: float
    burst_len: float
    burst_period: float = 10.5e-3
    symbol_rate: float = 1e6
    rolloff: float = 0.35
    hop_pattern: Optional[List[float]] = None
    hop_dwell: float = 1.0
    cfo: float = 0.0
    iq_gain_imbalance: float = 0.0
    iq_phase_skew: float = 0.0
    rise_time: float = 100e-6
    leakage_dbc: float = -12.0
    tx_power: float = 0.0
    burst_phase: float = 0.0

    def __post_init__(self):
        if not 0 < self.burst_len < self.burst_period:
            raise ConfigError('burst_len must be in (0, burst_period)')
        for name in ('center_freq', 'symbol_rate', 'hop_dwell', 'rise_time'):
            if not getattr(self, name) > 0:
                raise ConfigError('{} must be positive'.format(name))
        if not 0 <= self.rolloff <= 1:
            raise ConfigError('rolloff must be in [0, 1]')
        if 2 * self.rise_time >= self.burst_len:
            raise ConfigError('rise_time too long for the burst')
        if self.burst_phase < 0:
            raise ConfigError('burst_phase must be >= 0')
        if self.hop_pattern is not None:
            self.hop_pattern = [float(f) for f in self.hop_pattern]
            if not self.hop_pattern:
                raise ConfigError('hop_pattern must not be empty')

    @property
    def bandwidth(self) -> float:
        """Occupied bandwidth (Hz)."""
        return self.symbol_rate * (1.0 + self.rolloff)

    @property
    def carriers(self) -> List[float]:
        return list(self.hop_pattern or [self.center_freq])

    def carrier_at(self, t: float) -> float:
        """Carrier frequency in use at emission time ``t``.  Hops happen
        half way between multiples of ``hop_dwell``.

        """
        if not self.hop_pattern:
            return self.center_freq
        index = int(math.floor(t / self.hop_dwell + 0.5))
        return self.hop_pattern[index % len(self.hop_pattern)]

    def in_band(self, f_center: float, fs: float) -> bool:
        """Whether any carrier fits a capture tuned to ``f_center``."""
        half = fs / 2.0
        return any(abs(f - f_center) + self.bandwidth / 2.0 <= half
                   for f in self.carriers)


DEVICES = {
    'IF1200': dict(center_freq=908e6, burst_len=2e-3, rise_time=40e-6,
                   cfo=-60e3, iq_gain_imbalance=0.8, iq_phase_skew=3.0,
                   leakage_dbc=-10.0,
                   hop_pattern=[905.5e6, 907e6, 909e6, 910.5e6]),
    'Mavic': dict(center_freq=2468e6, burst_len=4e-3, rise_time=120e-6,
                  cfo=-20e3, iq_gain_imbalance=0.3, iq_phase_skew=1.0,
                  leakage_dbc=-15.0),
    'Phantom': dict(center_freq=2406e6, burst_len=6e-3, rise_time=250e-6,
                    cfo=25e3, iq_gain_imbalance=-0.5, iq_phase_skew=-2.0,
                    leakage_dbc=-12.0),
    'm600': dict(center_freq=2476e6, burst_len=9e-3, rise_time=500e-6,
                 cfo=70e3, iq_gain_imbalance=1.2, iq_phase_skew=5.0,
                 leakage_dbc=-13.0),
}
"""Transmitter settings per device class."""


def device_tx(device: str, **changes) -> TxSpec:
    """The :class:`TxSpec` of a known device class.

    :raises ConfigError:  For an unknown device.

    """
    try:
        values = dict(DEVICES[device])
    except KeyError:
        raise ConfigError('unknown device {!r}'.format(device))
    values.update(changes)
    return TxSpec(**values)


@dataclass
class TargetSpec(object):
    """A drone: its class, a piecewise linear trajectory at constant
    altitude and how it renders in both sensors.

    ``waypoints`` are ``(t, x, y, z)`` rows with increasing ``t``; the
    position is held before the first and after the last waypoint.

    """
    device: str
    waypoints: List[Tuple[float, float, float, float]]
    pixel_contrast: float
    pixel_sigma: float = 1.0
    tx: Optional[TxSpec] = None

    def __post_init__(self):
        wp = np.asarray(self.waypoints, dtype=float)
        if wp.ndim != 2 or wp.shape[1] != 4 or wp.shape[0] < 1:
            raise ConfigError('waypoints must be (t, x, y, z) rows')
        if not np.all(np.isfinite(wp)):
            raise ConfigError('waypoints must be finite')
        if np.any(np.diff(wp[:, 0]) <= 0):
            raise ConfigError('waypoint times must increase')
        if np.ptp(wp[:, 3]) > 1e-9:
            raise ConfigError('targets fly at a constant altitude')
        if self.pixel_contrast == 0:
            raise ConfigError('pixel_contrast must not be 0')
        if not self.pixel_sigma > 0:
            raise ConfigError('pixel_sigma must be positive')
        self.waypoints = [tuple(float(c) for c in row) for row in wp]
        if self.tx is None:
            self.tx = device_tx(self.device)
        elif isinstance(self.tx, dict):
            self.tx = TxSpec(**self.tx)

    @property
    def altitude(self) -> float:
        return self.waypoints[0][3]

    def positions(self, t: Any) -> np.ndarray:
        """``(n, 3)`` positions at the times ``t``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        wp = np.asarray(self.waypoints)
        return np.column_stack([np.interp(t, wp[:, 0], wp[:, i])
                                for i in (1, 2, 3)])

    def position(self, t: float) -> np.ndarray:
        return self.positions(t)[0]


@dataclass
class Scenario(object):
    """Everything needed to synthesize EO frames and RF captures.

    ``rf_offsets`` are the RF sensor clocks minus the unified timeline.
    ``sensor_tuning`` maps every sensor to its capture centre frequency;
    sensors sharing a frequency form a localization group.

    """
    name: str
    duration: float
    frame_rate: float
    frame_size: Tuple[int, int]
    camera: CameraModel
    sensors: SensorLayout
    targets: List[TargetSpec]
    rf_offsets: Dict[str, float] = field(default_factory=dict)
    seed: int = 0
    sensor_tuning: Dict[str, float] = field(default_factory=dict)
    flight_altitude: Optional[float] = None
    background_level: float = 110.0
    background_rank: int = 2
    background_drift: float = 0.0
    cloud_amplitude: float = 0.0
    cloud_speed: float = 2.0
    cloud_scale: float = 12.0
    noise_std: float = 0.0
    range_ref: float = 200.0
    rf_fs: float = 10e6
    rf_snr_db: float = 20.0
    rf_epoch: float = 1.0
    rf_window: float = 0.021
    rf_start: float = 0.0
    rf_span: Optional[float] = None

    def __post_init__(self):
        self.frame_size = (int(self.frame_size[0]), int(self.frame_size[1]))
        self.seed = int(self.seed)
        self.validate()

    def validate(self) -> None:
        if not self.duration > 0:
            raise ConfigError('duration must be positive')
        if not self.frame_rate > 0:
            raise ConfigError('frame_rate must be positive')
        if min(self.frame_size) < 1:
            raise ConfigError('frame_size must be positive')
        if (self.camera.image_width, self.camera.image_height) != \
                self.frame_size:
            raise ConfigError('camera image size differs from frame_size')
        if not 1 <= self.background_rank <= 3:
            raise ConfigError('background_rank must be 1, 2 or 3')
        if self.seed < 0:
            raise ConfigError('seed must be >= 0')
        for name in ('range_ref', 'rf_fs', 'rf_epoch', 'rf_window',
                     'cloud_scale'):
            if not getattr(self, name) > 0:
                raise ConfigError('{} must be positive'.format(name))
        if self.rf_window > self.rf_epoch:
            raise ConfigError('rf_window must not exceed rf_epoch')
        if self.noise_std < 0 or self.cloud_amplitude < 0:
            raise ConfigError('noise_std and cloud_amplitude must be >= 0')
        for sid, value in self.rf_offsets.items():
            if sid not in self.sensors:
                raise ConfigError('offset for unknown sensor {}'.format(sid))
            if not math.isfinite(value) or abs(value) >= 60:
                raise ConfigError('rf offset of {} out of range'.format(sid))
        missing = [sid for sid in self.sensors.ids
                   if sid not in self.sensor_tuning]
        if missing:
            raise ConfigError('no tuning for sensors {}'.format(
                ', '.join(missing)))
        for target in self.targets:
            tuned = [f for f in set(self.sensor_tuning.values())
                     if target.tx.in_band(f, self.rf_fs)]
            if tuned:
                for f in target.tx.carriers:
                    if not any(abs(f - c) + target.tx.bandwidth / 2.0 <=
                               self.rf_fs / 2.0 for c in tuned):
                        raise ConfigError('hop {} Hz of {} outside every '
                                          'capture band'.format(
                                              f, target.device))

    @property
    def frame_count(self) -> int:
        return int(math.floor(self.duration * self.frame_rate + 1e-9))

    @property
    def frame_times(self) -> np.ndarray:
        return np.arange(self.frame_count) / self.frame_rate

    @property
    def rf_end(self) -> float:
        span = self.duration - self.rf_start if self.rf_span is None \
            else self.rf_span
        return self.rf_start + span

    @property
    def epoch_times(self) -> np.ndarray:
        """Start of every RF capture snapshot on the unified timeline."""
        count = int(math.floor((self.rf_end - self.rf_window - self.rf_start)
                               / self.rf_epoch + 1e-9)) + 1
        return self.rf_start + np.arange(max(count, 0)) * self.rf_epoch

    def groups(self) -> List[List[str]]:
        """Sensors sharing a capture frequency, in sensor order."""
        by_freq = {}
        for sid in self.sensors.ids:
            by_freq.setdefault(self.sensor_tuning[sid], []).append(sid)
        return list(by_freq.values())

    def to_dict(self) -> Dict[str, Any]:
        rv = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == 'camera':
                value = value.to_dict()
            elif f.name == 'sensors':
                value = {'positions': value.to_dict(),
                         'reference': value.reference_id}
            elif f.name == 'targets':
                value = [dataclasses.asdict(t) for t in value]
            elif f.name == 'frame_size':
                value = list(value)
            rv[f.name] = copy.deepcopy(value)
        return rv

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Scenario':
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError('unknown scenario keys: {}'.format(
                ', '.join(unknown)))
        values = dict(data)
        try:
            camera = values['camera']
            if isinstance(camera, dict):
                values['camera'] = CameraModel.from_dict(camera)
            sensors = values['sensors']
            if isinstance(sensors, dict):
                positions = sensors.get('positions', sensors)
                values['sensors'] = SensorLayout(
                    list(positions.items()), sensors.get('reference'))
            values['targets'] = [
                t if isinstance(t, TargetSpec) else TargetSpec(**t)
                for t in values.get('targets', [])]
            return cls(**values)
        except (KeyError, TypeError) as exc:
            raise ConfigError('bad scenario: {}'.format(exc))

    def replace(self, **changes) -> 'Scenario':
        """A copy with ``changes`` applied (values as in :meth:`to_dict`).

        :raises ConfigError:  For unknown fields.

        """
        data = self.to_dict()
        unknown = sorted(set(changes) - set(data))
        if unknown:
            raise ConfigError('unknown scenario keys: {}'.format(
                ', '.join(unknown)))
        data.update(copy.deepcopy(changes))
        return self.from_dict(data)


def load_scenario(path) -> Scenario:
    path = str(path)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise MissingInput('scenario file not found: {}'.format(path))
    except ValueError as exc:
        raise ConfigError('bad scenario file {}: {}'.format(path, exc))
    return Scenario.from_dict(data)


def save_scenario(scn: Scenario, path) -> None:
    with open(str(path), 'w') as fh:
        json.dump(scn.to_dict(), fh, indent=2, sort_keys=True)
        fh.write('\n')


# presets
SENSOR_POSITIONS = {
    'd101': (0.0, -350.0, 2.0),
    'd102': (250.0, -450.0, 12.0),
    'd103': (600.0, -300.0, 30.0),
    'd104': (0.0, 350.0, 4.0),
    'd105': (300.0, 450.0, 45.0),
    'd106': (600.0, 300.0, 18.0),
}

ALTITUDE = 60.0
RF_LAG = 12.0


def _camera(frame_size=(160, 120)) -> CameraModel:
    return camera_from_pose((0.0, 0.0, 2.0), 90.0, 7.5, 300.0,
                            frame_size[0], frame_size[1])


def _path(y_start: float, duration: float) -> List[Tuple]:
    """North to south pass closing from about 500 m to 400 m."""
    return [(0.0, 470.0, y_start, ALTITUDE),
            (duration, 380.0, y_start - 240.0, ALTITUDE)]


def _layout(ids: Sequence[str]) -> SensorLayout:
    return SensorLayout([(sid, SENSOR_POSITIONS[sid]) for sid in ids])


def _r06(seed: int) -> Scenario:
    duration = 20.0
    ids = ['d101', 'd102', 'd103', 'd105']
    return Scenario(
        name='r06', duration=duration, frame_rate=30.0,
        frame_size=(160, 120), camera=_camera(), sensors=_layout(ids),
        targets=[TargetSpec('Phantom', _path(150.0, duration), 120.0)],
        rf_offsets={sid: RF_LAG for sid in ids}, seed=seed,
        sensor_tuning={sid: 2406e6 for sid in ids},
        flight_altitude=ALTITUDE, cloud_amplitude=14.0, noise_std=2.0,
    )


def _r14(seed: int) -> Scenario:
    duration = 20.0
    ids = sorted(SENSOR_POSITIONS)
    tuning = {sid: 2468e6 for sid in ids[:3]}
    tuning.update({sid: 2406e6 for sid in ids[3:]})
    offsets = {sid: RF_LAG for sid in ids}
    offsets['d106'] = RF_LAG + 6.0
    return Scenario(
        name='r14', duration=duration, frame_rate=30.0,
        frame_size=(160, 120), camera=_camera(), sensors=_layout(ids),
        targets=[TargetSpec('Mavic', _path(150.0, duration), -110.0),
                 TargetSpec('Phantom', _path(210.0, duration), 120.0)],
        rf_offsets=offsets, seed=seed, sensor_tuning=tuning,
        flight_altitude=ALTITUDE, cloud_amplitude=8.0, noise_std=2.0,
    )


def _r16(seed: int) -> Scenario:
    duration = 20.0
    ids = sorted(SENSOR_POSITIONS)
    tuning = {sid: 908e6 for sid in ids[:3]}
    tuning.update({sid: 2476e6 for sid in ids[3:]})
    return Scenario(
        name='r16', duration=duration, frame_rate=30.0,
        frame_size=(160, 120), camera=_camera(), sensors=_layout(ids),
        targets=[TargetSpec('IF1200', _path(150.0, duration), -130.0,
                            pixel_sigma=1.8),
                 TargetSpec('m600', _path(210.0, duration), 150.0,
                            pixel_sigma=1.8)],
        rf_offsets={sid: RF_LAG for sid in ids}, seed=seed,
        sensor_tuning=tuning, flight_altitude=ALTITUDE,
        cloud_amplitude=8.0, noise_std=2.0,
    )


PRESETS = {'r06': _r06, 'r14': _r14, 'r16': _r16}


def preset(name: str, seed: int=0) -> Scenario:
    """A built-in scenario.

    :raises UnknownPreset:  If ``name`` is not one of ``r06``, ``r14`` or
                            ``r16``.

    :Example:

        >>> [t.device for t in preset('r14').targets]
        ['Mavic', 'Phantom']

    """
    try:
        factory = PRESETS[name]
    except KeyError:
        raise UnknownPreset('unknown preset {!r}, choose from {}'.format(
            name, ', '.join(sorted(PRESETS))))
    return factory(int(seed))
