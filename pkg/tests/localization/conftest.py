import numpy as np
import pytest

from simtrack.localization import SensorLayout, TdoaMeasurement
from simtrack.rf import RFCapture
from simtrack.utils import SPEED_OF_LIGHT, delay_signal


FS = 10e6


@pytest.fixture
def layout4():
    return SensorLayout([
        ('d101', (0.0, 0.0, 0.0)),
        ('d102', (1000.0, 0.0, 10.0)),
        ('d103', (0.0, 1000.0, 20.0)),
        ('d104', (800.0, 900.0, 60.0)),
    ])


@pytest.fixture
def layout3():
    return SensorLayout([
        ('d105', (0.0, 0.0, 0.0)),
        ('d106', (1000.0, 0.0, 5.0)),
        ('d107', (0.0, 1000.0, 10.0)),
    ])


def exact_tdoas(layout, point, t=0.0):
    ref = layout.reference_id
    return [TdoaMeasurement((sid, ref), layout.true_tdoa(point, sid, ref), t)
            for sid in layout.ids if sid != ref]


@pytest.fixture
def emission(rng):
    n = 4096
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def receive(emission, layout, point, t0=0.0, fs=FS):
    """Captures of one emission at every sensor of ``layout``."""
    p = np.asarray(point, dtype=float)
    ranges = {sid: np.linalg.norm(p - np.asarray(layout.position(sid)))
              for sid in layout.ids}
    nearest = min(ranges.values())
    rv = {}
    for sid, r in ranges.items():
        delay = (r - nearest) / SPEED_OF_LIGHT * fs
        rv[sid] = RFCapture(samples=delay_signal(emission, -delay), fs=fs,
                            f_center=2.44e9, t0=t0, sensor_id=sid)
    return rv
