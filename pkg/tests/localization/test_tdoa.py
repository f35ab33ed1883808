import numpy as np
import pytest

from simtrack.localization import TdoaMeasurement, estimate_tdoa
from simtrack.rf import RFCapture
from simtrack.utils import delay_signal
from simtrack.exceptions import DataError, InsufficientData, NoPeak

from .conftest import FS


MAX_LAG = 100 / FS


def capture(samples, sensor_id, t0=0.0, fs=FS):
    return RFCapture(samples=samples, fs=fs, f_center=2.44e9, t0=t0,
                     sensor_id=sensor_id)


def test_estimate_tdoa_integer_delay(emission):
    a = capture(delay_signal(emission, -3.0), 'd106')
    b = capture(emission, 'd105')
    m = estimate_tdoa(a, b, MAX_LAG)
    assert m.pair == ('d106', 'd105')
    assert m.delta_tau * FS == pytest.approx(3.0, abs=0.05)
    assert m.peak_quality > 2.0
    assert m.t == 0.0


def test_estimate_tdoa_fractional_delay(emission):
    a = capture(emission, 'd106')
    b = capture(delay_signal(emission, -17.4), 'd105')
    m = estimate_tdoa(a, b, MAX_LAG)
    assert m.delta_tau * FS == pytest.approx(-17.4, abs=0.2)


def test_estimate_tdoa_is_antisymmetric(emission):
    a = capture(delay_signal(emission, -5.3), 'd106')
    b = capture(emission, 'd105')
    ab = estimate_tdoa(a, b, MAX_LAG)
    ba = estimate_tdoa(b, a, MAX_LAG)
    assert ba.pair == ('d105', 'd106')
    assert ab.delta_tau == pytest.approx(-ba.delta_tau, abs=0.01 / FS)


def test_estimate_tdoa_uses_start_times(emission):
    # a starts recording 10 samples later, the emission reaches both at once
    a = capture(emission[10:], 'd106', t0=1.0 + 10 / FS)
    b = capture(emission, 'd105', t0=1.0)
    m = estimate_tdoa(a, b, MAX_LAG)
    assert m.delta_tau * FS == pytest.approx(0.0, abs=0.05)
    assert m.t == a.start


def test_estimate_tdoa_clock_offset(emission):
    a = capture(emission, 'd106', t0=7.0)
    a = a.replace(clock_offset=7.0)
    b = capture(emission, 'd105')
    assert estimate_tdoa(a, b, MAX_LAG).delta_tau * FS == \
        pytest.approx(0.0, abs=0.05)


def test_estimate_tdoa_errors(rng, emission):
    b = capture(emission, 'd105')
    with pytest.raises(DataError):
        estimate_tdoa(capture(emission, 'd106', fs=2 * FS), b, MAX_LAG)
    with pytest.raises(InsufficientData):
        estimate_tdoa(capture(emission, 'd106', t0=1.0), b, MAX_LAG)
    with pytest.raises(NoPeak):
        estimate_tdoa(capture(np.zeros(emission.size), 'd106'), b, MAX_LAG)

    other = rng.standard_normal(emission.size) + \
        1j * rng.standard_normal(emission.size)
    with pytest.raises(NoPeak):
        estimate_tdoa(capture(other, 'd106'), b, MAX_LAG, min_quality=2.0)


def test_TdoaMeasurement_reversed():
    m = TdoaMeasurement(('d106', 'd105'), 1e-7, 2.0, 5.0)
    r = m.reversed()
    assert r.pair == ('d105', 'd106')
    assert r.delta_tau == -1e-7
    assert (r.t, r.peak_quality) == (2.0, 5.0)
