import numpy as np
import pytest

from simtrack.simulator import iter_rf_epochs, generate_rf, emission, \
    burst_waveform, rrc_taps, device_tx
from simtrack.localization import pairwise_tdoas
from simtrack.rf import prepare_for_tdoa
from simtrack.utils import substream
from simtrack.exceptions import BandCollision


def test_rrc_taps():
    taps = rrc_taps(0.35, 4)
    assert taps.size == 8 * 4 + 1
    assert np.allclose(taps, taps[::-1])
    assert np.sum(taps ** 2) == pytest.approx(1.0)


def test_burst_waveform():
    tx = device_tx('Mavic')
    data, env = burst_waveform(tx, 10e6, substream(0, 1))
    assert data.size == env.size == int(round(tx.burst_len * 10e6))
    assert env[0] == pytest.approx(0.0, abs=1e-3)
    assert env.max() == pytest.approx(1.0)


def test_emission_bursts_on_schedule():
    fs = 10e6
    tx = device_tx('Mavic', burst_phase=1e-3)
    x = emission(tx, (10, 0), 0, 0.0, int(0.021 * fs), fs, tx.center_freq)
    power = np.abs(x) ** 2
    on = power > 1e-3
    first = int(np.argmax(on))
    # the ramp keeps the first couple of hundred samples quiet
    assert first == pytest.approx(1e-3 * fs, abs=300)
    # quiet between the first burst and the next one
    assert not np.any(on[int(5.5e-3 * fs):int(11e-3 * fs)])
    assert np.any(on[int(11.5e-3 * fs):int(15e-3 * fs)])


def test_emission_is_keyed():
    fs = 10e6
    tx = device_tx('Mavic')
    n = int(0.005 * fs)
    a = emission(tx, (10, 0), 3, 0.0, n, fs, tx.center_freq)
    # a later window carries the same samples where they overlap
    b = emission(tx, (10, 0), 3, 0.001, n, fs, tx.center_freq)
    assert np.allclose(a[10000:], b[:n - 10000], atol=1e-9)


def test_iter_rf_epochs(short_r14):
    epochs = list(iter_rf_epochs(short_r14))
    assert [e.t for e in epochs] == [0.0, 1.0]
    cap = epochs[1].captures['d106']
    assert cap.t0 == 1.0 + short_r14.rf_offsets['d106']
    assert cap.n == 210000
    assert cap.f_center == 2406e6
    pairs = sorted((row.target, row.pair) for row in epochs[0].truth)
    assert pairs == [(0, 'd102-d101'), (0, 'd103-d101'),
                     (1, 'd105-d104'), (1, 'd106-d104')]


def test_generate_rf_is_deterministic(short_r14):
    scn = short_r14.replace(duration=1.0)
    captures, truth = generate_rf(scn)
    again, _ = generate_rf(scn)
    assert sorted(captures) == scn.sensors.ids
    for sid in captures:
        assert np.array_equal(captures[sid][0].samples,
                              again[sid][0].samples)


def test_iter_rf_epochs_band_collision(short_r14):
    tuning = {sid: 2406e6 for sid in short_r14.sensors.ids}
    targets = [dict(device='Phantom', pixel_contrast=120.0,
                    waypoints=t.waypoints) for t in short_r14.targets]
    scn = short_r14.replace(sensor_tuning=tuning, targets=targets,
                            duration=1.0)
    with pytest.warns(BandCollision):
        next(iter_rf_epochs(scn))


def test_simulated_tdoas_match_truth(short_r14):
    scn = short_r14.replace(duration=1.0)
    epoch = next(iter_rf_epochs(scn))
    truth = {row.pair: row.delta_tau for row in epoch.truth}
    for group in scn.groups():
        layout = scn.sensors.subset(group)
        caps = {sid: prepare_for_tdoa(epoch.captures[sid].replace(
            clock_offset=scn.rf_offsets[sid])) for sid in group}
        tdoas = pairwise_tdoas(caps, layout)
        assert len(tdoas) == 2
        for m in tdoas:
            expected = truth['{}-{}'.format(*m.pair)]
            assert abs(m.delta_tau - expected) < 1e-7
