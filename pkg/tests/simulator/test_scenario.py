import numpy as np
import pytest

from simtrack.simulator import TxSpec, TargetSpec, PRESETS, preset, \
    device_tx, load_scenario, save_scenario
from simtrack.exceptions import ConfigError, MissingInput, UnknownPreset


def test_presets():
    assert sorted(PRESETS) == ['r06', 'r14', 'r16']
    assert [t.device for t in preset('r06').targets] == ['Phantom']
    assert [t.device for t in preset('r14').targets] == ['Mavic', 'Phantom']
    assert [t.device for t in preset('r16').targets] == ['IF1200', 'm600']
    assert preset('r14', seed=9).seed == 9


def test_preset_r14():
    scn = preset('r14')
    assert scn.groups() == [['d101', 'd102', 'd103'],
                            ['d104', 'd105', 'd106']]
    assert scn.rf_offsets['d106'] == scn.rf_offsets['d101'] + 6.0
    assert scn.frame_count == 600
    assert scn.frame_times[1] == pytest.approx(1 / 30.0)
    assert scn.flight_altitude == 60.0


def test_preset_unknown():
    with pytest.raises(UnknownPreset) as info:
        preset('r99')
    assert info.value.exit_code == 2


def test_epoch_times(short_r14):
    assert short_r14.epoch_times.tolist() == [0.0, 1.0]
    assert short_r14.replace(rf_start=0.5).epoch_times.tolist() == [0.5, 1.5]
    assert short_r14.replace(rf_span=0.01).epoch_times.size == 0


def test_save_and_load_scenario(tmp_path, short_r14):
    path = tmp_path / 'scenario.json'
    save_scenario(short_r14, path)
    loaded = load_scenario(path)
    assert loaded.to_dict() == short_r14.to_dict()
    assert loaded.camera.position.tolist() == \
        short_r14.camera.position.tolist()


def test_load_scenario_errors(tmp_path):
    with pytest.raises(MissingInput):
        load_scenario(tmp_path / 'none.json')
    (tmp_path / 'bad.json').write_text('{')
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / 'bad.json')
    (tmp_path / 'odd.json').write_text('{"name": "x", "extra": 1}')
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / 'odd.json')


@pytest.mark.parametrize('changes', [
    {'duration': 0.0},
    {'frame_size': [320, 240]},
    {'rf_window': 2.0},
    {'rf_offsets': {'d101': 75.0}},
    {'rf_offsets': {'d999': 1.0}},
    {'sensor_tuning': {'d101': 2468e6}},
    {'seed': -1},
    {'unknown_key': 1},
])
def test_Scenario_invalid(short_r14, changes):
    with pytest.raises(ConfigError):
        short_r14.replace(**changes)


def test_Scenario_replace_keeps_original(short_r14):
    longer = short_r14.replace(duration=4.0)
    assert longer.duration == 4.0
    assert short_r14.duration == 2.0


def test_TargetSpec_positions():
    target = TargetSpec('Mavic', [(0.0, 0.0, 0.0, 50.0),
                                  (10.0, 100.0, -50.0, 50.0)], -100.0)
    assert target.altitude == 50.0
    assert target.position(5.0).tolist() == [50.0, -25.0, 50.0]
    # held outside the waypoints
    assert target.position(-1.0).tolist() == [0.0, 0.0, 50.0]
    assert target.position(20.0).tolist() == [100.0, -50.0, 50.0]
    assert target.positions([0.0, 10.0]).shape == (2, 3)
    assert target.tx == device_tx('Mavic')


@pytest.mark.parametrize('waypoints,contrast', [
    ([(0.0, 0.0, 0.0, 50.0), (0.0, 1.0, 0.0, 50.0)], 1.0),
    ([(0.0, 0.0, 0.0, 50.0), (1.0, 1.0, 0.0, 60.0)], 1.0),
    ([(0.0, 0.0, 0.0)], 1.0),
    ([(0.0, 0.0, 0.0, 50.0)], 0.0),
])
def test_TargetSpec_invalid(waypoints, contrast):
    with pytest.raises(ConfigError):
        TargetSpec('Mavic', waypoints, contrast)


def test_TxSpec_hops_half_way():
    tx = device_tx('IF1200')
    assert tx.carrier_at(0.49) == 905.5e6
    assert tx.carrier_at(0.5) == 907e6
    assert tx.carrier_at(3.6) == 905.5e6
    assert tx.carriers == [905.5e6, 907e6, 909e6, 910.5e6]
    assert device_tx('Mavic').carrier_at(7.0) == 2468e6


def test_TxSpec_in_band():
    tx = device_tx('Mavic')
    assert tx.bandwidth == pytest.approx(1.35e6)
    assert tx.in_band(2468e6, 10e6)
    assert tx.in_band(2472e6, 10e6)
    assert not tx.in_band(2406e6, 10e6)


@pytest.mark.parametrize('changes', [
    {'burst_len': 20e-3},
    {'rolloff': 1.5},
    {'rise_time': 3e-3},
    {'hop_pattern': []},
    {'burst_phase': -1.0},
])
def test_TxSpec_invalid(changes):
    with pytest.raises(ConfigError):
        device_tx('Mavic', **changes)


def test_device_tx_unknown():
    with pytest.raises(ConfigError):
        device_tx('Tello')
    assert isinstance(device_tx('m600'), TxSpec)
    assert np.isclose(device_tx('m600', cfo=0.0).cfo, 0.0)
