import math

import numpy as np
import pytest

from simtrack.model import Detection2D, RF_PROJECTED, EO_RPCA, EO_EXTERNAL
from simtrack.tracking import FusionConfig, Tracker, TrackState, kalman, \
    track_step, assign_device_labels, TENTATIVE, CONFIRMED, DELETED, \
    NO_LABEL, HUNGARIAN_NOTIONAL, RF_FINGERPRINT
from simtrack.exceptions import ConfigError, DataError


def at(t, u, v, **kwargs):
    return Detection2D(t=t, u=u, v=v, score=1.0, **kwargs)


def test_FusionConfig_defaults():
    cfg = FusionConfig()
    assert cfg.gate_value == pytest.approx(9.2103, abs=1e-4)
    assert cfg.spawn_gate_value == pytest.approx(18.4207, abs=1e-4)
    assert cfg.offsets == {EO_RPCA: 0.0, EO_EXTERNAL: 0.0, RF_PROJECTED: 0.0}
    assert cfg.m_confirm == 3
    assert cfg.n_miss == 15
    assert np.allclose(cfg.noise(EO_RPCA), np.eye(2))
    assert np.allclose(cfg.noise(RF_PROJECTED), 25 * np.eye(2))


def test_FusionConfig_from_mapping():
    cfg = FusionConfig.from_mapping({
        'gate_px': 16.0, 'M_confirm': 2, 'N_miss': 4,
        'offsets': {'rf_projected': '12'}})
    assert cfg.gate_value == 16.0
    assert cfg.m_confirm == 2
    assert cfg.n_miss == 4
    assert cfg.offsets[RF_PROJECTED] == 12.0

    # configured offsets leave the RF source to be named
    cfg = FusionConfig.from_mapping({'offsets': {'eo_external': 1.0}})
    assert cfg.offsets == {EO_RPCA: 0.0, EO_EXTERNAL: 1.0}


@pytest.mark.parametrize('values', [
    {'q': 0}, {'r_eo': -1}, {'gate': 0}, {'gate_probability': 1.0},
    {'spawn_gate': -1}, {'spawn_gate_probability': 0},
    {'m_confirm': 6}, {'n_miss': 0}, {'offsets': {'rf_projected': 'nan'}},
    {'nope': 1},
])
def test_FusionConfig_invalid(values):
    with pytest.raises(ConfigError):
        FusionConfig.from_mapping(values)


def test_Tracker_confirms_three_of_five():
    tracker = Tracker(FusionConfig())
    tracker.step([at(0.0, 10.0, 10.0)], 0.0)
    tracker.step([at(0.1, 10.0, 10.0)], 0.1)
    track = tracker.tracks[0]
    assert track.status == TENTATIVE
    assert track.provenance == NO_LABEL
    tracker.step([], 0.2)
    tracker.step([at(0.3, 10.0, 10.0)], 0.3)
    assert track.status == CONFIRMED
    assert track.confirmed_t == 0.3
    assert track.hits == 3
    assert track.provenance == HUNGARIAN_NOTIONAL
    assert len(tracker.tracks) == 1


def test_Tracker_drops_tentative_tracks():
    tracker = Tracker(FusionConfig())
    tracker.step([at(0.0, 10.0, 10.0)], 0.0)
    tracker.step([], 0.1)
    tracker.step([], 0.2)
    assert tracker.tracks[0].status == TENTATIVE
    tracker.step([], 0.3)
    assert tracker.tracks[0].status == DELETED
    assert tracker.live == []


def test_Tracker_deletes_after_misses():
    tracker = Tracker(FusionConfig(n_miss=4))
    for k in range(3):
        tracker.step([at(k / 10, 10.0, 10.0)], k / 10)
    track = tracker.tracks[0]
    for k in range(3, 6):
        tracker.step([], k / 10)
    assert track.status == CONFIRMED
    assert track.misses == 3
    tracker.step([], 0.6)
    assert track.status == DELETED


def test_Tracker_rf_steps_do_not_count_misses():
    tracker = Tracker(FusionConfig(n_miss=2))
    for k in range(3):
        tracker.step([at(k / 10, 10.0, 10.0)], k / 10)
    track = tracker.tracks[0]
    for k in range(3, 8):
        tracker.step([], k / 10, frame_step=False)
    assert track.status == CONFIRMED
    assert track.misses == 0


def test_Tracker_gates_far_detections():
    tracker = Tracker(FusionConfig())
    tracker.step([at(0.0, 10.0, 10.0)], 0.0)
    tracker.step([at(0.1, 90.0, 90.0)], 0.1)
    assert [tr.track_id for tr in tracker.tracks] == [1, 2]
    assert tracker.tracks[0].hits == 1
    assert [a.track_id for a in tracker.associations] == [1, 2]


def test_Tracker_no_spawn_next_to_confirmed_track():
    tracker = Tracker(FusionConfig())
    for k in range(3):
        tracker.step([at(k / 10, 10.0, 10.0)], k / 10)
    track = tracker.tracks[0]
    assert track.status == CONFIRMED

    tracker.predict_to(0.3)
    _, S = kalman.innovation(track.x, track.P, track.position, np.eye(2))
    near = track.position + (math.sqrt(13.0 * S[0, 0]), 0.0)
    far = track.position - (math.sqrt(40.0 * S[0, 0]), 0.0)
    # outside the 9.21 gate: neither detection updates the track
    tracker.step([at(0.3, *near), at(0.3, *far)], 0.3)
    assert track.misses == 1
    assert len(tracker.tracks) == 2
    assert tracker.tracks[1].position == pytest.approx(far)
    assert [a.track_id for a in tracker.associations][-1] == 2


def test_Tracker_spawns_next_to_tentative_tracks():
    tracker = Tracker(FusionConfig(spawn_gate=1e6))
    tracker.step([at(0.0, 10.0, 10.0)], 0.0)
    tracker.step([at(0.1, 10.0, 10.0), at(0.1, 60.0, 10.0)], 0.1)
    assert len(tracker.tracks) == 2


def test_Tracker_rf_next_to_confirmed_track_still_labels():
    tracker = Tracker(FusionConfig())
    for k in range(3):
        tracker.step([at(k / 10, 10.0, 10.0)], k / 10)
    tracker.step([at(0.3, 10.0, 10.0),
                  at(0.3, 12.0, 10.0, source=RF_PROJECTED, label='Mavic')],
                 0.3)
    assert len(tracker.tracks) == 1
    assert tracker.tracks[0].device_label == 'Mavic'
    assert tracker.tracks[0].provenance == RF_FINGERPRINT


def test_Tracker_time_goes_backwards():
    tracker = Tracker()
    tracker.step([at(1.0, 10.0, 10.0)], 1.0)
    with pytest.raises(DataError):
        tracker.step([], 0.5)


def test_Tracker_rf_measurements():
    tracker = Tracker(FusionConfig())
    for k in range(3):
        tracker.step([at(k / 10, 10.0, 10.0)], k / 10)
    rf = at(0.3, 13.0, 10.0, source=RF_PROJECTED, label='Mavic')
    tracker.step([rf], 0.3, frame_step=False)
    track = tracker.tracks[0]
    assert track.rf_hits == 1
    assert track.hits == 4
    assert track.device_label == 'Mavic'
    assert track.provenance == RF_FINGERPRINT
    assert track.labeled_t == 0.3
    assert tracker.associations[-1].source == RF_PROJECTED


def test_Tracker_rf_label_only():
    tracker = Tracker(FusionConfig(rf_as_measurement=False))
    for k in range(3):
        tracker.step([at(k / 10, 10.0, 10.0)], k / 10)
    track = tracker.tracks[0]
    x = track.x.copy()
    tracker.step([at(0.3, 20.0, 10.0, source=RF_PROJECTED, label='Mavic')],
                 0.3, frame_step=False)
    assert track.hits == 3
    assert track.rf_hits == 0
    assert track.device_label == 'Mavic'
    assert np.allclose(track.x[:2], x[:2] + 0.1 * x[2:])

    # too far away to label
    tracker.step([at(0.4, 60.0, 10.0, source=RF_PROJECTED, label='Phantom')],
                 0.4, frame_step=False)
    assert track.votes == {'Mavic': 1}
    assert len(tracker.tracks) == 1


def test_Tracker_rf_until_labeled():
    tracker = Tracker(FusionConfig(rf_until_labeled=True))
    for k in range(3):
        tracker.step([at(k / 10, 10.0, 10.0)], k / 10)
    track = tracker.tracks[0]
    tracker.step([at(0.3, 11.0, 10.0, source=RF_PROJECTED, label='Mavic')],
                 0.3, frame_step=False)
    assert track.rf_hits == 1
    tracker.step([at(0.4, 11.0, 10.0, source=RF_PROJECTED, label='Mavic')],
                 0.4, frame_step=False)
    assert track.rf_hits == 1
    assert track.votes['Mavic'] == 2


def test_TrackState_vote():
    track = TrackState(track_id=1, x=np.zeros(4), P=np.eye(4), t=0.0)
    track.vote('Mavic', 1.0)
    track.vote('Mavic', 1.5)
    track.vote('Phantom', 2.0)
    assert track.device_label == 'Mavic'
    track.vote('Phantom', 3.0)
    assert track.device_label == 'Mavic'
    track.vote('Phantom', 4.0)
    assert track.device_label == 'Phantom'
    assert track.labeled_t == 4.0
    assert track.label_overwrites == 1


def test_TrackState_record_and_summary():
    track = TrackState(track_id=7, x=[10.0, 20.0, 1.0, -2.0], P=np.eye(4),
                       t=1.0)
    record = track.record(3.0)
    assert (record.u, record.v) == (12.0, 16.0)
    assert record.status == TENTATIVE
    assert track.t == 1.0

    summary = track.summary()
    assert summary.track_id == 7
    assert summary.first_t == 1.0
    assert math.isnan(summary.confirmed_t)
    assert math.isnan(summary.labeled_t)


def test_assign_device_labels():
    near = TrackState(track_id=1, x=[10.0, 10.0, 0.0, 0.0], P=np.eye(4),
                      t=0.0)
    far = TrackState(track_id=2, x=[30.0, 10.0, 0.0, 0.0], P=np.eye(4),
                     t=0.0)
    dets = [at(0.0, 14.0, 10.0, source=RF_PROJECTED, label='Mavic'),
            at(0.0, 20.0, 50.0, source=RF_PROJECTED, label='Phantom'),
            at(0.0, 30.0, 10.0, source=RF_PROJECTED)]
    assign_device_labels([near, far], dets, 15.0)
    assert near.device_label == 'Mavic'
    assert far.device_label is None


def test_track_step():
    cfg = FusionConfig()
    tracks = track_step([], [at(0.0, 5.0, 5.0)], cfg, 1 / 30)
    assert len(tracks) == 1
    assert tracks[0].t == pytest.approx(1 / 30)
    tracks = track_step(tracks, [at(0.0, 5.0, 5.0)], cfg, 1 / 30)
    assert tracks[0].hits == 2
    with pytest.raises(DataError):
        track_step(tracks, [], cfg, 0.0)


def test_Tracker_run_output_grid():
    dets = [at(k / 30, 10.0 + k, 10.0) for k in range(31)]
    tracker = Tracker(FusionConfig()).run(dets)
    times = sorted({r.t for r in tracker.records})
    assert times == pytest.approx([k / 10 for k in range(11)])
    assert tracker.records[0].status == TENTATIVE
    assert tracker.records[-1].status == CONFIRMED


def test_Tracker_run_frames_without_detections():
    dets = [at(k / 30, 10.0, 10.0) for k in range(3)]
    frames = [k / 30 for k in range(10)]
    tracker = Tracker(FusionConfig(n_miss=5)).run(dets, frames)
    assert tracker.tracks[0].status == DELETED


def test_Tracker_single_target_accuracy(seeds, frame_times, cv_detections):
    errors, nis = [], []
    for seed in seeds:
        dets, truth = cv_detections([(20.0, 90.0, 12.0, -6.0)], frame_times,
                                    2.0, seed)
        tracker = Tracker(FusionConfig(r_eo=2.0)).run(dets, frame_times)
        for rec in tracker.records:
            if rec.status == CONFIRMED and rec.t >= 1.0:
                errors.append(np.hypot(*(truth(rec.t)[0] - (rec.u, rec.v))))
        nis.extend(tracker.nis[30:])
    assert np.sqrt(np.mean(np.square(errors))) <= 3.0
    assert 1.6 <= np.mean(nis) <= 2.4


def test_Tracker_crossing_targets(seeds, cv_detections):
    times = [k / 30 for k in range(120)]
    # 40 px apart when the columns cross at t = 2
    targets = [(20.0, 40.0, 30.0, 0.0), (140.0, 80.0, -30.0, 0.0)]
    for seed in seeds:
        dets, truth = cv_detections(targets, times, 1.0, seed)
        tracker = Tracker(FusionConfig()).run(dets, times)
        owners = {}
        for rec in tracker.records:
            if rec.status != CONFIRMED:
                continue
            dist = np.hypot(*(truth(rec.t) - (rec.u, rec.v)).T)
            owners.setdefault(rec.track_id, set()).add(int(np.argmin(dist)))
        assert len(owners) == 2, seed
        assert all(len(o) == 1 for o in owners.values()), seed
        assert set.union(*owners.values()) == {0, 1}
