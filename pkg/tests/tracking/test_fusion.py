import pytest

from simtrack.model import Detection2D, RFLocation, EO_RPCA, EO_EXTERNAL, \
    RF_PROJECTED
from simtrack.tracking import align_timeline, project_rf_locations
from simtrack.exceptions import MissingOffset


def det(t, source=EO_RPCA, u=0.0):
    return Detection2D(t=t, u=u, v=0.0, source=source)


def test_align_timeline():
    eo = [det(0.1), det(0.2)]
    rf = [det(12.1, RF_PROJECTED, u=1.0), det(12.3, RF_PROJECTED, u=2.0)]
    merged = align_timeline([rf, eo], {EO_RPCA: 0.0, RF_PROJECTED: 12.0})
    # 12.1 - 12.0 falls just below 0.1 and snaps onto the EO stamp
    assert [d.t for d in merged[:3]] == [0.1, 0.1, 0.2]
    assert merged[3].t == pytest.approx(0.3)
    # equal times: EO first
    assert [d.source for d in merged[:2]] == [EO_RPCA, RF_PROJECTED]
    # inputs are not changed
    assert rf[0].t == 12.1


def test_align_timeline_shifted_stamps_meet_frame_times():
    frames = [k / 30.0 for k in range(60)]
    eo = [det(t) for t in frames[1::2]]
    rf = [det(t + 12.0, RF_PROJECTED) for t in frames[::3]]
    merged = align_timeline([rf, eo], {EO_RPCA: 0.0, RF_PROJECTED: 12.0},
                            anchors=frames)
    assert {d.t for d in merged} <= set(frames)
    for a, b in zip(merged, merged[1:]):
        assert a.t <= b.t
        if a.t == b.t:
            assert not (a.source == RF_PROJECTED and b.source == EO_RPCA)


def test_align_timeline_leaves_distant_stamps():
    rf = [det(12.05, RF_PROJECTED)]
    merged = align_timeline([rf, [det(0.1)]], {EO_RPCA: 0.0,
                                               RF_PROJECTED: 12.0},
                            anchors=[0.0, 0.1])
    assert merged[0].source == RF_PROJECTED
    assert merged[0].t == pytest.approx(0.05)
    assert merged[0].t not in (0.0, 0.1)


def test_align_timeline_keeps_input_order_on_ties():
    stream = [det(1.0, u=3.0), det(1.0, EO_EXTERNAL, u=1.0), det(0.5, u=2.0)]
    merged = align_timeline([stream], {EO_RPCA: 0.0, EO_EXTERNAL: 0.0})
    assert [d.u for d in merged] == [2.0, 3.0, 1.0]


def test_align_timeline_missing_offset():
    with pytest.raises(MissingOffset) as info:
        align_timeline([[det(0.0, RF_PROJECTED)]], {EO_RPCA: 0.0})
    assert info.value.source == RF_PROJECTED
    assert info.value.exit_code == 2


def test_project_rf_locations(camera):
    locs = [
        RFLocation(t=1.0, x=400.0, y=0.0, z=2.0, method='ml',
                   label='Mavic'),
        RFLocation(t=2.0, x=-400.0, y=0.0, z=2.0, method='ml'),
        RFLocation(t=3.0, x=400.0, y=400.0, z=2.0, method='ml'),
    ]
    dets = project_rf_locations(locs, camera)
    assert dets.rejected == 2
    assert len(dets) == 1
    d = dets[0]
    assert d.t == 1.0
    assert d.label == 'Mavic'
    assert d.source == RF_PROJECTED
    assert d.score == 1.0
    assert d.u == pytest.approx(80.0)
    assert camera.contains(d.u, d.v)

    assert project_rf_locations([], camera) == []
