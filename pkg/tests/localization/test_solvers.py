import warnings

import numpy as np
import pytest

from simtrack.localization import SensorLayout, TdoaMeasurement, \
    TdoaParams, SPHERICAL_INTERSECTION, ML_CONSTRAINED, tdoa_residual, \
    spherical_intersection, ml_objective, ml_localize, localize, \
    pairwise_tdoas
from simtrack.utils import SPEED_OF_LIGHT
from simtrack.exceptions import ConfigError, DataError, InsufficientData, \
    DegenerateGeometry

from .conftest import FS, exact_tdoas, receive


EMITTER = (400.0, 300.0, 120.0)


def test_tdoa_residual(layout4):
    tdoas = exact_tdoas(layout4, EMITTER)
    assert tdoa_residual(EMITTER, tdoas, layout4) == pytest.approx(
        0.0, abs=1e-30)
    assert tdoa_residual((0.0, 0.0, 500.0), tdoas, layout4) > 0


def test_spherical_intersection_exact(layout4):
    loc = spherical_intersection(exact_tdoas(layout4, EMITTER, t=4.0),
                                 layout4)
    assert loc.method == SPHERICAL_INTERSECTION
    assert loc.t == 4.0
    assert np.linalg.norm(np.subtract(loc.position, EMITTER)) < 1e-6
    assert loc.residual < 1e-24


def test_spherical_intersection_accepts_either_pair_order(layout4):
    tdoas = [m.reversed() for m in exact_tdoas(layout4, EMITTER)]
    loc = spherical_intersection(tdoas, layout4)
    assert np.linalg.norm(np.subtract(loc.position, EMITTER)) < 1e-6


def test_spherical_intersection_errors(layout4, layout3):
    with pytest.raises(InsufficientData):
        spherical_intersection(exact_tdoas(layout3, EMITTER), layout3)

    flat = SensorLayout([('d1', (0, 0, 0)), ('d2', (100, 0, 0)),
                         ('d3', (0, 100, 0)), ('d4', (100, 100, 0))])
    with pytest.raises(DegenerateGeometry):
        spherical_intersection(exact_tdoas(flat, EMITTER), flat)

    tdoas = exact_tdoas(layout4, EMITTER)
    tdoas[0] = TdoaMeasurement(('d102', 'd103'), 0.0, 0.0)
    with pytest.raises(DataError):
        spherical_intersection(tdoas, layout4)


def test_ml_objective(layout3):
    point = (400.0, 300.0, 100.0)
    tdoas = exact_tdoas(layout3, point)
    assert ml_objective(point, tdoas, layout3, 100.0) == pytest.approx(
        0.0, abs=1e-12)
    assert ml_objective(point, tdoas, layout3, 90.0, sigma_z=10.0,
                        w_z=2.0) == pytest.approx(2.0)
    grid = np.zeros((4, 5, 3))
    assert ml_objective(grid, tdoas, layout3, 100.0).shape == (4, 5)


def test_ml_localize_three_sensors(layout3):
    point = (400.0, 300.0, 100.0)
    loc = ml_localize(exact_tdoas(layout3, point, t=1.0), layout3, 100.0)
    assert loc.method == ML_CONSTRAINED
    assert np.hypot(loc.x - point[0], loc.y - point[1]) < 1e-4
    assert loc.z == pytest.approx(100.0, abs=1e-3)
    assert 'not_converged' not in loc.flags


def test_ml_localize_altitude_prior_pulls_z(layout3):
    point = (400.0, 300.0, 100.0)
    loc = ml_localize(exact_tdoas(layout3, point), layout3, 130.0)
    # horizontal fix is still close, height between truth and prior
    assert np.hypot(loc.x - point[0], loc.y - point[1]) < 100.0
    assert 95.0 < loc.z < 131.0


def test_ml_localize_errors(layout3):
    tdoas = exact_tdoas(layout3, EMITTER)
    with pytest.raises(InsufficientData):
        ml_localize(tdoas[:1], layout3, 100.0)
    with pytest.raises(ConfigError):
        ml_localize(tdoas, layout3, float('nan'))


def test_ml_localize_flags_ambiguous_basins():
    # a symmetric line of sensors can not tell the two sides apart
    layout = SensorLayout([('d1', (-500.0, 0.0, 0.0)),
                           ('d2', (0.0, 0.0, 0.0)),
                           ('d3', (500.0, 0.0, 0.0))], 'd2')
    point = (100.0, 300.0, 100.0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        loc = ml_localize(exact_tdoas(layout, point), layout, 100.0)
    assert 'ambiguous' in loc.flags
    assert len(loc.alternates) == 1
    assert any('basins' in str(w.message) for w in caught)
    assert abs(loc.y) == pytest.approx(300.0, abs=1.0)
    assert abs(loc.alternates[0][1]) == pytest.approx(300.0, abs=1.0)


def test_localize_dispatch(layout4, layout3):
    loc = localize(exact_tdoas(layout4, EMITTER), layout4)
    assert loc.method == SPHERICAL_INTERSECTION

    point = (400.0, 300.0, 100.0)
    with pytest.raises(ConfigError):
        localize(exact_tdoas(layout3, point), layout3)
    loc = localize(exact_tdoas(layout3, point), layout3,
                   TdoaParams(altitude=100.0))
    assert loc.method == ML_CONSTRAINED


def test_localize_falls_back_to_the_altitude_prior():
    flat = SensorLayout([('d1', (0, 0, 0)), ('d2', (1000, 0, 0)),
                         ('d3', (0, 1000, 0)), ('d4', (1000, 1000, 0))])
    point = (400.0, 300.0, 100.0)
    with pytest.raises(DegenerateGeometry):
        localize(exact_tdoas(flat, point), flat)
    loc = localize(exact_tdoas(flat, point), flat, TdoaParams(altitude=100.0))
    assert loc.method == ML_CONSTRAINED
    assert np.hypot(loc.x - 400.0, loc.y - 300.0) < 1e-3


def test_pairwise_tdoas(emission, layout3):
    point = (400.0, 300.0, 100.0)
    captures = receive(emission, layout3, point)
    tdoas = pairwise_tdoas(captures, layout3)
    assert [m.pair for m in tdoas] == [('d106', 'd105'), ('d107', 'd105')]
    for m in tdoas:
        expected = layout3.true_tdoa(point, *m.pair)
        assert abs(m.delta_tau - expected) * FS < 0.2

    del captures['d107']
    assert len(pairwise_tdoas(captures, layout3)) == 1
    del captures['d105']
    assert pairwise_tdoas(captures, layout3) == []


def test_TdoaParams(layout3):
    params = TdoaParams()
    assert params.lag_limit(layout3) == pytest.approx(
        layout3.max_baseline() / SPEED_OF_LIGHT + 1e-6)
    assert TdoaParams(max_lag=2e-6).lag_limit(layout3) == 2e-6
    assert TdoaParams.from_mapping(
        {'clock_offsets': {'d106': 6.0}}).clock_offsets == {'d106': 6.0}
    assert params.clock_offsets is None
    assert params.clock_offset('d106') == 0.0
    assert TdoaParams(clock_offsets={'d106': 6.0}).clock_offset('d106') == 6.0

    with pytest.raises(ConfigError):
        TdoaParams(sigma_tau=0.0)
    with pytest.raises(ConfigError):
        TdoaParams(max_lag=-1.0)
    with pytest.raises(ConfigError):
        TdoaParams(clock_offsets={'d106': float('inf')})
    with pytest.raises(ConfigError):
        TdoaParams.from_mapping({'sigma': 1.0})
