# -*- coding: utf-8 -*-
import logging
import warnings
from dataclasses import dataclass
from typing import Sequence, List, Optional, Dict, Tuple

import numpy as np
from scipy import ndimage, optimize

from .layout import SensorLayout
from .tdoa import TdoaMeasurement, estimate_tdoa
from ..config import SectionParams
from ..model import RFLocation
from ..rf import RFCapture
from ..utils import SPEED_OF_LIGHT
from ..exceptions import ConfigError, DataError, InsufficientData, \
    DegenerateGeometry, NoRealRoot, AmbiguousMinimum, NoPeak


logger = logging.getLogger(__name__)

SPHERICAL_INTERSECTION = 'spherical_intersection'
ML_CONSTRAINED = 'ml_constrained'

MAX_CONDITION = 1e8
AMBIGUITY_RATIO = 0.01


@dataclass
class TdoaParams(SectionParams):
    """Settings of the localize stage.

    ``max_lag`` defaults to the largest sensor baseline over ``c`` plus
    ``lag_guard``.  ``clock_offsets`` (sensor id to seconds) are the sensor
    clock minus the unified timeline; when not configured the pipeline takes
    them from the scenario.  ``altitude`` is the flight altitude
    side information (meters) used with fewer than 4 sensors.

    """
    max_lag: Optional[float] = None
    lag_guard: float = 1e-6
    min_quality: float = 2.0
    sigma_tau: float = 20e-9
    sigma_z: float = 10.0
    w_z: float = 1.0
    altitude: Optional[float] = None
    grid_cell: float = 50.0
    grid_margin: float = 600.0
    rate: float = 10e6
    clock_offsets: Optional[Dict[str, float]] = None
    reference: Optional[str] = None
    groups: Optional[List[List[str]]] = None

    def validate(self) -> None:
        for name in ('lag_guard', 'min_quality', 'sigma_tau', 'sigma_z',
                     'grid_cell', 'rate'):
            if not getattr(self, name) > 0:
                raise ConfigError('{} must be positive'.format(name))
        if self.w_z < 0 or self.grid_margin < 0:
            raise ConfigError('w_z and grid_margin must be >= 0')
        if self.max_lag is not None and not self.max_lag > 0:
            raise ConfigError('max_lag must be positive')
        for sid, value in (self.clock_offsets or {}).items():
            if not np.isfinite(value):
                raise ConfigError('clock offset of {} is not finite'.format(
                    sid))

    def clock_offset(self, sensor_id: str) -> float:
        return float((self.clock_offsets or {}).get(sensor_id, 0.0))

    def lag_limit(self, layout: SensorLayout) -> float:
        if self.max_lag is not None:
            return self.max_lag
        return layout.max_baseline() / SPEED_OF_LIGHT + self.lag_guard


def _predicted(point: np.ndarray, pa: np.ndarray, pb: np.ndarray
               ) -> np.ndarray:
    return (np.linalg.norm(point - pa, axis=-1) -
            np.linalg.norm(point - pb, axis=-1)) / SPEED_OF_LIGHT


def tdoa_residual(point, tdoas: Sequence[TdoaMeasurement],
                  layout: SensorLayout) -> float:
    """Sum of squared TDOA residuals at ``point`` (seconds squared)."""
    point = np.asarray(point, dtype=float)
    pa = layout.array([m.pair[0] for m in tdoas])
    pb = layout.array([m.pair[1] for m in tdoas])
    meas = np.array([m.delta_tau for m in tdoas])
    return float(np.sum((_predicted(point, pa, pb) - meas) ** 2))


def _against_reference(tdoas, ref) -> Tuple[List[str], np.ndarray]:
    """``(others, d)`` with ``d_i = c * (arrival_i - arrival_ref)``."""
    others = []
    d = []
    for m in tdoas:
        if m.pair[1] == ref:
            other, tau = m.pair[0], m.delta_tau
        elif m.pair[0] == ref:
            other, tau = m.pair[1], -m.delta_tau
        else:
            raise DataError('pair {} does not hold the reference {}'.format(
                m.pair, ref))
        if other in others:
            raise DataError('sensor {} appears twice'.format(other))
        others.append(other)
        d.append(SPEED_OF_LIGHT * tau)
    return others, np.array(d)


def spherical_intersection(tdoas: Sequence[TdoaMeasurement],
                           layout: SensorLayout) -> RFLocation:
    """Closed form position from range differences to a common reference.

    With sensors ``x_i`` relative to the reference and range differences
    ``d_i``, the position solves ``S r = delta / 2 - R d`` for the reference
    range ``R``.  Substituting the least squares solution ``r = a + R b``
    into ``|r| = R`` gives a quadratic in ``R``; of its positive roots that
    keep every range positive the one with the smaller TDOA residual is
    returned (ties prefer a point not below the lowest sensor, then the
    nearer one).

    :raises InsufficientData:  With fewer than 3 pairs (4 sensors).
    :raises DegenerateGeometry:  If the sensor matrix has a condition number
                                 above 1e8.
    :raises NoRealRoot:  If no root is valid.

    """
    ref = layout.reference_id
    others, d = _against_reference(tdoas, ref)
    if len(others) < 3:
        raise InsufficientData('spherical intersection needs 4 sensors, '
                               'got {}'.format(len(others) + 1))
    origin = layout.array([ref])[0]
    S = layout.array(others) - origin
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise DegenerateGeometry('sensor geometry condition {:.3g}'.format(
            cond))

    delta = np.sum(S ** 2, axis=1) - d ** 2
    S_pinv = np.linalg.pinv(S)
    a = 0.5 * S_pinv @ delta
    b = -S_pinv @ d

    qa = b @ b - 1.0
    qb = 2.0 * a @ b
    qc = a @ a
    if abs(qa) < 1e-12:
        roots = [-qc / qb] if qb != 0 else []
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0:
            if disc < -1e-9 * qb * qb:
                raise NoRealRoot('negative discriminant {:.3g}'.format(disc))
            disc = 0.0
        sq = np.sqrt(disc)
        roots = [(-qb + sq) / (2 * qa), (-qb - sq) / (2 * qa)]

    lowest = layout.array()[:, 2].min()
    meas = [m for m in tdoas]
    candidates = []
    for R in roots:
        if not R > 0 or np.any(R + d <= 0):
            continue
        point = origin + a + R * b
        res = tdoa_residual(point, meas, layout)
        candidates.append((res, point[2] < lowest, R, point))
    if not candidates:
        raise NoRealRoot('no root with positive ranges')

    candidates.sort(key=lambda c: c[0])
    best = candidates[0]
    if len(candidates) > 1 and np.isclose(candidates[1][0], best[0],
                                          rtol=1e-6, atol=1e-24):
        best = min(candidates, key=lambda c: (c[1], c[2]))
    res, _, _, point = best
    return RFLocation(t=float(tdoas[0].t), x=float(point[0]),
                      y=float(point[1]), z=float(point[2]),
                      method=SPHERICAL_INTERSECTION, residual=res)


def ml_objective(points, tdoas: Sequence[TdoaMeasurement],
                 layout: SensorLayout, altitude: float, sigma_tau: float=20e-9,
                 sigma_z: float=10.0, w_z: float=1.0) -> np.ndarray:
    """``sum((e_i / sigma_tau)^2) + w_z * ((z - altitude) / sigma_z)^2`` at
    each point of an ``(..., 3)`` array.

    """
    pts = np.asarray(points, dtype=float)
    rv = w_z * ((pts[..., 2] - altitude) / sigma_z) ** 2
    for m in tdoas:
        pa = layout.array([m.pair[0]])[0]
        pb = layout.array([m.pair[1]])[0]
        e = _predicted(pts, pa, pb) - m.delta_tau
        rv = rv + (e / sigma_tau) ** 2
    return rv


def ml_localize(tdoas: Sequence[TdoaMeasurement], layout: SensorLayout,
                altitude: float, sigma_z: float=10.0, w_z: float=1.0,
                sigma_tau: float=20e-9, grid_cell: float=50.0,
                grid_margin: float=600.0) -> RFLocation:
    """Maximum likelihood position with the flight altitude as a soft
    prior.

    A grid at the prior altitude over the sensor bounding box (plus
    ``grid_margin``) seeds the search; the two best local minima are
    refined with Levenberg-Marquardt.  Work is done relative to the
    reference sensor.

    The returned location carries ``flags``: ``'ambiguous'`` when a second
    basin is within 1% of the best objective (its position is in
    ``alternates`` and :class:`AmbiguousMinimum` is warned), and
    ``'not_converged'`` when refinement failed and the grid point is
    returned.  ``residual`` is the unweighted sum of squared TDOA errors.

    :raises InsufficientData:  With fewer than 2 pairs.

    """
    tdoas = list(tdoas)
    involved = {s for m in tdoas for s in m.pair}
    if len(tdoas) < 2 or len(involved) < 3:
        raise InsufficientData('ml localization needs 2 pairs over 3 '
                               'sensors')
    if not np.isfinite(altitude):
        raise ConfigError('altitude prior must be finite')

    origin = layout.array([layout.reference_id])[0]
    local = SensorLayout([(sid, layout.array([sid])[0] - origin)
                          for sid in layout.ids], layout.reference_id)
    h = altitude - origin[2]
    kwargs = dict(sigma_tau=sigma_tau, sigma_z=sigma_z, w_z=w_z)

    pts = local.array()
    lo = pts[:, :2].min(axis=0) - grid_margin
    hi = pts[:, :2].max(axis=0) + grid_margin
    xs = np.arange(lo[0], hi[0] + grid_cell / 2, grid_cell)
    ys = np.arange(lo[1], hi[1] + grid_cell / 2, grid_cell)
    X, Y = np.meshgrid(xs, ys, indexing='ij')
    grid = np.stack([X, Y, np.full_like(X, h)], axis=-1)
    J = ml_objective(grid, tdoas, local, h, **kwargs)

    minima = np.argwhere(ndimage.minimum_filter(J, size=3, mode='nearest')
                         == J)
    order = np.argsort(J[tuple(minima.T)], kind='stable')
    seeds = [grid[tuple(minima[i])] for i in order[:2]]

    pa = local.array([m.pair[0] for m in tdoas])
    pb = local.array([m.pair[1] for m in tdoas])
    meas = np.array([m.delta_tau for m in tdoas])
    weight = np.sqrt(w_z) / sigma_z

    def residuals(p):
        e = (_predicted(p, pa, pb) - meas) / sigma_tau
        return np.append(e, weight * (p[2] - h))

    results = []
    for seed in seeds:
        fit = optimize.least_squares(residuals, seed, method='lm',
                                     xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                     max_nfev=400)
        point = fit.x
        cost = float(ml_objective(point, tdoas, local, h, **kwargs))
        seed_cost = float(ml_objective(seed, tdoas, local, h, **kwargs))
        ok = fit.status > 0 and np.all(np.isfinite(point)) and \
            cost <= seed_cost
        if not ok:
            point, cost = seed, seed_cost
        results.append((cost, ok, point))
    results.sort(key=lambda r: r[0])

    cost, ok, point = results[0]
    flags = []
    alternates = []
    if not ok:
        flags.append('not_converged')
        logger.warning('ml localization did not converge, returning grid '
                       'point')
    if len(results) > 1:
        other = results[1]
        distinct = np.linalg.norm(other[2] - point) > grid_cell
        if distinct and other[0] <= (1 + AMBIGUITY_RATIO) * cost + 1e-6:
            flags.append('ambiguous')
            alternates.append(tuple(float(c) for c in other[2] + origin))
            warnings.warn(AmbiguousMinimum(
                'two basins within 1% ({:.4g} / {:.4g})'.format(
                    cost, other[0])))

    world = point + origin
    rv = RFLocation(t=float(tdoas[0].t), x=float(world[0]),
                    y=float(world[1]), z=float(world[2]),
                    method=ML_CONSTRAINED,
                    residual=tdoa_residual(point, tdoas, local))
    rv.flags = tuple(flags)
    rv.alternates = tuple(alternates)
    return rv


def localize(tdoas: Sequence[TdoaMeasurement], layout: SensorLayout,
             params: TdoaParams=None) -> RFLocation:
    """Spherical intersection with 4 or more sensors, altitude constrained
    maximum likelihood otherwise (or when the closed form fails and an
    altitude is configured).

    """
    params = params or TdoaParams()
    involved = {s for m in tdoas for s in m.pair}
    ml_kwargs = dict(sigma_z=params.sigma_z, w_z=params.w_z,
                     sigma_tau=params.sigma_tau, grid_cell=params.grid_cell,
                     grid_margin=params.grid_margin)
    if len(involved) >= 4:
        try:
            return spherical_intersection(tdoas, layout)
        except (DegenerateGeometry, NoRealRoot) as exc:
            if params.altitude is None:
                raise
            logger.info('spherical intersection failed (%s), using the '
                        'altitude prior', exc)
    if params.altitude is None:
        raise ConfigError('localizing with {} sensors needs TDOA.altitude'
                          .format(len(involved)))
    return ml_localize(tdoas, layout, params.altitude, **ml_kwargs)


def pairwise_tdoas(captures: Dict[str, RFCapture], layout: SensorLayout,
                   params: TdoaParams=None) -> List[TdoaMeasurement]:
    """TDOAs of every sensor against the layout's reference for one
    capture window.  Pairs without a usable correlation peak are skipped.

    """
    params = params or TdoaParams()
    ref = layout.reference_id
    if ref not in captures:
        return []
    max_lag = params.lag_limit(layout)
    rv = []
    for sid in layout.ids:
        if sid == ref or sid not in captures:
            continue
        try:
            rv.append(estimate_tdoa(captures[sid], captures[ref], max_lag,
                                    params.min_quality))
        except (NoPeak, InsufficientData) as exc:
            logger.debug('skipping pair (%s, %s): %s', sid, ref, exc)
    return rv
