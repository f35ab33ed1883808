# -*- coding: utf-8 -*-
from typing import Sequence, Tuple, Mapping, Any, List

import numpy as np

from ..geometry import WorldPoint
from ..utils import SPEED_OF_LIGHT
from ..exceptions import DataError


class SensorLayout(object):
    """Positions of the passive RF sensors and the reference sensor of the
    TDOA pairs.

    :param sensors:  ``(sensor_id, position)`` pairs, positions as
                     :class:`WorldPoint` or any ``(x, y, z)`` sequence.
    :param reference_id:  Defaults to the first sensor.

    :Example:

        >>> layout = SensorLayout([('d101', (0, 0, 0)), ('d102', (100, 0, 5))])
        >>> layout.reference_id
        'd101'
        >>> layout.baseline('d101', 'd102') > 100
        True

    """
    def __init__(self, sensors: Sequence[Tuple[str, Any]],
                 reference_id: str=None) -> None:
        sensors = [(str(sid), WorldPoint(*(float(c) for c in pos)))
                   for sid, pos in sensors]
        if len(sensors) < 2:
            raise DataError('a layout needs at least 2 sensors')
        ids = [sid for sid, _ in sensors]
        if len(set(ids)) != len(ids):
            raise DataError('duplicate sensor ids in layout')
        pts = np.array([p for _, p in sensors])
        if not np.all(np.isfinite(pts)):
            raise DataError('sensor positions must be finite')
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if np.array_equal(pts[i], pts[j]):
                    raise DataError('sensors {} and {} share a position'
                                    .format(ids[i], ids[j]))
        reference_id = ids[0] if reference_id is None else str(reference_id)
        if reference_id not in ids:
            raise DataError('reference {} not in layout'.format(
                reference_id))
        self._sensors = dict(sensors)
        self._order = ids
        self.reference_id = reference_id

    @classmethod
    def from_mapping(cls, positions: Mapping[str, Any],
                     reference_id: str=None) -> 'SensorLayout':
        """Build from ``{sensor_id: [x, y, z]}``; ids are sorted."""
        return cls(sorted(positions.items()), reference_id)

    @property
    def ids(self) -> List[str]:
        return list(self._order)

    def __len__(self):
        return len(self._order)

    def __contains__(self, sensor_id):
        return sensor_id in self._sensors

    def position(self, sensor_id: str) -> WorldPoint:
        try:
            return self._sensors[sensor_id]
        except KeyError:
            raise DataError('unknown sensor {}'.format(sensor_id))

    def array(self, ids: Sequence[str]=None) -> np.ndarray:
        ids = self._order if ids is None else ids
        return np.array([self.position(i) for i in ids], dtype=float)

    def baseline(self, a: str, b: str) -> float:
        return float(np.linalg.norm(self.array([a]) - self.array([b])))

    def max_baseline(self) -> float:
        pts = self.array()
        return float(max(np.linalg.norm(p - q) for p in pts for q in pts))

    def subset(self, ids: Sequence[str], reference_id: str=None
               ) -> 'SensorLayout':
        ref = reference_id
        if ref is None and self.reference_id in ids:
            ref = self.reference_id
        return SensorLayout([(i, self.position(i)) for i in ids], ref)

    def true_tdoa(self, point: Any, a: str, b: str) -> float:
        """Arrival at ``a`` minus arrival at ``b`` for an emitter at
        ``point`` (seconds).

        """
        p = np.asarray(point, dtype=float)
        da = np.linalg.norm(p - self.array([a])[0])
        db = np.linalg.norm(p - self.array([b])[0])
        return float((da - db) / SPEED_OF_LIGHT)

    def to_dict(self) -> dict:
        return {sid: list(self._sensors[sid]) for sid in self._order}

    def __repr__(self):
        return '{}({}, reference_id={!r})'.format(
            self.__class__.__name__, self._order, self.reference_id)
