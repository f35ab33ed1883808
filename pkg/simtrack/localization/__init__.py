# -*- coding: utf-8 -*-
from .layout import SensorLayout
from .tdoa import TdoaMeasurement, estimate_tdoa
from .solvers import (
    SPHERICAL_INTERSECTION, ML_CONSTRAINED, TdoaParams, tdoa_residual,
    spherical_intersection, ml_objective, ml_localize, localize,
    pairwise_tdoas
)


__all__ = (
    'SensorLayout', 'TdoaMeasurement', 'estimate_tdoa',
    'SPHERICAL_INTERSECTION', 'ML_CONSTRAINED', 'TdoaParams',
    'tdoa_residual', 'spherical_intersection', 'ml_objective',
    'ml_localize', 'localize', 'pairwise_tdoas',
)
