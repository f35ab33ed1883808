from .model_abc import ModelABC
from .model import BaseModel, Column, optional_str, format_value
from ..geometry import WorldPoint


__all__ = (
    'ModelABC', 'BaseModel', 'Column', 'optional_str', 'format_value',
    'Detection2D', 'RFLocation', 'EoTruth', 'RfTruth', 'TrackRecord',
    'Association', 'TrackSummary', 'Detections',
    'POSITIVE', 'NEGATIVE', 'EO_RPCA', 'EO_EXTERNAL', 'RF_PROJECTED',
)


POSITIVE = 'positive'
NEGATIVE = 'negative'

EO_RPCA = 'eo_rpca'
EO_EXTERNAL = 'eo_external'
RF_PROJECTED = 'rf_projected'


class Detection2D(BaseModel):
    """A timestamped detection in the image plane.

    The csv layout is the external detection layout ``t,u,v,score,label``
    followed by ``contrast,source,area``.

    .. seealso:: :class:`BaseModel` for inherited methods.

    """
    t = Column('t')
    """Time on the unified timeline (seconds)."""

    u = Column('u')
    """Column coordinate of the centroid (pixels)."""

    v = Column('v')
    """Row coordinate of the centroid (pixels)."""

    score = Column('score', default=0.0)
    """Mean absolute sparse intensity over the component, or the external
    detector's score."""

    label = Column('label', parse=optional_str)
    """Device label, set for detections projected from labelled RF fixes."""

    contrast = Column('contrast', parse=str, default=POSITIVE)

    source = Column('source', parse=str, default=EO_RPCA)

    area = Column('area', parse=int, default=0)

    @property
    def device_label(self):
        return self.label

    @property
    def is_rf(self) -> bool:
        return self.source == RF_PROJECTED


class RFLocation(BaseModel):
    """A position fix from TDOA localization.

    Besides the csv columns an instance carries ``flags`` (a tuple holding
    ``'ambiguous'`` and / or ``'not_converged'``) and ``alternates`` (other
    candidate positions).

    """
    t = Column('t')
    x = Column('x')
    y = Column('y')
    z = Column('z')
    method = Column('method', parse=str)
    residual = Column('residual', default=0.0)
    """Sum of squared TDOA residuals at the fix (seconds squared)."""

    label = Column('label', parse=optional_str)

    flags = ()
    alternates = ()

    @property
    def position(self) -> WorldPoint:
        return WorldPoint(self.x, self.y, self.z)

    @property
    def device_label(self):
        return self.label


class EoTruth(BaseModel):
    """Per-frame pixel position of a simulated target."""

    t = Column('t')
    target = Column('target', parse=int)
    u = Column('u')
    v = Column('v')
    range = Column('range')


class RfTruth(BaseModel):
    """True TDOA of a sensor pair for one capture window."""

    t = Column('t')
    pair = Column('pair', parse=str)
    delta_tau = Column('delta_tau')
    target = Column('target', parse=int)


class TrackRecord(BaseModel):
    t = Column('t')
    track_id = Column('track_id', parse=int)
    device_label = Column('device_label', parse=optional_str)
    provenance = Column('provenance', parse=str)
    u = Column('u')
    v = Column('v')
    udot = Column('udot')
    vdot = Column('vdot')
    status = Column('status', parse=str)


class Association(BaseModel):
    """A detection that updated a track."""

    t = Column('t')
    track_id = Column('track_id', parse=int)
    source = Column('source', parse=str)
    u = Column('u')
    v = Column('v')
    label = Column('label', parse=optional_str)


class TrackSummary(BaseModel):
    """One row per track of a fusion run."""

    track_id = Column('track_id', parse=int)
    device_label = Column('device_label', parse=optional_str)
    provenance = Column('provenance', parse=str)
    status = Column('status', parse=str)
    first_t = Column('first_t')
    last_t = Column('last_t')
    confirmed_t = Column('confirmed_t', default=float('nan'))
    labeled_t = Column('labeled_t', default=float('nan'))
    hits = Column('hits', parse=int, default=0)
    rf_hits = Column('rf_hits', parse=int, default=0)
    label_overwrites = Column('label_overwrites', parse=int, default=0)


class Detections(list):
    """A list of :class:`Detection2D` that also reports how many input
    items were dropped on the way (``rejected``).

    """
    def __init__(self, items=(), rejected: int=0):
        super().__init__(items)
        self.rejected = int(rejected)

    def __repr__(self):
        return '{}({}, rejected={})'.format(
            self.__class__.__name__, list.__repr__(self), self.rejected)
