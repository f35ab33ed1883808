# -*- coding: utf-8 -*-
from functools import wraps
from operator import attrgetter

from .query_abc import QueryABC
from .base_query import BaseQuery

__all__ = ('QueryABC', 'Query', 'BaseQuery')


def chainable_method(fn):
    """Marks a method to always return self/class regardless of wrapped
    method's output.

    """
    @wraps(fn)
    def decorator(self, *args, **kwargs):
        fn(self, *args, **kwargs)
        return self
    return decorator


class Query(BaseQuery):
    """Extends the :class:`BaseQuery` with some helper methods.  The helpers
    typically return the query when called for method chaining.

    This allows a query to be mostly setup by another object, and the caller
    provide the criteria for the search.

    Example::

        >>> query = Query('out/tracks.csv', TrackRecord)
        >>> query.filter(track_id=3).first()
        TrackRecord(...)
        >>> query.between('t', 10.0, 12.0).order_by('t').all()
        (TrackRecord(...), ...)
        >>> q = query(Association)  # change the ``model`` on a query
        >>> q == query
        True

    """
    def _attribute(self, key: str) -> str:
        """Helper to resolve a csv column to the model attribute name.

        """
        if self.model is not None:
            col = self.model.column_for_key(key)
            if col is not None:
                return col.name
        return key

    def _getter(self, key):
        if self.model is None:
            return lambda row: row[key]
        return attrgetter(self._attribute(key))

    @chainable_method
    def filter(self, **kwargs) -> 'Query':
        """Only keep records whose values equal the keyword arguments.  The
        keys can be the model's attribute name or the csv column.

        :Example:

            >>> q = Query('detections_eo.csv', Detection2D)
            >>> q.filter(source='eo_rpca').filter(contrast='negative')
            Query(...)

        """
        for key, value in kwargs.items():
            get = self._getter(key)
            self._predicates.append(
                lambda rec, get=get, value=value: get(rec) == value)

    @chainable_method
    def between(self, key: str, low=None, high=None) -> 'Query':
        """Only keep records with ``low <= value <= high``.  Either bound can
        be ``None``.

        """
        get = self._getter(key)

        def predicate(rec):
            value = get(rec)
            if low is not None and value < low:
                return False
            if high is not None and value > high:
                return False
            return True

        self._predicates.append(predicate)

    @chainable_method
    def order_by(self, *keys) -> 'Query':
        """Sort the results by the given keys (stable)."""
        getters = [self._getter(k) for k in keys]
        self._order = lambda rec: tuple(g(rec) for g in getters)

    @chainable_method
    def reset(self) -> 'Query':
        """Clear filters and ordering."""
        self._predicates = []
        self._order = None

    @chainable_method
    def __call__(self, model) -> 'Query':
        """Set/change the model for an instance.

        """
        self.model = model
