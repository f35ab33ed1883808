# -*- coding: utf-8 -*-
import csv
import os
from typing import Union, Iterable, Any, Tuple, Callable, List

from .query_abc import QueryABC
from ..model import ModelABC
from ..exceptions import ParseError, MissingInput


def _quote_if_str(val):
    """Helper to quote a value if it's a string.

    """
    if isinstance(val, str):
        return "'{}'".format(val)
    return val


class BaseQuery(QueryABC):
    """Implementation of :class:`QueryABC` abstract class.  This is used to
    read a stage artifact (csv file) and convert the rows into a
    :class:`ModelABC` subclass.

    :param path:  The csv file to read.
    :param model:  The :class:`ModelABC` subclass (or an instance of one)
                   rows are converted to.
    :param missing_ok:  If ``True`` a missing file reads as empty, otherwise
                        :class:`MissingInput` is raised.

    """
    def __init__(self, path: Any=None, model: Any=None,
                 missing_ok: bool=False) -> None:
        self.path = path
        self.model = model
        self.missing_ok = missing_ok
        self._predicates = []  # type: List[Callable[[Any], bool]]
        self._order = None

    @property
    def model(self) -> Any:
        """A :class:`ModelABC` subclass used to convert rows.

        The attribute can be set with either a class or an instance of a class,
        but we always store a reference to the class.

        """
        return getattr(self, '_model', None)

    @model.setter
    def model(self, value) -> None:
        if value:
            if isinstance(value, ModelABC):
                self._model = value.__class__
            elif isinstance(value, type) and issubclass(value, ModelABC):
                self._model = value
            else:
                raise TypeError(value)

    @property
    def path(self) -> Union[str, None]:
        """The csv file for the query.

        """
        return getattr(self, '_path', None)

    @path.setter
    def path(self, value) -> None:
        if value is not None:
            self._path = os.fspath(value)

    def _rows(self) -> Iterable[Any]:
        """Helper that reads the file and yields converted records.  Parse
        failures are reported with the (1-based) line number.

        """
        if self.path is None:
            return
        if not os.path.exists(self.path):
            if self.missing_ok:
                return
            raise MissingInput('no such file: {}'.format(self.path))

        with open(self.path, newline='') as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                if None in row:
                    raise ParseError('too many fields', line=reader.line_num,
                                     path=self.path)
                if any(value is None for value in row.values()):
                    raise ParseError('too few fields', line=reader.line_num,
                                     path=self.path)
                if self.model is None:
                    yield dict(row)
                    continue
                try:
                    yield self.model.from_row(row)
                except ParseError as exc:
                    raise ParseError(str(exc), line=reader.line_num,
                                     path=self.path) from exc

    def _query(self) -> Iterable[Any]:
        for record in self._rows():
            if all(pred(record) for pred in self._predicates):
                yield record

    def first(self) -> Any:
        """Read the file and return the first record matching the current
        state of the query.  This will return ``None`` if there is no match.

        """
        if self._order is not None:
            return next(iter(self.all()), None)
        return next(self._query(), None)

    def all(self) -> Tuple[Any]:
        """Read the file and return a tuple of all records matching the
        current state of the query.

        """
        records = list(self._query())
        if self._order is not None:
            records.sort(key=self._order)
        return tuple(records)

    def __repr__(self) -> str:
        rv = '{}('.format(self.__class__.__name__)
        attrs = [
            'path={}'.format(_quote_if_str(self.path)),
            'model={}'.format(getattr(self.model, '__name__', None)),
        ]
        return rv + ', '.join(attrs) + ')'
