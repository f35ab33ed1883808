# -*- coding: utf-8 -*-
import csv
import math
from typing import Dict, Union, Iterable, Any, Callable

from .model_abc import ModelABC
from ..exceptions import ParseError


def _quote_if_str(val):
    """Helper used in __repr__ statements

    """
    if isinstance(val, str):
        return "'{}'".format(val)
    return val


def optional_str(text: str) -> Union[str, None]:
    """Parser for text columns where an empty cell means ``None``."""
    return text if text != '' else None


def format_value(value: Any) -> str:
    """Text written for a value.  Floats are written with ``repr`` so they
    read back bit-identical.

    """
    if value is None:
        return ''
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        return repr(value)
    return str(value)


class Column(object):
    """Represents a csv column.  It maps the csv column key to an
    attribute on a Model.

    :param csv_key:  The csv column for the attribute.
    :param parse:  Callable used to convert the cell text to a python value.
    :param default:  Value returned when nothing was set.

    """
    def __init__(self, csv_key: str, parse: Callable=float, default=None):
        self.csv_key = csv_key
        self.parse = parse
        self.default = default
        self.name = None

    def __set_name__(self, owner, name):
        self.name = name

    def __get__(self, instance, owner):
        if instance is None:
            return self
        return instance.csv_values.get(self.name, self.default)

    def __set__(self, instance, value):
        if isinstance(value, str) and self.parse is not str:
            try:
                value = self.parse(value)
            except (TypeError, ValueError) as exc:
                raise ParseError(
                    'bad value {!r} for column {!r}'.format(
                        value, self.csv_key)
                ) from exc
        instance.csv_values[self.name] = value

    def __str__(self):
        return str(self.csv_key)

    def __repr__(self):
        return "{}('{}')".format(self.__class__.__name__, self.csv_key)


class BaseModel(ModelABC):
    """Implementation of :class:`ModelABC`.  Used to map csv columns to
    python attributes.

    :param kwargs:  Values to set for the attributes of an instance.  These
                    can be passed in with the python attribute name as the key
                    or the csv column name as the key and the values will be
                    stored and accessible appropriately.  Text values are
                    parsed with the column's ``parse`` callable.


    :Example:

        >>> class Fix(BaseModel):
        ...     time = Column('t')
        ...     label = Column('label', parse=str)
        >>> fix = Fix(time=1.5)
        >>> fix.time == 1.5
        True
        >>> fix2 = Fix(**{'t': '2.5', 'label': 'Mavic'})
        >>> fix2.time == 2.5
        True
        >>> fix2.to_row()
        {'t': '2.5', 'label': 'Mavic'}


    """
    def __init__(self, **kwargs):
        for key, value in kwargs.items():
            setattr(self, key, value)

    @classmethod
    def _columns(cls) -> Iterable[Column]:
        """Returns the :class:`Column` instances on a class, in definition
        order (base classes first).

        """
        cached = cls.__dict__.get('_columns_cache')
        if cached is None:
            seen = {}
            for klass in reversed(cls.__mro__):
                for key, value in vars(klass).items():
                    if isinstance(value, Column):
                        seen[key] = value
            cached = tuple(seen.values())
            setattr(cls, '_columns_cache', cached)
        return cached

    @classmethod
    def from_row(cls, row) -> 'BaseModel':
        """Build an instance from a csv row.  Columns without a default must
        have a value; empty cells of the other columns fall back to their
        default.

        """
        values = {}
        for col in cls._columns():
            text = row.get(col.csv_key)
            if text is None or text == '':
                if col.default is None and col.parse is not optional_str:
                    raise ParseError(
                        'missing value for column {!r}'.format(col.csv_key))
                continue
            values[col.name] = text
        return cls(**values)

    @classmethod
    def column_for_key(cls, key: str) -> Union[Column, None]:
        """Return :class:`Column` for the given key, which can be the python
        attribute or the csv column.

        Returns ``None`` if not found

        """
        if key in cls.csv_field_map().values():
            key = cls.attribute_name_for(key)
        return next((c for c in cls._columns() if c.name == key), None)

    @classmethod
    def csv_field_map(cls) -> Dict[str, str]:
        """Returns the mapping between python attributes and csv columns.

        The python attribute name is the key and csv column is the value
        in the mapping.

        """
        return {c.name: c.csv_key for c in cls._columns()}

    @property
    def csv_values(self) -> Dict[str, Any]:
        """Stores the actual values for the :class:`Column`.  These are
        the values returned when accessing a :class:`Column` instance set
        on a Model.

        """
        try:
            return object.__getattribute__(self, '_csv_values')
        except AttributeError:
            object.__setattr__(self, '_csv_values', {})
            return object.__getattribute__(self, '_csv_values')

    def __setattr__(self, key, value) -> None:
        """Map csv column names to their python attribute, or fallback to the
        default implementation.

        """
        if key not in self.csv_field_map() and \
                key in self.csv_field_map().values():
            key = self.attribute_name_for(key)
        super().__setattr__(key, value)

    def __getattr__(self, key):
        """Only called when normal lookup fails, so this allows reading a
        value by its csv column name.

        """
        name = type(self).attribute_name_for(key)
        if name is not None and name != key:
            return getattr(self, name)
        raise AttributeError(key)

    def to_row(self) -> Dict[str, str]:
        return {c.csv_key: format_value(getattr(self, c.name))
                for c in self._columns()}

    def copy(self, **changes) -> 'BaseModel':
        """Return a copy of an instance with ``changes`` applied.  Attributes
        that are not columns are carried over as well.

        """
        rv = self.__class__()
        rv.__dict__.update(
            {k: v for k, v in self.__dict__.items() if k != '_csv_values'})
        rv.csv_values.update(self.csv_values)
        for key, value in changes.items():
            setattr(rv, key, value)
        return rv

    @classmethod
    def write_csv(cls, path, records: Iterable['BaseModel']) -> int:
        """Write ``records`` to ``path`` with a header row.  Returns the
        number of records written.

        """
        count = 0
        with open(str(path), 'w', newline='') as fh:
            writer = csv.DictWriter(fh, fieldnames=cls.csv_keys(),
                                    lineterminator='\n')
            writer.writeheader()
            for record in records:
                writer.writerow(record.to_row())
                count += 1
        return count

    def __eq__(self, other) -> bool:
        if not isinstance(other, self.__class__):
            return NotImplemented
        return self.to_row() == other.to_row()

    __hash__ = None

    def __repr__(self) -> str:
        rv = '{}('.format(self.__class__.__name__)
        attr_strs = map(
            lambda col: "{}={}".format(
                col.name,
                _quote_if_str(getattr(self, col.name))
            ),
            self._columns()
        )
        rv += ', '.join(attr_strs) + ')'
        return rv
