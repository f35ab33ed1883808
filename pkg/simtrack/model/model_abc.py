# -*- coding: utf-8 -*-
import abc
from typing import Dict, Union, Tuple, Any, Mapping


class ModelABC(metaclass=abc.ABCMeta):
    """An abstract class with some default implementations for a model, which
    maps the columns of a stage artifact (csv file) to a python object.

    Any of the methods that have a default implementation can be accessed on
    a derived subclass via the ``super`` mechanism.

    """

    @classmethod
    @abc.abstractmethod
    def csv_field_map(cls) -> Dict[str, str]:  # pragma: no cover
        """Return a mapping of <model attribute: csv column> values.

        This does not have a default implementation, and must be implemented
        on the subclass.

        """
        pass

    @abc.abstractmethod
    def to_row(self) -> Dict[str, str]:  # pragma: no cover
        """Return the csv row (column: text) for an instance.

        """
        pass

    @classmethod
    def csv_keys(cls) -> Tuple[str]:
        """Return all the csv columns, in the order they are written.

        This default implementation returns the ``values`` from the
        :meth:`csv_field_map`.

        """
        return tuple(cls.csv_field_map().values())

    @classmethod
    def attribute_name_for(cls, csv_key: str) -> Union[None, str]:
        """Retrieve the python model object's attribute name for a given csv
        column.

        This default implementation checks the :meth:`csv_field_map`,
        returning, ``key`` for the ``value`` in the mapping, or ``None`` if
        not found.

        :param csv_key:  The csv column name.

        """
        for key, value in cls.csv_field_map().items():
            if str(value) == str(csv_key):
                return key

    @classmethod
    def from_row(cls, row: Mapping[str, str]) -> Any:
        """Return an instance of the class from a csv row.

        The default implementation requires that a subclass accepts ``kwargs``
        for all attributes in it's ``__init__`` method.

        :param row:  A mapping of csv column to text, as produced by
                     :class:`csv.DictReader`.

        """
        return cls(**row)

    @classmethod
    def __subclasshook__(cls, Cls):
        if cls is ModelABC:
            methods = [
                any('csv_field_map' in dir(B) for B in Cls.__mro__),
                any('attribute_name_for' in dir(B) for B in Cls.__mro__),
                any('from_row' in dir(B) for B in Cls.__mro__),
                any('to_row' in dir(B) for B in Cls.__mro__),
                any('csv_keys' in dir(B) for B in Cls.__mro__),
            ]
            if all(methods):
                return True
        return NotImplemented  # pragma: no cover
