# -*- coding: utf-8 -*-
import abc
from typing import Any, Tuple


class QueryABC(metaclass=abc.ABCMeta):
    """This ``abc`` has all the methods that should be implemented for an
    object to be considered a valid ``Query`` subclass.

    All of the methods must be implemented to create a subclass, or to pass
    an ``isinstance`` or ``issubclass`` check.

    """
    @property
    @abc.abstractmethod
    def path(self) -> str:  # pragma: no cover
        """Return the csv file the query reads.

        """
        pass

    @property
    @abc.abstractmethod
    def model(self) -> Any:  # pragma: no cover
        """Return the model class rows are converted to.

        """
        pass

    def first(self) -> Any:  # pragma: no cover
        """Returns the first matching record, or ``None``.

        """
        pass

    def all(self) -> Tuple[Any]:  # pragma: no cover
        """Returns a tuple of all the matching records.  Or an empty tuple.

        """
        pass

    @classmethod
    def __subclasshook__(cls, Cls):
        if cls is QueryABC:
            methods = [
                any('path' in dir(Base) for Base in Cls.__mro__),
                any('model' in dir(Base) for Base in Cls.__mro__),
                any('all' in dir(Base) for Base in Cls.__mro__),
                any('first' in dir(Base) for Base in Cls.__mro__),
            ]
            if all(methods):
                return True
        return NotImplemented
