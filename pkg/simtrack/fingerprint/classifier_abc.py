# -*- coding: utf-8 -*-
import abc
from typing import Tuple, Any


class ClassifierABC(metaclass=abc.ABCMeta):
    """Everything a device classifier needs to be used by the fingerprint
    stage.

    Objects that implement ``labels`` and ``classify`` pass ``isinstance``
    checks without subclassing, so a trained model can be dropped in.

    """
    @property
    @abc.abstractmethod
    def labels(self) -> Tuple[str, ...]:  # pragma: no cover
        """The ordered device classes the classifier reports on."""
        pass

    @abc.abstractmethod
    def classify(self, vector: Any) -> Any:  # pragma: no cover
        """Return a :class:`ConfidenceVector` for a fingerprint vector."""
        pass

    @classmethod
    def __subclasshook__(cls, Cls):
        if cls is ClassifierABC:
            methods = [
                any('labels' in dir(Base) for Base in Cls.__mro__),
                any('classify' in dir(Base) for Base in Cls.__mro__),
            ]
            if all(methods):
                return True
        return NotImplemented
