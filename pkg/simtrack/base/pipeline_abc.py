# -*- coding: utf-8 -*-
import abc
from concurrent.futures import Executor
from contextlib import contextmanager
from typing import ContextManager, Union


ExecutorCtx = ContextManager[Executor]


class PipelineABC(metaclass=abc.ABCMeta):
    """This ``abc`` has all the methods that should be implemented for an
    object to be considered a valid pipeline.

    All of the methods must be implemented to create a subclass, or to pass
    an ``isinstance`` or ``issubclass`` check.

    """
    @property
    @abc.abstractmethod
    def output_dir(self) -> str:  # pragma: no cover
        """Return the directory stage artifacts are read from and written
        to.

        """
        pass

    @property
    @abc.abstractmethod
    def threads(self) -> int:  # pragma: no cover
        """Return the number of worker threads a stage may use."""
        pass

    @property
    @abc.abstractmethod
    def executor(self) -> Union[Executor, None]:  # pragma: no cover
        """A shared :class:`concurrent.futures.Executor`.  This should only
        return an executor while a run of several stages holds one.

        """
        pass

    @contextmanager
    @abc.abstractmethod
    def executor_ctx(self) -> ExecutorCtx:  # pragma: no cover
        """A context manager to yield an executor, whether or not a shared
        one is available.

        """
        pass

    @classmethod
    def __subclasshook__(cls, Cls):
        if cls is PipelineABC:
            methods = [
                any('output_dir' in dir(B) for B in Cls.__mro__),
                any('threads' in dir(B) for B in Cls.__mro__),
                any('executor' in dir(B) for B in Cls.__mro__),
                any('executor_ctx' in dir(B) for B in Cls.__mro__),
            ]
            if all(methods):
                return True
        return NotImplemented
