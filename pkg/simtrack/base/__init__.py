# -*- coding: utf-8 -*-
import os
from typing import Union
from contextlib import contextmanager
from concurrent.futures import Executor, ThreadPoolExecutor

from .pipeline_abc import PipelineABC, ExecutorCtx
from ..exceptions import ConfigError


__all__ = ('PipelineABC', 'BasePipeline')


class BasePipeline(PipelineABC):
    """Implements the :class:`PipelineABC`.

    This stores all kwargs into a ``config`` attribute, which is used to
    find the output directory, the thread count and the seed.

    """
    _default_output_dir = 'simtrack_out'
    _default_threads = 1
    _default_seed = 0

    def __init__(self, **config):
        self.config = config
        self._shared_executor = None

    @property
    def output_dir(self) -> str:
        """Return the output directory for an instance.  This looks in the
        ``config`` dict for key 'OUTPUT_DIR' and if nothing is found it
        returns ``_default_output_dir`` set on the class.

        """
        return str(self.config.get('OUTPUT_DIR') or self._default_output_dir)

    @property
    def threads(self) -> int:
        """Return the worker count.  This looks in the ``config`` dict for
        key 'THREADS' and falls back to ``_default_threads``.

        """
        rv = self.config.get('THREADS') or self._default_threads
        if not isinstance(rv, int) or rv < 1:
            raise ConfigError('THREADS must be a positive integer')
        return rv

    @property
    def seed(self) -> Union[int, None]:
        """The 'SEED' of the configuration, ``None`` if it is not set."""
        rv = self.config.get('SEED')
        return None if rv is None else int(rv)

    def path(self, *parts: str) -> str:
        """Join ``parts`` onto the output directory."""
        return os.path.join(self.output_dir, *parts)

    def create_executor(self) -> Executor:
        """Create's a :class:`ThreadPoolExecutor` with this instances
        ``threads``.  The caller shuts it down.

        """
        return ThreadPoolExecutor(max_workers=self.threads)

    @property
    def executor(self) -> Union[Executor, None]:
        """Return's the shared executor while :meth:`shared_executor` is
        active, otherwise ``None``.

        """
        return self._shared_executor

    @contextmanager
    def shared_executor(self) -> ExecutorCtx:
        """Hold one executor for every stage run inside the block."""
        if self._shared_executor is not None:
            yield self._shared_executor
            return
        with self.create_executor() as pool:
            self._shared_executor = pool
            try:
                yield pool
            finally:
                self._shared_executor = None

    @contextmanager
    def executor_ctx(self) -> ExecutorCtx:
        """A context manager that will use the shared executor if one is
        held, if not it will create one for a single stage.

        """
        if self.executor is not None:
            yield self.executor
        else:
            with self.create_executor() as pool:
                yield pool
