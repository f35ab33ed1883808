# -*- coding: utf-8 -*-
import os
import logging
from typing import Any
from functools import wraps

import click

from .config import PipelineConfig
from .exceptions import SimtrackError, MissingInput
from .utils import configure_logging


logger = logging.getLogger(__name__)


class PipelineContext(dict):
    """A specialized dict, passed to the command line commands.  The keys are
    accessible using normal dict style or with attribute (dot) style syntax.

    """

    def __getattr__(self, key: str) -> Any:
        try:
            return self[key]
        except KeyError:
            raise AttributeError(key)

    def __setattr__(self, key: str, value: Any) -> None:
        self[key] = value


def pass_context(fn):
    """Helper that builds a :class:`PipelineContext` with the loaded
    :class:`PipelineConfig` and a :class:`Pipeline` for it, from the
    ``config``, ``out``, ``seed`` and ``threads`` options of a command.
    This will pass the ``context`` as the first arg to the command.

    """
    @wraps(fn)
    def decorator(*args, config=None, out=None, seed=None, threads=None,
                  **kwargs):
        from .pipeline import Pipeline

        cfg = PipelineConfig.load(config, OUTPUT_DIR=out, SEED=seed,
                                  THREADS=threads)
        configure_logging(cfg.get('LOG'))
        ctx = PipelineContext(config=cfg, pipeline=Pipeline(cfg))
        return fn(ctx, *args, **kwargs)
    return decorator


def exit_codes(fn):
    """Decorator for command line commands mapping a :class:`SimtrackError`
    to the process exit status (2 configuration, 3 data, 4 numerical).

    """
    @wraps(fn)
    def decorator(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SimtrackError as exc:
            logger.debug('command failed', exc_info=True)
            click.echo('error: {}'.format(exc), err=True)
            click.get_current_context().exit(exc.exit_code)
    return decorator


def requires_inputs(*names):
    """Decorator to mark a pipeline stage as reading artifacts written by
    an earlier stage.

    :param names:  Paths relative to the pipeline's output directory.  If
                   one of them is missing :class:`MissingInput` is raised
                   before the stage runs.

    Example::

        class Pipeline(BasePipeline):

            @requires_inputs('scenario.json', 'detections_eo.csv')
            def fuse(self):
                ...

    """
    def inner(fn):

        @wraps(fn)
        def decorator(self, *args, **kwargs):
            for name in names:
                path = self.path(name)
                if not os.path.exists(path):
                    raise MissingInput('{} needs {}, run the stage producing '
                                       'it first'.format(fn.__name__, path))
            return fn(self, *args, **kwargs)
        return decorator
    return inner
