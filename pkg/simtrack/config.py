# -*- coding: utf-8 -*-
import os
import copy
import json
import logging
import dataclasses
from typing import Any, Mapping, Dict

from flask import Config

from .exceptions import ConfigError


logger = logging.getLogger(__name__)


# CONFIGURATION
SIMTRACK_THREADS = int(os.environ.get('SIMTRACK_THREADS', 0)) or \
    (os.cpu_count() or 1)
SIMTRACK_OUTPUT_DIR = os.environ.get('SIMTRACK_OUTPUT_DIR', 'simtrack_out')


DEFAULTS = {
    'SCENARIO': 'r14',
    'SCENARIO_OVERRIDES': {},
    'OUTPUT_DIR': SIMTRACK_OUTPUT_DIR,
    'SEED': None,
    'THREADS': SIMTRACK_THREADS,
    'LOG': None,
    'USE_RF': True,
    'EO': {},
    'RPCA': {},
    'MASK': {},
    'TDOA': {},
    'FINGERPRINT': {},
    'FUSION': {},
    'EVALUATE': {},
}
"""Every top-level key a configuration may hold.  Sections (dict values) are
validated by the parameter objects built from them."""


def _load_json(fh) -> dict:
    """JSON loader for :meth:`flask.Config.from_file`.  ``from_mapping``
    only keeps upper-case keys, so anything else is rejected here.

    """
    data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError('config file must hold a JSON object')
    lower = sorted(k for k in data if not k.isupper())
    if lower:
        raise ConfigError('unknown config keys: {}'.format(', '.join(lower)))
    return data


class SectionParams(object):
    """Mixin for the dataclasses built from a configuration section.

    Sub-classes may declare ``aliases`` (a mapping of alternative key to
    field name) and override ``validate`` which is called after
    construction.

    """
    aliases = {}  # type: Dict[str, str]

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        pass

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]=None, **overrides):
        """Build an instance from a configuration section.  Unknown keys
        raise :class:`ConfigError`.

        :Example:

            >>> RpcaParams.from_mapping({'tau': 0.01, 'lambda': 1.0})
            RpcaParams(tau=0.01, lam=1.0, ...)

        """
        names = {f.name for f in dataclasses.fields(cls)}
        values = {}
        for key, value in dict(mapping or {}, **overrides).items():
            name = cls.aliases.get(key, key)
            if name not in names:
                raise ConfigError('unknown key {!r} for {}'.format(
                    key, cls.__name__))
            values[name] = value
        try:
            return cls(**values)
        except TypeError as exc:
            raise ConfigError(str(exc))

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


class PipelineConfig(Config):
    """The configuration object for a pipeline run.  This is a
    :class:`flask.Config`, so keys are upper-case and it can be loaded the
    same ways a flask application's configuration is.

    :param root_path:  Relative paths in the configuration (frame
                       directories, scenario files, ...) resolve against it.
    :param defaults:  Optional mapping merged over :data:`DEFAULTS`.

    Example::

        >>> config = PipelineConfig.load('run.json')
        >>> config['SCENARIO']
        'r14'
        >>> config.section('FUSION')
        {'offsets': {'rf_projected': 12.0}}

    """
    def __init__(self, root_path: str='.', defaults: Mapping=None) -> None:
        base = copy.deepcopy(DEFAULTS)
        if defaults:
            base.update(defaults)
        super().__init__(root_path, base)

    @classmethod
    def load(cls, path=None, **overrides) -> 'PipelineConfig':
        """Load a JSON configuration file and apply ``overrides`` (keys that
        are ``None`` are ignored).

        :raises ConfigError:  If the file can not be read or holds unknown
                              keys.

        """
        root = os.path.dirname(os.path.abspath(str(path))) if path else '.'
        config = cls(root)
        if path is not None:
            try:
                config.from_file(os.path.abspath(str(path)), load=_load_json)
            except (OSError, ValueError) as exc:
                raise ConfigError('can not load config {}: {}'.format(
                    path, exc))
        config.from_mapping({k: v for k, v in overrides.items()
                             if v is not None})
        config.validate()
        return config

    def validate(self) -> None:
        unknown = sorted(k for k in self if k not in DEFAULTS)
        if unknown:
            raise ConfigError('unknown config keys: {}'.format(
                ', '.join(unknown)))
        for key, value in self.items():
            if isinstance(DEFAULTS[key], dict) and \
                    not isinstance(value, dict):
                raise ConfigError('{} must be a mapping'.format(key))
        threads = self.get('THREADS')
        if not isinstance(threads, int) or threads < 1:
            raise ConfigError('THREADS must be a positive integer')

    def section(self, name: str) -> Dict[str, Any]:
        """A copy of a configuration section, lower-case keys kept as is."""
        return copy.deepcopy(self.get(name.upper()) or {})

    def resolve_path(self, value) -> str:
        """Resolve ``value`` against the configuration's ``root_path``."""
        value = os.path.expanduser(str(value))
        if os.path.isabs(value):
            return value
        return os.path.join(self.root_path, value)
