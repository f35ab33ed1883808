# -*- coding: utf-8 -*-
"""Errors and warnings raised by :mod:`simtrack`.

Every error derives from :class:`SimtrackError` and carries the process
``exit_code`` the command line uses when the error escapes a stage.

"""

__all__ = (
    'SimtrackError', 'ConfigError', 'DataError', 'NumericalError',

    'UnknownPreset', 'MissingOffset', 'InvalidCamera',

    'ParseError', 'MissingInput', 'EvalUnavailable', 'TrainRequired',
    'InsufficientData', 'InsufficientCorrespondences', 'EmptyStream',
    'DegenerateFrame', 'NoSignal', 'NoPeak', 'BandOutOfCapture',

    'DegenerateProjection', 'BehindCamera', 'RankDeficientGeometry',
    'SvdFailure', 'NotConverged', 'DegenerateGeometry', 'NoRealRoot',
    'NonConvergence', 'TileError',

    'SimtrackWarning', 'TargetNeverVisible', 'BandCollision',
    'AmbiguousMinimum', 'ConfidenceClamped',
)


class SimtrackError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1


class ConfigError(SimtrackError):
    """Invalid configuration: unknown keys, bad values, unknown presets."""

    exit_code = 2


class DataError(SimtrackError):
    """Input data is missing, malformed or insufficient."""

    exit_code = 3


class NumericalError(SimtrackError):
    """A numerical routine failed or the geometry is degenerate."""

    exit_code = 4


# configuration
class UnknownPreset(ConfigError):
    pass


class MissingOffset(ConfigError):
    """No time offset is configured for a detection source.

    :param source:  The name of the source missing an offset.

    """
    def __init__(self, source):
        self.source = source
        super().__init__('no offset configured for source {!r}'.format(source))


class InvalidCamera(ConfigError):
    pass


# data
class ParseError(DataError):
    """A file could not be parsed.

    :param message:  What went wrong.
    :param line:  The 1-based line number, if known.
    :param path:  The file being parsed, if known.

    """
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ''
        if path is not None:
            where += '{}'.format(path)
        if line is not None:
            where += ':{}'.format(line)
        if where:
            message = '{}: {}'.format(where, message)
        super().__init__(message)


class MissingInput(DataError, OSError):
    """A file or directory a stage depends on does not exist."""


class EvalUnavailable(DataError):
    pass


class TrainRequired(DataError):
    pass


class InsufficientData(DataError):
    pass


class InsufficientCorrespondences(DataError):
    pass


class EmptyStream(DataError):
    pass


class DegenerateFrame(DataError):
    pass


class NoSignal(DataError):
    pass


class NoPeak(DataError):
    pass


class BandOutOfCapture(DataError):
    pass


# numerical
class DegenerateProjection(NumericalError):
    pass


class BehindCamera(NumericalError):
    pass


class RankDeficientGeometry(NumericalError):
    pass


class SvdFailure(NumericalError):
    pass


class NotConverged(NumericalError):
    """Raised by :meth:`RpcaResult.raise_for_status` when the iteration limit
    was reached.  The (unconverged) result is attached.

    """
    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)


class DegenerateGeometry(NumericalError):
    pass


class NoRealRoot(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass


class TileError(NumericalError):
    """Wraps an error raised while decomposing one tile.

    The exit code is the one of the wrapped error.

    :param index:  The ``(row, col)`` index of the tile.
    :param cause:  The original exception.

    """
    def __init__(self, index, cause):
        self.index = index
        self.cause = cause
        self.exit_code = getattr(cause, 'exit_code', NumericalError.exit_code)
        super().__init__('tile {}: {}'.format(index, cause))


# warnings
class SimtrackWarning(UserWarning):
    pass


class TargetNeverVisible(SimtrackWarning):
    pass


class BandCollision(SimtrackWarning):
    pass


class AmbiguousMinimum(SimtrackWarning):
    pass


class ConfidenceClamped(SimtrackWarning):
    pass
