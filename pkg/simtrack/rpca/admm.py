# -*- coding: utf-8 -*-
import math
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, List, Any

import numpy as np

from .operators import update_low_rank, update_sparse, update_error
from ..config import SectionParams
from ..exceptions import ConfigError, DataError, InsufficientData, \
    NotConverged


logger = logging.getLogger(__name__)


class ObservationMatrix(object):
    """Vectorized frames stacked as the columns of an ``N x K`` matrix.

    :param data:  ``N x K`` matrix, intensities normalized to ``[0, 1]``.
    :param frame_height:  Rows per frame.
    :param frame_width:  Columns per frame.
    :param frame_timestamps:  One time stamp per column (seconds), defaults
                              to the column index.

    """
    def __init__(self, data: Any, frame_height: int, frame_width: int,
                 frame_timestamps: Sequence[float]=None) -> None:
        data = np.asarray(data, dtype=float)
        if data.ndim != 2:
            raise DataError('observation matrix must be 2-D')
        if data.shape[0] != frame_height * frame_width:
            raise DataError('{} rows do not hold {}x{} frames'.format(
                data.shape[0], frame_height, frame_width))
        if data.shape[1] < 2:
            raise InsufficientData('need at least 2 frames, got {}'.format(
                data.shape[1]))
        if not np.all(np.isfinite(data)):
            raise DataError('observation matrix holds non-finite values')
        if frame_timestamps is None:
            frame_timestamps = np.arange(data.shape[1], dtype=float)
        frame_timestamps = np.asarray(frame_timestamps, dtype=float)
        if frame_timestamps.shape != (data.shape[1],):
            raise DataError('one timestamp per frame is required')

        self.data = data
        self.frame_height = int(frame_height)
        self.frame_width = int(frame_width)
        self.frame_timestamps = frame_timestamps

    @classmethod
    def from_frames(cls, frames: Any, frame_timestamps=None
                    ) -> 'ObservationMatrix':
        """Stack ``K x H x W`` frames.  8-bit frames are scaled by 1/255."""
        frames = np.asarray(frames)
        if frames.ndim != 3:
            raise DataError('frames must be a K x H x W stack')
        scale = 255.0 if frames.dtype == np.uint8 else 1.0
        k, h, w = frames.shape
        data = frames.reshape(k, h * w).T.astype(float) / scale
        return cls(data, h, w, frame_timestamps)

    @property
    def shape(self):
        return self.data.shape

    def to_frames(self, matrix: np.ndarray=None) -> np.ndarray:
        """Reshape an ``N x K`` matrix (default: the data) to frames."""
        matrix = self.data if matrix is None else matrix
        return matrix.T.reshape(-1, self.frame_height, self.frame_width)

    def __repr__(self):
        return '{}(N={}, K={}, frame=({}, {}))'.format(
            self.__class__.__name__, self.data.shape[0], self.data.shape[1],
            self.frame_height, self.frame_width)


@dataclass
class RpcaParams(SectionParams):
    """Penalties and stopping rule of the ADMM solver.

    ``tau``, ``lam`` and ``beta0`` left as ``None`` are derived from the
    data: ``tau = 1 / sqrt(max(N, K))``, ``lam = 100 * tau`` and
    ``beta0 = 1.25 / sigma_1(X)``.  The configuration may spell ``lam`` as
    ``lambda``.

    """
    tau: Optional[float] = None
    lam: Optional[float] = None
    rho: float = 1.1
    beta0: Optional[float] = None
    max_iters: int = 300
    tol: float = 1e-6

    aliases = {'lambda': 'lam'}

    def validate(self) -> None:
        for name in ('tau', 'lam', 'beta0'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError('{} must be positive'.format(name))
        if not self.rho > 1:
            raise ConfigError('rho must be greater than 1')
        if not self.tol > 0:
            raise ConfigError('tol must be positive')
        if int(self.max_iters) < 1:
            raise ConfigError('max_iters must be at least 1')

    def resolve(self, X: np.ndarray) -> 'RpcaParams':
        """Fill the data dependent defaults for ``X``."""
        tau = self.tau
        if tau is None:
            tau = 1.0 / math.sqrt(max(X.shape))
        lam = self.lam if self.lam is not None else 100.0 * tau
        beta0 = self.beta0
        if beta0 is None:
            sigma1 = float(np.linalg.norm(X, 2)) if X.size else 0.0
            beta0 = 1.25 / sigma1 if sigma1 > 0 else 1.25
        return RpcaParams(tau=tau, lam=lam, rho=self.rho, beta0=beta0,
                          max_iters=int(self.max_iters), tol=self.tol)


@dataclass
class RpcaResult(object):
    low_rank: np.ndarray
    sparse: np.ndarray
    error: np.ndarray
    multipliers: np.ndarray
    iterations: int
    final_residual: float
    converged: bool
    beta: float
    """Penalty after the last iteration, ``beta0 * rho ** iterations``."""
    params: RpcaParams
    residual_history: List[float] = field(default_factory=list)

    def raise_for_status(self) -> 'RpcaResult':
        """Raise :class:`NotConverged` (carrying this result) when the
        tolerance was not reached.

        """
        if not self.converged:
            raise NotConverged(
                'residual {:.3g} after {} iterations'.format(
                    self.final_residual, self.iterations),
                result=self)
        return self


def _relative_residual(X, L, S, E, x_norm):
    if x_norm == 0:
        return 0.0
    return float(np.linalg.norm(X - L - S - E) / x_norm)


def rpca_admm(X: Any, params: RpcaParams=None) -> RpcaResult:
    """Decompose ``X`` into low-rank, sparse and dense error terms.

    Each iteration updates ``L`` by singular value thresholding, ``S`` by
    soft-thresholding and ``E`` in closed form, then the multipliers ``Y``;
    the penalty grows as ``beta0 * rho ** k``.  Iteration stops once
    ``||X - L - S - E||_F / ||X||_F <= tol`` or after ``max_iters``.

    A result is returned either way; :meth:`RpcaResult.raise_for_status`
    turns a miss into :class:`NotConverged`.

    :param X:  An :class:`ObservationMatrix` or an ``N x K`` array.

    :raises SvdFailure:  If a singular value decomposition fails.

    """
    if isinstance(X, ObservationMatrix):
        X = X.data
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        raise InsufficientData('empty observation matrix')
    p = (params or RpcaParams()).resolve(X)

    L = np.zeros_like(X)
    S = np.zeros_like(X)
    E = np.zeros_like(X)
    Y = np.zeros_like(X)
    x_norm = float(np.linalg.norm(X))
    history = []
    residual = 0.0
    converged = False

    k = 0
    while k < p.max_iters:
        beta = p.beta0 * p.rho ** k
        L = update_low_rank(X, S, E, Y, beta)
        S = update_sparse(X, L, E, Y, beta, p.tau)
        E = update_error(X, L, S, Y, beta, p.lam)
        Y = Y + beta * (X - L - S - E)
        k += 1

        residual = _relative_residual(X, L, S, E, x_norm)
        history.append(residual)
        if residual <= p.tol:
            converged = True
            break

    if converged:
        logger.debug('rpca converged in %d iterations (residual %.3g)', k,
                     residual)
    else:
        logger.warning('rpca stopped after %d iterations, residual %.3g',
                       k, residual)

    return RpcaResult(
        low_rank=L, sparse=S, error=E, multipliers=Y, iterations=k,
        final_residual=residual, converged=converged,
        beta=p.beta0 * p.rho ** k, params=p, residual_history=history,
    )
