# -*- coding: utf-8 -*-
import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import List, Tuple, Any, Optional

import numpy as np

from .admm import rpca_admm, RpcaParams, RpcaResult
from ..exceptions import DataError, InsufficientData, SimtrackError, \
    TileError


logger = logging.getLogger(__name__)


def tile_bounds(size: int, parts: int) -> List[Tuple[int, int]]:
    """Split ``range(size)`` into ``parts`` contiguous ``(start, stop)``
    spans.  The first ``size % parts`` spans hold one extra element.

    :Example:

        >>> tile_bounds(10, 3)
        [(0, 4), (4, 7), (7, 10)]

    """
    if parts < 1 or parts > size:
        raise DataError('can not split {} pixels into {} tiles'.format(
            size, parts))
    chunks = np.array_split(np.arange(size), parts)
    return [(int(c[0]), int(c[-1]) + 1) for c in chunks]


def _decompose_tile(job) -> Tuple[np.ndarray, RpcaResult]:
    index, block, params = job
    k, h, w = block.shape
    try:
        result = rpca_admm(block.reshape(k, h * w).T, params)
    except SimtrackError as exc:
        raise TileError(index, exc) from exc
    return result.sparse.T.reshape(k, h, w), result


def rpca_tiled(frames: Any, tile_rows: int, tile_cols: int,
               params: RpcaParams=None, executor: Optional[Executor]=None,
               max_workers: int=1) -> np.ndarray:
    """Decompose every tile of a frame stack on its own and reassemble the
    sparse components.

    Tiles are submitted to ``executor`` (or a thread pool of
    ``max_workers``) and gathered in tile order, so the output does not
    depend on the degree of parallelism.

    :param frames:  ``K x H x W`` stack of intensities in ``[0, 1]`` (8-bit
                    frames are scaled by 1/255).
    :returns:  ``K x H x W`` sparse component.

    :raises TileError:  Wrapping the first failing tile's error, with its
                        ``(row, col)`` index.

    """
    frames = np.asarray(frames)
    if frames.ndim != 3:
        raise DataError('frames must be a K x H x W stack')
    if frames.dtype == np.uint8:
        frames = frames.astype(float) / 255.0
    else:
        frames = frames.astype(float)
    k, h, w = frames.shape
    if k < 2:
        raise InsufficientData('need at least 2 frames, got {}'.format(k))

    params = params or RpcaParams()
    jobs = []
    for i, (r0, r1) in enumerate(tile_bounds(h, tile_rows)):
        for j, (c0, c1) in enumerate(tile_bounds(w, tile_cols)):
            jobs.append(((i, j), frames[:, r0:r1, c0:c1], params,
                         (r0, r1, c0, c1)))

    def run(pool):
        return list(pool.map(_decompose_tile, [j[:3] for j in jobs]))

    if executor is not None:
        results = run(executor)
    else:
        with ThreadPoolExecutor(max_workers=max(1, int(max_workers))) as pool:
            results = run(pool)

    sparse = np.zeros_like(frames)
    unconverged = 0
    for job, (block, result) in zip(jobs, results):
        r0, r1, c0, c1 = job[3]
        sparse[:, r0:r1, c0:c1] = block
        unconverged += not result.converged
    if unconverged:
        logger.warning('%d of %d tiles did not converge', unconverged,
                       len(jobs))
    logger.debug('decomposed %d frames in %dx%d tiles', k, tile_rows,
                 tile_cols)
    return sparse
