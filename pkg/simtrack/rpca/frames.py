# -*- coding: utf-8 -*-
"""Frame stack I/O: directories of 8-bit PGM files and raw cubes.

A cube file starts with ``N1, N2, K`` as little-endian ``u32`` followed by
``K`` row-major ``u8`` frames.

"""
import os
import logging
from typing import List, Tuple

import cv2
import numpy as np

from ..exceptions import MissingInput, ParseError, DataError


logger = logging.getLogger(__name__)

CUBE_HEADER = np.dtype('<u4')


def frame_files(path) -> List[str]:
    """The ``.pgm`` files of a directory, lexicographic (= time) order."""
    path = str(path)
    if not os.path.isdir(path):
        raise MissingInput('frame directory not found: {}'.format(path))
    return sorted(os.path.join(path, name) for name in os.listdir(path)
                  if name.lower().endswith('.pgm'))


def read_pgm_dir(path, start: int=0, stop: int=None) -> np.ndarray:
    """Read ``K x H x W`` 8-bit frames (optionally a slice of the files)."""
    files = frame_files(path)[start:stop]
    frames = []
    for name in files:
        img = cv2.imread(name, cv2.IMREAD_GRAYSCALE)
        if img is None:
            raise ParseError('not a readable grayscale image', path=name)
        if frames and img.shape != frames[0].shape:
            raise DataError('{} has shape {}, expected {}'.format(
                name, img.shape, frames[0].shape))
        frames.append(img)
    if not frames:
        return np.zeros((0, 0, 0), dtype=np.uint8)
    return np.stack(frames)


def write_pgm_frames(frames: np.ndarray, path, prefix: str='frame_'
                     ) -> List[str]:
    """Write frames as ``<prefix>000000.pgm`` ...; returns the file names."""
    os.makedirs(str(path), exist_ok=True)
    names = []
    for k, frame in enumerate(np.asarray(frames, dtype=np.uint8)):
        name = os.path.join(str(path), '{}{:06d}.pgm'.format(prefix, k))
        if not cv2.imwrite(name, frame):
            raise DataError('could not write {}'.format(name))
        names.append(name)
    return names


def read_cube(path) -> np.ndarray:
    path = str(path)
    if not os.path.isfile(path):
        raise MissingInput('frame cube not found: {}'.format(path))
    with open(path, 'rb') as fh:
        header = np.fromfile(fh, dtype=CUBE_HEADER, count=3)
        if header.size != 3:
            raise ParseError('truncated cube header', path=path)
        n1, n2, k = (int(v) for v in header)
        payload = np.fromfile(fh, dtype=np.uint8)
    if payload.size != n1 * n2 * k:
        raise ParseError('cube holds {} bytes, header declares {}'.format(
            payload.size, n1 * n2 * k), path=path)
    return payload.reshape(k, n1, n2)


def write_cube(frames: np.ndarray, path) -> None:
    frames = np.asarray(frames, dtype=np.uint8)
    k, n1, n2 = frames.shape
    with open(str(path), 'wb') as fh:
        np.array([n1, n2, k], dtype=CUBE_HEADER).tofile(fh)
        frames.tofile(fh)


def load_frames(path) -> np.ndarray:
    """Read a frame directory or a cube file."""
    if os.path.isdir(str(path)):
        return read_pgm_dir(path)
    return read_cube(path)


def frame_batches(count: int, batch: int) -> List[Tuple[int, int]]:
    """``(start, stop)`` spans of ``batch`` frames.  A short tail is merged
    into the previous batch so every batch holds at least 2 frames.

    :Example:

        >>> frame_batches(61, 30)
        [(0, 30), (30, 61)]

    """
    if count < 2:
        return []
    spans = [(s, min(s + batch, count)) for s in range(0, count, batch)]
    if len(spans) > 1 and spans[-1][1] - spans[-1][0] < 2:
        spans[-2] = (spans[-2][0], spans[-1][1])
        spans.pop()
    return spans
