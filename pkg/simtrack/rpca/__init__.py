# -*- coding: utf-8 -*-
from .operators import (
    soft_threshold, svt, nuclear_norm, rpca_objective, augmented_lagrangian,
    update_low_rank, update_sparse, update_error
)
from .admm import ObservationMatrix, RpcaParams, RpcaResult, rpca_admm
from .tiled import tile_bounds, rpca_tiled
from .frames import (
    frame_files, read_pgm_dir, write_pgm_frames, read_cube, write_cube,
    load_frames, frame_batches
)


__all__ = (
    'soft_threshold', 'svt', 'nuclear_norm', 'rpca_objective',
    'augmented_lagrangian', 'update_low_rank', 'update_sparse',
    'update_error', 'ObservationMatrix', 'RpcaParams', 'RpcaResult',
    'rpca_admm', 'tile_bounds', 'rpca_tiled', 'frame_files', 'read_pgm_dir',
    'write_pgm_frames', 'read_cube', 'write_cube', 'load_frames',
    'frame_batches',
)
