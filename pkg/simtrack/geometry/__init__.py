# -*- coding: utf-8 -*-
from .camera import (
    WorldPoint, PixelPoint, CameraModel, intrinsic_matrix, rotation_from_pose,
    camera_from_pose, homogeneous, pixel_from_homogeneous,
    project_world_to_pixel, project_points, load_camera, save_camera
)
from .calibration import calibrate_extrinsics, ExtrinsicFit


__all__ = (
    'WorldPoint', 'PixelPoint', 'CameraModel', 'intrinsic_matrix',
    'rotation_from_pose', 'camera_from_pose', 'homogeneous',
    'pixel_from_homogeneous', 'project_world_to_pixel', 'project_points',
    'load_camera', 'save_camera', 'calibrate_extrinsics', 'ExtrinsicFit',
)
