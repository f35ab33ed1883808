import os

import numpy as np
import pytest

from simtrack import Pipeline, PipelineConfig
from simtrack.geometry import camera_from_pose


SIMTRACK_TEST_SEEDS = int(os.environ.get('SIMTRACK_TEST_SEEDS', 100))

SIMTRACK_TEST_SEED = int(os.environ.get('SIMTRACK_TEST_SEED', 1234))


@pytest.fixture
def seeds():
    return range(SIMTRACK_TEST_SEEDS)


@pytest.fixture
def rng():
    return np.random.default_rng(SIMTRACK_TEST_SEED)


@pytest.fixture
def camera():
    # the simulator's camera: at (0, 0, 2) looking east, slightly up
    return camera_from_pose((0.0, 0.0, 2.0), 90.0, 7.5, 300.0, 160, 120)


@pytest.fixture
def config_factory(tmp_path):

    def create_config(**values):
        values.setdefault('OUTPUT_DIR', str(tmp_path / 'out'))
        values.setdefault('THREADS', 1)
        return PipelineConfig.load(**values)

    return create_config


@pytest.fixture
def scenario_overrides():
    """One second of r14 with both targets in view from the first frame."""
    targets = [
        dict(device=device, pixel_contrast=contrast,
             waypoints=[(0.0, 425.0, y, 60.0), (1.0, 421.0, y - 12.0, 60.0)])
        for device, contrast, y in (('Mavic', -110.0, 30.0),
                                    ('Phantom', 120.0, 90.0))
    ]
    return {'duration': 1.0, 'targets': targets}


@pytest.fixture
def pipeline_factory(config_factory, scenario_overrides):

    def create_pipeline(**values):
        values.setdefault('SCENARIO', 'r14')
        values.setdefault('SEED', 5)
        values.setdefault('SCENARIO_OVERRIDES', scenario_overrides)
        return Pipeline(config_factory(**values))

    return create_pipeline
