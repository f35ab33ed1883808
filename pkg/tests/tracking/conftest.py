import numpy as np
import pytest

from simtrack.model import Detection2D


FPS = 30.0


@pytest.fixture
def frame_times():
    return [k / FPS for k in range(300)]


@pytest.fixture
def cv_detections():
    """Noisy detections of constant velocity targets.  ``targets`` is a list
    of ``(u0, v0, udot, vdot)``; returns the detections and a function giving
    the true positions at a time.

    """
    def create(targets, times, sigma, seed):
        rng = np.random.default_rng(seed)
        targets = np.asarray(targets, dtype=float)

        def truth(t):
            return targets[:, :2] + t * targets[:, 2:]

        dets = []
        for t in times:
            for u, v in truth(t) + rng.normal(0, sigma, (len(targets), 2)):
                dets.append(Detection2D(t=t, u=float(u), v=float(v),
                                        score=1.0))
        return dets, truth

    return create
