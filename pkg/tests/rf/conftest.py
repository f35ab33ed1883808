import numpy as np
import pytest

from simtrack.rf import RFCapture


def noise(rng, n, scale=1e-3):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def tone(n, freq, fs, amplitude=1.0):
    return amplitude * np.exp(2j * np.pi * freq * np.arange(n) / fs)


@pytest.fixture
def capture_factory(rng):

    def create_capture(n=4096, fs=1e6, f_center=2.44e9, t0=0.0,
                       sensor_id='d105', **kwargs):
        samples = kwargs.pop('samples', None)
        if samples is None:
            samples = noise(rng, n)
        return RFCapture(samples=samples, fs=fs, f_center=f_center, t0=t0,
                         sensor_id=sensor_id, **kwargs)

    return create_capture
