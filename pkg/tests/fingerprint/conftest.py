import numpy as np
import pytest

from simtrack.rf import FingerprintVector, FINGERPRINT_LENGTH


BURSTS = {'short': (500, 10), 'long': (2000, 60)}
"""Burst length and rise (samples) of the synthetic classes."""


def burst(rng, length, rise, noise=0.01):
    x = np.zeros(FINGERPRINT_LENGTH, dtype=complex)
    ramp = np.minimum(np.arange(length) / rise, 1.0)
    x[:length] = ramp * np.exp(2j * np.pi * rng.uniform(size=length))
    return x + noise * (rng.standard_normal(x.size) +
                        1j * rng.standard_normal(x.size))


@pytest.fixture
def vector_factory(rng):

    def create_vectors(label, count, window_t=0.0):
        length, rise = BURSTS[label]
        return [FingerprintVector(iq=burst(rng, length, rise),
                                  window_t=window_t + i * 0.021,
                                  device_truth=label, sensor_id='d105')
                for i in range(count)]

    return create_vectors
