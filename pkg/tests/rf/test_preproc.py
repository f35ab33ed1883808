import numpy as np
import pytest

from simtrack.rf import DECISION_WINDOW, FINGERPRINT_FS, \
    FINGERPRINT_LENGTH, mix, downconvert_filter_decimate, occupied_band, \
    detect_hop_center, segment_and_trim, prepare_for_tdoa, \
    extract_fingerprint_vectors
from simtrack.exceptions import BandOutOfCapture, InsufficientData, \
    NoSignal, DataError

from .conftest import noise, tone


def test_mix_moves_tone_to_dc():
    x = tone(64, 1e3, 8e3)
    assert np.allclose(mix(x, 1e3, 8e3), 1.0)


def test_downconvert_filter_decimate(capture_factory):
    fs = 2e6
    cap = capture_factory(samples=tone(20000, 300e3, fs), fs=fs)
    out = downconvert_filter_decimate(cap, cap.f_center + 300e3,
                                      FINGERPRINT_FS)
    assert out.fs == FINGERPRINT_FS
    assert out.f_center == cap.f_center + 300e3
    assert out.n == 2500
    middle = out.samples[200:-200]
    assert np.allclose(middle, middle[0], atol=1e-3)
    assert np.abs(middle[0]) == pytest.approx(1.0, abs=1e-3)


def test_downconvert_filter_decimate_out_of_band(capture_factory):
    cap = capture_factory(fs=1e6)
    with pytest.raises(BandOutOfCapture):
        downconvert_filter_decimate(cap, cap.f_center + 450e3, 250e3)


def test_occupied_band(rng, capture_factory):
    fs = 1e6
    samples = tone(8192, 200e3, fs) + noise(rng, 8192, 1e-1)
    cap = capture_factory(samples=samples, fs=fs)
    centre, width = occupied_band(cap)
    assert centre == pytest.approx(cap.f_center + 200e3, abs=2e3)
    assert 0 < width < 50e3
    assert detect_hop_center(cap) == centre


def test_occupied_band_errors(capture_factory):
    with pytest.raises(InsufficientData):
        occupied_band(capture_factory(n=100))
    with pytest.raises(NoSignal):
        occupied_band(capture_factory(samples=np.zeros(4096)))


def _bursty_stream(rng, starts, length=2000, windows=3):
    x = noise(rng, windows * DECISION_WINDOW)
    bursts = []
    for start in starts:
        burst = np.exp(2j * np.pi * rng.uniform(size=length))
        x[start:start + length] = burst
        bursts.append(burst)
    return x, bursts


def test_segment_and_trim(rng, capture_factory):
    x, bursts = _bursty_stream(rng, [1000, 2 * DECISION_WINDOW + 500])
    cap = capture_factory(samples=x, fs=FINGERPRINT_FS, t0=3.0,
                          sensor_id='d107')
    vectors = segment_and_trim(cap, device_truth='Mavic')
    assert len(vectors) == 2
    assert vectors[0].window_t == 3.0
    assert vectors[1].window_t == pytest.approx(
        3.0 + 2 * DECISION_WINDOW / FINGERPRINT_FS)
    for vec, burst in zip(vectors, bursts):
        assert vec.iq.shape == (FINGERPRINT_LENGTH,)
        # the edge search may step back over a few loud noise samples
        k = int(np.argmax(np.abs(vec.iq) > 0.5))
        assert k < 32
        assert np.allclose(vec.iq[k:k + 2000], burst)
        assert not np.any(vec.iq[2100:])
        assert vec.device_truth == 'Mavic'
        assert vec.sensor_id == 'd107'


def test_segment_and_trim_skips_burst_at_stream_start(rng, capture_factory):
    x, bursts = _bursty_stream(rng, [0, DECISION_WINDOW + 700])
    cap = capture_factory(samples=x, fs=FINGERPRINT_FS)
    vectors = segment_and_trim(cap)
    # the first burst has no rising edge, no truncated vector comes out
    assert len(vectors) == 1
    assert vectors[0].window_t == pytest.approx(
        DECISION_WINDOW / FINGERPRINT_FS)
    k = int(np.argmax(np.abs(vectors[0].iq) > 0.5))
    assert np.allclose(vectors[0].iq[k:k + 2000], bursts[1])


def test_segment_and_trim_edge_cases(rng, capture_factory):
    short = capture_factory(samples=noise(rng, 100), fs=FINGERPRINT_FS)
    assert segment_and_trim(short) == []
    quiet = capture_factory(samples=noise(rng, DECISION_WINDOW),
                            fs=FINGERPRINT_FS)
    assert segment_and_trim(quiet) == []
    with pytest.raises(DataError):
        segment_and_trim(capture_factory(fs=1e6))


def test_prepare_for_tdoa(rng, capture_factory):
    fs = 20e6
    samples = tone(40000, 1e6, fs) + noise(rng, 40000)
    cap = capture_factory(samples=samples, fs=fs)
    out = prepare_for_tdoa(cap)
    assert out.fs == 10e6
    assert out.n == 20000
    assert out.t0 == cap.t0
    # a burst over the whole capture keeps its energy
    assert np.sum(np.abs(out.samples) ** 2) >= 0.9 * out.n

    zeros = prepare_for_tdoa(capture_factory(samples=np.zeros(4000), fs=fs))
    assert zeros.n == 2000
    assert not np.any(zeros.samples)

    with pytest.raises(BandOutOfCapture):
        prepare_for_tdoa(capture_factory(fs=1e6))


@pytest.mark.parametrize('duty', [0.97, 0.5])
def test_prepare_for_tdoa_burst_duty(rng, capture_factory, duty):
    fs, n = 20e6, 400000
    samples = noise(rng, n)
    on = int(duty * n)
    samples[:on] += tone(on, 1e6, fs)
    out = prepare_for_tdoa(capture_factory(samples=samples, fs=fs))
    energy = np.abs(out.samples) ** 2
    assert energy.sum() >= 0.9 * duty * out.n
    # whole sub-windows after the burst end are zeroed
    quiet = (on // 2 // DECISION_WINDOW + 1) * DECISION_WINDOW
    assert not np.any(out.samples[quiet:])


def test_prepare_for_tdoa_noise_only(rng, capture_factory):
    out = prepare_for_tdoa(capture_factory(samples=noise(rng, 40000),
                                           fs=20e6))
    assert out.n == 20000
    assert not np.any(out.samples)


def test_extract_fingerprint_vectors(rng, capture_factory):
    fs = 1e6
    n = 2 * DECISION_WINDOW * 4
    x = noise(rng, n)
    for start in (4000, 25000):
        x[start:start + 8000] = tone(8000, 100e3, fs)
    cap = capture_factory(samples=x, fs=fs)
    vectors = extract_fingerprint_vectors(cap, device_truth='Phantom')
    assert len(vectors) == 2
    assert all(v.device_truth == 'Phantom' for v in vectors)

    assert extract_fingerprint_vectors(
        capture_factory(samples=np.zeros(4096))) == []
