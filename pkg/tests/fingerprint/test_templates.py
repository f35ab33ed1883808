import numpy as np
import pytest

from simtrack.fingerprint import ClassifierABC, FingerprintParams, \
    ClassTemplates, TemplateClassifier, train_templates, classify, \
    dump_templates, loads_templates, save_templates, load_templates, \
    FEATURES, extract_features, declare_class
from simtrack.fingerprint.features import envelope, rise_time, \
    occupied_bandwidth, burst_length, plateau, impairments, carrier_line
from simtrack.rf import FINGERPRINT_LENGTH, FINGERPRINT_FS
from simtrack.exceptions import ConfigError, DataError, InsufficientData, \
    MissingInput, ParseError

from .conftest import BURSTS


@pytest.fixture
def templates(vector_factory):
    data = vector_factory('short', 20) + vector_factory('long', 20)
    return train_templates(data, min_vectors=10)


def test_extract_features(vector_factory):
    feats = extract_features(vector_factory('long', 1)[0].iq)
    assert set(feats) == set(FEATURES)
    assert all(f.ndim == 1 for f in feats.values())
    assert feats['spectrum'].mean() == pytest.approx(0.0, abs=1e-9)


def test_features_are_amplitude_invariant(vector_factory):
    iq = vector_factory('short', 1)[0].iq
    assert np.allclose(envelope(3 * iq), envelope(iq))
    assert rise_time(3 * iq) == rise_time(iq)


def test_feature_edge_cases():
    zeros = np.zeros(FINGERPRINT_LENGTH, dtype=complex)
    assert rise_time(zeros) == 0.0
    assert occupied_bandwidth(zeros) == 0.0
    assert not np.any(envelope(zeros))

    tone = np.exp(2j * np.pi * 10e3 * np.arange(FINGERPRINT_LENGTH) /
                  FINGERPRINT_FS)
    assert occupied_bandwidth(tone) < 20e3
    assert np.linalg.norm(envelope(tone)) == pytest.approx(1.0)


def _impaired_burst(rng, line=0.3, image=0.0, length=2000, start=100):
    n = np.arange(FINGERPRINT_LENGTH)
    data = np.exp(2j * np.pi * rng.uniform(size=FINGERPRINT_LENGTH))
    data = data + image * np.conj(data)
    x = data + line * np.exp(-2j * np.pi * 20e3 * n / FINGERPRINT_FS)
    x[:start] = 0
    x[start + length:] = 0
    return x + 1e-3 * (rng.standard_normal(x.size) +
                       1j * rng.standard_normal(x.size))


def test_burst_length(vector_factory):
    for label, (length, _) in BURSTS.items():
        iq = vector_factory(label, 1)[0].iq
        assert burst_length(iq) == pytest.approx(length / FINGERPRINT_FS,
                                                 abs=4 / FINGERPRINT_FS)
    assert plateau(np.zeros(FINGERPRINT_LENGTH)) is None


def test_impairments(rng):
    x = _impaired_burst(rng)
    cfo, leakage, imbalance = impairments(x)
    # the line sits 20 kHz below the band
    assert cfo == pytest.approx(20e3, abs=200.0)
    assert leakage == pytest.approx(10 * np.log10(0.09 / 1.09), abs=0.5)
    assert imbalance < 0.1

    freq, amp = carrier_line(x[100:2100])
    assert freq == pytest.approx(-20e3, abs=200.0)
    assert abs(amp) == pytest.approx(0.3, abs=0.03)

    _, _, imbalance = impairments(_impaired_burst(rng, image=0.1))
    assert imbalance > 0.15
    assert impairments(np.zeros(FINGERPRINT_LENGTH)) == (0.0, 0.0, 0.0)


def test_impairments_are_amplitude_invariant(rng):
    x = _impaired_burst(rng, image=0.1)
    assert np.allclose(impairments(5 * x), impairments(x), rtol=1e-3,
                       atol=1e-3)


def test_train_templates(templates):
    assert templates.labels == ('long', 'short')
    for label in templates.labels:
        for name in FEATURES:
            assert np.all(templates.spread(label, name) > 0)
    assert templates.mean('long', 'rise_time')[0] > \
        templates.mean('short', 'rise_time')[0]


def test_train_templates_is_order_independent(vector_factory):
    data = vector_factory('short', 12) + vector_factory('long', 12)
    a = train_templates(data, min_vectors=10)
    b = train_templates(list(reversed(data)), min_vectors=10)
    assert a == b


def test_train_templates_errors(vector_factory):
    with pytest.raises(InsufficientData):
        train_templates(vector_factory('short', 5), min_vectors=10)
    with pytest.raises(InsufficientData):
        train_templates(vector_factory('short', 12), labels=['short', 'long'],
                        min_vectors=10)
    unlabelled = vector_factory('short', 1)
    unlabelled[0].device_truth = None
    with pytest.raises(DataError):
        train_templates(unlabelled, min_vectors=1)


def test_classify(templates, vector_factory):
    for label in ('short', 'long'):
        for vector in vector_factory(label, 10, window_t=2.0):
            conf = classify(vector, templates)
            assert conf.t == vector.window_t
            assert conf.truth == label
            assert conf.sensor_id == 'd105'
            assert declare_class(conf) == label
            assert all(0.0 <= c <= 1.0 for c in conf.conf.values())


def test_TemplateClassifier(templates):
    clf = TemplateClassifier(templates, kappa=2.0)
    assert isinstance(clf, ClassifierABC)
    assert clf.labels == ('long', 'short')
    assert repr(templates) == "ClassTemplates(labels=('long', 'short'))"


def test_ClassifierABC():

    class Valid(object):
        labels = ('a',)

        def classify(self, vector): pass

    class Invalid(object):
        labels = ('a',)

    assert isinstance(Valid(), ClassifierABC)
    assert not isinstance(Invalid(), ClassifierABC)


def test_ClassTemplates_requires_every_label():
    with pytest.raises(DataError):
        ClassTemplates(['a', 'b'], {'a': {}})


def test_template_blob(tmp_path, templates):
    blob = dump_templates(templates)
    assert blob[:4] == b'STPL'
    assert loads_templates(blob) == templates

    save_templates(tmp_path / 'templates.bin', templates)
    assert load_templates(tmp_path / 'templates.bin') == templates


def test_template_blob_errors(tmp_path, templates):
    blob = dump_templates(templates)
    with pytest.raises(ParseError):
        loads_templates(b'XXXX' + blob[4:])
    with pytest.raises(ParseError):
        loads_templates(blob[:5])
    with pytest.raises(ParseError):
        loads_templates(blob[:4] + b'\x02\x00' + blob[6:])
    with pytest.raises(ParseError):
        loads_templates(blob[:40])

    with pytest.raises(MissingInput):
        load_templates(tmp_path / 'none.bin')
    (tmp_path / 'bad.bin').write_bytes(b'nope')
    with pytest.raises(ParseError) as info:
        load_templates(tmp_path / 'bad.bin')
    assert info.value.path == str(tmp_path / 'bad.bin')


def test_FingerprintParams():
    params = FingerprintParams()
    assert params.train is True
    assert params.confidences == {}
    assert FingerprintParams.from_mapping(
        {'confidences': {'d105': 'ext.csv'}}).confidences == \
        {'d105': 'ext.csv'}

    with pytest.raises(ConfigError):
        FingerprintParams(kappa=0.0)
    with pytest.raises(ConfigError):
        FingerprintParams(threshold=1.5)
    with pytest.raises(ConfigError):
        FingerprintParams(train_passes=[13], test_passes=[13])
    with pytest.raises(ConfigError):
        FingerprintParams(labels=['a', 'a'])
    with pytest.raises(ConfigError):
        FingerprintParams(confidences=['ext.csv'])
