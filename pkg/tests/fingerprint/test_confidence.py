import pytest

from simtrack.fingerprint import DEFAULT_LABELS, ClassSet, \
    ConfidenceVector, declare_class, average_confidence, confusion_matrix, \
    write_confusion, write_confidences, ingest_external_confidences
from simtrack.exceptions import DataError, EmptyStream, MissingInput, \
    ParseError, ConfidenceClamped


def vec(t, **conf):
    return ConfidenceVector(t=t, conf=conf)


def test_ClassSet():
    assert ClassSet() == DEFAULT_LABELS
    assert repr(ClassSet(['a', 'b'])) == "ClassSet('a', 'b')"
    with pytest.raises(DataError):
        ClassSet([])
    with pytest.raises(DataError):
        ClassSet(['a', 'a'])


def test_ConfidenceVector():
    v = vec(1.0, Mavic=0.2, Phantom=0.7)
    assert v.labels == ['Mavic', 'Phantom']
    assert v.best() == 'Phantom'
    assert vec(0.0, a=0.5, b=0.5).best() == 'a'
    with pytest.raises(DataError):
        vec(0.0, a=1.5)


def test_declare_class():
    v = vec(0.0, Mavic=0.4, Phantom=0.3)
    assert declare_class(v) == 'Mavic'
    assert declare_class(v, threshold=0.4) == 'Mavic'
    assert declare_class(v, threshold=0.5) is None


def test_average_confidence():
    avg = average_confidence([vec(0.0, a=0.2, b=1.0), vec(1.0, a=0.4, b=0.0)])
    assert avg == pytest.approx({'a': 0.3, 'b': 0.5})
    with pytest.raises(EmptyStream):
        average_confidence([])


def test_confusion_matrix():
    matrix = confusion_matrix({
        'a': [vec(0.0, a=0.9, b=0.1), vec(1.0, a=0.7, b=0.3)],
        'b': [vec(0.0, a=0.0, b=1.0)],
    }, labels=['a', 'b', 'c'])
    assert list(matrix) == ['a', 'b']
    assert matrix['a'] == pytest.approx({'a': 0.8, 'b': 0.2, 'c': 0.0})


def test_write_confusion(tmp_path):
    path = tmp_path / 'confusion.csv'
    write_confusion(path, {'a': {'a': 1.0, 'b': 0.25}}, labels=['a', 'b'])
    assert path.read_text() == 'truth,a,b\na,1.0,0.25\n'


def test_write_and_ingest_confidences(tmp_path):
    path = tmp_path / 'confidences_d105.csv'
    stream = [vec(0.5, Mavic=0.25), vec(0.0, Mavic=1.0, m600=0.5)]
    assert write_confidences(path, stream) == 2
    lines = path.read_text().splitlines()
    assert lines[0] == 't,' + ','.join(DEFAULT_LABELS)
    assert lines[1] == '0.5,0.0,0.25,0.0,0.0'

    read = ingest_external_confidences(path)
    assert [v.t for v in read] == [0.0, 0.5]
    assert read[1].conf['Mavic'] == 0.25
    assert read[0].labels == list(DEFAULT_LABELS)


def test_ingest_external_confidences_clamps(tmp_path):
    path = tmp_path / 'ext.csv'
    path.write_text('t,Mavic,Phantom\n0.0,1.2,-0.1\n')
    with pytest.warns(ConfidenceClamped):
        read = ingest_external_confidences(path)
    assert read[0].conf == {'Mavic': 1.0, 'Phantom': 0.0}


def test_ingest_external_confidences_labels(tmp_path):
    path = tmp_path / 'ext.csv'
    path.write_text('t,Mavic,Phantom\n0.0,0.5,0.1\n')
    read = ingest_external_confidences(path, labels=['Phantom'])
    assert read[0].conf == {'Phantom': 0.1}
    with pytest.raises(ParseError):
        ingest_external_confidences(path, labels=['m600'])


def test_ingest_external_confidences_errors(tmp_path):
    with pytest.raises(MissingInput):
        ingest_external_confidences(tmp_path / 'none.csv')

    path = tmp_path / 'ext.csv'
    path.write_text('time,Mavic\n0.0,0.5\n')
    with pytest.raises(ParseError):
        ingest_external_confidences(path)

    path.write_text('t,Mavic\n0.0,0.5\n0.1,high\n')
    with pytest.raises(ParseError) as info:
        ingest_external_confidences(path)
    assert info.value.line == 3
