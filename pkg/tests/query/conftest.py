import pytest

from simtrack.model import Detection2D, NEGATIVE, RF_PROJECTED


@pytest.fixture
def detections():
    return [
        Detection2D(t=0.0, u=10.0, v=20.0, score=0.5),
        Detection2D(t=0.1, u=11.0, v=21.0, score=0.4, contrast=NEGATIVE),
        Detection2D(t=0.2, u=30.0, v=5.0, label='Mavic',
                    source=RF_PROJECTED),
        Detection2D(t=0.1, u=12.0, v=22.0, score=0.9),
    ]


@pytest.fixture
def detections_csv(tmp_path, detections):
    path = tmp_path / 'detections_eo.csv'
    Detection2D.write_csv(path, detections)
    return path
