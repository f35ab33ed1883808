import pytest
from contextlib import contextmanager
from simtrack import PipelineABC, BasePipeline


@pytest.fixture
def valid_object():

    class Valid(object):

        @property
        def output_dir(self): pass

        @property
        def threads(self): pass

        @property
        def executor(self): pass

        @contextmanager
        def executor_ctx(self): pass

    return Valid


def test_PipelineABC(valid_object):

    assert issubclass(valid_object, PipelineABC)
    assert isinstance(valid_object(), PipelineABC)
    assert issubclass(BasePipeline, PipelineABC)


def test_invalid_PipelineABC(valid_object):

    del(valid_object.output_dir)
    assert issubclass(valid_object, PipelineABC) is False
    assert isinstance(valid_object(), PipelineABC) is False
