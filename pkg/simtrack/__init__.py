# -*- coding: utf-8 -*-

__author__ = """Michael Housh"""
__email__ = 'mhoush@houshhomeenergy.com'
__version__ = '0.1.0'


from .config import PipelineConfig, SectionParams
from .model import BaseModel, Column, ModelABC, Detection2D, RFLocation, \
    TrackRecord, TrackSummary
from .query import Query, BaseQuery, QueryABC
from .base import BasePipeline, PipelineABC
from .decorators import PipelineContext, pass_context, requires_inputs, \
    exit_codes
from .pipeline import Pipeline


__all__ = (
    'PipelineConfig', 'SectionParams',
    'PipelineABC', 'BasePipeline', 'Pipeline',
    'Query', 'BaseQuery', 'QueryABC',
    'BaseModel', 'Column', 'ModelABC', 'Detection2D', 'RFLocation',
    'TrackRecord', 'TrackSummary',

    'PipelineContext', 'pass_context', 'requires_inputs', 'exit_codes',
)
