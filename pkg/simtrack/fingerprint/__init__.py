# -*- coding: utf-8 -*-
from .classifier_abc import ClassifierABC
from .confidence import (
    DEFAULT_LABELS, ClassSet, ConfidenceVector, declare_class,
    average_confidence, confusion_matrix, write_confusion, write_confidences,
    ingest_external_confidences
)
from .features import FEATURES, extract_features
from .templates import (
    FingerprintParams, ClassTemplates, TemplateClassifier, train_templates,
    classify, dump_templates, loads_templates, save_templates, load_templates
)


__all__ = (
    'ClassifierABC', 'DEFAULT_LABELS', 'ClassSet', 'ConfidenceVector',
    'declare_class', 'average_confidence', 'confusion_matrix',
    'write_confusion', 'write_confidences', 'ingest_external_confidences',
    'FEATURES', 'extract_features', 'FingerprintParams', 'ClassTemplates',
    'TemplateClassifier', 'train_templates', 'classify', 'dump_templates',
    'loads_templates', 'save_templates', 'load_templates',
)
