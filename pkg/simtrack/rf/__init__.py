# -*- coding: utf-8 -*-
from .capture import (
    RFCapture, FingerprintVector, IQ_HEADER, IQ_MAGIC, FINGERPRINT_FS,
    FINGERPRINT_LENGTH, iter_iq, read_iq, write_iq, concatenate
)
from .preproc import (
    DECISION_WINDOW, TDOA_RATE, mix, downconvert_filter_decimate,
    occupied_band, detect_hop_center, segment_and_trim, prepare_for_tdoa,
    extract_fingerprint_vectors
)


__all__ = (
    'RFCapture', 'FingerprintVector', 'IQ_HEADER', 'IQ_MAGIC',
    'FINGERPRINT_FS', 'FINGERPRINT_LENGTH', 'iter_iq', 'read_iq', 'write_iq',
    'concatenate', 'DECISION_WINDOW', 'TDOA_RATE', 'mix',
    'downconvert_filter_decimate', 'occupied_band', 'detect_hop_center',
    'segment_and_trim', 'prepare_for_tdoa', 'extract_fingerprint_vectors',
)
