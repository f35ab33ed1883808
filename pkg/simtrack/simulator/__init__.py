# -*- coding: utf-8 -*-
from .scenario import (
    TxSpec, TargetSpec, Scenario, DEVICES, PRESETS, SENSOR_POSITIONS,
    device_tx, preset, load_scenario, save_scenario
)
from .eo import EoData, generate_eo, iter_eo, render_frame, target_pixels
from .rf import (
    RfEpoch, rrc_taps, burst_waveform, emission, iter_rf_epochs, generate_rf,
    simulate_fingerprint_pass
)


__all__ = (
    'TxSpec', 'TargetSpec', 'Scenario', 'DEVICES', 'PRESETS',
    'SENSOR_POSITIONS', 'device_tx', 'preset', 'load_scenario',
    'save_scenario', 'EoData', 'generate_eo', 'iter_eo', 'render_frame',
    'target_pixels', 'RfEpoch', 'rrc_taps', 'burst_waveform', 'emission',
    'iter_rf_epochs', 'generate_rf', 'simulate_fingerprint_pass',
)
