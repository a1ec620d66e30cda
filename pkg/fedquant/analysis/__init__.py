"""Estudos avulsos: precisão do quantizador, histogramas de estado, escala de memória"""

from .precision import (
    FidelityReport,
    PrecisionReport,
    precision_study,
    precision_variants,
    relative_error,
    sample_log_uniform,
    storage_fidelity,
)
from .histograms import Histogram, linear_histogram, log10_histogram, state_histograms
from .scaling import ScalingRow, scaling_projection

__all__ = [
    'FidelityReport',
    'PrecisionReport',
    'precision_study',
    'precision_variants',
    'relative_error',
    'sample_log_uniform',
    'storage_fidelity',
    'Histogram',
    'linear_histogram',
    'log10_histogram',
    'state_histograms',
    'ScalingRow',
    'scaling_projection',
]
